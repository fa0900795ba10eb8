// Two-mode Gaussian states described by their covariance matrix.
//
// Quadratures are ordered (x1, p1, x2, p2) and V_ij = <{dX_i, dX_j}> / 2, so
// the vacuum is I/2 and every physical state has symplectic eigenvalues >= 1/2.

#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Dense>

namespace gaussdyn {

// Symmetric 4x4 matrix stored as its upper triangle in row-major order:
// v11 v12 v13 v14 v22 v23 v24 v33 v34 v44 (one-based labels).
class CovarianceMatrix {
public:
    static constexpr std::size_t kComponents = 10;

    CovarianceMatrix() = default;
    explicit CovarianceMatrix(const std::array<double, kComponents>& upper) : upper_(upper) {}

    // Symmetrizes (m + m^T) / 2.
    static CovarianceMatrix from_matrix(const Eigen::Matrix4d& m);

    // Zero-based indices, either triangle.
    double operator()(std::size_t i, std::size_t j) const { return upper_[index(i, j)]; }
    double& operator()(std::size_t i, std::size_t j) { return upper_[index(i, j)]; }

    const std::array<double, kComponents>& components() const { return upper_; }
    Eigen::Matrix4d matrix() const;

    bool operator==(const CovarianceMatrix&) const = default;

    static std::size_t index(std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        // Offsets of the first stored element of rows 0..3.
        constexpr std::array<std::size_t, 4> row_start = {0, 4, 7, 9};
        return row_start[i] + (j - i);
    }

private:
    std::array<double, kComponents> upper_{};
};

// sigma = J (+) J with J = [[0, 1], [-1, 0]].
Eigen::Matrix4d symplectic_form();

// Two-mode squeezed vacuum, a = cosh(2r)/2, c = sinh(2r)/2.
CovarianceMatrix tmsv_covariance(double r);

// P V P with P = diag(1, 1, 1, -1).
CovarianceMatrix partial_transpose(const CovarianceMatrix& v);

// The two symplectic eigenvalues in ascending order, from the eigenvalues of
// i sigma V, which come in pairs +-nu. Throws InvalidStateError if the
// spectrum is not of that form to within 1e-9 max(1, |V|).
std::array<double, 2> symplectic_eigenvalues(const CovarianceMatrix& v);

// Smallest symplectic eigenvalue of the partial transpose.
double pt_min_symplectic_eigenvalue(const CovarianceMatrix& v);

// max(0, -log2(2 V_s)). Throws InvalidStateError when V_s <= 0.
double log_negativity(const CovarianceMatrix& v);
// Same, with V_s already known.
double log_negativity_from_vs(double v_s);

// V_s >= 1/2 - 1e-12.
bool is_separable(const CovarianceMatrix& v);

}  // namespace gaussdyn
