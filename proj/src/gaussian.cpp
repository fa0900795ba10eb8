#include "gaussdyn/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gaussdyn/errors.hpp"

namespace gaussdyn {

CovarianceMatrix CovarianceMatrix::from_matrix(const Eigen::Matrix4d& m) {
    CovarianceMatrix v;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i; j < 4; ++j) {
            const auto a = static_cast<Eigen::Index>(i);
            const auto b = static_cast<Eigen::Index>(j);
            v(i, j) = i == j ? m(a, a) : 0.5 * (m(a, b) + m(b, a));
        }
    }
    return v;
}

Eigen::Matrix4d CovarianceMatrix::matrix() const {
    Eigen::Matrix4d m;
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            m(i, j) = (*this)(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    return m;
}

Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s(0, 1) = 1.0;
    s(1, 0) = -1.0;
    s(2, 3) = 1.0;
    s(3, 2) = -1.0;
    return s;
}

CovarianceMatrix tmsv_covariance(double r) {
    if (!std::isfinite(r)) throw DomainError("squeezing r must be finite");
    const double a = 0.5 * std::cosh(2.0 * r);
    const double c = 0.5 * std::sinh(2.0 * r);
    CovarianceMatrix v;
    v(0, 0) = v(1, 1) = v(2, 2) = v(3, 3) = a;
    v(0, 2) = -c;
    v(1, 3) = c;
    return v;
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& v) {
    CovarianceMatrix out = v;
    for (std::size_t i = 0; i < 3; ++i) out(i, 3) = -v(i, 3);
    return out;
}

std::array<double, 2> symplectic_eigenvalues(const CovarianceMatrix& v) {
    const Eigen::Matrix4d m = v.matrix();
    const Eigen::Matrix4cd k = std::complex<double>(0.0, 1.0) * (symplectic_form() * m).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(k, false);
    if (solver.info() != Eigen::Success) throw InvalidStateError("symplectic eigen-solve did not converge");

    std::array<std::complex<double>, 4> ev;
    for (Eigen::Index i = 0; i < 4; ++i) ev[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    std::sort(ev.begin(), ev.end(), [](auto x, auto y) { return x.real() < y.real(); });

    // Sorted spectrum must read -nu+, -nu-, nu-, nu+ with negligible imaginary parts.
    const double tol = 1e-9 * std::max(1.0, m.norm());
    const bool paired = std::abs(ev[0] + ev[3]) <= tol && std::abs(ev[1] + ev[2]) <= tol &&
                        std::all_of(ev.begin(), ev.end(), [&](auto z) { return std::abs(z.imag()) <= tol; });
    if (!paired) {
        std::ostringstream msg;
        msg << "covariance matrix has no valid symplectic spectrum (eigenvalues of i sigma V: ";
        for (auto z : ev) msg << z << ' ';
        msg << ")";
        throw InvalidStateError(msg.str());
    }
    const double lo = 0.5 * (ev[2].real() - ev[1].real());
    const double hi = 0.5 * (ev[3].real() - ev[0].real());
    return {lo, hi};
}

double pt_min_symplectic_eigenvalue(const CovarianceMatrix& v) {
    return symplectic_eigenvalues(partial_transpose(v))[0];
}

double log_negativity_from_vs(double v_s) {
    if (!(v_s > 0.0)) {
        std::ostringstream msg;
        msg << "non-positive symplectic eigenvalue " << v_s << " of the partial transpose";
        throw InvalidStateError(msg.str());
    }
    return std::max(0.0, -std::log2(2.0 * v_s));
}

double log_negativity(const CovarianceMatrix& v) {
    return log_negativity_from_vs(pt_min_symplectic_eigenvalue(v));
}

bool is_separable(const CovarianceMatrix& v) {
    return pt_min_symplectic_eigenvalue(v) >= 0.5 - 1e-12;
}

}  // namespace gaussdyn
