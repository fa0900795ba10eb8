// Time-dependent master-equation coefficients for the two normal modes.
//
// For a normal mode of frequency W the four coefficients are
//   shift^2(t) = -2 int_0^t cos(W s) eta(s) ds
//   gamma(t)   = (1/W) int_0^t sin(W s) eta(s) ds
//   D(t)       = int_0^t cos(W s) nu(s) ds
//   f(t)       = -(1/W) int_0^t sin(W s) nu(s) ds
// The bare frequency inside these integrals is the renormalized one; the
// counter-term is added later, when the drift matrix is assembled.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gaussdyn/bath.hpp"

namespace gaussdyn {

struct ModeFrequencies {
    double omega1 = 1.0;  // difference mode, sqrt(Omega_r^2 - lambda)
    double omega2 = 1.0;  // sum mode, sqrt(Omega_r^2 + lambda)

    double operator[](std::size_t i) const { return i == 0 ? omega1 : omega2; }
};

// Throws InstabilityError when |lambda| >= omega_r^2.
ModeFrequencies mode_frequencies(double omega_r, double lambda);

// Coefficients of a single normal mode at one time.
struct ModeCoefficients {
    double omega_shift_sq = 0.0;
    double gamma = 0.0;
    double diff_d = 0.0;
    double diff_f = 0.0;
};

// Index 0 is mode 1 (difference), index 1 is mode 2 (sum).
struct CoefficientSet {
    double t = 0.0;
    std::array<double, 2> omega_shift_sq{};
    std::array<double, 2> gamma{};
    std::array<double, 2> diff_d{};
    std::array<double, 2> diff_f{};

    ModeCoefficients mode(std::size_t i) const {
        return {omega_shift_sq[i], gamma[i], diff_d[i], diff_f[i]};
    }
    void set_mode(std::size_t i, const ModeCoefficients& c) {
        omega_shift_sq[i] = c.omega_shift_sq;
        gamma[i] = c.gamma;
        diff_d[i] = c.diff_d;
        diff_f[i] = c.diff_f;
    }
};

// shift^2 and gamma of one mode from the closed-form dissipation kernel,
// integrated over [0, t] with adaptive Gauss-Kronrod.
ModeCoefficients dissipation_coefficients(double t, double omega, const BathSpec& bath);

// Frequency-domain evaluator for D and f.
//
// With the inner time integral done analytically,
//   D(t) = int_0^inf Jc(w) K_D(w, t) dw,   f(t) = -(1/W) int_0^inf Jc(w) K_f(w, t) dw,
// where Jc(w) = J(w) coth(w/2kT). Jc and both kernels are even in w and
// analytic in the strip |Im w| < 2 pi kT, so the trapezoid rule on the even
// extension converges exponentially. The node spacing 2 pi / P is tied to
// P = t_max + margin, with the margin chosen so that the aliased copies of
// nu(s) at s >= margin are below double precision.
class FrequencyDomainDiffusion {
public:
    FrequencyDomainDiffusion(const BathSpec& bath, double t_max);

    // Returns {D, f} for mode frequency omega at time t <= t_max.
    std::array<double, 2> evaluate(double t, double omega) const;

    double t_max() const { return t_max_; }
    std::size_t nodes() const { return omega_.size(); }

    // Period margin used for a bath; exposed for diagnostics and tests.
    static double margin(const BathSpec& bath);

private:
    double t_max_;
    std::vector<double> omega_;
    std::vector<double> weight_;  // trapezoid weight times Jc(w)
};

// All eight coefficients at time t.
CoefficientSet coefficient_set(double t, const ModeFrequencies& modes, const BathSpec& bath);

// The t -> infinity limits: gamma = (pi / 2W) J(W), D = (pi/2) J(W) coth(W/2kT),
// shift^2 = -Omega_c^2, and f from its principal-value frequency integral.
CoefficientSet asymptotic_set(const ModeFrequencies& modes, const BathSpec& bath);

// Coefficients sampled on a time grid with 4-point (cubic) Lagrange
// interpolation between nodes. Immutable once built.
class CoefficientTable {
public:
    CoefficientTable() = default;
    // Throws DomainError unless times start at 0 and strictly increase.
    explicit CoefficientTable(std::vector<CoefficientSet> sets);

    // Interpolated coefficients; exact at grid nodes. Throws DomainError
    // outside [0, t_end].
    CoefficientSet at(double t) const;

    std::span<const CoefficientSet> sets() const { return sets_; }
    std::span<const double> grid() const { return grid_; }
    double t_end() const { return grid_.empty() ? 0.0 : grid_.back(); }
    std::size_t size() const { return grid_.size(); }

private:
    std::vector<double> grid_;
    std::vector<CoefficientSet> sets_;
};

// Sample times for a table on [0, t_end]: spacing starts at a fraction of
// 1/Lambda, grows geometrically with t, and is capped at the uniform spacing
// t_end / (n_samples - 1).
std::vector<double> table_grid(double t_end, std::size_t n_samples, const BathSpec& bath);

// Requires t_end > 0 and n_samples >= 16. Nodes are independent, so the work
// is split across `workers` threads.
CoefficientTable build_table(double t_end, std::size_t n_samples, const ModeFrequencies& modes,
                             const BathSpec& bath, unsigned workers = 1);

}  // namespace gaussdyn
