// Globally adaptive 21-point Gauss-Kronrod quadrature.
//
// Panels are bisected in order of decreasing error estimate until the summed
// estimate meets max(abs_tol, rel_tol * |I|). Panels whose estimate sits at
// the round-off floor (50 eps * integral of |f|) are frozen rather than split;
// if only such panels remain the result is returned with roundoff_limited set.
// Running out of panel budget throws QuadratureFailure.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace gaussdyn::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_panels = 400000;
    // Equal-width panels each breakpoint interval is cut into before adapting.
    std::size_t initial_panels = 1;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    std::size_t panels = 0;
    bool roundoff_limited = false;
};

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    double resabs = 0.0;  // integral of |f| over the panel
};

namespace rule {

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss points.
inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208931582519, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// 10-point Gauss weights for xgk[1], xgk[3], ..., xgk[9].
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

}  // namespace rule

// Error estimate following the QUADPACK qk21 heuristic.
double kronrod_error(double kronrod, double gauss, double resabs, double resasc) noexcept;

template <class F>
Panel gk21(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 21> fv{};
    const double fc = f(center);
    fv[20] = fc;
    double kronrod = fc * rule::wgk[10];
    double gauss = 0.0;
    double resabs = std::abs(kronrod);
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * rule::xgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += rule::wgk[j] * (f1 + f2);
        resabs += rule::wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += rule::wg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * kronrod;
    double resasc = rule::wgk[10] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 10; ++j) {
        resasc += rule::wgk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.value = kronrod * half;
    p.resabs = resabs * std::abs(half);
    p.error = kronrod_error(kronrod * half, gauss * half, p.resabs, resasc * std::abs(half));
    return p;
}

// Bookkeeping for the adaptive loop, independent of the integrand type.
class AdaptiveState {
public:
    explicit AdaptiveState(const Options& opts) : opts_(opts) {}

    void add(const Panel& p);
    // True when the current estimate meets the tolerance or cannot improve.
    bool done();
    // Removes the worst panel; caller evaluates and adds its halves.
    Panel take_worst();
    Result finish(std::size_t evaluations) const;

private:
    void resum();

    Options opts_;
    std::vector<Panel> active_;  // max-heap on error
    std::vector<Panel> frozen_;
    double value_ = 0.0;
    double error_ = 0.0;
    std::size_t splits_ = 0;
    bool roundoff_ = false;
};

template <class F>
Result integrate(F&& f, std::span<const double> breakpoints, const Options& opts = {}) {
    AdaptiveState state(opts);
    std::size_t evals = 0;
    const std::size_t n0 = opts.initial_panels == 0 ? 1 : opts.initial_panels;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double lo = breakpoints[i];
        const double hi = breakpoints[i + 1];
        if (!(hi > lo)) continue;
        const double w = (hi - lo) / static_cast<double>(n0);
        for (std::size_t k = 0; k < n0; ++k) {
            const double a = lo + w * static_cast<double>(k);
            const double b = (k + 1 == n0) ? hi : lo + w * static_cast<double>(k + 1);
            state.add(gk21(f, a, b));
            evals += 21;
        }
    }
    while (!state.done()) {
        const Panel worst = state.take_worst();
        const double mid = 0.5 * (worst.a + worst.b);
        state.add(gk21(f, worst.a, mid));
        state.add(gk21(f, mid, worst.b));
        evals += 42;
    }
    return state.finish(evals);
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
    const std::array<double, 2> bp{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(bp), opts);
}

}  // namespace gaussdyn::quad
