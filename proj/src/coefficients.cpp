#include "gaussdyn/coefficients.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "gaussdyn/errors.hpp"

namespace gaussdyn {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(y)/y with the removable point at 0.
double sinc(double y) {
    if (std::abs(y) < 1e-4) {
        const double y2 = y * y;
        return 1.0 - y2 / 6.0 + y2 * y2 / 120.0;
    }
    return std::sin(y) / y;
}

// Beyond this time the noise kernel, bounded by 8 pi gamma0 kT^2 exp(-2 pi kT s),
// contributes less than about 1e-18 to D and f, so both are frozen.
double noise_saturation_time(const BathSpec& bath) {
    const double a = 2.0 * kPi * bath.temperature;
    const double scale = std::max(1.0, 4.0 * bath.gamma0 * bath.temperature);
    return std::max(40.0 / bath.cutoff, (45.0 + std::log(scale)) / a);
}

// The dissipation kernel is below exp(-400) of its peak past 40 / Lambda.
double dissipation_support(const BathSpec& bath) { return 40.0 / bath.cutoff; }

// Every time in (span/2, span] shares one frequency grid. Using the same rule
// for single evaluations and for tables makes table nodes bit-identical to
// coefficient_set.
double frequency_block(double t) {
    double span = 1.0 / 64.0;
    while (span < t) span *= 2.0;
    return span;
}

double effective_noise_time(double t, const BathSpec& bath) {
    return std::min(t, noise_saturation_time(bath));
}

std::array<double, 2> diffusion_pair(double t, double omega, const BathSpec& bath) {
    const double te = effective_noise_time(t, bath);
    const FrequencyDomainDiffusion eval(bath, frequency_block(te));
    return eval.evaluate(te, omega);
}

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        std::ostringstream msg;
        msg << "coefficient time must be finite and >= 0 (got " << t << ")";
        throw DomainError(msg.str());
    }
}

}  // namespace

ModeFrequencies mode_frequencies(double omega_r, double lambda) {
    if (!(omega_r > 0.0)) throw DomainError("omega_r must be > 0");
    const double w2 = omega_r * omega_r;
    if (!(std::abs(lambda) < w2)) {
        std::ostringstream msg;
        msg << "|lambda| = " << std::abs(lambda) << " must be below omega_r^2 = " << w2
            << "; otherwise a normal-mode frequency is imaginary";
        throw InstabilityError(msg.str());
    }
    return {std::sqrt(w2 - lambda), std::sqrt(w2 + lambda)};
}

ModeCoefficients dissipation_coefficients(double t, double omega, const BathSpec& bath) {
    check_time(t);
    ModeCoefficients c;
    if (t == 0.0 || bath.gamma0 == 0.0) return c;

    const double lam = bath.cutoff;
    const double upper = std::min(t, dissipation_support(bath));
    std::vector<double> bp{0.0};
    for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        if (x / lam < upper) bp.push_back(x / lam);
    }
    bp.push_back(upper);

    quad::Options o;
    o.abs_tol = 1e-15 * std::max(1.0, counterterm_sq(bath));
    o.rel_tol = 1e-14;
    const auto cos_part = quad::integrate(
        [&](double s) { return std::cos(omega * s) * dissipation_kernel(s, bath); }, bp, o);
    o.abs_tol = 1e-16 * std::max(1.0, bath.gamma0);
    const auto sin_part = quad::integrate(
        [&](double s) { return std::sin(omega * s) * dissipation_kernel(s, bath); }, bp, o);

    c.omega_shift_sq = -2.0 * cos_part.value;
    c.gamma = sin_part.value / omega;
    return c;
}

double FrequencyDomainDiffusion::margin(const BathSpec& bath) {
    // Aliases of nu sit at s = P - t >= margin, where |nu| ~ exp(-2 pi kT s).
    return std::max(60.0 / (2.0 * kPi * bath.temperature), 40.0 / bath.cutoff);
}

FrequencyDomainDiffusion::FrequencyDomainDiffusion(const BathSpec& bath, double t_max)
    : t_max_(t_max) {
    if (!(t_max >= 0.0)) throw DomainError("frequency grid span must be >= 0");
    if (bath.gamma0 == 0.0) return;
    const double period = t_max + margin(bath);
    const double h = 2.0 * kPi / period;
    const double upper = 6.0 * bath.cutoff;
    const auto n = static_cast<std::size_t>(std::ceil(upper / h));
    omega_.resize(n + 1);
    weight_.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double w = h * static_cast<double>(k);
        omega_[k] = w;
        weight_[k] = (k == 0 ? 0.5 * h : h) * noise_spectrum(w, bath);
    }
}

std::array<double, 2> FrequencyDomainDiffusion::evaluate(double t, double omega) const {
    if (t > t_max_ * (1.0 + 1e-12)) throw DomainError("time beyond the frequency grid span");
    if (t == 0.0 || omega_.empty()) return {0.0, 0.0};
    const double half_t = 0.5 * t;
    double d = 0.0;
    double f = 0.0;
    for (std::size_t k = 0; k < omega_.size(); ++k) {
        const double yp = (omega_[k] + omega) * half_t;
        const double ym = (omega_[k] - omega) * half_t;
        const double sp = std::sin(yp);
        const double cp = std::cos(yp);
        const double sm = std::sin(ym);
        const double cm = std::cos(ym);
        const double sincp = sinc(yp);
        const double sincm = sinc(ym);
        d += weight_[k] * (sincp * cp + sincm * cm);
        f += weight_[k] * (sincp * sp - sincm * sm);
    }
    return {half_t * d, -half_t * f / omega};
}

CoefficientSet coefficient_set(double t, const ModeFrequencies& modes, const BathSpec& bath) {
    check_time(t);
    bath.validate();
    CoefficientSet s;
    s.t = t;
    if (t == 0.0 || bath.gamma0 == 0.0) return s;
    for (std::size_t i = 0; i < 2; ++i) {
        auto c = dissipation_coefficients(t, modes[i], bath);
        const auto df = diffusion_pair(t, modes[i], bath);
        c.diff_d = df[0];
        c.diff_f = df[1];
        s.set_mode(i, c);
    }
    return s;
}

CoefficientSet asymptotic_set(const ModeFrequencies& modes, const BathSpec& bath) {
    bath.validate();
    CoefficientSet s;
    s.t = std::numeric_limits<double>::infinity();
    if (bath.gamma0 == 0.0) return s;
    for (std::size_t i = 0; i < 2; ++i) {
        const double w = modes[i];
        s.gamma[i] = kPi / (2.0 * w) * spectral_density(w, bath);
        s.diff_d[i] = 0.5 * kPi * noise_spectrum(w, bath);
        s.omega_shift_sq[i] = -counterterm_sq(bath);

        // Principal value of -int_0^inf Jc(x) / (W^2 - x^2) dx, folded onto
        // u = |x - W| so the integrand is regular at u = 0.
        auto g = [&](double u) {
            return (noise_spectrum(w + u, bath) - noise_spectrum(w - u, bath)) / u;
        };
        std::vector<double> bp{0.0, w, 2.0 * w, 2.0 * w + 10.0 * bath.temperature,
                               bath.cutoff, 2.0 * bath.cutoff, 6.0 * bath.cutoff + w};
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
        quad::Options o;
        o.abs_tol = 1e-13;
        o.rel_tol = 1e-12;
        s.diff_f[i] = quad::integrate(g, bp, o).value / (2.0 * w);
    }
    return s;
}

CoefficientTable::CoefficientTable(std::vector<CoefficientSet> sets) : sets_(std::move(sets)) {
    if (sets_.size() < 4) throw DomainError("coefficient table needs at least 4 nodes");
    if (sets_.front().t != 0.0) throw DomainError("coefficient table must start at t = 0");
    grid_.reserve(sets_.size());
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        if (i > 0 && !(sets_[i].t > sets_[i - 1].t)) {
            throw DomainError("coefficient table times must strictly increase");
        }
        grid_.push_back(sets_[i].t);
    }
}

CoefficientSet CoefficientTable::at(double t) const {
    if (grid_.empty()) throw DomainError("empty coefficient table");
    if (!(t >= 0.0) || t > grid_.back()) {
        std::ostringstream msg;
        msg << "time " << t << " outside the coefficient table range [0, " << grid_.back() << "]";
        throw DomainError(msg.str());
    }
    // Index of the interval [x_j, x_{j+1}] containing t.
    auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    std::size_t j = static_cast<std::size_t>(it - grid_.begin()) - 1;
    if (grid_[j] == t) return sets_[j];

    const std::size_t n = grid_.size();
    std::size_t lo = j == 0 ? 0 : j - 1;
    lo = std::min(lo, n - 4);
    std::array<double, 4> w{};
    for (std::size_t a = 0; a < 4; ++a) {
        double l = 1.0;
        for (std::size_t b = 0; b < 4; ++b) {
            if (a != b) l *= (t - grid_[lo + b]) / (grid_[lo + a] - grid_[lo + b]);
        }
        w[a] = l;
    }
    CoefficientSet out;
    out.t = t;
    for (std::size_t a = 0; a < 4; ++a) {
        const CoefficientSet& s = sets_[lo + a];
        for (std::size_t i = 0; i < 2; ++i) {
            out.omega_shift_sq[i] += w[a] * s.omega_shift_sq[i];
            out.gamma[i] += w[a] * s.gamma[i];
            out.diff_d[i] += w[a] * s.diff_d[i];
            out.diff_f[i] += w[a] * s.diff_f[i];
        }
    }
    return out;
}

std::vector<double> table_grid(double t_end, std::size_t n_samples, const BathSpec& bath) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("table t_end must be > 0");
    if (n_samples < 16) throw DomainError("table n_samples must be >= 16");
    const double inv_lam = 1.0 / bath.cutoff;
    const double uniform = t_end / static_cast<double>(n_samples - 1);
    const double fine = std::min(0.002 * inv_lam, uniform);
    const double fine_until = 12.0 * inv_lam;
    constexpr double growth = 0.002;

    std::vector<double> grid{0.0};
    double t = 0.0;
    while (t < t_end) {
        const double step = t < fine_until ? fine : std::max(fine, std::min(growth * t, uniform));
        double next = t + step;
        if (next > t_end - 0.25 * step) next = t_end;
        grid.push_back(next);
        t = next;
    }
    return grid;
}

CoefficientTable build_table(double t_end, std::size_t n_samples, const ModeFrequencies& modes,
                             const BathSpec& bath, unsigned workers) {
    bath.validate();
    const std::vector<double> grid = table_grid(t_end, n_samples, bath);
    std::vector<CoefficientSet> sets(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) sets[k].t = grid[k];
    if (bath.gamma0 == 0.0) return CoefficientTable(std::move(sets));

    // Past both saturation times every coefficient is constant; only nodes up
    // to the first such node need work.
    const double frozen_after = std::max(noise_saturation_time(bath), dissipation_support(bath));
    std::size_t active = grid.size();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] >= frozen_after) {
            active = k + 1;
            break;
        }
    }

    // Frequency grids are shared by all nodes in one block.
    std::map<double, FrequencyDomainDiffusion> blocks;
    for (std::size_t k = 1; k < active; ++k) {
        const double span = frequency_block(effective_noise_time(grid[k], bath));
        if (!blocks.contains(span)) blocks.emplace(span, FrequencyDomainDiffusion(bath, span));
    }

    std::atomic<std::size_t> next{1};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::size_t k = next++; k < active; k = next++) {
                const double t = grid[k];
                const double te = effective_noise_time(t, bath);
                const auto& eval = blocks.at(frequency_block(te));
                for (std::size_t i = 0; i < 2; ++i) {
                    auto c = dissipation_coefficients(t, modes[i], bath);
                    const auto df = eval.evaluate(te, modes[i]);
                    c.diff_d = df[0];
                    c.diff_f = df[1];
                    sets[k].set_mode(i, c);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = active;
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(active)));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_threads; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    for (std::size_t k = active; k < grid.size(); ++k) {
        const double t = grid[k];
        sets[k] = sets[active - 1];
        sets[k].t = t;
    }
    return CoefficientTable(std::move(sets));
}

}  // namespace gaussdyn
