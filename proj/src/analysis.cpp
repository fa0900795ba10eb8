#include "gaussdyn/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "gaussdyn/errors.hpp"

namespace gaussdyn {

namespace {

double occupation_at_unit_frequency(double temperature) {
    if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
    return 1.0 / std::expm1(1.0 / temperature);
}

// Where V_s crosses 1/2 on [t_{k-1}, t_k], clamped to the interval.
double crossing_time(const Trajectory& traj, std::size_t k) {
    const double t0 = traj.times[k - 1];
    const double t1 = traj.times[k];
    const double v0 = traj.v_s[k - 1] - 0.5;
    const double v1 = traj.v_s[k] - 0.5;
    if (v0 == v1) return t1;
    const double s = std::clamp(v0 / (v0 - v1), 0.0, 1.0);
    return t0 + s * (t1 - t0);
}

}  // namespace

double survival_threshold(double temperature) {
    return 0.5 * std::log1p(2.0 * occupation_at_unit_frequency(temperature));
}

std::optional<double> markovian_separability_time(double r, double temperature, double gamma0) {
    if (!(r >= 0.0)) throw DomainError("squeezing r must be >= 0");
    if (!(gamma0 > 0.0)) throw DomainError("gamma0 must be > 0");
    if (r >= survival_threshold(temperature)) return std::nullopt;
    const double m = 2.0 * occupation_at_unit_frequency(temperature) + 1.0;
    const double ratio = (m - std::exp(-2.0 * r)) / (m - std::exp(2.0 * r));
    return std::log(ratio) / (4.0 * gamma0);
}

SeparabilityEvents separability_events(const Trajectory& traj, double eps) {
    if (traj.size() == 0) throw DomainError("separability_events: empty trajectory");
    if (!(eps > 0.0)) throw DomainError("separability_events: eps must be > 0");
    SeparabilityEvents ev;
    bool alive = traj.log_neg[0] > 10.0 * eps;
    bool died = false;
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const double en = traj.log_neg[k];
        if (alive && en < eps) {
            ev.death_times.push_back(crossing_time(traj, k));
            alive = false;
            died = true;
        } else if (!alive && en > 10.0 * eps) {
            if (died) ev.revival_times.push_back(crossing_time(traj, k));
            alive = true;
        }
    }
    ev.survived = traj.log_neg.back() > eps;
    return ev;
}

double initial_growth(double r, double lambda, double probe_dt) {
    if (!(probe_dt > 0.0) || probe_dt > 1e-2) throw DomainError("probe_dt must lie in (0, 1e-2]");
    SystemParams p;
    p.lambda = lambda;
    p.r = r;
    const auto traj = evolve(p, ModelKind::Isolated, probe_dt, probe_dt / 10.0);
    return traj.log_neg.back() - traj.log_neg.front();
}

std::optional<double> critical_lambda(double r, double probe_dt, double tol) {
    if (!(r >= 0.0)) throw DomainError("squeezing r must be >= 0");
    if (!(tol > 0.0)) throw DomainError("tol must be > 0");
    auto s = [&](double lambda) { return initial_growth(r, lambda, probe_dt); };

    constexpr int kScan = 50;
    double lo = 0.0;
    double s_lo = 0.0;
    bool bracketed = false;
    double hi = 0.0;
    for (int i = 1; i < kScan; ++i) {
        const double lambda = static_cast<double>(i) / kScan;
        const double v = s(lambda);
        if (i > 1 && s_lo < 0.0 && v >= 0.0) {
            hi = lambda;
            bracketed = true;
            break;
        }
        lo = lambda;
        s_lo = v;
    }
    if (!bracketed) return std::nullopt;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (s(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace gaussdyn
