#include "gaussdyn/dynamics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "gaussdyn/errors.hpp"

namespace gaussdyn {

namespace {

constexpr std::size_t kRefineSubsteps = 50;
constexpr double kRefineSpan = 50.0;  // in units of 1 / Lambda

bool uses_bath(ModelKind m) { return m == ModelKind::IndependentBaths || m == ModelKind::CommonBath; }

void require_ode_model(ModelKind m) {
    if (m == ModelKind::MarkovianRWA) {
        throw UnsupportedError("the Markovian RWA reference is analytic and has no drift/diffusion form");
    }
}

using TableKey = std::tuple<double, double, double, double, double, double>;

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

std::map<TableKey, std::shared_ptr<const CoefficientTable>>& table_cache() {
    static std::map<TableKey, std::shared_ptr<const CoefficientTable>> cache;
    return cache;
}

// Table lookups tolerate round-off past the final node.
CoefficientSet lookup(const CoefficientTable& table, double t) {
    const double end = table.t_end();
    if (t > end && t <= end * (1.0 + 1e-12)) t = end;
    return table.at(t);
}

}  // namespace

std::string to_string(ModelKind m) {
    switch (m) {
        case ModelKind::Isolated: return "isolated";
        case ModelKind::IndependentBaths: return "model_a";
        case ModelKind::CommonBath: return "model_b";
        case ModelKind::MarkovianRWA: return "markovian_rwa";
    }
    return "unknown";
}

ModelKind parse_model(const std::string& name) {
    if (name == "isolated") return ModelKind::Isolated;
    if (name == "model_a") return ModelKind::IndependentBaths;
    if (name == "model_b") return ModelKind::CommonBath;
    if (name == "markovian_rwa") return ModelKind::MarkovianRWA;
    throw DomainError("unknown model '" + name + "' (expected isolated, model_a, model_b or markovian_rwa)");
}

void SystemParams::validate() const {
    bath.validate();
    if (!std::isfinite(r)) throw DomainError("squeezing r must be finite");
    if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
    mode_frequencies(omega_r, lambda);
}

Eigen::Matrix4d drift_matrix(ModelKind model, const SystemParams& p, const CoefficientSet& c) {
    require_ode_model(model);
    const double w2 = p.omega_r * p.omega_r;
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    a(0, 1) = 1.0;
    a(2, 3) = 1.0;
    // Rows 1 and 3 hold dp1/dt and dp2/dt.
    double self = -w2;
    double cross = -p.lambda;
    double damp_self = 0.0;
    double damp_cross = 0.0;
    if (model == ModelKind::IndependentBaths) {
        const double cterm = counterterm_sq(p.bath);
        const double k1 = cterm + c.omega_shift_sq[0];
        const double k2 = cterm + c.omega_shift_sq[1];
        self -= 0.5 * (k1 + k2);
        cross += 0.5 * (k1 - k2);
        damp_self = -(c.gamma[0] + c.gamma[1]);
        damp_cross = c.gamma[0] - c.gamma[1];
    } else if (model == ModelKind::CommonBath) {
        const double k2 = counterterm_sq(p.bath) + c.omega_shift_sq[1];
        self -= k2;
        cross -= k2;
        damp_self = -2.0 * c.gamma[1];
        damp_cross = -2.0 * c.gamma[1];
    }
    a(1, 0) = self;
    a(1, 2) = cross;
    a(1, 1) = damp_self;
    a(1, 3) = damp_cross;
    a(3, 2) = self;
    a(3, 0) = cross;
    a(3, 3) = damp_self;
    a(3, 1) = damp_cross;
    return a;
}

Eigen::Matrix4d diffusion_matrix(ModelKind model, const SystemParams&, const CoefficientSet& c) {
    require_ode_model(model);
    Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
    double pp = 0.0;        // B22 = B44
    double pp_cross = 0.0;  // B24
    double xp = 0.0;        // B12 = B34
    double xp_cross = 0.0;  // B14 = B23
    if (model == ModelKind::IndependentBaths) {
        pp = c.diff_d[0] + c.diff_d[1];
        pp_cross = c.diff_d[1] - c.diff_d[0];
        xp = -0.5 * (c.diff_f[0] + c.diff_f[1]);
        xp_cross = -0.5 * (c.diff_f[1] - c.diff_f[0]);
    } else if (model == ModelKind::CommonBath) {
        pp = pp_cross = 2.0 * c.diff_d[1];
        xp = xp_cross = -c.diff_f[1];
    }
    b(1, 1) = b(3, 3) = pp;
    b(1, 3) = b(3, 1) = pp_cross;
    b(0, 1) = b(1, 0) = b(2, 3) = b(3, 2) = xp;
    b(0, 3) = b(3, 0) = b(1, 2) = b(2, 1) = xp_cross;
    return b;
}

Eigen::Matrix4d drift_matrix(ModelKind model, double t, const SystemParams& params,
                             const CoefficientTable& table) {
    return drift_matrix(model, params, table.at(t));
}

Eigen::Matrix4d diffusion_matrix(ModelKind model, double t, const SystemParams& params,
                                 const CoefficientTable& table) {
    return diffusion_matrix(model, params, table.at(t));
}

Eigen::Matrix4d lyapunov_rhs(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b, const Eigen::Matrix4d& v) {
    return a * v + v * a.transpose() + b;
}

std::shared_ptr<const CoefficientTable> coefficient_table_for(const SystemParams& params, double t_end,
                                                              unsigned workers) {
    params.validate();
    const ModeFrequencies modes = params.modes();
    const BathSpec& b = params.bath;
    const TableKey key{modes.omega1, modes.omega2, b.gamma0, b.cutoff, b.temperature, t_end};
    {
        std::lock_guard lock(cache_mutex());
        auto it = table_cache().find(key);
        if (it != table_cache().end()) return it->second;
    }
    const auto n = static_cast<std::size_t>(std::ceil(t_end / 0.01)) + 1;
    auto table = std::make_shared<const CoefficientTable>(
        build_table(t_end, std::max<std::size_t>(16, n), modes, b, workers));
    std::lock_guard lock(cache_mutex());
    return table_cache().try_emplace(key, table).first->second;
}

Trajectory integrate_covariance(const CovarianceMatrix& v0, const SystemParams& params, ModelKind model,
                                double t_end, double dt, const CoefficientTable* table) {
    params.validate();
    require_ode_model(model);
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be > 0");
    if (!(dt > 0.0) || dt > 1e-2) throw DomainError("dt must lie in (0, 1e-2]");
    const bool bath = uses_bath(model) && params.bath.gamma0 != 0.0;
    if (bath && table == nullptr) throw DomainError("bath models need a coefficient table");
    if (bath && table->t_end() < t_end * (1.0 - 1e-12)) {
        throw DomainError("coefficient table does not cover the requested time range");
    }

    auto coefficients = [&](double t) { return bath ? lookup(*table, t) : CoefficientSet{}; };
    auto rhs = [&](double t, const Eigen::Matrix4d& v) {
        const CoefficientSet c = coefficients(t);
        return lyapunov_rhs(drift_matrix(model, params, c), diffusion_matrix(model, params, c), v);
    };

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    const auto n_refine = bath ? static_cast<std::size_t>(std::ceil(kRefineSpan / params.bath.cutoff / dt)) : 0;

    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.covariances.reserve(n_steps + 1);

    auto record = [&](double t, const CovarianceMatrix& v) {
        double vs = 0.0;
        double en = 0.0;
        bool phys = false;
        try {
            vs = pt_min_symplectic_eigenvalue(v);
            en = log_negativity_from_vs(vs);
        } catch (const InvalidStateError& e) {
            std::ostringstream msg;
            msg << "invalid covariance matrix at t = " << t << ": " << e.what();
            throw IntegrationFailure(msg.str(), traj.times.empty() ? 0.0 : traj.times.back());
        }
        try {
            phys = symplectic_eigenvalues(v)[0] >= 0.5 - 1e-9;
        } catch (const InvalidStateError&) {
            phys = false;
        }
        traj.times.push_back(t);
        traj.covariances.push_back(v);
        traj.v_s.push_back(vs);
        traj.log_neg.push_back(en);
        traj.physical.push_back(phys);
    };

    Eigen::Matrix4d v = v0.matrix();
    record(0.0, v0);
    double t = 0.0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double t_next = k == n_steps ? t_end : static_cast<double>(k) * dt;
        const std::size_t sub = k <= n_refine ? kRefineSubsteps : 1;
        const double h = (t_next - t) / static_cast<double>(sub);
        for (std::size_t s = 0; s < sub; ++s) {
            const double t0 = s == 0 ? t : t + static_cast<double>(s) * h;
            const double t1 = s + 1 == sub ? t_next : t + static_cast<double>(s + 1) * h;
            const double tm = 0.5 * (t0 + t1);
            const double hs = t1 - t0;
            const Eigen::Matrix4d k1 = rhs(t0, v);
            const Eigen::Matrix4d k2 = rhs(tm, v + 0.5 * hs * k1);
            const Eigen::Matrix4d k3 = rhs(tm, v + 0.5 * hs * k2);
            const Eigen::Matrix4d k4 = rhs(t1, v + hs * k3);
            v += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            v = 0.5 * (v + v.transpose()).eval();
        }
        if (!v.allFinite()) {
            std::ostringstream msg;
            msg << "covariance integration produced non-finite values between t = " << t << " and t = " << t_next;
            throw IntegrationFailure(msg.str(), t);
        }
        t = t_next;
        record(t, CovarianceMatrix::from_matrix(v));
    }
    return traj;
}

Trajectory evolve(const SystemParams& params, ModelKind model, double t_end, double dt) {
    params.validate();
    if (model == ModelKind::MarkovianRWA || !uses_bath(model) || params.bath.gamma0 == 0.0) {
        return evolve(params, model, t_end, dt, CoefficientTable{});
    }
    const auto table = coefficient_table_for(params, t_end);
    return evolve(params, model, t_end, dt, *table);
}

Trajectory evolve(const SystemParams& params, ModelKind model, double t_end, double dt,
                  const CoefficientTable& table) {
    params.validate();
    if (model != ModelKind::MarkovianRWA) {
        const bool empty = table.size() == 0;
        return integrate_covariance(tmsv_covariance(params.r), params, model, t_end, dt, empty ? nullptr : &table);
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be > 0");
    if (!(dt > 0.0) || dt > 1e-2) throw DomainError("dt must lie in (0, 1e-2]");
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    Trajectory traj;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = k == n_steps ? t_end : static_cast<double>(k) * dt;
        const CovarianceMatrix v = markovian_rwa_covariance(t, params);
        const double vs = pt_min_symplectic_eigenvalue(v);
        traj.times.push_back(t);
        traj.covariances.push_back(v);
        traj.v_s.push_back(vs);
        traj.log_neg.push_back(log_negativity_from_vs(vs));
        traj.physical.push_back(symplectic_eigenvalues(v)[0] >= 0.5 - 1e-9);
    }
    return traj;
}

CovarianceMatrix markovian_rwa_covariance(double t, const SystemParams& params) {
    if (params.lambda != 0.0) {
        throw UnsupportedError("the Markovian RWA reference exists only for lambda = 0");
    }
    params.validate();
    if (!(t >= 0.0)) throw DomainError("time must be >= 0");
    const double r = params.r;
    if (t == 0.0) return tmsv_covariance(r);
    const double decay = std::exp(-4.0 * params.bath.gamma0 * t);
    const double thermal = thermal_occupation(params.omega_r, params.bath) + 0.5;

    // Sum mode relaxes, difference mode is frozen; basis (x+, p+, x-, p-).
    Eigen::Matrix4d pm = Eigen::Matrix4d::Zero();
    pm(0, 0) = decay * 0.5 * std::exp(-2.0 * r) + (1.0 - decay) * thermal;
    pm(1, 1) = decay * 0.5 * std::exp(2.0 * r) + (1.0 - decay) * thermal;
    pm(2, 2) = 0.5 * std::exp(2.0 * r);
    pm(3, 3) = 0.5 * std::exp(-2.0 * r);

    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix4d o;  // rows map (x1, p1, x2, p2) to (x+, p+, x-, p-)
    o << s, 0, s, 0,
         0, s, 0, s,
         s, 0, -s, 0,
         0, s, 0, -s;
    return CovarianceMatrix::from_matrix(o.transpose() * pm * o);
}

CovarianceMatrix markovian_rwa_covariance(double t, double r, const BathSpec& bath) {
    SystemParams p;
    p.r = r;
    p.bath = bath;
    return markovian_rwa_covariance(t, p);
}

}  // namespace gaussdyn
