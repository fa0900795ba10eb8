// Covariance-matrix dynamics dV/dt = A(t) V + V A(t)^T + B(t) for the two
// oscillators, under each model, plus the analytic rotating-wave Markovian
// reference for a common bath.

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaussdyn/bath.hpp"
#include "gaussdyn/coefficients.hpp"
#include "gaussdyn/gaussian.hpp"

namespace gaussdyn {

enum class ModelKind { Isolated, IndependentBaths, CommonBath, MarkovianRWA };

// "isolated", "model_a", "model_b", "markovian_rwa".
std::string to_string(ModelKind m);
// Throws DomainError for any other name.
ModelKind parse_model(const std::string& name);

struct SystemParams {
    double omega_r = 1.0;
    double lambda = 0.0;
    double r = 0.0;
    BathSpec bath;

    // Bath checks plus |lambda| < omega_r^2 (InstabilityError) and finite r.
    void validate() const;
    ModeFrequencies modes() const { return mode_frequencies(omega_r, lambda); }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<CovarianceMatrix> covariances;
    std::vector<double> log_neg;
    std::vector<double> v_s;
    // Smallest symplectic eigenvalue of V is at least 1/2 - 1e-9.
    std::vector<bool> physical;

    std::size_t size() const { return times.size(); }
};

// Drift and diffusion for one set of coefficients. Throws UnsupportedError
// for MarkovianRWA, which has no covariance ODE here.
Eigen::Matrix4d drift_matrix(ModelKind model, const SystemParams& params, const CoefficientSet& c);
Eigen::Matrix4d diffusion_matrix(ModelKind model, const SystemParams& params, const CoefficientSet& c);

// Table-based variants; t must lie within the table.
Eigen::Matrix4d drift_matrix(ModelKind model, double t, const SystemParams& params,
                             const CoefficientTable& table);
Eigen::Matrix4d diffusion_matrix(ModelKind model, double t, const SystemParams& params,
                                 const CoefficientTable& table);

// A V + V A^T + B.
Eigen::Matrix4d lyapunov_rhs(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b,
                             const Eigen::Matrix4d& v);

// Coefficient table covering [0, t_end] for these parameters. Tables are
// cached per (modes, bath, t_end) and shared read-only.
std::shared_ptr<const CoefficientTable> coefficient_table_for(const SystemParams& params, double t_end,
                                                              unsigned workers = 1);

// Fixed-step RK4 from v0 over [0, t_end] with step dt. The first
// ceil((50 / Lambda) / dt) steps are each split into 50 substeps. Samples are
// recorded at multiples of dt (the last one clamped to t_end). Throws
// IntegrationFailure on non-finite values.
Trajectory integrate_covariance(const CovarianceMatrix& v0, const SystemParams& params, ModelKind model,
                                double t_end, double dt, const CoefficientTable* table);

// Evolution of the two-mode squeezed vacuum with squeezing params.r.
// Requires t_end > 0 and 0 < dt <= 1e-2.
Trajectory evolve(const SystemParams& params, ModelKind model, double t_end, double dt = 1e-3);
Trajectory evolve(const SystemParams& params, ModelKind model, double t_end, double dt,
                  const CoefficientTable& table);

// Rotating-wave Markovian common-bath evolution at lambda = 0: the sum mode
// (x1 + x2)/sqrt(2) relaxes to the thermal state at rate 4 gamma0, the
// difference mode is untouched.
CovarianceMatrix markovian_rwa_covariance(double t, double r, const BathSpec& bath);
// Throws UnsupportedError when params.lambda != 0.
CovarianceMatrix markovian_rwa_covariance(double t, const SystemParams& params);

}  // namespace gaussdyn
