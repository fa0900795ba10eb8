// Entanglement survival, Markovian separability times, sudden death and
// revival detection, and the critical coupling of the isolated system.

#pragma once

#include <optional>
#include <vector>

#include "gaussdyn/dynamics.hpp"

namespace gaussdyn {

// Squeezing needed for the thermalized common-bath state to stay entangled:
// r_c = ln(2 N + 1) / 2 with N the occupation at omega_r = 1.
double survival_threshold(double temperature);

// Time at which the rotating-wave Markovian state becomes separable,
// (1 / 4 gamma0) ln[(2N + 1 - e^{-2r}) / (2N + 1 - e^{2r})]; nullopt when
// r >= survival_threshold(temperature).
std::optional<double> markovian_separability_time(double r, double temperature, double gamma0);

struct SeparabilityEvents {
    std::vector<double> death_times;
    std::vector<double> revival_times;
    bool survived = false;
};

// A death is recorded when E_N falls below eps after having exceeded 10 eps,
// a revival when it exceeds 10 eps again. Event times are placed where the
// linear interpolant of V_s between neighbouring samples crosses 1/2.
SeparabilityEvents separability_events(const Trajectory& traj, double eps = 1e-10);

// Initial-growth indicator of the isolated system, E_N(probe_dt) - E_N(0).
double initial_growth(double r, double lambda, double probe_dt = 1e-2);

// Coupling in (0, 1) above which isolated entanglement initially grows rather
// than decays, located by a coarse scan and bisection to tol. nullopt when
// there is no decaying-to-growing transition (r = 0, for instance).
std::optional<double> critical_lambda(double r, double probe_dt = 1e-2, double tol = 1e-4);

}  // namespace gaussdyn
