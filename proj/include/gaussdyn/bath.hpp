// Ohmic thermal bath with a Gaussian frequency cutoff.
//
// Units throughout the library: hbar = M = Omega_r = 1. Frequencies and the
// coupling rate gamma0 are in units of Omega_r, temperature is k_B T in units
// of hbar Omega_r, times are in units of 1 / Omega_r.

#pragma once

#include "gaussdyn/quadrature.hpp"

namespace gaussdyn {

struct BathSpec {
    double gamma0 = 0.0;        // coupling-strength rate
    double cutoff = 2000.0;     // Lambda
    double temperature = 10.0;  // k_B T
    int ohmic_exponent = 1;     // only n = 1 is supported

    // Throws DomainError on a negative rate, non-positive cutoff or
    // temperature, or an exponent other than 1.
    void validate() const;

    bool operator==(const BathSpec&) const = default;
};

// J(w) = (2/pi) gamma0 w exp(-w^2 / Lambda^2).
double spectral_density(double omega, const BathSpec& bath);

// Bose occupation 1 / (exp(w / kT) - 1), w > 0.
double thermal_occupation(double omega, const BathSpec& bath);

// J(w) coth(w / 2kT), extended evenly to w < 0 and continuously to
// (2/pi) gamma0 2kT at w = 0. This is the integrand weight of the noise kernel.
double noise_spectrum(double omega, const BathSpec& bath);

// eta(t) = int_0^inf J(w) sin(w t) dw in closed form:
// gamma0 Lambda^3 t / (2 sqrt(pi)) * exp(-Lambda^2 t^2 / 4).
double dissipation_kernel(double t, const BathSpec& bath);

// nu(t) = int_0^inf J(w) coth(w / 2kT) cos(w t) dw by adaptive Gauss-Kronrod
// on [0, 6 Lambda] (abs 1e-12, rel 1e-10). Throws QuadratureFailure when the
// panel budget runs out.
quad::Options noise_kernel_options();
double noise_kernel(double t, const BathSpec& bath);
quad::Result noise_kernel_detailed(double t, const BathSpec& bath,
                                   const quad::Options& opts = noise_kernel_options());

// Omega_c^2 = 2 int_0^inf J(w) / w dw = 2 gamma0 Lambda / sqrt(pi).
double counterterm_sq(const BathSpec& bath);

}  // namespace gaussdyn
