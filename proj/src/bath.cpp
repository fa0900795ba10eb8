#include "gaussdyn/bath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gaussdyn/errors.hpp"

namespace gaussdyn {

namespace {

constexpr double kPi = std::numbers::pi;

// x coth(x), accurate through x = 0.
double x_coth_x(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    }
    if (ax > 20.0) return ax;  // coth(x) = 1 to double precision
    return x / std::tanh(x);
}

}  // namespace

void BathSpec::validate() const {
    std::ostringstream msg;
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) {
        msg << "bath coupling gamma0 must be finite and >= 0 (got " << gamma0 << ")";
    } else if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
        msg << "bath cutoff must be finite and > 0 (got " << cutoff << ")";
    } else if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        msg << "bath temperature must be finite and > 0 (got " << temperature << ")";
    } else if (ohmic_exponent != 1) {
        msg << "only ohmic baths (exponent 1) are supported (got " << ohmic_exponent << ")";
    } else {
        return;
    }
    throw DomainError(msg.str());
}

double spectral_density(double omega, const BathSpec& bath) {
    if (!(omega >= 0.0)) throw DomainError("spectral_density: omega must be >= 0");
    const double u = omega / bath.cutoff;
    return (2.0 / kPi) * bath.gamma0 * omega * std::exp(-u * u);
}

double thermal_occupation(double omega, const BathSpec& bath) {
    if (!(omega > 0.0)) throw DomainError("thermal_occupation: omega must be > 0");
    return 1.0 / std::expm1(omega / bath.temperature);
}

double noise_spectrum(double omega, const BathSpec& bath) {
    const double u = omega / bath.cutoff;
    const double two_kt = 2.0 * bath.temperature;
    return (2.0 / kPi) * bath.gamma0 * two_kt * x_coth_x(omega / two_kt) * std::exp(-u * u);
}

double dissipation_kernel(double t, const BathSpec& bath) {
    if (!(t >= 0.0)) throw DomainError("dissipation_kernel: t must be >= 0");
    const double lam = bath.cutoff;
    const double s = 0.5 * lam * t;
    return bath.gamma0 * lam * lam * lam * t / (2.0 * std::sqrt(kPi)) * std::exp(-s * s);
}

quad::Options noise_kernel_options() {
    quad::Options o;
    o.abs_tol = 1e-12;
    o.rel_tol = 1e-10;
    return o;
}

quad::Result noise_kernel_detailed(double t, const BathSpec& bath, const quad::Options& opts) {
    if (!(t >= 0.0)) throw DomainError("noise_kernel: t must be >= 0");
    if (bath.gamma0 == 0.0) return {};
    const double upper = 6.0 * bath.cutoff;
    // Start with panels spanning about two periods of cos(w t).
    quad::Options o = opts;
    const double periods = upper * t / (2.0 * kPi);
    o.initial_panels = std::max<std::size_t>({o.initial_panels, 8, static_cast<std::size_t>(std::ceil(periods / 2.0))});
    auto integrand = [&](double w) { return noise_spectrum(w, bath) * std::cos(w * t); };
    return quad::integrate(integrand, 0.0, upper, o);
}

double noise_kernel(double t, const BathSpec& bath) { return noise_kernel_detailed(t, bath).value; }

double counterterm_sq(const BathSpec& bath) {
    return 2.0 * bath.gamma0 * bath.cutoff / std::sqrt(kPi);
}

}  // namespace gaussdyn
