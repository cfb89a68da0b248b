#pragma once

#include <cmath>

#include "morsespec/quadrature.hpp"
#include "morsespec/specfun.hpp"

namespace morsespec::asian::detail {

inline constexpr double kPi = 3.14159265358979323846;

inline double log_sinh(double x) {
    // x > 0
    if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
    return std::log(std::sinh(x));
}

/// log of e^{-(p²+ν²)τ/2} |Γ((ν+ip)/2)|² sinh(πp) p, p > 0.
inline double log_spectral_weight(double p, double nu, double tau) {
    return -(p * p + nu * nu) * tau / 2.0 + specfun::log_abs_gamma_sq(specfun::Complex(nu / 2.0, p / 2.0)) +
           log_sinh(kPi * p) + std::log(p);
}

/// Upper bound for the same weight: |Γ((ν+ip)/2)|² sinh(πp) ≤ π (p/2)^{ν-1} e^{πp/2}.
inline double log_spectral_weight_bound(double p, double nu, double tau) {
    const double h = std::max(p / 2.0, 1.0);
    return -(p * p + nu * nu) * tau / 2.0 + std::log(kPi) + (nu - 1.0) * std::log(h) + kPi * p / 2.0 +
           std::log(std::max(p, 1e-300));
}

/// Bound for |W_{κ,ip/2}(z)|: 1.3 √(2z) (p/2)^{κ-1/2} e^{-πp/4}, checked
/// against mpmath over κ ∈ [-1.2, 1.3], z ∈ [0.01, 40], p ∈ [10, 80].
inline double log_whittaker_bound(double kappa, double z, double p) {
    const double h = std::max(p / 2.0, 1.0);
    return std::log(1.3) + 0.5 * std::log(2.0 * z) + (kappa - 0.5) * std::log(h) - kPi * p / 4.0;
}

/// Slack added to every envelope on top of the bounds above.
inline constexpr double kEnvelopeMargin = 10.0;

inline specfun::WhittakerOptions spectral_whittaker() { return {1e-11, 25.0}; }

/// log|e^{-z/2} z^{power} W_{κ,ip/2}(z)| and its sign (0 when W is zero);
/// also reports |Im W|/|Re W|.
struct LogValue {
    double log_mag = 0.0;
    double sign = 0.0;
};

inline LogValue damped_whittaker(double kappa, double p, double z, double power, double* residue = nullptr) {
    const auto w = specfun::whittaker_w_complex(kappa, specfun::Complex(0.0, p / 2.0), z, spectral_whittaker());
    const double re = w.value.real();
    if (residue != nullptr) {
        const double im = std::abs(w.value.imag());
        *residue = re != 0.0 ? im / std::abs(re) : (im > 0.0 ? 1.0 : 0.0);
    }
    if (re == 0.0) return {};
    return {power * std::log(z) - z / 2.0 + std::log(std::abs(re)), re > 0.0 ? 1.0 : -1.0};
}

/// scale · weight(p) · damped W, with the weight and W combined before exponentiating
inline double spectral_term(double scale, double p, double nu, double tau, const LogValue& w) {
    if (w.sign == 0.0) return 0.0;
    return w.sign * scale * std::exp(log_spectral_weight(p, nu, tau) + w.log_mag);
}

}  // namespace morsespec::asian::detail
