#include <cmath>
#include <complex>
#include <string>

#include "morse/internal.hpp"
#include "morsespec/errors.hpp"
#include "morsespec/morse.hpp"
#include "morsespec/specfun.hpp"

namespace morsespec::morse {

namespace {

// log(√2 π)
constexpr double kLogNorm = 1.4913034761293729;

// log sinh(y) for y > 0 without overflow
double log_sinh(double y) { return y + std::log1p(-std::exp(-2.0 * y)) - M_LN2; }

}  // namespace

void validate(const MorsePotential& pot) {
    if (!std::isfinite(pot.kappa) || !(pot.kappa > 0.0)) {
        throw InvalidArgument("morse: kappa must be positive, got " + std::to_string(pot.kappa));
    }
    if (!std::isfinite(pot.x0)) throw InvalidArgument("morse: x0 must be finite");
}

double potential(double x, const MorsePotential& pot) {
    const double e = std::exp(-(x - pot.x0));
    return pot.kappa * pot.kappa * (e * e - 2.0 * e);
}

double log_u(double x, const MorsePotential& pot) {
    if (x - pot.x0 < -700.0) {
        throw OverflowError("u_of_x: x - x0 = " + std::to_string(x - pot.x0) + " is below -700");
    }
    return std::log(2.0 * pot.kappa) - (x - pot.x0);
}

double u_of_x(double x, const MorsePotential& pot) {
    validate(pot);
    return std::exp(log_u(x, pot));
}

std::vector<DiscreteState> bound_states(const MorsePotential& pot) {
    validate(pot);
    std::vector<DiscreteState> out;
    for (int n = 0; 2.0 * pot.kappa - 2.0 * n - 1.0 > 0.0; ++n) {
        const double a = pot.kappa - n - 0.5;
        const double log_norm_sq =
            specfun::log_gamma(n + 1.0).real() + std::log(2.0 * pot.kappa - 2.0 * n - 1.0) -
            specfun::log_gamma(2.0 * pot.kappa - n).real();
        out.push_back({n, -a * a, std::exp(0.5 * log_norm_sq)});
    }
    return out;
}

double psi_n(double x, const DiscreteState& state, const MorsePotential& pot) {
    const double lu = log_u(x, pot);
    const double u = std::exp(lu);
    const double alpha = 2.0 * pot.kappa - 2.0 * state.n - 1.0;
    const double lag = specfun::laguerre(state.n, alpha, u);
    if (lag == 0.0) return 0.0;
    const double log_mag = std::log(state.norm_const) - 0.5 * u + 0.5 * alpha * lu + std::log(std::abs(lag));
    return std::copysign(std::exp(log_mag), lag);
}

double psi_continuum(double x, double lambda, const MorsePotential& pot) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("psi_continuum: lambda must be positive, got " + std::to_string(lambda));
    }
    const double lu = log_u(x, pot);
    const double s = std::sqrt(lambda);
    const auto w = specfun::whittaker_w(pot.kappa, Complex(0.0, s), std::exp(lu), detail::spectral_whittaker());
    if (w.value == 0.0) return 0.0;
    const double log_mag = 0.5 * log_sinh(2.0 * M_PI * s) +
                           0.5 * specfun::log_abs_gamma_sq(Complex(0.5 - pot.kappa, s)) - 0.5 * lu - kLogNorm + std::log(std::abs(w.value));
    return std::copysign(std::exp(log_mag), w.value);
}

}  // namespace morsespec::morse
