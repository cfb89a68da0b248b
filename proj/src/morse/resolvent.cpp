#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "morse/internal.hpp"
#include "morsespec/errors.hpp"
#include "morsespec/morse.hpp"
#include "morsespec/specfun.hpp"

namespace morsespec::morse {

namespace {

constexpr specfun::WhittakerOptions kTight{1e-14, 40.0};

double spectrum_distance(Complex lambda, const MorsePotential& pot) {
    double d = lambda.real() >= 0.0 ? std::abs(lambda.imag()) : std::abs(lambda);
    for (const auto& s : bound_states(pot)) d = std::min(d, std::abs(lambda - s.lambda_n));
    return d;
}

}  // namespace

Complex whittaker_index(Complex lambda) {
    Complex s = std::sqrt(lambda);
    if (s.imag() >= 0.0) s = -s;
    return Complex(0.0, 1.0) * s;
}

Complex psi_regular(double x, Complex lambda, const MorsePotential& pot) {
    validate(pot);
    const double lu = log_u(x, pot);
    const auto m = specfun::whittaker_m(pot.kappa, whittaker_index(lambda), std::exp(lu));
    return std::exp(-0.5 * lu) * m.value;
}

Complex psi_decaying(double x, Complex lambda, const MorsePotential& pot) {
    validate(pot);
    const double lu = log_u(x, pot);
    const auto w = specfun::whittaker_w_complex(pot.kappa, whittaker_index(lambda), std::exp(lu), kTight);
    return std::exp(-0.5 * lu) * w.value;
}

Complex wronskian_exact(Complex lambda, const MorsePotential& pot) {
    const Complex mu = whittaker_index(lambda);
    return std::exp(specfun::log_gamma(1.0 + 2.0 * mu) - specfun::log_gamma(0.5 - pot.kappa + mu));
}

GreenEval green_function(double x, double x_prime, Complex lambda, const MorsePotential& pot) {
    validate(pot);
    if (spectrum_distance(lambda, pot) < 1e-10) {
        throw SpectrumError("green_function: lambda lies on the spectrum");
    }
    const Complex mu = whittaker_index(lambda);
    // M takes the smaller u (larger x), W the larger u
    const double hi = std::max(x, x_prime);
    const double lo = std::min(x, x_prime);
    const Complex ratio = std::exp(specfun::log_gamma(0.5 - pot.kappa + mu) - specfun::log_gamma(1.0 + 2.0 * mu));
    return {ratio * psi_regular(hi, lambda, pot) * psi_decaying(lo, lambda, pot), x, x_prime, lambda};
}

double wronskian_residual(Complex lambda, double x, const MorsePotential& pot) {
    const double h = 1e-5;
    const Complex p1 = psi_regular(x, lambda, pot);
    const Complex p2 = psi_decaying(x, lambda, pot);
    const Complex d1 = (psi_regular(x + h, lambda, pot) - psi_regular(x - h, lambda, pot)) / (2.0 * h);
    const Complex d2 = (psi_decaying(x + h, lambda, pot) - psi_decaying(x - h, lambda, pot)) / (2.0 * h);
    const Complex exact = wronskian_exact(lambda, pot);
    return std::abs(p1 * d2 - d1 * p2 - exact) / std::abs(exact);
}

}  // namespace morsespec::morse
