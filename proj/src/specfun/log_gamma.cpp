#include <cmath>
#include <complex>

#include "morsespec/errors.hpp"
#include "morsespec/specfun.hpp"
#include "specfun/kernels.hpp"

namespace morsespec::specfun {

const char* to_string(Route r) noexcept {
    switch (r) {
        case Route::series: return "series";
        case Route::connection: return "connection";
        case Route::asymptotic: return "asymptotic";
        case Route::recurrence: return "recurrence";
        case Route::integral_rep: return "integral_rep";
    }
    return "unknown";
}

namespace {

void check_argument(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidArgument("log_gamma: argument z is not finite");
    }
    if (z.real() <= 0.5) {
        const double nearest = std::round(z.real());
        if (nearest <= 0.0 && std::abs(z - Complex(nearest, 0.0)) < 1e-14) {
            throw PoleError("log_gamma: z is a non-positive integer");
        }
    }
}

}  // namespace

Complex log_gamma(Complex z) {
    check_argument(z);
    return detail::log_gamma_t<double>(z);
}

double log_abs_gamma_sq(Complex z) { return 2.0 * log_gamma(z).real(); }

double abs_gamma_sq(Complex z) {
    const double l = log_abs_gamma_sq(z);
    if (l > 709.0) throw OverflowError("abs_gamma_sq: |Gamma(z)|^2 overflows double");
    return std::exp(l);
}

}  // namespace morsespec::specfun
