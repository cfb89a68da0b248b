#include <cmath>
#include <complex>
#include <algorithm>
#include <limits>
#include <string>

#include "morsespec/errors.hpp"
#include "morsespec/specfun.hpp"
#include "specfun/kernels.hpp"

namespace morsespec::specfun {

namespace {

// double-precision cancellation estimate above which the series is resummed in quad
constexpr double kResumThreshold = 1e-13;

bool near_nonpositive_integer(Complex b) {
    const double nearest = std::round(b.real());
    return nearest <= 0.0 && std::abs(b - Complex(nearest, 0.0)) < 1e-14;
}

void check_finite(Complex v, const char* name) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw InvalidArgument(std::string("kummer_1f1: parameter ") + name + " is not finite");
    }
}

}  // namespace

Evaluated<Complex> kummer_1f1(Complex a, Complex b, double z) {
    check_finite(a, "a");
    check_finite(b, "b");
    if (!std::isfinite(z)) throw InvalidArgument("kummer_1f1: argument z is not finite");
    if (near_nonpositive_integer(b)) throw PoleError("kummer_1f1: parameter b is a non-positive integer");

    const double eps = std::numeric_limits<double>::epsilon();
    const auto s = detail::kummer_series_t<double>(a, b, z);
    Evaluated<Complex> out;
    out.value = s.value;
    out.diag.terms_used = s.terms;
    out.diag.route = Route::series;
    out.diag.working_bits = 53;
    const double mag = std::abs(s.value);
    out.diag.est_rel_error = mag > 0.0 ? eps * std::max(1.0, s.max_partial / mag) : 1.0;
    if (out.diag.est_rel_error <= kResumThreshold) return out;

    using detail::complex128;
    using detail::float128;
    const complex128 aq(float128(a.real()), float128(a.imag()));
    const complex128 bq(float128(b.real()), float128(b.imag()));
    const auto sq = detail::kummer_series_t<float128>(aq, bq, float128(z));
    out.value = Complex(static_cast<double>(sq.value.real()), static_cast<double>(sq.value.imag()));
    const float128 mq = abs(sq.value);
    out.diag.terms_used = sq.terms;
    out.diag.working_bits = 113;
    out.diag.est_rel_error =
        std::max(eps, mq > 0 ? static_cast<double>(detail::Precision<float128>::epsilon() * sq.max_partial / mq) : 1.0);
    return out;
}

Evaluated<Complex> whittaker_m(double kappa, Complex mu, double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw InvalidArgument("whittaker_m: argument z must be positive");
    if (!std::isfinite(kappa)) throw InvalidArgument("whittaker_m: kappa is not finite");
    auto series = kummer_1f1(mu - kappa + 0.5, 1.0 + 2.0 * mu, z);
    Evaluated<Complex> out;
    out.diag = series.diag;
    out.value = std::exp(-0.5 * z + (mu + 0.5) * std::log(z)) * series.value;
    return out;
}

}  // namespace morsespec::specfun
