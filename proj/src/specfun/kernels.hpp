#pragma once

// Precision-generic kernels behind the public specfun API. Instantiated for
// double, long double and float128; the connection formula for W cancels by
// roughly e^z, so callers pick the narrowest type whose epsilon survives it.

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>

#include "morsespec/errors.hpp"

namespace morsespec::specfun::detail {

using boost::multiprecision::complex128;
using boost::multiprecision::float128;

template <class Real>
struct Precision;

template <>
struct Precision<double> {
    using Complex = std::complex<double>;
    static constexpr int bits = 53;
    static constexpr int stirling_terms = 10;
    static constexpr double stirling_radius = 10.0;
    static double epsilon() { return 0x1p-53; }
    static double parse(const char* s) { return std::strtod(s, nullptr); }
};

template <>
struct Precision<long double> {
    using Complex = std::complex<long double>;
    static constexpr int bits = 64;
    static constexpr int stirling_terms = 12;
    static constexpr double stirling_radius = 12.0;
    static long double epsilon() { return 0x1p-64L; }
    static long double parse(const char* s) { return std::strtold(s, nullptr); }
};

template <>
struct Precision<float128> {
    using Complex = complex128;
    static constexpr int bits = 113;
    static constexpr int stirling_terms = 20;
    static constexpr double stirling_radius = 20.0;
    static float128 epsilon() { return std::numeric_limits<float128>::epsilon() / 2; }
    static float128 parse(const char* s) { return float128(s); }
};

template <class Real>
using ComplexOf = typename Precision<Real>::Complex;

inline constexpr std::array<const char*, 20> kStirlingCoefficients = {
    // B_{2k} / (2k (2k-1)), k = 1..20
    "8.333333333333333333333333333333333333333e-2",
    "-2.777777777777777777777777777777777777778e-3",
    "7.936507936507936507936507936507936507937e-4",
    "-5.952380952380952380952380952380952380952e-4",
    "8.417508417508417508417508417508417508418e-4",
    "-1.917526917526917526917526917526917526918e-3",
    "6.41025641025641025641025641025641025641e-3",
    "-2.955065359477124183006535947712418300654e-2",
    "1.796443723688305731649384900158893966944e-1",
    "-1.392432216905901116427432216905901116427",
    "1.340286404416839199447895100069013112491e+1",
    "-1.568482846260020173063651324520889738281e+2",
    "2.193103333333333333333333333333333333333e+3",
    "-3.610877125372498935717326521924223073648e+4",
    "6.914722688513130671083952507756734675533e+5",
    "-1.523822153940741619228336495888678051866e+7",
    "3.829007513914141414141414141414141414141e+8",
    "-1.088226603578439108901514916552510537473e+10",
    "3.473202837650022522522522522522522522523e+11",
    "-1.236960214226927445425171034927132488108e+13",
};

inline constexpr const char* kHalfLogTwoPi = "0.9189385332046727417803297364056176398614";

template <class Real>
const std::array<Real, 20>& stirling_coefficients() {
    static const std::array<Real, 20> table = [] {
        std::array<Real, 20> c{};
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = Precision<Real>::parse(kStirlingCoefficients[k]);
        return c;
    }();
    return table;
}

template <class Real>
const Real& half_log_two_pi() {
    static const Real value = Precision<Real>::parse(kHalfLogTwoPi);
    return value;
}

template <class Real>
bool is_nonpositive_integer(const ComplexOf<Real>& z) {
    using std::floor;
    return z.imag() == Real(0) && z.real() <= Real(0) && floor(z.real()) == z.real();
}

/// log Γ(z) by upward recurrence into |w| ≥ R, Re w ≥ 0, then Stirling.
/// Returns +∞ (real part) at exact poles so that exp(-logΓ) is the
/// reciprocal gamma, zero there.
template <class Real>
ComplexOf<Real> log_gamma_t(const ComplexOf<Real>& z) {
    using C = ComplexOf<Real>;
    using std::abs;
    using std::log;
    if (is_nonpositive_integer<Real>(z)) {
        return C(std::numeric_limits<Real>::infinity(), Real(0));
    }
    const Real radius = Real(Precision<Real>::stirling_radius);
    C w = z;
    C shift(Real(0), Real(0));
    while (w.real() < Real(0) || abs(w) < radius) {
        shift += log(w);
        w += Real(1);
    }
    const C inv = C(Real(1), Real(0)) / w;
    const C inv2 = inv * inv;
    const auto& coef = stirling_coefficients<Real>();
    C power = inv;
    C series(Real(0), Real(0));
    for (int k = 0; k < Precision<Real>::stirling_terms; ++k) {
        series += coef[static_cast<std::size_t>(k)] * power;
        power *= inv2;
    }
    return (w - Real(0.5)) * log(w) - w + half_log_two_pi<Real>() + series - shift;
}

template <class Real>
struct SeriesSum {
    ComplexOf<Real> value;
    int terms = 0;
    Real max_partial = 0;  // largest |partial sum| seen
};

/// Kummer's series for 1F1(a; b; z), z real. Stops once a term falls below
/// eps·|sum| on the decreasing side of the term hump.
template <class Real>
SeriesSum<Real> kummer_series_t(const ComplexOf<Real>& a, const ComplexOf<Real>& b, const Real& z,
                                int max_terms = 100000) {
    using C = ComplexOf<Real>;
    using std::abs;
    const Real tol = Precision<Real>::epsilon() / 2;
    C term(Real(1), Real(0));
    C sum(Real(1), Real(0));
    Real max_partial = Real(1);
    const Real zero(0);
    for (int k = 0; k < max_terms; ++k) {
        const Real kk(k);
        term *= (a + kk) / (b + kk) * (z / (kk + Real(1)));
        sum += term;
        const Real sum_abs = abs(sum);
        if (sum_abs > max_partial) max_partial = sum_abs;
        if (term.real() == zero && term.imag() == zero) {
            return {sum, k + 1, max_partial};
        }
        const Real next = kk + Real(1);
        if (next >= z && abs(term) <= tol * sum_abs) {
            const Real ratio = abs((a + next) / (b + next)) * z / (next + Real(1));
            if (ratio < Real(1)) return {sum, k + 1, max_partial};
        }
    }
    throw NoConvergence("kummer_1f1: series exceeded the term limit");
}

template <class Real>
struct ConnectionSum {
    ComplexOf<Real> value;
    Real magnitude = 0;  // rounding scale of this term before cancellation
    Real series_cancellation = 1;
    int terms = 0;
};

/// One half of the connection formula: Γ(-2m)/Γ(1/2-κ-m) M_{κ,m}(z).
template <class Real>
ConnectionSum<Real> connection_term_t(const Real& kappa, const ComplexOf<Real>& m, const Real& z) {
    using C = ComplexOf<Real>;
    using std::abs;
    using std::exp;
    using std::log;
    const C den_arg = C(Real(0.5) - kappa, Real(0)) - m;
    if (is_nonpositive_integer<Real>(den_arg)) {
        return {C(Real(0), Real(0)), Real(0), Real(1), 0};
    }
    const C log_pre = log_gamma_t<Real>(Real(-2) * m) - log_gamma_t<Real>(den_arg) - z / Real(2) +
                      (m + Real(0.5)) * log(z);
    const auto series = kummer_series_t<Real>(m - kappa + Real(0.5), Real(1) + Real(2) * m, z);
    const C pre = exp(log_pre);
    const C value = pre * series.value;
    const Real sum_abs = abs(series.value);
    const Real cancel = sum_abs > Real(0) ? series.max_partial / sum_abs : Real(1);
    // exp of a large log prefactor loses about |log_pre| ulps (mostly phase)
    return {value, abs(pre) * series.max_partial * (Real(8) + abs(log_pre)), cancel, series.terms};
}

template <class Real>
struct ConnectionResult {
    ComplexOf<Real> value;
    Real est_rel_error = 0;
    int terms = 0;
};

/// W_{κ,μ}(z) = Γ(-2μ)/Γ(1/2-κ-μ) M_{κ,μ} + Γ(2μ)/Γ(1/2-κ+μ) M_{κ,-μ}.
/// 2μ must not be an integer.
template <class Real>
ConnectionResult<Real> connection_w_t(const Real& kappa, const ComplexOf<Real>& mu, const Real& z) {
    using std::abs;
    const auto plus = connection_term_t<Real>(kappa, mu, z);
    const auto minus = connection_term_t<Real>(kappa, -mu, z);
    ConnectionResult<Real> out;
    out.value = plus.value + minus.value;
    out.terms = plus.terms + minus.terms;
    const Real mag = abs(out.value);
    const Real eps = Precision<Real>::epsilon();
    const Real scale = plus.magnitude + minus.magnitude;
    // a few ulps of every term that went into the sum, relative to the result
    out.est_rel_error = mag > Real(0) ? eps * scale / mag : Real(1);
    return out;
}

}  // namespace morsespec::specfun::detail
