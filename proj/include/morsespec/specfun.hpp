#pragma once

// Special-function kernels used by the Morse spectral decomposition:
// complex log-gamma, Kummer 1F1 with complex parameters, Whittaker M and W
// with complex second index, and generalized Laguerre polynomials.
//
// All functions are pure and safe to call concurrently.

#include <complex>
#include <cstdint>

namespace morsespec::specfun {

using Complex = std::complex<double>;

enum class Route : std::uint8_t { series, connection, asymptotic, recurrence, integral_rep };

const char* to_string(Route r) noexcept;

/// How a value was obtained and how far it can be trusted.
struct EvalDiagnostics {
    int terms_used = 1;
    double est_rel_error = 0.0;
    Route route = Route::series;
    /// Significand bits of the arithmetic the value was computed in (53, 64 or 113).
    int working_bits = 53;
};

template <class T>
struct Evaluated {
    T value{};
    EvalDiagnostics diag{};
};

// ---------------------------------------------------------------------------
// Gamma function

/// log Γ(z), continued analytically from the positive real axis (the branch
/// produced by summing principal logarithms under upward recurrence, as in
/// scipy/mpmath `loggamma`). Relative error ≤ 1e-13 for |z| ≤ 100.
/// Throws PoleError within 1e-14 of a non-positive integer.
Complex log_gamma(Complex z);

/// |Γ(z)|² = exp(2 Re log Γ(z)).
double abs_gamma_sq(Complex z);

/// log |Γ(z)|² without exponentiating; useful when |Γ| under/overflows.
double log_abs_gamma_sq(Complex z);

// ---------------------------------------------------------------------------
// Polynomials

/// Generalized Laguerre polynomial L_n^α(x) by the three-term recurrence.
double laguerre(int n, double alpha, double x);

// ---------------------------------------------------------------------------
// Confluent hypergeometric functions

/// Kummer's series 1F1(a; b; z) for real z. Summed in double; when the
/// largest partial sum exceeds the result by enough that the double estimate
/// eps·max|partial|/|sum| passes 1e-13, it is resummed in quad precision
/// (working_bits = 113) and est_rel_error reflects that sum.
/// Throws PoleError if b is a non-positive integer, NoConvergence past 1e5 terms.
Evaluated<Complex> kummer_1f1(Complex a, Complex b, double z);

/// M_{κ,μ}(z) = e^{-z/2} z^{μ+1/2} 1F1(μ-κ+1/2; 1+2μ; z), z > 0.
Evaluated<Complex> whittaker_m(double kappa, Complex mu, double z);

/// Accuracy request for the Whittaker W evaluators.
struct WhittakerOptions {
    double target_rel_error = 1e-12;
    /// The double-precision connection formula is tried first for z up to
    /// this value; beyond it (or when its estimate misses the target) the
    /// backward recurrence takes over.
    double z_switch = 25.0;
};

/// W_{κ,μ}(z) for real or purely imaginary μ (where W is real), z > 0.
/// Routes, in order, until one meets the target:
///   1. the terminating sum when 1/2-κ±μ is a non-positive integer;
///   2. connection formula in double precision (z ≤ z_switch + 1.5|Im μ|);
///   3. Miller backward recurrence for U(a+n, b, z);
///   4. connection formula in extended and quad precision (z ≤ 60);
///   5. integral representation.
/// Otherwise the candidate with the smallest estimate is returned.
/// If the discarded imaginary part exceeds 1e-10 of |W|, est_rel_error
/// is raised to that ratio.
Evaluated<double> whittaker_w(double kappa, Complex mu, double z,
                              const WhittakerOptions& opts = {});

/// W_{κ,μ}(z) for arbitrary complex μ; same routing as whittaker_w.
Evaluated<Complex> whittaker_w_complex(double kappa, Complex mu, double z,
                                       const WhittakerOptions& opts = {});

/// Connection-formula route only:
///   W = Γ(-2μ)/Γ(1/2-κ-μ) M_{κ,μ} + Γ(2μ)/Γ(1/2-κ+μ) M_{κ,-μ}.
/// 2μ ∈ ℤ is handled by perturbing μ by 1e-8·i and extrapolating.
Evaluated<Complex> whittaker_w_connection(double kappa, Complex mu, double z,
                                          double target_rel_error = 1e-12);

/// Integral-representation route only:
///   W = e^{-z/2} z^κ / Γ(1/2-κ+μ) ∫₀^∞ e^{-t} t^{μ-κ-1/2} (1+t/z)^{μ+κ-1/2} dt,
/// with upward κ-recurrence when Re(1/2-κ+μ) < 1/2.
Evaluated<Complex> whittaker_w_integral(double kappa, Complex mu, double z);

/// Recurrence route only. With a = 1/2+μ-κ, b = 1+2μ and
///   f_n = (a)_n (a-b+1)_n / n! · U(a+n, b, z),
/// f is recurred downward from a zero tail and normalized by
/// Σ f_n = z^{-a}; then W = e^{-z/2} z^κ f_0 / Σ f_n. The start index doubles
/// until two runs agree to the target. Converges in O(1/z) steps, so it is
/// meant for z ≳ 1. When a or a-b+1 is a non-positive integer the
/// terminating sum is used instead.
Evaluated<Complex> whittaker_w_recurrence(double kappa, Complex mu, double z,
                                          double target_rel_error = 1e-12);

}  // namespace morsespec::specfun
