#pragma once

// Arithmetic-average Asian options under geometric Brownian motion through
// the spectral expansion of the transition density of
//   a(τ) = ∫₀^τ e^{2(W_s + νs)} ds.

#include <vector>

#include "morsespec/quadrature.hpp"

namespace morsespec::asian {

struct MarketParams {
    double s0 = 1.0;
    double strike = 1.0;
    double r = 0.0;
    double sigma = 0.2;
    double t_expiry = 1.0;
};

/// τ = σ²T/4, ν = 2r/σ² - 1, k = τK/S0; κ = (1-ν)/2, e^{x0} = 1/(2(1-ν)).
struct ReducedParams {
    double tau = 0.0;
    double nu = 0.0;
    double k = 0.0;
    double kappa = 0.0;
    double x0 = 0.0;
};

/// Sturm-Liouville weights of the a-diffusion.
struct WeightFunctions {
    double nu = 0.0;
    double p_weight(double a) const;  // a^{ν+1} e^{1/(2a)}
    double w_weight(double a) const;  // a^{ν-1} e^{-1/(2a)}
};

struct DiscreteTerm {
    int n = 0;
    double lambda = 0.0;  // n(-ν-n)
    /// (-1)^n 2(-ν-2n)/Γ(1-ν-n), the weight of this term in K(a,0;τ)
    double coefficient = 0.0;
};

struct PriceBreakdown {
    double discrete_part = 0.0;  // prefactor included
    double continuum_part = 0.0;  // prefactor included
    double price = 0.0;
    int n_terms = 0;
    quadrature::QuadratureResult quad;
    double prefactor = 0.0;  // e^{-rT} 4S0/(σ²T)
    /// τ < 0.005: the p-integral needs a very long range; computed anyway.
    bool precision_warning = false;
    /// Largest |Im W| / |Re W| seen at the continuum quadrature nodes.
    double max_whittaker_residue = 0.0;
};

/// Throws InvalidArgument naming the offending field.
void validate(const MarketParams& m);

/// Throws UnsupportedRegime when ν ≥ 1 (r ≥ σ²).
ReducedParams reduce(const MarketParams& m);

/// Terms with -ν-2n > 0, ordered by n.
std::vector<DiscreteTerm> discrete_eigensystem(const ReducedParams& rp);
std::vector<DiscreteTerm> discrete_eigensystem(double nu);

/// Default rule for the continuum p-integrals: panels of width 0.5, 16 nodes.
quadrature::QuadratureSpec spectral_spec();

/// Transition density of a(τ) started at 0. The continuum part is an
/// integral over p = 2√(λ - ν²/4) cut by an asymptotic envelope.
double heat_kernel_at_zero(double a, double tau, double nu, const quadrature::QuadratureSpec& spec = spectral_spec());

struct KernelParts {
    double discrete = 0.0;
    double continuum = 0.0;
    quadrature::QuadratureResult quad;
};
KernelParts heat_kernel_parts(double a, double tau, double nu, const quadrature::QuadratureSpec& spec = spectral_spec());

/// E[a(τ)] = (e^{(2ν+2)τ} - 1)/(2ν+2), → τ as ν → -1.
double heat_kernel_mean(double nu, double tau);

/// Spectral put price. spec.abs_tol applies to the bracketed sum before
/// the prefactor.
PriceBreakdown put_price(const MarketParams& m, const quadrature::QuadratureSpec& spec = spectral_spec());

/// Put plus parity: e^{-rT}(E[A(T)] - K).
double call_price(const MarketParams& m, const quadrature::QuadratureSpec& spec = spectral_spec());

/// E[A(T)] = S0 (e^{rT} - 1)/(rT), with the series limit for |rT| < 1e-6.
double expected_average(const MarketParams& m);

/// Independent route: prefactor × ∫₀^k (k - a) K(a,0;τ) da by direct
/// quadrature of the heat kernel.
double put_price_by_payoff_quadrature(const MarketParams& m, const quadrature::QuadratureSpec& spec = spectral_spec());

/// Discrete contribution ∫₀^k (k-a) K_n(a) da of one term, by quadrature.
double discrete_put_term(const DiscreteTerm& term, const ReducedParams& rp);

/// The same contribution from its closed form (n ≥ 2 through a Laguerre
/// polynomial, n < 2 through W_{κ-2, κ-n-1/2}); used as a cross-check.
double discrete_put_term_closed_form(const DiscreteTerm& term, const ReducedParams& rp);

/// Continuum integrand with the power (2k)^{ν+3} in place of (2k)^{(ν+3)/2};
/// kept to show that reading disagrees with the payoff quadrature.
double continuum_put_literal(const MarketParams& m, const quadrature::QuadratureSpec& spec = spectral_spec());

}  // namespace morsespec::asian
