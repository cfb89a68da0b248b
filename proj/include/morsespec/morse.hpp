#pragma once

// Spectral data of H = -d²/dx² + κ²(e^{-2(x-x0)} - 2e^{-(x-x0)}): bound states,
// delta-normalized scattering states, the resolvent kernel, and the
// eigenfunction expansion of a sampled function.

#include <complex>
#include <vector>

#include "morsespec/quadrature.hpp"

namespace morsespec::morse {

using Complex = std::complex<double>;

struct MorsePotential {
    double kappa = 1.0;
    double x0 = 0.0;
};

struct DiscreteState {
    int n = 0;
    double lambda_n = 0.0;
    double norm_const = 0.0;
};

struct GreenEval {
    Complex value;
    double x = 0.0;
    double x_prime = 0.0;
    Complex lambda;
};

/// Throws InvalidArgument unless κ > 0 and both fields are finite.
void validate(const MorsePotential& pot);

double potential(double x, const MorsePotential& pot);

/// u = 2κ e^{-(x-x0)}. Throws OverflowError for x - x0 < -700.
double u_of_x(double x, const MorsePotential& pot);

/// States n with 2κ - 2n - 1 > 0, ordered by n.
std::vector<DiscreteState> bound_states(const MorsePotential& pot);

/// Normalized bound state, evaluated in log space.
double psi_n(double x, const DiscreteState& state, const MorsePotential& pot);

/// Continuum state normalized to δ(λ - λ'), λ > 0.
double psi_continuum(double x, double lambda, const MorsePotential& pot);

/// μ = i√λ on the branch Im √λ < 0, so Re μ ≥ 0.
Complex whittaker_index(Complex lambda);

/// Solution regular as x → +∞ (u → 0): u^{-1/2} M_{κ,μ}(u).
Complex psi_regular(double x, Complex lambda, const MorsePotential& pot);

/// Solution decaying as x → -∞ (u → ∞): u^{-1/2} W_{κ,μ}(u).
Complex psi_decaying(double x, Complex lambda, const MorsePotential& pot);

/// Γ(1+2μ)/Γ(1/2-κ+μ), the Wronskian of psi_regular and psi_decaying.
Complex wronskian_exact(Complex lambda, const MorsePotential& pot);

/// Resolvent kernel of H - λ. Throws SpectrumError within 1e-10 of the spectrum.
GreenEval green_function(double x, double x_prime, Complex lambda, const MorsePotential& pot);

/// |numerical Wronskian - exact| / |exact|, central differences with h = 1e-5.
double wronskian_residual(Complex lambda, double x, const MorsePotential& pot);

// ---------------------------------------------------------------------------
// Expansion

/// Samples on a uniform grid.
struct TabulatedFunction {
    std::vector<double> x;
    std::vector<double> y;
};

struct ReconstructSpec {
    /// Continuum rule in p, λ = p²/4: panels of width panel_width with
    /// nodes_per_panel Gauss nodes each. Tolerances drive the inner products.
    quadrature::QuadratureSpec continuum{1e-10, 1e-13, 400, 8, {}, 1.0, 1, false};
    /// Inner products in x: adaptive, starting from panels of inner.panel_width.
    quadrature::QuadratureSpec inner{1e-10, 1e-10, 4000, 10, {}, 0.5, 1, false, 1e-11};
    /// Stop adding p-panels once every coefficient on two consecutive panels
    /// is below this fraction of the largest one seen.
    double coefficient_cutoff = 1e-10;
    /// Inner products run over [x0 + span_lo, x0 + span_hi] ∩ grid, further
    /// trimmed to where |f| exceeds 1e-16 of its peak.
    double span_lo = -15.0;
    double span_hi = 80.0;
    /// Spread the λ-nodes over OpenMP threads.
    bool parallel = true;
};

struct ContinuumNode {
    double p = 0.0;
    double lambda = 0.0;
    double weight = 0.0;  // quadrature weight in λ (includes dλ/dp = p/2)
    double coefficient = 0.0;  // <ψ_λ, f>
};

struct Reconstruction {
    TabulatedFunction f;  // on the requested output grid
    std::vector<double> discrete_coefficients;  // <ψ_n, f>
    std::vector<double> discrete_part;  // Σ_n c_n ψ_n on the output grid
    std::vector<ContinuumNode> continuum;
    double p_max = 0.0;
    int inner_product_panels = 0;  // total over all projections
    bool converged = true;
};

/// <ψ_n, f> by adaptive quadrature.
double project_discrete(const TabulatedFunction& f, const DiscreteState& state, const MorsePotential& pot,
                        const ReconstructSpec& spec = {});

/// <ψ_λ, f> by adaptive quadrature.
double project_continuum(const TabulatedFunction& f, double lambda, const MorsePotential& pot,
                         const ReconstructSpec& spec = {});

/// Σ_n ψ_n <ψ_n, f> + ∫₀^∞ ψ_λ <ψ_λ, f> dλ on x_out (defaults to f's grid).
/// Throws QuadratureFailure if an inner product misses its tolerance.
Reconstruction reconstruct(const TabulatedFunction& f, const MorsePotential& pot, const ReconstructSpec& spec = {},
                           const std::vector<double>& x_out = {});

/// Same computation on one thread; kept as the reference for the parallel path.
Reconstruction reconstruct_serial(const TabulatedFunction& f, const MorsePotential& pot,
                                  ReconstructSpec spec = {}, const std::vector<double>& x_out = {});

}  // namespace morsespec::morse
