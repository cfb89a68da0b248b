#pragma once

// Monte Carlo oracle for arithmetic-average Asian options under GBM.
//
// Normals come from Philox4x32-10 keyed by the seed, with the counter
// carrying (draw, path, stream), pushed through the inverse normal CDF.
// Paths are grouped in fixed blocks; each block is reduced serially and the
// blocks are merged in index order, so a run is bit-identical for any
// thread count.

#include <array>
#include <cstdint>
#include <vector>

#include "morsespec/asian.hpp"

namespace morsespec::mc {

// ---------------------------------------------------------------------------
// Random numbers

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Two uniforms in (0, 1) with 53 random bits each, from one Philox block.
std::array<double, 2> uniform_pair(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Φ^{-1}(p) for p in (0, 1), Wichura's AS 241 (relative error ~1e-16).
double inverse_normal_cdf(double p);

// ---------------------------------------------------------------------------
// Pricing

enum class Payoff { put, call };

struct McConfig {
    std::int64_t n_paths = 100000;
    int n_steps = 512;
    std::uint64_t seed = 20240607;
    /// Pairs each normal vector with its negation; n_paths counts both members.
    bool antithetic = true;
    bool parallel = true;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    /// Independent samples behind std_error (pairs when antithetic).
    std::int64_t n_effective = 0;
};

/// Throws InvalidArgument naming the offending field.
void validate(const McConfig& cfg);

/// e^{-rT} E[payoff(A(T))] with A(T) the trapezoidal average of an exact
/// GBM path on n_steps equal steps. Unlike the spectral pricer, strike = 0
/// is accepted.
McEstimate price_asian(const asian::MarketParams& m, Payoff payoff, const McConfig& cfg);

/// Same computation on a single thread; bit-identical to price_asian.
McEstimate price_asian_serial(const asian::MarketParams& m, Payoff payoff, McConfig cfg);

/// e^{-rT} E[S(T)], which should equal S0.
McEstimate discounted_terminal(const asian::MarketParams& m, const McConfig& cfg);

// ---------------------------------------------------------------------------
// The exponential functional a(τ) = ∫₀^τ e^{2(W_s + νs)} ds

struct ATauSample {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;  // of the mean
    std::int64_t n_samples = 0;
    double p99 = 0.0;
    /// Density histogram on [hist_lo, hist_hi): count / (n_samples · width).
    double hist_lo = 0.0;
    double hist_hi = 0.0;
    std::vector<double> density;
};

/// Trapezoidal a(τ) on n_steps exact Brownian increments.
ATauSample sample_a_tau(double nu, double tau, const McConfig& cfg, int bins = 50, double hist_lo = 0.01,
                        double hist_hi = 2.0);

}  // namespace morsespec::mc
