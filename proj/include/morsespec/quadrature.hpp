#pragma once

// Gauss-Legendre quadrature: globally adaptive on finite intervals and
// panel-chained on [a, ∞) with an envelope-driven tail cut.

#include <functional>
#include <limits>
#include <vector>

namespace morsespec::quadrature {

using Integrand = std::function<double(double)>;

/// Upper bound for |g(p)|, used to bound the discarded tail.
using Envelope = std::function<double(double)>;

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_panels = 4000;
    int nodes_per_panel = 32;
    Envelope truncation_envelope;  // optional

    /// Panel width for integrate_semi_infinite.
    double panel_width = 0.5;
    /// Equal panels the finite interval is split into before adapting.
    int initial_panels = 1;
    /// Evaluate the nodes of a panel concurrently (sums stay in node order).
    bool parallel = false;
    /// Relative accuracy of the integrand values themselves. integrate_finite
    /// accepts once est_error ≤ 4·noise_floor·∫|g|, since bisecting further
    /// only samples the noise. 0 means double rounding.
    double noise_floor = 0.0;
};

struct QuadratureResult {
    double value = 0.0;
    double est_error = 0.0;
    int panels_used = 0;
    /// Upper end of the last panel for semi-infinite integrals; b for finite ones.
    double truncated_at = std::numeric_limits<double>::quiet_NaN();
    /// False when max_panels ran out before the tolerance was met.
    bool converged = true;
};

struct GaussRule {
    std::vector<double> nodes;  // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point rule by Newton iteration on P_n; cached, safe for concurrent use.
const GaussRule& gauss_legendre(int n);

/// Throws InvalidArgument naming the offending field.
void validate(const QuadratureSpec& spec);

/// Adaptive bisection; est_error is the summed |left + right - whole| over leaves.
/// Accepts when est_error ≤ max(abs_tol, rel_tol·|value|, 4·noise_floor·∫|g|).
QuadratureResult integrate_finite(const Integrand& g, double a, double b, const QuadratureSpec& spec = {});

/// Panels [a + kw, a + (k+1)w] until the envelope bounds the remaining tail
/// below abs_tol. Without an envelope, stops once panels are negligible and
/// throws MissingEnvelope if the integrand keeps growing.
QuadratureResult integrate_semi_infinite(const Integrand& g, double a, const QuadratureSpec& spec = {});

/// Riemann-type upper bound of ∫_from^∞ env, stepping by `width`.
double envelope_tail_bound(const Envelope& env, double from, double width);

}  // namespace morsespec::quadrature
