#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "asian/internal.hpp"
#include "morsespec/asian.hpp"
#include "morsespec/errors.hpp"

namespace morsespec::asian {

namespace {

constexpr double kShortMaturity = 0.005;

double prefactor_of(const MarketParams& m) {
    return std::exp(-m.r * m.t_expiry) * 4.0 * m.s0 / (m.sigma * m.sigma * m.t_expiry);
}

// C_n e^{-2λ_n τ}: the weight of term n in K(a,0;τ)
double time_weight(const DiscreteTerm& term, const ReducedParams& rp) {
    return term.coefficient * std::exp(-2.0 * term.lambda * rp.tau);
}

void atomic_max(std::atomic<double>& target, double v) {
    double cur = target.load(std::memory_order_relaxed);
    while (v > cur && !target.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
    }
}

struct ContinuumResult {
    quadrature::QuadratureResult quad;
    double max_residue = 0.0;
};

// (1/(8π²)) ∫ E(p) y_k^{power} e^{-y_k/2} W_{κ-2, ip/2}(y_k) dp
ContinuumResult continuum_bracket(const ReducedParams& rp, double power, const quadrature::QuadratureSpec& spec) {
    const double yk = 0.5 / rp.k;
    const double kap = rp.kappa - 2.0;
    const double scale = 1.0 / (8.0 * detail::kPi * detail::kPi);
    std::atomic<double> residue{0.0};
    auto integrand = [&](double p) {
        if (!(p > 0.0)) return 0.0;
        double res = 0.0;
        const auto w = detail::damped_whittaker(kap, p, yk, power, &res);
        atomic_max(residue, res);
        return detail::spectral_term(scale, p, rp.nu, rp.tau, w);
    };
    quadrature::QuadratureSpec qs = spec;
    if (!qs.truncation_envelope) {
        const double log_y = power * std::log(yk) - yk / 2.0;
        const double nu = rp.nu;
        const double tau = rp.tau;
        qs.truncation_envelope = [=](double p) {
            return scale * std::exp(detail::log_spectral_weight_bound(p, nu, tau) + log_y +
                                    detail::log_whittaker_bound(kap, yk, p) + detail::kEnvelopeMargin);
        };
    }
    ContinuumResult out;
    out.quad = quadrature::integrate_semi_infinite(integrand, 0.0, qs);
    out.max_residue = residue.load();
    if (!out.quad.converged) {
        std::ostringstream os;
        os << "put_price: continuum p-integral not converged after " << out.quad.panels_used
           << " panels (tau=" << rp.tau << ", nu=" << rp.nu << ", k=" << rp.k << ")";
        throw QuadratureFailure(os.str());
    }
    return out;
}

}  // namespace

double discrete_put_term(const DiscreteTerm& term, const ReducedParams& rp) {
    // ∫₀^k (k-a) K_n(a) da with y = 1/(2a):
    //   C_n/(4y_k) ∫_{y_k}^∞ (y - y_k) y^{-ν-n-2} e^{-y} L_n^α(y) dy
    const double yk = 0.5 / rp.k;
    const double alpha = -rp.nu - 2.0 * term.n;
    const double power = -rp.nu - term.n - 2.0;
    auto g = [&](double y) {
        const double lag = specfun::laguerre(term.n, alpha, y);
        if (lag == 0.0 || y == yk) return 0.0;
        return (y - yk) * lag * std::exp(power * std::log(y) - (y - yk));
    };
    quadrature::QuadratureSpec qs;
    qs.rel_tol = 1e-13;
    qs.abs_tol = 1e-300;
    qs.nodes_per_panel = 20;
    qs.initial_panels = 16;
    const double upper = yk + 120.0 + 4.0 * term.n + 2.0 * std::abs(power);
    const auto r = quadrature::integrate_finite(g, yk, upper, qs);
    if (!r.converged) throw QuadratureFailure("discrete_put_term: y-integral not converged");
    // e^{-y_k} was factored out of the integrand
    return time_weight(term, rp) / (4.0 * yk) * std::exp(-yk) * r.value;
}

double discrete_put_term_closed_form(const DiscreteTerm& term, const ReducedParams& rp) {
    const double yk = 0.5 / rp.k;
    const double alpha = -rp.nu - 2.0 * term.n;
    const int n = term.n;
    if (n >= 2) {
        // C_n (n-2)!/(4 n!) y_k^{2κ-n-2} e^{-y_k} L_{n-2}^α(y_k)
        const double lag = specfun::laguerre(n - 2, alpha, yk);
        const double log_mag = (2.0 * rp.kappa - n - 2.0) * std::log(yk) - yk;
        return time_weight(term, rp) / (4.0 * n * (n - 1.0)) * lag * std::exp(log_mag);
    }
    // C_n/((-1)^n n!) 1/(4y_k) y_k^{κ-1} e^{-y_k/2} W_{κ-2, κ-n-1/2}(y_k)
    const auto w = specfun::whittaker_w(rp.kappa - 2.0, specfun::Complex(rp.kappa - n - 0.5, 0.0), yk);
    if (w.value == 0.0) return 0.0;
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    const double log_mag = (rp.kappa - 2.0) * std::log(yk) - yk / 2.0 + std::log(std::abs(w.value));
    return sign * time_weight(term, rp) / 4.0 * std::copysign(std::exp(log_mag), w.value);
}

PriceBreakdown put_price(const MarketParams& m, const quadrature::QuadratureSpec& spec) {
    const ReducedParams rp = reduce(m);
    quadrature::validate(spec);
    PriceBreakdown out;
    out.prefactor = prefactor_of(m);
    out.precision_warning = rp.tau < kShortMaturity;

    double discrete = 0.0;
    const auto terms = discrete_eigensystem(rp);
    for (const auto& t : terms) discrete += discrete_put_term_closed_form(t, rp);
    out.n_terms = static_cast<int>(terms.size());

    const auto cont = continuum_bracket(rp, rp.kappa - 2.0, spec);
    out.quad = cont.quad;
    out.max_whittaker_residue = cont.max_residue;
    out.discrete_part = out.prefactor * discrete;
    out.continuum_part = out.prefactor * cont.quad.value;
    out.price = out.discrete_part + out.continuum_part;
    return out;
}

double call_price(const MarketParams& m, const quadrature::QuadratureSpec& spec) {
    const auto put = put_price(m, spec);
    return put.price + std::exp(-m.r * m.t_expiry) * (expected_average(m) - m.strike);
}

double continuum_put_literal(const MarketParams& m, const quadrature::QuadratureSpec& spec) {
    const ReducedParams rp = reduce(m);
    // (2k)^{ν+3} = y_k^{-(ν+3)} = y_k^{2(κ-2)}
    const auto cont = continuum_bracket(rp, 2.0 * (rp.kappa - 2.0), spec);
    return prefactor_of(m) * cont.quad.value;
}

double put_price_by_payoff_quadrature(const MarketParams& m, const quadrature::QuadratureSpec& spec) {
    const ReducedParams rp = reduce(m);
    const double yk = 0.5 / rp.k;
    // ∫₀^k (k-a) K(a,0;τ) da = ∫_{y_k}^∞ (y-y_k)/(4 y_k y³) K(1/(2y),0;τ) dy
    auto g = [&](double y) {
        if (y <= yk) return 0.0;
        return (y - yk) / (4.0 * yk * y * y * y) * heat_kernel_at_zero(0.5 / y, rp.tau, rp.nu, spec);
    };
    quadrature::QuadratureSpec outer;
    outer.rel_tol = 1e-9;
    outer.abs_tol = 1e-300;
    outer.nodes_per_panel = 16;
    outer.initial_panels = 8;
    outer.noise_floor = 1e-10;
    outer.parallel = spec.parallel;
    const double upper = yk + 80.0 + 4.0 * std::abs(rp.nu);
    const auto r = quadrature::integrate_finite(g, yk, upper, outer);
    if (!r.converged) throw QuadratureFailure("put_price_by_payoff_quadrature: outer integral not converged");
    return prefactor_of(m) * r.value;
}

}  // namespace morsespec::asian
