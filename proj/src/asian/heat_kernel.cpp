#include <cmath>
#include <sstream>

#include "asian/internal.hpp"
#include "morsespec/asian.hpp"
#include "morsespec/errors.hpp"

namespace morsespec::asian {

namespace {

void check_kernel_args(double a, double tau, double nu) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("heat_kernel_at_zero: a must be positive");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("heat_kernel_at_zero: tau must be positive");
    if (!std::isfinite(nu) || !(nu < 1.0)) {
        std::ostringstream os;
        os << "heat_kernel_at_zero: nu = " << nu << " outside the supported range nu < 1";
        throw UnsupportedRegime(os.str());
    }
}

}  // namespace

KernelParts heat_kernel_parts(double a, double tau, double nu, const quadrature::QuadratureSpec& spec) {
    check_kernel_args(a, tau, nu);
    const double y = 0.5 / a;
    const double kappa = 0.5 * (1.0 - nu);
    KernelParts out;

    for (const auto& t : discrete_eigensystem(nu)) {
        const double alpha = -nu - 2.0 * t.n;
        const double lag = specfun::laguerre(t.n, alpha, y);
        if (lag == 0.0) continue;
        const double log_mag = -2.0 * t.lambda * tau + (nu + t.n - 1.0) * std::log(2.0 * a) - y;
        out.discrete += t.coefficient * lag * std::exp(log_mag);
    }

    const double scale = 1.0 / (2.0 * detail::kPi * detail::kPi);
    auto integrand = [=](double p) {
        if (!(p > 0.0)) return 0.0;
        return detail::spectral_term(scale, p, nu, tau, detail::damped_whittaker(kappa, p, y, kappa));
    };
    quadrature::QuadratureSpec qs = spec;
    if (!qs.truncation_envelope) {
        const double log_y = kappa * std::log(y) - y / 2.0;
        qs.truncation_envelope = [=](double p) {
            return scale * std::exp(detail::log_spectral_weight_bound(p, nu, tau) + log_y +
                                    detail::log_whittaker_bound(kappa, y, p) + detail::kEnvelopeMargin);
        };
    }
    out.quad = quadrature::integrate_semi_infinite(integrand, 0.0, qs);
    if (!out.quad.converged) {
        std::ostringstream os;
        os << "heat_kernel_at_zero: p-integral not converged after " << out.quad.panels_used
           << " panels (a=" << a << ", tau=" << tau << ", nu=" << nu << ")";
        throw QuadratureFailure(os.str());
    }
    out.continuum = out.quad.value;
    return out;
}

double heat_kernel_at_zero(double a, double tau, double nu, const quadrature::QuadratureSpec& spec) {
    const auto parts = heat_kernel_parts(a, tau, nu, spec);
    return parts.discrete + parts.continuum;
}

}  // namespace morsespec::asian
