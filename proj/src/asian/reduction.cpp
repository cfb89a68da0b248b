#include <cmath>
#include <sstream>
#include <string>

#include "morsespec/asian.hpp"
#include "morsespec/errors.hpp"
#include "morsespec/specfun.hpp"

namespace morsespec::asian {

namespace {

void require_positive(const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "market parameter " << name << " must be positive and finite (got " << v << ")";
        throw InvalidArgument(os.str());
    }
}

}  // namespace

double WeightFunctions::p_weight(double a) const {
    if (!(a > 0.0)) throw InvalidArgument("p_weight: a must be positive");
    return std::exp((nu + 1.0) * std::log(a) + 0.5 / a);
}

double WeightFunctions::w_weight(double a) const {
    if (!(a > 0.0)) throw InvalidArgument("w_weight: a must be positive");
    return std::exp((nu - 1.0) * std::log(a) - 0.5 / a);
}

void validate(const MarketParams& m) {
    require_positive("s0", m.s0);
    require_positive("strike", m.strike);
    require_positive("sigma", m.sigma);
    require_positive("t_expiry", m.t_expiry);
    if (!std::isfinite(m.r)) throw InvalidArgument("market parameter r must be finite");
}

ReducedParams reduce(const MarketParams& m) {
    validate(m);
    ReducedParams rp;
    rp.tau = m.sigma * m.sigma * m.t_expiry / 4.0;
    rp.nu = 2.0 * m.r / (m.sigma * m.sigma) - 1.0;
    rp.k = rp.tau * m.strike / m.s0;
    if (!(rp.nu < 1.0)) {
        std::ostringstream os;
        os << "nu = 2r/sigma^2 - 1 = " << rp.nu << " (r=" << m.r << ", sigma=" << m.sigma
           << "): the spectral formula needs nu < 1, i.e. r < sigma^2";
        throw UnsupportedRegime(os.str());
    }
    rp.kappa = 0.5 * (1.0 - rp.nu);
    rp.x0 = -std::log(2.0 * (1.0 - rp.nu));
    return rp;
}

std::vector<DiscreteTerm> discrete_eigensystem(double nu) {
    if (!std::isfinite(nu) || !(nu < 1.0)) throw InvalidArgument("discrete_eigensystem: need finite nu < 1");
    std::vector<DiscreteTerm> out;
    for (int n = 0; -nu - 2.0 * n > 1e-12; ++n) {
        DiscreteTerm t;
        t.n = n;
        t.lambda = n * (-nu - n);
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        t.coefficient = sign * 2.0 * (-nu - 2.0 * n) * std::exp(-specfun::log_gamma(1.0 - nu - n).real());
        out.push_back(t);
    }
    return out;
}

std::vector<DiscreteTerm> discrete_eigensystem(const ReducedParams& rp) { return discrete_eigensystem(rp.nu); }

quadrature::QuadratureSpec spectral_spec() {
    quadrature::QuadratureSpec s;
    s.rel_tol = 1e-10;
    s.abs_tol = 1e-12;
    s.max_panels = 4000;
    s.nodes_per_panel = 16;
    s.panel_width = 0.5;
    return s;
}

double heat_kernel_mean(double nu, double tau) {
    const double c = 2.0 * nu + 2.0;
    if (std::abs(c) < 1e-8) return tau * (1.0 + 0.5 * c * tau);
    return std::expm1(c * tau) / c;
}

double expected_average(const MarketParams& m) {
    validate(m);
    const double x = m.r * m.t_expiry;
    if (std::abs(x) < 1e-6) return m.s0 * (1.0 + x / 2.0 + x * x / 6.0);
    return m.s0 * std::expm1(x) / x;
}

}  // namespace morsespec::asian
