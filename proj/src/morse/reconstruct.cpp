#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "morse/internal.hpp"
#include "morsespec/errors.hpp"
#include "morsespec/morse.hpp"
#include "morsespec/parallel.hpp"

namespace morsespec::morse {

namespace {

using boost::math::interpolators::cardinal_cubic_b_spline;

class Sampled {
public:
    Sampled(const TabulatedFunction& f, const MorsePotential& pot, const ReconstructSpec& spec) {
        const std::size_t n = f.x.size();
        if (n < 4 || f.y.size() != n) {
            throw InvalidArgument("reconstruct: f_samples needs at least 4 points and matching x/y sizes");
        }
        const double h = (f.x.back() - f.x.front()) / static_cast<double>(n - 1);
        if (!(h > 0.0)) throw InvalidArgument("reconstruct: f_samples grid must be increasing");
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(f.x[i] - (f.x.front() + static_cast<double>(i) * h)) > 1e-9 * std::max(1.0, std::abs(f.x[i]))) {
                throw InvalidArgument("reconstruct: f_samples grid must be uniform");
            }
            if (!std::isfinite(f.y[i])) throw InvalidArgument("reconstruct: f_samples contains a non-finite value");
        }
        spline_ = cardinal_cubic_b_spline<double>(f.y.data(), n, f.x.front(), h);
        first_ = f.x.front();
        last_ = f.x.back();

        double peak = 0.0;
        for (double v : f.y) peak = std::max(peak, std::abs(v));
        if (peak == 0.0) throw InvalidArgument("reconstruct: f_samples is identically zero");
        std::size_t i0 = 0;
        while (i0 + 1 < n && std::abs(f.y[i0]) <= 1e-16 * peak) ++i0;
        std::size_t i1 = n - 1;
        while (i1 > i0 && std::abs(f.y[i1]) <= 1e-16 * peak) --i1;
        lo_ = std::max({f.x.front(), pot.x0 + spec.span_lo, f.x[i0 > 0 ? i0 - 1 : 0]});
        hi_ = std::min({f.x.back(), pot.x0 + spec.span_hi, f.x[std::min(i1 + 1, n - 1)]});
        if (!(lo_ < hi_)) throw InvalidArgument("reconstruct: support of f does not meet the inner-product span");
    }

    double operator()(double x) const { return x < first_ || x > last_ ? 0.0 : spline_(x); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    cardinal_cubic_b_spline<double> spline_;
    double first_ = 0.0, last_ = 0.0, lo_ = 0.0, hi_ = 0.0;
};

struct Projection {
    double value;
    int panels;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

template <class Psi>
Projection project(const Sampled& f, const ReconstructSpec& spec, Psi&& psi, const std::string& what) {
    quadrature::QuadratureSpec q = spec.inner;
    q.parallel = false;
    q.initial_panels = std::max(1, static_cast<int>(std::ceil((f.hi() - f.lo()) / spec.inner.panel_width)));
    q.max_panels = std::max(q.max_panels, 4 * q.initial_panels);
    const auto r = quadrature::integrate_finite([&](double x) { return psi(x) * f(x); }, f.lo(), f.hi(), q);
    if (!r.converged) {
        throw QuadratureFailure("reconstruct: inner product with " + what + " missed its tolerance (" +
                                std::to_string(r.panels_used) + " panels, value " + sci(r.value) + ", est_error " +
                                sci(r.est_error) + ")");
    }
    return {r.value, r.panels_used};
}

Reconstruction run(const TabulatedFunction& samples, const MorsePotential& pot, const ReconstructSpec& spec,
                   const std::vector<double>& x_out_in) {
    validate(pot);
    quadrature::validate(spec.continuum);
    quadrature::validate(spec.inner);
    if (!(spec.coefficient_cutoff > 0.0 && spec.coefficient_cutoff < 1.0)) {
        throw InvalidArgument("reconstruct: coefficient_cutoff must lie in (0, 1)");
    }
    const Sampled f(samples, pot, spec);
    const std::vector<double>& x_out = x_out_in.empty() ? samples.x : x_out_in;
    const std::size_t n_out = x_out.size();

    Reconstruction out;
    out.f.x = x_out;
    out.f.y.assign(n_out, 0.0);
    out.discrete_part.assign(n_out, 0.0);

    for (const auto& state : bound_states(pot)) {
        const auto c = project(f, spec, [&](double x) { return psi_n(x, state, pot); }, "psi_" + std::to_string(state.n));
        out.discrete_coefficients.push_back(c.value);
        out.inner_product_panels += c.panels;
        for (std::size_t i = 0; i < n_out; ++i) out.discrete_part[i] += c.value * psi_n(x_out[i], state, pot);
    }

    // continuum coefficients, a fixed batch of p-panels at a time
    const auto& rule = quadrature::gauss_legendre(spec.continuum.nodes_per_panel);
    const std::size_t per_panel = rule.nodes.size();
    const double w = spec.continuum.panel_width;
    constexpr int kBatch = 2;
    double peak = 0.0;
    int quiet = 0;
    bool done = false;
    for (int k0 = 0; !done; k0 += kBatch) {
        if (k0 >= spec.continuum.max_panels) {
            throw QuadratureFailure("reconstruct: continuum coefficients still significant at p=" +
                                    std::to_string(k0 * w) + " after max_panels");
        }
        std::vector<ContinuumNode> batch(per_panel * kBatch);
        std::vector<int> panels(batch.size(), 0);
        for (int b = 0; b < kBatch; ++b) {
            const double lo = (k0 + b) * w;
            for (std::size_t j = 0; j < per_panel; ++j) {
                auto& node = batch[static_cast<std::size_t>(b) * per_panel + j];
                node.p = lo + 0.5 * w * (1.0 + rule.nodes[j]);
                node.lambda = 0.25 * node.p * node.p;
                node.weight = 0.5 * w * rule.weights[j] * 0.5 * node.p;
            }
        }
        parallel::for_each_index(batch.size(), spec.parallel, [&](std::size_t i) {
            const double lambda = batch[i].lambda;
            const auto c = project(f, spec, [&](double x) { return psi_continuum(x, lambda, pot); },
                                   "psi_lambda, lambda=" + sci(lambda));
            batch[i].coefficient = c.value;
            panels[i] = c.panels;
        });
        for (int b = 0; b < kBatch && !done; ++b) {
            double panel_max = 0.0;
            for (std::size_t j = 0; j < per_panel; ++j) {
                const std::size_t i = static_cast<std::size_t>(b) * per_panel + j;
                out.continuum.push_back(batch[i]);
                out.inner_product_panels += panels[i];
                panel_max = std::max(panel_max, std::abs(batch[i].coefficient));
            }
            peak = std::max(peak, panel_max);
            quiet = panel_max < spec.coefficient_cutoff * peak ? quiet + 1 : 0;
            out.p_max = (k0 + b + 1) * w;
            done = quiet >= 2;
        }
    }

    // synthesis: node contributions reduced in node order
    const std::size_t n_nodes = out.continuum.size();
    std::vector<std::vector<double>> contrib(n_nodes);
    parallel::for_each_index(n_nodes, spec.parallel, [&](std::size_t j) {
        const auto& node = out.continuum[j];
        auto& row = contrib[j];
        row.resize(n_out);
        const double scale = node.weight * node.coefficient;
        for (std::size_t i = 0; i < n_out; ++i) row[i] = scale * psi_continuum(x_out[i], node.lambda, pot);
    });
    for (std::size_t i = 0; i < n_out; ++i) {
        double acc = out.discrete_part[i];
        for (std::size_t j = 0; j < n_nodes; ++j) acc += contrib[j][i];
        out.f.y[i] = acc;
    }
    return out;
}

}  // namespace

double project_discrete(const TabulatedFunction& f, const DiscreteState& state, const MorsePotential& pot,
                        const ReconstructSpec& spec) {
    validate(pot);
    const Sampled s(f, pot, spec);
    return project(s, spec, [&](double x) { return psi_n(x, state, pot); }, "psi_" + std::to_string(state.n)).value;
}

double project_continuum(const TabulatedFunction& f, double lambda, const MorsePotential& pot,
                         const ReconstructSpec& spec) {
    validate(pot);
    const Sampled s(f, pot, spec);
    return project(s, spec, [&](double x) { return psi_continuum(x, lambda, pot); }, "psi_lambda, lambda=" + sci(lambda)).value;
}

Reconstruction reconstruct(const TabulatedFunction& f, const MorsePotential& pot, const ReconstructSpec& spec,
                           const std::vector<double>& x_out) {
    return run(f, pot, spec, x_out);
}

Reconstruction reconstruct_serial(const TabulatedFunction& f, const MorsePotential& pot, ReconstructSpec spec,
                                  const std::vector<double>& x_out) {
    spec.parallel = false;
    return run(f, pot, spec, x_out);
}

}  // namespace morsespec::morse
