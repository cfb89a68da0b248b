#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "morsespec/errors.hpp"
#include "morsespec/parallel.hpp"
#include "morsespec/quadrature.hpp"

namespace morsespec::quadrature {

namespace {

struct PanelSum {
    double value = 0.0;
    double abs_value = 0.0;  // same rule applied to |g|
    double max_abs = 0.0;
};

PanelSum apply_rule(const Integrand& g, double lo, double hi, const GaussRule& rule, bool parallel) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const std::size_t n = rule.nodes.size();
    std::vector<double> f(n);
    parallel::for_each_index(n, parallel, [&](std::size_t i) { f[i] = g(mid + half * rule.nodes[i]); });
    PanelSum out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(f[i])) {
            throw QuadratureFailure("quadrature: integrand is not finite at x=" +
                                    std::to_string(mid + half * rule.nodes[i]));
        }
        out.value += rule.weights[i] * f[i];
        out.abs_value += rule.weights[i] * std::abs(f[i]);
        out.max_abs = std::max(out.max_abs, std::abs(f[i]));
    }
    out.value *= half;
    out.abs_value *= half;
    return out;
}

struct Panel {
    double lo, hi;
    double whole;  // rule on [lo, hi]
    double left, right;
    double l1;  // rule on |g| over both halves
    double error() const { return std::abs(left + right - whole); }
    bool operator<(const Panel& other) const { return error() < other.error(); }
};

}  // namespace

double envelope_tail_bound(const Envelope& env, double from, double width) {
    double total = 0.0;
    double prev = env(from);
    double peak = prev;
    for (int j = 1; j <= 200000; ++j) {
        const double cur = env(from + j * width);
        total += std::max(prev, cur) * width;
        peak = std::max(peak, cur);
        if (cur < prev && cur * width < 1e-18 * std::max(total, 1e-300)) break;
        if (cur == 0.0 && prev == 0.0) break;
        prev = cur;
    }
    return total;
}

QuadratureResult integrate_finite(const Integrand& g, double a, double b, const QuadratureSpec& spec) {
    validate(spec);
    if (!(a < b)) throw InvalidArgument("integrate_finite: need a < b");
    const GaussRule& rule = gauss_legendre(spec.nodes_per_panel);
    auto make_panel = [&](double lo, double hi, double whole) {
        const double mid = 0.5 * (lo + hi);
        const PanelSum l = apply_rule(g, lo, mid, rule, spec.parallel);
        const PanelSum r = apply_rule(g, mid, hi, rule, spec.parallel);
        return Panel{lo, hi, whole, l.value, r.value, l.abs_value + r.abs_value};
    };
    const double noise = 4.0 * (spec.noise_floor > 0.0 ? spec.noise_floor : std::numeric_limits<double>::epsilon());

    std::priority_queue<Panel> heap;
    const double step = (b - a) / spec.initial_panels;
    for (int i = 0; i < spec.initial_panels; ++i) {
        const double lo = a + i * step;
        const double hi = i + 1 == spec.initial_panels ? b : a + (i + 1) * step;
        heap.push(make_panel(lo, hi, apply_rule(g, lo, hi, rule, spec.parallel).value));
    }

    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
    {
        auto copy = heap;
        while (!copy.empty()) {
            value += copy.top().left + copy.top().right;
            error += copy.top().error();
            l1 += copy.top().l1;
            copy.pop();
        }
    }
    QuadratureResult out;
    out.truncated_at = b;
    while (error > std::max({spec.abs_tol, spec.rel_tol * std::abs(value), noise * l1})) {
        if (static_cast<int>(heap.size()) >= spec.max_panels) {
            out.converged = false;
            break;
        }
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            out.converged = false;
            break;
        }
        heap.pop();
        const Panel left = make_panel(worst.lo, mid, worst.left);
        const Panel right = make_panel(mid, worst.hi, worst.right);
        value += (left.left + left.right + right.left + right.right) - (worst.left + worst.right);
        error += left.error() + right.error() - worst.error();
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
    }

    // final totals summed left to right over the leaves
    std::vector<Panel> leaves;
    leaves.reserve(heap.size());
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    std::sort(leaves.begin(), leaves.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
    out.value = 0.0;
    out.est_error = 0.0;
    for (const auto& p : leaves) {
        out.value += p.left + p.right;
        out.est_error += p.error();
    }
    out.panels_used = static_cast<int>(leaves.size());
    return out;
}

QuadratureResult integrate_semi_infinite(const Integrand& g, double a, const QuadratureSpec& spec) {
    validate(spec);
    if (!std::isfinite(a)) throw InvalidArgument("integrate_semi_infinite: lower limit a must be finite");
    const GaussRule& rule = gauss_legendre(spec.nodes_per_panel);
    const GaussRule& coarse = gauss_legendre(std::max(2, spec.nodes_per_panel / 2));
    const double w = spec.panel_width;

    QuadratureResult out;
    double first_scale = -1.0;
    double last_scale = 0.0;
    int growing = 0;
    int quiet = 0;
    for (int k = 0; k < spec.max_panels; ++k) {
        const double lo = a + k * w;
        const double hi = a + (k + 1) * w;
        const PanelSum fine = apply_rule(g, lo, hi, rule, spec.parallel);
        const PanelSum rough = apply_rule(g, lo, hi, coarse, spec.parallel);
        out.value += fine.value;
        out.est_error += std::abs(fine.value - rough.value);
        out.panels_used = k + 1;
        out.truncated_at = hi;

        if (spec.truncation_envelope) {
            const double tail = envelope_tail_bound(spec.truncation_envelope, hi, w);
            if (tail < spec.abs_tol) {
                out.est_error += tail;
                return out;
            }
            continue;
        }

        const double scale = fine.max_abs;
        if (first_scale < 0.0) first_scale = scale;
        growing = scale > last_scale && k > 0 ? growing + 1 : 0;
        last_scale = scale;
        if (growing >= 8 && scale > 1e3 * std::max(first_scale, 1e-300)) {
            throw MissingEnvelope("integrate_semi_infinite: integrand grows without bound near x=" +
                                  std::to_string(hi) + " and no truncation_envelope was supplied");
        }
        quiet = scale * w < 0.01 * spec.abs_tol ? quiet + 1 : 0;
        if (quiet >= 3) return out;
    }
    out.converged = false;
    return out;
}

}  // namespace morsespec::quadrature
