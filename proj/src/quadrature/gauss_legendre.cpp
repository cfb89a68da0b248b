#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "morsespec/errors.hpp"
#include "morsespec/quadrature.hpp"

namespace morsespec::quadrature {

namespace {

GaussRule build_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th largest root
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged root
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 512) throw InvalidArgument("gauss_legendre: node count n=" + std::to_string(n) + " out of range");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

void validate(const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0)) throw InvalidArgument("quadrature: rel_tol must be positive");
    if (!(spec.abs_tol > 0.0)) throw InvalidArgument("quadrature: abs_tol must be positive");
    if (spec.max_panels < 1) throw InvalidArgument("quadrature: max_panels must be at least 1");
    if (spec.nodes_per_panel < 4 || spec.nodes_per_panel > 64) {
        throw InvalidArgument("quadrature: nodes_per_panel must lie in [4, 64]");
    }
    if (!(spec.panel_width > 0.0) || !std::isfinite(spec.panel_width)) {
        throw InvalidArgument("quadrature: panel_width must be positive");
    }
    if (spec.initial_panels < 1) throw InvalidArgument("quadrature: initial_panels must be at least 1");
}

}  // namespace morsespec::quadrature
