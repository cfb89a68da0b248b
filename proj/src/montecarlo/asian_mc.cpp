#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "morsespec/errors.hpp"
#include "morsespec/montecarlo.hpp"
#include "morsespec/parallel.hpp"

namespace morsespec::mc {

namespace {

constexpr std::int64_t kBlock = 2048;

enum Stream : std::uint32_t { kAsianStream = 0, kATauStream = 1, kTerminalStream = 2 };

// Normals for one path: the pair (2j, 2j+1) comes from counter {j, path, stream}.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::int64_t path, Stream stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path)),
          path_hi_(static_cast<std::uint32_t>(static_cast<std::uint64_t>(path) >> 32)),
          stream_(stream) {}

    double next() {
        if (slot_ == 2) {
            const auto u = uniform_pair({draw_++, path_lo_, path_hi_, stream_}, key_);
            cache_[0] = inverse_normal_cdf(u[0]);
            cache_[1] = inverse_normal_cdf(u[1]);
            slot_ = 0;
        }
        return cache_[slot_++];
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t path_lo_, path_hi_, stream_;
    std::uint32_t draw_ = 0;
    double cache_[2] = {0.0, 0.0};
    int slot_ = 2;
};

struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / total;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

// Samples [0, n) in fixed blocks; sample(i) must be a pure function of i.
template <class Sample>
Moments run_blocks(std::int64_t n, bool parallel, Sample&& sample) {
    const std::int64_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<Moments> partial(static_cast<std::size_t>(blocks));
    parallel::for_each_index(static_cast<std::size_t>(blocks), parallel, [&](std::size_t b) {
        Moments m;
        const std::int64_t lo = static_cast<std::int64_t>(b) * kBlock;
        const std::int64_t hi = std::min(n, lo + kBlock);
        for (std::int64_t i = lo; i < hi; ++i) m.add(sample(i));
        partial[b] = m;
    });
    Moments total;
    for (const auto& m : partial) total.merge(m);
    return total;
}

std::int64_t sample_count(const McConfig& cfg) { return cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths; }

// a zero strike is a valid payoff here (the put is then identically zero)
void validate_market(const asian::MarketParams& m) {
    asian::MarketParams probe = m;
    if (m.strike == 0.0) probe.strike = 1.0;
    asian::validate(probe);
}

McEstimate to_estimate(const Moments& m) {
    return {m.mean, std::sqrt(m.variance() / static_cast<double>(m.n)), m.n};
}

}  // namespace

void validate(const McConfig& cfg) {
    auto fail = [](const std::string& msg) { throw InvalidArgument("mc config: " + msg); };
    if (cfg.n_paths < 1) fail("n_paths must be at least 1");
    if (cfg.antithetic && cfg.n_paths < 2) fail("n_paths must be at least 2 with antithetic pairs");
    if (cfg.n_steps < 2) fail("n_steps must be at least 2");
    if (static_cast<double>(cfg.n_paths) * cfg.n_steps >= 1099511627776.0) fail("n_paths * n_steps must stay below 2^40");
}

McEstimate price_asian(const asian::MarketParams& m, Payoff payoff, const McConfig& cfg) {
    validate_market(m);
    validate(cfg);
    const int n = cfg.n_steps;
    const double dt = m.t_expiry / n;
    const double drift = (m.r - 0.5 * m.sigma * m.sigma) * dt;
    const double vol = m.sigma * std::sqrt(dt);
    const double discount = std::exp(-m.r * m.t_expiry);
    const double strike = m.strike;
    const bool put = payoff == Payoff::put;
    auto value = [&](double average) {
        return discount * std::max(put ? strike - average : average - strike, 0.0);
    };

    auto sample = [&](std::int64_t i) {
        NormalStream z(cfg.seed, i, kAsianStream);
        double up = 0.0;
        double down = 0.0;
        double sum_up = 0.5;
        double sum_down = 0.5;
        for (int j = 1; j <= n; ++j) {
            const double e = vol * z.next();
            up += drift + e;
            const double w = j == n ? 0.5 : 1.0;
            sum_up += w * std::exp(up);
            if (cfg.antithetic) {
                down += drift - e;
                sum_down += w * std::exp(down);
            }
        }
        const double a_up = m.s0 * sum_up / n;
        if (!cfg.antithetic) return value(a_up);
        return 0.5 * (value(a_up) + value(m.s0 * sum_down / n));
    };
    return to_estimate(run_blocks(sample_count(cfg), cfg.parallel, sample));
}

McEstimate price_asian_serial(const asian::MarketParams& m, Payoff payoff, McConfig cfg) {
    cfg.parallel = false;
    return price_asian(m, payoff, cfg);
}

McEstimate discounted_terminal(const asian::MarketParams& m, const McConfig& cfg) {
    validate_market(m);
    validate(cfg);
    const double t = m.t_expiry;
    const double drift = (m.r - 0.5 * m.sigma * m.sigma) * t;
    const double vol = m.sigma * std::sqrt(t);
    const double discount = std::exp(-m.r * t);
    auto sample = [&](std::int64_t i) {
        NormalStream z(cfg.seed, i, kTerminalStream);
        const double e = vol * z.next();
        const double up = discount * m.s0 * std::exp(drift + e);
        if (!cfg.antithetic) return up;
        return 0.5 * (up + discount * m.s0 * std::exp(drift - e));
    };
    return to_estimate(run_blocks(sample_count(cfg), cfg.parallel, sample));
}

ATauSample sample_a_tau(double nu, double tau, const McConfig& cfg, int bins, double hist_lo, double hist_hi) {
    validate(cfg);
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("sample_a_tau: tau must be positive");
    if (!std::isfinite(nu)) throw InvalidArgument("sample_a_tau: nu must be finite");
    if (bins < 1 || !(hist_lo < hist_hi)) throw InvalidArgument("sample_a_tau: need bins >= 1 and hist_lo < hist_hi");
    const int n = cfg.n_steps;
    const double dt = tau / n;
    const double drift = 2.0 * nu * dt;
    const double vol = 2.0 * std::sqrt(dt);
    const std::int64_t count = sample_count(cfg);
    const int members = cfg.antithetic ? 2 : 1;
    std::vector<double> values(static_cast<std::size_t>(count * members));

    // a(τ) ≈ dt (1/2 + Σ_{j<n} e^{2X_j} + e^{2X_n}/2), X_s = W_s + νs
    auto sample = [&](std::int64_t i) {
        NormalStream z(cfg.seed, i, kATauStream);
        double up = 0.0;
        double down = 0.0;
        double sum_up = 0.5;
        double sum_down = 0.5;
        for (int j = 1; j <= n; ++j) {
            const double e = vol * z.next();
            const double w = j == n ? 0.5 : 1.0;
            up += drift + e;
            sum_up += w * std::exp(up);
            if (members == 2) {
                down += drift - e;
                sum_down += w * std::exp(down);
            }
        }
        values[static_cast<std::size_t>(i * members)] = dt * sum_up;
        if (members == 2) values[static_cast<std::size_t>(i * members + 1)] = dt * sum_down;
        return members == 2 ? 0.5 * dt * (sum_up + sum_down) : dt * sum_up;
    };
    const Moments pair_moments = run_blocks(count, cfg.parallel, sample);

    ATauSample out;
    out.n_samples = static_cast<std::int64_t>(values.size());
    Moments all;
    for (double v : values) all.add(v);
    out.mean = all.mean;
    out.variance = all.variance();
    out.std_error = std::sqrt(pair_moments.variance() / static_cast<double>(pair_moments.n));
    out.hist_lo = hist_lo;
    out.hist_hi = hist_hi;
    out.density.assign(static_cast<std::size_t>(bins), 0.0);
    const double width = (hist_hi - hist_lo) / bins;
    for (double v : values) {
        if (v < hist_lo || v >= hist_hi) continue;
        const auto b = std::min(static_cast<std::size_t>((v - hist_lo) / width), out.density.size() - 1);
        out.density[b] += 1.0;
    }
    for (double& d : out.density) d /= static_cast<double>(out.n_samples) * width;
    std::vector<double> sorted = values;
    const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(sorted.size()))) - 1;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank), sorted.end());
    out.p99 = sorted[rank];
    return out;
}

}  // namespace morsespec::mc
