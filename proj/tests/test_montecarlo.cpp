#include <cmath>
#include <cstring>
#include <string>

#include <gtest/gtest.h>

#include "morsespec/asian.hpp"
#include "morsespec/errors.hpp"
#include "morsespec/montecarlo.hpp"
#include "morsespec/quadrature.hpp"

using namespace morsespec;
using namespace morsespec::mc;

namespace {

const asian::MarketParams kStandard{2.0, 2.0, 0.05, 0.5, 1.0};

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

McConfig config(std::int64_t paths, int steps = 512) {
    McConfig c;
    c.n_paths = paths;
    c.n_steps = steps;
    return c;
}

}  // namespace

TEST(Philox, KnownAnswers) {
    using W = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, UniformsInOpenInterval) {
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto u = uniform_pair({static_cast<std::uint32_t>(i), 0, 0, 0}, {1, 2});
        for (double v : u) {
            ASSERT_GT(v, 0.0);
            ASSERT_LT(v, 1.0);
            sum += v;
        }
    }
    EXPECT_NEAR(sum / (2.0 * n), 0.5, 4.0 * std::sqrt(1.0 / 12.0 / (2.0 * n)));
}

TEST(InverseNormal, ReferenceValues) {
    EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
    EXPECT_NEAR(inverse_normal_cdf(0.975), 1.959963984540054, 1e-14);
    EXPECT_NEAR(inverse_normal_cdf(0.025), -1.959963984540054, 1e-14);
    EXPECT_NEAR(inverse_normal_cdf(1e-10), -6.361340902404056, 1e-13);
    EXPECT_NEAR(inverse_normal_cdf(0.3), -0.5244005127080407, 1e-15);
}

TEST(InverseNormal, RoundTrip) {
    for (double x = -8.0; x <= 5.0; x += 0.01) {
        const double p = 0.5 * std::erfc(-x / std::sqrt(2.0));
        EXPECT_NEAR(inverse_normal_cdf(p), x, 1e-11 * std::max(1.0, std::abs(x))) << x;
    }
}

TEST(McConfig, Validation) {
    auto expect_field = [](McConfig c, const std::string& field) {
        try {
            validate(c);
            FAIL() << field;
        } catch (const InvalidArgument& e) {
            EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
        }
    };
    McConfig c;
    c.n_paths = 0;
    expect_field(c, "n_paths");
    c = {};
    c.n_steps = 1;
    expect_field(c, "n_steps");
    c = {};
    c.n_paths = 1;
    expect_field(c, "n_paths");
    c = {};
    c.n_paths = std::int64_t{1} << 32;
    c.n_steps = 1 << 10;
    expect_field(c, "n_steps");
}

TEST(PriceAsian, ZeroStrikePutIsZero) {
    asian::MarketParams m = kStandard;
    m.strike = 0.0;
    const auto e = price_asian(m, Payoff::put, config(4096, 64));
    EXPECT_EQ(e.mean, 0.0);
    EXPECT_EQ(e.std_error, 0.0);
}

TEST(PriceAsian, NearDeterministic) {
    const asian::MarketParams m{2.0, 2.2, 0.05, 1e-6, 1.0};
    const double want = std::exp(-0.05) * std::max(2.2 - 2.0 * std::expm1(0.05) / 0.05, 0.0);
    EXPECT_NEAR(price_asian(m, Payoff::put, config(2000)).mean, want, 1e-6);
}

TEST(PriceAsian, SeedDeterminism) {
    McConfig c = config(20000, 64);
    const auto a = price_asian(kStandard, Payoff::put, c);
    const auto b = price_asian(kStandard, Payoff::put, c);
    EXPECT_TRUE(same_bits(a.mean, b.mean));
    EXPECT_TRUE(same_bits(a.std_error, b.std_error));
    EXPECT_EQ(a.n_effective, b.n_effective);
    c.seed += 1;
    EXPECT_FALSE(same_bits(price_asian(kStandard, Payoff::put, c).mean, a.mean));
}

TEST(PriceAsian, AntitheticDoesNotInflateError) {
    McConfig c = config(100000);
    const auto anti = price_asian(kStandard, Payoff::put, c);
    c.antithetic = false;
    const auto plain = price_asian(kStandard, Payoff::put, c);
    EXPECT_LE(anti.std_error, plain.std_error);
    EXPECT_EQ(anti.n_effective, 50000);
    EXPECT_EQ(plain.n_effective, 100000);
    EXPECT_LT(std::abs(anti.mean - plain.mean), 3.0 * std::hypot(anti.std_error, plain.std_error));
}

TEST(PriceAsian, DiscretizationStable) {
    const auto a = price_asian(kStandard, Payoff::put, config(100000, 512));
    const auto b = price_asian(kStandard, Payoff::put, config(100000, 1024));
    EXPECT_LT(std::abs(a.mean - b.mean), 2.0 * std::hypot(a.std_error, b.std_error));
}

TEST(PriceAsian, AgreesWithSpectralPrice) {
    const auto put = price_asian(kStandard, Payoff::put, config(200000));
    EXPECT_LT(std::abs(put.mean - asian::put_price(kStandard).price), 3.0 * put.std_error);
    const auto call = price_asian(kStandard, Payoff::call, config(200000));
    EXPECT_LT(std::abs(call.mean - asian::call_price(kStandard)), 3.0 * call.std_error);
}

TEST(PriceAsian, Martingale) {
    for (const asian::MarketParams& m : {kStandard, asian::MarketParams{100.0, 90.0, 0.03, 0.4, 3.0}}) {
        const auto e = discounted_terminal(m, config(200000));
        EXPECT_LT(std::abs(e.mean - m.s0), 3.0 * e.std_error);
    }
}

TEST(SampleATau, Mean) {
    const auto s = sample_a_tau(-0.6, 0.25, config(200000));
    EXPECT_LT(std::abs(s.mean - asian::heat_kernel_mean(-0.6, 0.25)), 3.0 * s.std_error);
    EXPECT_EQ(s.n_samples, 200000);
    EXPECT_GT(s.variance, 0.0);
}

TEST(SampleATau, ShortTimeConcentration) {
    const auto s = sample_a_tau(-0.6, 0.01, config(100000));
    EXPECT_LT(s.p99, 5.0 * 0.01);
    EXPECT_GT(s.p99, 0.01);
}

TEST(SampleATau, HistogramMatchesHeatKernel) {
    const double nu = -0.6, tau = 0.25;
    const int bins = 50;
    const auto s = sample_a_tau(nu, tau, config(1000000, 128), bins, 0.01, 2.0);
    ASSERT_EQ(static_cast<int>(s.density.size()), bins);
    const double width = (s.hist_hi - s.hist_lo) / bins;
    const auto& rule = quadrature::gauss_legendre(8);
    double chi2 = 0.0;
    int used = 0;
    for (int b = 0; b < bins; ++b) {
        const double lo = s.hist_lo + b * width;
        double mass = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            mass += 0.5 * width * rule.weights[i] * asian::heat_kernel_at_zero(lo + 0.5 * width * (1.0 + rule.nodes[i]), tau, nu);
        const double expected = mass * static_cast<double>(s.n_samples);
        if (expected < 20.0) continue;
        const double observed = s.density[b] * static_cast<double>(s.n_samples) * width;
        chi2 += (observed - expected) * (observed - expected) / expected;
        ++used;
    }
    ASSERT_GT(used, 20);
    // antithetic members are correlated, so allow a generous margin over `used`
    EXPECT_LT(chi2, 3.0 * used);
}
