#include "morsespec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "morsespec/asian.hpp"
#include "morsespec/errors.hpp"
#include "morsespec/montecarlo.hpp"
#include "morsespec/morse.hpp"
#include "morsespec/parallel.hpp"

namespace morsespec::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kClampSlack = 1e-10;

enum class Format { json, csv };

struct Options {
    asian::MarketParams market{2.0, 2.0, 0.05, 0.5, 1.0};
    double kappa = 2.3;
    double x0 = 0.0;
    double tol = 1e-12;
    int max_panels = 4000;
    std::int64_t paths = 200000;
    int steps = 512;
    std::uint64_t seed = 20240607;
    std::string format = "json";
    std::string payoff = "put";
    bool no_antithetic = false;
    // kernel
    double nu = -0.6;
    double tau = 0.25;
    std::vector<double> a_values{0.1, 0.25, 0.5, 1.0};
    // reconstruct
    double center = std::numeric_limits<double>::quiet_NaN();
    double width = 1.0;
    double cutoff = 1e-5;
    // validate
    std::string case_name = "standard";
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void add_market_flags(CLI::App* app, Options& o) {
    app->add_option("--s0", o.market.s0, "spot price")->capture_default_str();
    app->add_option("--strike", o.market.strike, "strike")->capture_default_str();
    app->add_option("--rate", o.market.r, "risk-free rate")->capture_default_str();
    app->add_option("--sigma", o.market.sigma, "volatility")->capture_default_str();
    app->add_option("--expiry", o.market.t_expiry, "maturity in years")->capture_default_str();
}

void add_mc_flags(CLI::App* app, Options& o) {
    app->add_option("--paths", o.paths, "Monte Carlo paths")->capture_default_str()->check(CLI::Range(2LL, 1LL << 40));
    app->add_option("--steps", o.steps, "time steps per path")->capture_default_str()->check(CLI::Range(2, 1 << 24));
    app->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
}

void add_format_flag(CLI::App* app, Options& o) {
    app->add_option("--format", o.format, "output format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
}

mc::McConfig mc_config(const Options& o) {
    mc::McConfig c;
    c.n_paths = o.paths;
    c.n_steps = o.steps;
    c.seed = o.seed;
    c.antithetic = !o.no_antithetic;
    return c;
}

quadrature::QuadratureSpec price_spec(const Options& o) {
    auto s = asian::spectral_spec();
    s.abs_tol = o.tol;
    s.max_panels = o.max_panels;
    return s;
}

void add_quad_flags(CLI::App* app, Options& o) {
    app->add_option("--tol", o.tol, "absolute tolerance of the p-integral")->capture_default_str();
    app->add_option("--max-panels", o.max_panels, "panel budget of the p-integral")
        ->capture_default_str()
        ->check(CLI::Range(1, 1 << 24));
}

// CSV: one header row, then rows of the same width.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

int cmd_price(const Options& o, std::ostream& out, std::ostream& err) {
    const auto rp = asian::reduce(o.market);
    const auto pb = asian::put_price(o.market, price_spec(o));
    if (pb.precision_warning) {
        err << "warning: tau = " << rp.tau << " < 0.005, the p-integral is long and may lose accuracy\n";
    }
    double price = pb.price;
    bool clamped = false;
    if (price < 0.0 && price >= -kClampSlack) {
        price = 0.0;
        clamped = true;
    }
    Json j;
    j["price"] = price;
    j["discrete_part"] = pb.discrete_part;
    j["continuum_part"] = pb.continuum_part;
    j["n_terms"] = pb.n_terms;
    j["quad_error"] = pb.quad.est_error * pb.prefactor;
    j["nu"] = rp.nu;
    j["tau"] = rp.tau;
    j["k"] = rp.k;
    if (clamped) j["clamped"] = true;
    if (o.payoff == "call") {
        j["call_price"] = pb.price + std::exp(-o.market.r * o.market.t_expiry) *
                                         (asian::expected_average(o.market) - o.market.strike);
    }
    if (o.format == "csv") {
        std::vector<std::string> header, row;
        for (auto it = j.begin(); it != j.end(); ++it) {
            header.push_back(it.key());
            row.push_back(it->is_boolean() ? (it->get<bool>() ? "true" : "false")
                          : it->is_number_integer() ? std::to_string(it->get<long long>())
                                                    : num(it->get<double>()));
        }
        write_csv(out, header, {row});
    } else {
        out << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
    const morse::MorsePotential pot{o.kappa, o.x0};
    const auto states = morse::bound_states(pot);
    if (o.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& s : states) rows.push_back({std::to_string(s.n), num(s.lambda_n), num(s.norm_const)});
        write_csv(out, {"n", "lambda", "norm_const"}, rows);
        return 0;
    }
    Json list = Json::array();
    for (const auto& s : states) {
        Json e;
        e["n"] = s.n;
        e["lambda"] = s.lambda_n;
        e["norm_const"] = s.norm_const;
        list.push_back(e);
    }
    out << list.dump(2) << '\n';
    return 0;
}

int cmd_kernel(const Options& o, std::ostream& out, std::ostream& err) {
    if (!(o.tau > 0.0)) throw InvalidArgument("--tau must be positive");
    if (o.tau < 0.005) {
        err << "warning: tau = " << o.tau << " < 0.005; the spectral terms underflow near a ~ tau and the density may be lost\n";
    }
    const auto spec = price_spec(o);
    std::vector<std::vector<std::string>> rows;
    Json points = Json::array();
    for (double a : o.a_values) {
        if (!(a > 0.0)) throw InvalidArgument("--a values must be positive");
        const auto parts = asian::heat_kernel_parts(a, o.tau, o.nu, spec);
        const double density = parts.discrete + parts.continuum;
        rows.push_back({num(a), num(density), num(parts.discrete), num(parts.continuum), num(parts.quad.est_error)});
        Json p;
        p["a"] = a;
        p["density"] = density;
        p["discrete"] = parts.discrete;
        p["continuum"] = parts.continuum;
        p["quad_error"] = parts.quad.est_error;
        points.push_back(p);
    }
    if (o.format == "csv") {
        write_csv(out, {"a", "density", "discrete", "continuum", "quad_error"}, rows);
        return 0;
    }
    Json j;
    j["nu"] = o.nu;
    j["tau"] = o.tau;
    j["points"] = points;
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_reconstruct(const Options& o, std::ostream& out) {
    const morse::MorsePotential pot{o.kappa, o.x0};
    morse::validate(pot);
    if (!(o.width > 0.0)) throw InvalidArgument("--width must be positive");
    if (!(o.cutoff > 0.0 && o.cutoff < 1.0)) throw InvalidArgument("--cutoff must lie in (0, 1)");
    const double c = std::isnan(o.center) ? o.x0 : o.center;
    auto gauss = [&](double x) { return std::exp(-(x - c) * (x - c) / (o.width * o.width)); };
    morse::TabulatedFunction f;
    const double lo = std::min(o.x0 - 15.0, c - 10.0 * o.width);
    const double hi = std::max(o.x0 + 25.0, c + 10.0 * o.width);
    const int n = static_cast<int>(std::ceil((hi - lo) / 0.01));
    for (int i = 0; i <= n; ++i) {
        f.x.push_back(lo + 0.01 * i);
        f.y.push_back(gauss(f.x.back()));
    }
    std::vector<double> xs;
    for (int i = 0; i <= 90; ++i) xs.push_back(o.x0 - 3.0 + 0.1 * i);
    morse::ReconstructSpec spec;
    spec.coefficient_cutoff = o.cutoff;
    const auto rec = morse::reconstruct(f, pot, spec, xs);
    double num2 = 0.0, den2 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = gauss(xs[i]);
        num2 += (rec.f.y[i] - e) * (rec.f.y[i] - e);
        den2 += e * e;
    }
    const double l2 = std::sqrt(num2 / den2);
    if (o.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < xs.size(); ++i) rows.push_back({num(xs[i]), num(gauss(xs[i])), num(rec.f.y[i])});
        write_csv(out, {"x", "f", "reconstructed"}, rows);
        return 0;
    }
    Json j;
    j["kappa"] = o.kappa;
    j["x0"] = o.x0;
    j["center"] = c;
    j["width"] = o.width;
    j["l2_error"] = l2;
    j["p_max"] = rec.p_max;
    j["continuum_nodes"] = rec.continuum.size();
    j["discrete_coefficients"] = rec.discrete_coefficients;
    j["x"] = xs;
    Json fx = Json::array();
    for (double x : xs) fx.push_back(gauss(x));
    j["f"] = fx;
    j["reconstructed"] = rec.f.y;
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_mc(const Options& o, std::ostream& out) {
    const auto cfg = mc_config(o);
    const auto payoff = o.payoff == "call" ? mc::Payoff::call : mc::Payoff::put;
    const auto e = mc::price_asian(o.market, payoff, cfg);
    if (o.format == "csv") {
        write_csv(out, {"payoff", "mean", "std_error", "n_effective", "paths", "steps", "seed"},
                  {{o.payoff, num(e.mean), num(e.std_error), std::to_string(e.n_effective), std::to_string(o.paths),
                    std::to_string(o.steps), std::to_string(o.seed)}});
        return 0;
    }
    Json j;
    j["payoff"] = o.payoff;
    j["mean"] = e.mean;
    j["std_error"] = e.std_error;
    j["n_effective"] = e.n_effective;
    j["paths"] = o.paths;
    j["steps"] = o.steps;
    j["seed"] = o.seed;
    j["antithetic"] = cfg.antithetic;
    out << j.dump(2) << '\n';
    return 0;
}

struct Check {
    std::string name;
    double value;
    double reference;
    double tolerance;  // on |value - reference|
    bool pass;
};

int cmd_validate(Options o, std::ostream& out) {
    if (o.case_name == "standard") {
        o.market = {2.0, 2.0, 0.05, 0.5, 1.0};
    } else if (o.case_name == "moderate") {
        o.market = {2.0, 2.0, 0.02, 0.3, 1.0};
    } else {
        throw InvalidArgument("--case must be 'standard' or 'moderate'");
    }
    const auto& m = o.market;
    const auto cfg = mc_config(o);
    const auto spec = price_spec(o);
    const auto pb = asian::put_price(m, spec);
    const double parity = std::exp(-m.r * m.t_expiry) * (asian::expected_average(m) - m.strike);
    const double call = pb.price + parity;
    const double by_payoff = asian::put_price_by_payoff_quadrature(m, spec);
    const auto mc_put = mc::price_asian(m, mc::Payoff::put, cfg);
    const auto mc_call = mc::price_asian(m, mc::Payoff::call, cfg);
    const auto terminal = mc::discounted_terminal(m, cfg);

    std::vector<Check> checks;
    auto add = [&](std::string name, double value, double reference, double tol) {
        checks.push_back({std::move(name), value, reference, tol, std::abs(value - reference) <= tol});
    };
    add("put_spectral_vs_mc", pb.price, mc_put.mean, 3.0 * mc_put.std_error);
    add("put_spectral_vs_payoff_quadrature", pb.price, by_payoff, 1e-6 * std::abs(by_payoff));
    add("call_parity_vs_mc", call, mc_call.mean, 3.0 * mc_call.std_error);
    add("mc_discounted_terminal_vs_s0", terminal.mean, m.s0, 3.0 * terminal.std_error);
    add("whittaker_imaginary_residue", pb.max_whittaker_residue, 0.0, 1e-10);
    const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });

    if (o.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& c : checks) {
            rows.push_back({c.name, num(c.value), num(c.reference), num(c.tolerance), c.pass ? "pass" : "fail"});
        }
        write_csv(out, {"check", "value", "reference", "tolerance", "result"}, rows);
    } else {
        Json j;
        j["case"] = o.case_name;
        j["s0"] = m.s0;
        j["strike"] = m.strike;
        j["rate"] = m.r;
        j["sigma"] = m.sigma;
        j["expiry"] = m.t_expiry;
        j["paths"] = o.paths;
        j["steps"] = o.steps;
        j["seed"] = o.seed;
        Json list = Json::array();
        for (const auto& c : checks) {
            Json e;
            e["name"] = c.name;
            e["value"] = c.value;
            e["reference"] = c.reference;
            e["tolerance"] = c.tolerance;
            e["pass"] = c.pass;
            list.push_back(e);
        }
        j["checks"] = list;
        j["pass"] = all;
        out << j.dump(2) << '\n';
    }
    return all ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    parallel::apply_thread_env();
    Options o;
    CLI::App app{"Morse-potential spectral toolkit and Asian option pricer", "morsespec"};
    app.require_subcommand(1);

    auto* price = app.add_subcommand("price", "spectral Asian put price");
    add_market_flags(price, o);
    add_quad_flags(price, o);
    price->add_option("--payoff", o.payoff, "also report the call by parity")->check(CLI::IsMember({"put", "call"}));
    add_format_flag(price, o);

    auto* spectrum = app.add_subcommand("spectrum", "bound states of the Morse potential");
    spectrum->add_option("--kappa", o.kappa, "depth parameter")->capture_default_str();
    spectrum->add_option("--x0", o.x0, "well position")->capture_default_str();
    add_format_flag(spectrum, o);

    auto* kernel = app.add_subcommand("kernel", "transition density K(a,0;tau) of a(tau)");
    kernel->add_option("--nu", o.nu, "drift nu < 1")->capture_default_str();
    kernel->add_option("--tau", o.tau, "time tau > 0")->capture_default_str();
    kernel->add_option("--a", o.a_values, "points a > 0")->capture_default_str();
    add_quad_flags(kernel, o);
    add_format_flag(kernel, o);

    auto* recon = app.add_subcommand("reconstruct", "expand a Gaussian in the Morse eigenbasis and resum it");
    recon->add_option("--kappa", o.kappa, "depth parameter")->capture_default_str();
    recon->add_option("--x0", o.x0, "well position")->capture_default_str();
    recon->add_option("--center", o.center, "Gaussian center (default x0)");
    recon->add_option("--width", o.width, "Gaussian width")->capture_default_str();
    recon->add_option("--cutoff", o.cutoff, "relative coefficient cutoff for the p-range")->capture_default_str();
    add_format_flag(recon, o);

    auto* mcc = app.add_subcommand("mc", "Monte Carlo Asian option price");
    add_market_flags(mcc, o);
    add_mc_flags(mcc, o);
    mcc->add_option("--payoff", o.payoff, "put or call")->capture_default_str()->check(CLI::IsMember({"put", "call"}));
    mcc->add_flag("--no-antithetic", o.no_antithetic, "independent paths instead of antithetic pairs");
    add_format_flag(mcc, o);

    auto* val = app.add_subcommand("validate", "spectral price against Monte Carlo and payoff quadrature");
    val->add_option("--case", o.case_name, "standard or moderate")->capture_default_str();
    add_mc_flags(val, o);
    add_quad_flags(val, o);
    add_format_flag(val, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return 2;
    }

    try {
        if (*price) return cmd_price(o, out, err);
        if (*spectrum) return cmd_spectrum(o, out);
        if (*kernel) return cmd_kernel(o, out, err);
        if (*recon) return cmd_reconstruct(o, out);
        if (*mcc) return cmd_mc(o, out);
        if (*val) return cmd_validate(o, out);
    } catch (const UnsupportedRegime& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const QuadratureFailure& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    } catch (const NoConvergence& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace morsespec::cli
