#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "morsespec/errors.hpp"
#include "morsespec/specfun.hpp"
#include "specfun/kernels.hpp"

namespace morsespec::specfun {

namespace {

using detail::ComplexOf;
using detail::float128;

constexpr double kDegenerateTol = 1e-10;
constexpr double kPerturbation = 1e-8;
// beyond this the e^z cancellation defeats even quad precision
constexpr double kConnectionLimit = 60.0;
constexpr int kRecurrenceStart = 16;
constexpr int kRecurrenceMaxStart = 1 << 15;
constexpr double kTerminatingTol = 1e-12;

void check_inputs(const char* fn, double kappa, Complex mu, double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw InvalidArgument(std::string(fn) + ": argument z must be positive");
    if (!std::isfinite(kappa)) throw InvalidArgument(std::string(fn) + ": kappa is not finite");
    if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag())) {
        throw InvalidArgument(std::string(fn) + ": mu is not finite");
    }
}

// 2μ within kDegenerateTol of an integer; returns that integer / 2.
bool degenerate_index(Complex mu, double& half_integer) {
    const double m = std::round(2.0 * mu.real());
    if (std::abs(Complex(2.0 * mu.real() - m, 2.0 * mu.imag())) < kDegenerateTol) {
        half_integer = m / 2.0;
        return true;
    }
    return false;
}

struct TierResult {
    Complex value;
    double est_rel_error;
    int terms;
    int bits;
};

template <class Real>
Complex to_double(const ComplexOf<Real>& v) {
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

template <class Real>
detail::ConnectionResult<Real> connection_at(double kappa, Complex mu, double z) {
    const ComplexOf<Real> m(static_cast<Real>(mu.real()), static_cast<Real>(mu.imag()));
    return detail::connection_w_t<Real>(static_cast<Real>(kappa), m, static_cast<Real>(z));
}

template <class Real>
TierResult connection_tier(double kappa, Complex mu, double z, bool degenerate, double mu0) {
    using std::abs;
    const int bits = detail::Precision<Real>::bits;
    if (!degenerate) {
        const auto r = connection_at<Real>(kappa, mu, z);
        return {to_double<Real>(r.value), static_cast<double>(r.est_rel_error), r.terms, bits};
    }
    // W(μ0) ≈ 2W(μ0+iδ) - W(μ0+2iδ); the O(δ²) remainder is ~1e-16 relative.
    const auto r1 = connection_at<Real>(kappa, Complex(mu0, kPerturbation), z);
    const auto r2 = connection_at<Real>(kappa, Complex(mu0, 2.0 * kPerturbation), z);
    const ComplexOf<Real> v = Real(2) * r1.value - r2.value;
    const Real mag = abs(v);
    Real err = Real(1);
    if (mag > Real(0)) {
        err = (Real(2) * r1.est_rel_error * abs(r1.value) + r2.est_rel_error * abs(r2.value)) / mag;
    }
    const double est = std::max(static_cast<double>(err), 1e-16);
    return {to_double<Real>(v), est, r1.terms + r2.terms, bits};
}

TierResult connection_escalating(double kappa, Complex mu, double z, double target) {
    double mu0 = 0.0;
    const bool degenerate = degenerate_index(mu, mu0);
    // Cancellation between the two M terms grows roughly like e^z; the
    // perturbed evaluation adds another factor 1/δ.
    const double log_growth = z + (degenerate ? -std::log(kPerturbation) : 0.0);
    const double eps[3] = {detail::Precision<double>::epsilon(),
                           static_cast<double>(detail::Precision<long double>::epsilon()),
                           static_cast<double>(detail::Precision<float128>::epsilon())};
    int tier = 0;
    while (tier < 2 && std::log(eps[tier]) + log_growth > std::log(target)) ++tier;
    TierResult best{};
    for (; tier < 3; ++tier) {
        try {
            if (tier == 0) best = connection_tier<double>(kappa, mu, z, degenerate, mu0);
            else if (tier == 1) best = connection_tier<long double>(kappa, mu, z, degenerate, mu0);
            else best = connection_tier<float128>(kappa, mu, z, degenerate, mu0);
        } catch (const NoConvergence&) {
            if (tier == 2) throw;
            continue;
        }
        const bool finite = std::isfinite(best.value.real()) && std::isfinite(best.value.imag());
        if (finite && best.est_rel_error <= target) return best;
        if (!finite && tier == 2) throw OverflowError("whittaker_w: connection formula overflowed");
    }
    return best;
}

// e^{z/2} z^{-κ} W_{κ,μ}(z) from the integral representation; needs Re(1/2-κ+μ) > 0.
struct ScaledIntegral {
    Complex value;
    double est_abs_error;
    int evaluations;
};

Complex log1p_complex(Complex w) {
    const Complex u = 1.0 + w;
    if (u == 1.0) return w;
    return std::log(u) * w / (u - 1.0);
}

ScaledIntegral integral_scaled(double kappa, Complex mu, double z) {
    const Complex beta = 0.5 - kappa + mu;
    const Complex gamma = mu + kappa - 0.5;
    // For large |Im μ| the integrand oscillates and cancels down to ~e^{-π|Im μ|/2};
    // turning the ray towards the saddle at t ≈ i·Im μ removes most of that.
    const double theta = std::copysign(std::min(1.3, std::atan(0.5 * std::abs(mu.imag()))), mu.imag());
    const Complex ray = std::polar(1.0, theta);
    int evaluations = 0;
    auto f = [&](double r) -> Complex {
        ++evaluations;
        if (!(r > 0.0)) return {0.0, 0.0};
        const Complex t = r * ray;
        const Complex e = -t + (beta - 1.0) * std::log(t) + gamma * log1p_complex(t / z);
        return std::exp(e) * ray;
    };
    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    double l1 = 0.0;
    const Complex integral = integrator.integrate(f, 1e-12, &err, &l1);
    const Complex inv_gamma = std::exp(-detail::log_gamma_t<double>(beta));
    const double scale = std::abs(inv_gamma);
    const double eps = std::numeric_limits<double>::epsilon();
    return {inv_gamma * integral, scale * std::max(err, 4.0 * eps * l1), evaluations};
}


// n with x = -n for a non-negative integer n, within kTerminatingTol.
bool nonpositive_integer(Complex x, int& n) {
    const double r = std::round(x.real());
    if (r > 0.0 || std::abs(Complex(x.real() - r, x.imag())) > kTerminatingTol || r < -1e6) return false;
    n = static_cast<int>(-r);
    return true;
}

// e^{z/2} z^{-κ} W = 2F0(a, c; ; -1/z) when the series terminates.
struct Scaled {
    Complex value;
    double est_rel_error;
    int terms;
};

Scaled terminating_sum(Complex a, Complex c, double z, int last) {
    Complex term(1.0, 0.0);
    Complex sum = term;
    double l1 = 1.0;
    for (int n = 0; n < last; ++n) {
        term *= (a + double(n)) * (c + double(n)) / (double(n + 1) * -z);
        sum += term;
        l1 += std::abs(term);
    }
    const double mag = std::abs(sum);
    const double eps = std::numeric_limits<double>::epsilon();
    return {sum, mag > 0.0 ? 4.0 * eps * l1 / mag : 1.0, last + 1};
}

// One Miller pass from start index N; returns f_0 / Σ f_n.
bool miller_pass(Complex a, Complex b, double z, int start, Complex& ratio, double& cancellation) {
    const Complex c = a - b + 1.0;
    Complex next(0.0, 0.0);
    Complex f(1e-200, 0.0);
    Complex sum = f;
    double l1 = std::abs(f);
    for (int n = start; n >= 1; --n) {
        const Complex den = (a + double(n - 1)) * (c + double(n - 1));
        if (den == 0.0) return false;
        const Complex prev = -double(n) * ((b - 2.0 * a - 2.0 * double(n) - z) * f + double(n + 1) * next) / den;
        next = f;
        f = prev;
        sum += f;
        l1 += std::abs(f);
        if (std::abs(f) > 1e200) {
            f *= 1e-200;
            next *= 1e-200;
            sum *= 1e-200;
            l1 *= 1e-200;
        }
    }
    const double mag = std::abs(sum);
    if (!(mag > 0.0) || !std::isfinite(mag)) return false;
    ratio = f / sum;
    cancellation = l1 / mag;
    return true;
}

Scaled miller_scaled(Complex a, Complex b, double z, double target) {
    const double eps = std::numeric_limits<double>::epsilon();
    Complex prev;
    double cancellation = 1.0;
    int start = kRecurrenceStart;
    int work = start;
    if (!miller_pass(a, b, z, start, prev, cancellation)) return {{0.0, 0.0}, 1.0, work};
    double est = 1.0;
    while (start < kRecurrenceMaxStart) {
        start *= 2;
        work += start;
        Complex cur;
        if (!miller_pass(a, b, z, start, cur, cancellation)) return {prev, 1.0, work};
        const double mag = std::abs(cur);
        const double change = mag > 0.0 ? std::abs(cur - prev) / mag : 1.0;
        est = std::max(change, 8.0 * eps * cancellation);
        prev = cur;
        if (est <= target) break;
    }
    return {prev, est, work};
}

}  // namespace

Evaluated<Complex> whittaker_w_connection(double kappa, Complex mu, double z, double target_rel_error) {
    check_inputs("whittaker_w_connection", kappa, mu, z);
    const auto r = connection_escalating(kappa, mu, z, target_rel_error);
    Evaluated<Complex> out;
    out.value = r.value;
    out.diag.terms_used = std::max(1, r.terms);
    out.diag.est_rel_error = r.est_rel_error;
    out.diag.route = Route::connection;
    out.diag.working_bits = r.bits;
    return out;
}

Evaluated<Complex> whittaker_w_integral(double kappa, Complex mu, double z) {
    check_inputs("whittaker_w_integral", kappa, mu, z);
    if (mu.real() < 0.0) mu = -mu;  // W is even in μ
    const double d = kappa - mu.real() - 0.5;  // Re β = -d
    Evaluated<Complex> out;
    out.diag.route = Route::integral_rep;
    const double log_prefactor = -0.5 * z + kappa * std::log(z);

    Complex scaled;
    double abs_err = 0.0;
    int evaluations = 0;
    if (-d >= 0.5) {
        const auto r = integral_scaled(kappa, mu, z);
        scaled = r.value;
        abs_err = r.est_abs_error;
        evaluations = r.evaluations;
    } else {
        // Start inside the strip of validity and recur upward in κ on the
        // scaled functions w_κ = e^{z/2} z^{-κ} W_κ:
        //   w_{κ+1} = (1 - 2κ/z) w_κ - ((κ-1/2)² - μ²)/z² w_{κ-1}
        const int m = static_cast<int>(std::ceil(d + 1.5));
        const double k0 = kappa - m;
        const auto lo = integral_scaled(k0, mu, z);
        const auto hi = integral_scaled(k0 + 1.0, mu, z);
        Complex prev = lo.value;
        Complex cur = hi.value;
        double err_prev = lo.est_abs_error;
        double err_cur = hi.est_abs_error;
        double c = k0 + 1.0;
        for (int step = 1; step < m; ++step) {
            const double a1 = 1.0 - 2.0 * c / z;
            const Complex a2 = ((c - 0.5) * (c - 0.5) - mu * mu) / (z * z);
            const Complex next = a1 * cur - a2 * prev;
            const double err_next = std::abs(a1) * err_cur + std::abs(a2) * err_prev;
            prev = cur;
            cur = next;
            err_prev = err_cur;
            err_cur = err_next;
            c += 1.0;
        }
        scaled = cur;
        abs_err = err_cur;
        evaluations = lo.evaluations + hi.evaluations;
    }
    const double mag = std::abs(scaled);
    out.value = std::exp(log_prefactor) * scaled;
    out.diag.terms_used = std::max(1, evaluations);
    out.diag.est_rel_error = mag > 0.0 ? abs_err / mag : 1.0;
    return out;
}

Evaluated<Complex> whittaker_w_recurrence(double kappa, Complex mu, double z, double target_rel_error) {
    check_inputs("whittaker_w_recurrence", kappa, mu, z);
    const Complex a = 0.5 + mu - kappa;
    const Complex b = 1.0 + 2.0 * mu;
    const Complex c = 0.5 - mu - kappa;
    Evaluated<Complex> out;
    Scaled r{};
    int last = 0;
    const bool a_term = nonpositive_integer(a, last);
    int last_c = 0;
    const bool c_term = nonpositive_integer(c, last_c);
    if (a_term || c_term) {
        if (!a_term || (c_term && last_c < last)) last = last_c;
        r = terminating_sum(a, c, z, last);
        out.diag.route = Route::asymptotic;
    } else {
        r = miller_scaled(a, b, z, target_rel_error);
        out.diag.route = Route::recurrence;
    }
    out.value = std::exp(-0.5 * z + kappa * std::log(z)) * r.value;
    out.diag.terms_used = r.terms;
    out.diag.est_rel_error = r.est_rel_error;
    return out;
}

Evaluated<Complex> whittaker_w_complex(double kappa, Complex mu, double z, const WhittakerOptions& opts) {
    check_inputs("whittaker_w", kappa, mu, z);
    const double target = opts.target_rel_error;
    if (!(target > 0.0)) throw InvalidArgument("whittaker_w: target_rel_error must be positive");
    Evaluated<Complex> best;
    best.diag.est_rel_error = std::numeric_limits<double>::infinity();
    auto consider = [&](const Evaluated<Complex>& r) {
        const bool finite = std::isfinite(r.value.real()) && std::isfinite(r.value.imag());
        if (finite && r.diag.est_rel_error < best.diag.est_rel_error) best = r;
        return best.diag.est_rel_error <= target;
    };
    int last = 0;
    const bool terminating = nonpositive_integer(0.5 + mu - kappa, last) || nonpositive_integer(0.5 - mu - kappa, last);
    if (terminating && consider(whittaker_w_recurrence(kappa, mu, z, target))) return best;
    // the M terms cancel less when the index oscillates, so large |Im μ| widens the window
    if (z <= opts.z_switch + 1.5 * std::abs(mu.imag())) {
        double mu0 = 0.0;
        const bool degenerate = degenerate_index(mu, mu0);
        // double precision is only worth a try when the e^z cancellation leaves room
        if (!degenerate) {
            const auto t = connection_tier<double>(kappa, mu, z, false, 0.0);
            Evaluated<Complex> r;
            r.value = t.value;
            r.diag = {std::max(1, t.terms), t.est_rel_error, Route::connection, t.bits};
            if (consider(r)) return best;
        }
    }
    auto recurrence = [&] {
        if (terminating) return false;
        try {
            return consider(whittaker_w_recurrence(kappa, mu, z, target));
        } catch (const Error&) {
            return false;
        }
    };
    auto connection = [&] {
        if (z > kConnectionLimit) return false;
        try {
            return consider(whittaker_w_connection(kappa, mu, z, target));
        } catch (const NoConvergence&) {
        } catch (const OverflowError&) {
        }
        return false;
    };
    // the recurrence needs O(1/z) steps, so small arguments prefer wider arithmetic
    if (z >= 1.0 ? (recurrence() || connection()) : (connection() || recurrence())) return best;
    try {
        consider(whittaker_w_integral(kappa, mu, z));
    } catch (const Error&) {
        if (!std::isfinite(best.diag.est_rel_error)) throw;
    }
    if (!std::isfinite(best.diag.est_rel_error)) throw NoConvergence("whittaker_w: no route produced a finite value");
    return best;
}

Evaluated<double> whittaker_w(double kappa, Complex mu, double z, const WhittakerOptions& opts) {
    if (mu.real() != 0.0 && mu.imag() != 0.0) {
        throw InvalidArgument("whittaker_w: mu must be real or purely imaginary (use whittaker_w_complex)");
    }
    const auto r = whittaker_w_complex(kappa, mu, z, opts);
    Evaluated<double> out;
    out.value = r.value.real();
    out.diag = r.diag;
    const double re = std::abs(r.value.real());
    const double im = std::abs(r.value.imag());
    if (im > 0.0) {
        const double residue = re > 0.0 ? im / re : 1.0;
        if (residue > 1e-10) out.diag.est_rel_error = std::max(out.diag.est_rel_error, residue);
    }
    return out;
}

}  // namespace morsespec::specfun
