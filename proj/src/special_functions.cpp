#include "blab/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace blab {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

void require_positive(double s, const char* what) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::domain_error(std::string(what) + ": argument must be positive and finite");
}

// Series for P(s,x); good for x < s + 1.
double gamma_series(double s, double x) {
    double ap = s;
    double term = 1.0 / s;
    double sum = term;
    for (int n = 0; n < 10'000'000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps)
            return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    throw std::runtime_error("reg_inc_gamma: series did not converge");
}

// Continued fraction for Q(s,x) (modified Lentz); good for x >= s + 1.
double gamma_cf(double s, double x) {
    double b = x + 1.0 - s;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10'000'000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
    }
    throw std::runtime_error("reg_inc_gamma: continued fraction did not converge");
}

void check_inc_gamma_args(double s, double x) {
    require_positive(s, "reg_inc_gamma");
    if (!(x >= 0.0)) throw std::domain_error("reg_inc_gamma: x must be nonnegative");
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < 10'000'000; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

}  // namespace

double digamma(double s) {
    require_positive(s, "digamma");
    double acc = 0.0;
    while (s < 10.0) {
        acc -= 1.0 / s;
        s += 1.0;
    }
    const double r = 1.0 / (s * s);
    // Bernoulli tail: sum_k B_{2k} / (2k s^{2k}).
    const double tail =
        r * (1.0 / 12 -
             r * (1.0 / 120 -
                  r * (1.0 / 252 -
                       r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r * (1.0 / 12)))))));
    return acc + std::log(s) - 0.5 / s - tail;
}

double trigamma(double s) {
    require_positive(s, "trigamma");
    double acc = 0.0;
    while (s < 10.0) {
        acc += 1.0 / (s * s);
        s += 1.0;
    }
    const double r = 1.0 / (s * s);
    const double tail =
        (1.0 / s) * r *
        (1.0 / 6 -
         r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * (7.0 / 6)))))));
    return acc + 1.0 / s + 0.5 * r + tail;
}

double reg_inc_gamma(double s, double x) {
    check_inc_gamma_args(s, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < s + 1.0) return gamma_series(s, x);
    return 1.0 - gamma_cf(s, x);
}

double reg_inc_gamma_upper(double s, double x) {
    check_inc_gamma_args(s, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < s + 1.0) return 1.0 - gamma_series(s, x);
    return gamma_cf(s, x);
}

namespace {

// Solves P(s, e^t) = p, equivalently Q(s, e^t) = q, with p + q = 1; the
// smaller of the two drives the iteration.
double solve_log_inv_gamma(double s, double p, double q) {
    const bool upper = q < p;
    const double log_p = std::log(p);
    // log P(s, e^t); for tiny x the leading series term avoids underflow.
    auto log_lower = [&](double t) {
        if (t > -30.0) return std::log(reg_inc_gamma(s, std::exp(t)));
        const double x = std::exp(t);
        return s * t - x - std::lgamma(s + 1.0) + std::log1p(x / (s + 1.0));
    };
    auto g = [&](double t) {
        return upper ? q - reg_inc_gamma_upper(s, std::exp(t)) : log_lower(t) - log_p;
    };
    auto dg = [&](double t) {
        const double log_density = s * t - std::exp(t) - std::lgamma(s);
        return std::exp(upper ? log_density : log_density - log_lower(t));
    };

    // P(s,x) <= x^s / Gamma(s+1), so this point lies at or below the root.
    double lo = (std::log(p) + std::lgamma(s + 1.0)) / s;
    for (double step = 1.0; g(lo) > 0.0; step *= 2.0) lo -= step;
    double hi = std::max(lo, std::log(s)) + 1.0;
    for (double step = 1.0; g(hi) < 0.0; step *= 2.0) hi += step;

    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 300; ++it) {
        const double val = g(t);
        if (val == 0.0) return t;
        if (val < 0.0) lo = t; else hi = t;
        const double slope = dg(t);
        double next = (slope > 0.0 && std::isfinite(slope)) ? t - val / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - t) <= 1e-15 * std::max(1.0, std::fabs(t))) return next;
        t = next;
        if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(t))) return t;
    }
    return t;
}

}  // namespace

double log_inv_reg_inc_gamma(double s, double p) {
    require_positive(s, "log_inv_reg_inc_gamma");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("log_inv_reg_inc_gamma: p must lie in (0,1)");
    return solve_log_inv_gamma(s, p, 1.0 - p);
}

double log_inv_reg_inc_gamma_upper(double s, double q) {
    require_positive(s, "log_inv_reg_inc_gamma_upper");
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("log_inv_reg_inc_gamma_upper: q must lie in (0,1)");
    return solve_log_inv_gamma(s, 1.0 - q, q);
}

double reg_inc_beta(double a, double b, double x) {
    require_positive(a, "reg_inc_beta");
    require_positive(b, "reg_inc_beta");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
    const double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double log_sum_exp(double a, double b) noexcept {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a == b) return a + std::numbers::ln2;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

double softplus(double a) noexcept {
    return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
}

double log_expm1(double a) noexcept {
    return a > 30.0 ? a + std::log1p(-std::exp(-a)) : std::log(std::expm1(a));
}

double sample_normal(Rng& rng) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_exponential(Rng& rng, double rate) {
    require_positive(rate, "sample_exponential");
    return -std::log(rng.uniform()) / rate;
}

double sample_log_gamma(Rng& rng, double shape) {
    require_positive(shape, "sample_gamma");
    if (shape < 1.0) {
        // Shape boosting: Ga(a) = Ga(a+1) * U^{1/a}, kept on the log scale.
        const double lg = sample_log_gamma(rng, shape + 1.0);
        return lg + std::log(rng.uniform()) / shape;
    }
    // Marsaglia-Tsang squeeze and rejection.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = sample_normal(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
    }
}

double sample_gamma(Rng& rng, double shape) { return std::exp(sample_log_gamma(rng, shape)); }

double sample_inverse_gamma(Rng& rng, double shape) { return 1.0 / sample_gamma(rng, shape); }

double sample_log_inverse_gamma(Rng& rng, double shape) { return -sample_log_gamma(rng, shape); }

double sample_beta(Rng& rng, double a, double b) {
    const double la = sample_log_gamma(rng, a);
    const double lb = sample_log_gamma(rng, b);
    return std::exp(la - log_sum_exp(la, lb));
}

std::int64_t sample_poisson(Rng& rng, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::domain_error("sample_poisson: mean must be finite and >= 0");
    std::int64_t total = 0;
    constexpr double kChunk = 500.0;
    while (mean > kChunk) {
        total += sample_poisson(rng, kChunk);
        mean -= kChunk;
    }
    if (mean == 0.0) return total;
    // Sequential inversion.
    const double u = rng.uniform();
    double p = std::exp(-mean);
    double f = p;
    std::int64_t k = 0;
    while (u > f && k < 100'000) {
        ++k;
        p *= mean / static_cast<double>(k);
        f += p;
        if (p == 0.0 && f < u) break;
    }
    return total + k;
}

}  // namespace blab
