#include "blab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "blab/special_functions.hpp"

namespace blab {
namespace {

constexpr std::size_t kMinSamples = 20;

double ks_p(double d, double n_eff) {
    const double sq = std::sqrt(n_eff);
    return kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d);
}

}  // namespace

double kolmogorov_survival(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    if (lambda < 1.18) {
        // Theta-function form of the CDF converges fast for small lambda.
        const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double sum = 0.0;
        for (int k = 1; k <= 50; ++k) {
            const double term = std::exp(-c * (2 * k - 1) * (2 * k - 1));
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.size() < kMinSamples) throw std::invalid_argument("too few samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, ks_p(d, n), samples.size()};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < kMinSamples || b.size() < kMinSamples) throw std::invalid_argument("too few samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return {d, ks_p(d, na * nb / (na + nb)), a.size() + b.size()};
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("too few samples");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw std::domain_error("pearson: zero variance");
    return sab / std::sqrt(saa * sbb);
}

double normal_two_sided_p(double z) { return std::erfc(std::fabs(z) / std::numbers::sqrt2); }

double pearson_p_value(double r, std::size_t n) { return normal_two_sided_p(r * std::sqrt(static_cast<double>(n))); }

double poisson_dispersion(const std::vector<long long>& counts, double mean) {
    if (counts.size() < kMinSamples) throw std::invalid_argument("too few samples");
    if (!(mean > 0.0)) throw std::domain_error("poisson_dispersion: mean must be positive");
    double s = 0.0;
    for (long long c : counts) {
        const double d = static_cast<double>(c) - mean;
        s += d * d / mean;
    }
    const double n = static_cast<double>(counts.size());
    return normal_two_sided_p((s - n) / std::sqrt(n * (2.0 + 1.0 / mean)));
}

double index_of_dispersion(const std::vector<long long>& counts) {
    if (counts.size() < kMinSamples) throw std::invalid_argument("too few samples");
    const double n = static_cast<double>(counts.size());
    double total = 0.0;
    for (long long c : counts) total += static_cast<double>(c);
    if (total == 0.0) throw std::domain_error("index_of_dispersion: all counts are zero");
    const double m = total / n;
    double s = 0.0;
    for (long long c : counts) s += (static_cast<double>(c) - m) * (static_cast<double>(c) - m) / m;
    const double k = 0.5 * (n - 1.0);
    const double lower = reg_inc_gamma(k, 0.5 * s);
    return std::min(1.0, 2.0 * std::min(lower, reg_inc_gamma_upper(k, 0.5 * s)));
}

MeanEstimate mean_estimate(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("too few samples");
    const double n = static_cast<double>(xs.size());
    const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (n - 1.0) / n), xs.size()};
}

double z_score(const MeanEstimate& est, double target) {
    const double diff = std::fabs(est.mean - target);
    if (est.se == 0.0) return diff == 0.0 ? 0.0 : HUGE_VAL;
    return diff / est.se;
}

double z_score(const MeanEstimate& a, const MeanEstimate& b) {
    const double se = std::hypot(a.se, b.se);
    const double diff = std::fabs(a.mean - b.mean);
    if (se == 0.0) return diff == 0.0 ? 0.0 : HUGE_VAL;
    return diff / se;
}

}  // namespace blab
