#pragma once
// Deterministic test statistics used to turn distributional claims into
// pass/fail checks.

#include <cstddef>
#include <functional>
#include <vector>

namespace blab {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double pearson(const std::vector<double>& a, const std::vector<double>& b);
// Two-sided p-value of |r| under independence, normal approximation sqrt(n) r.
double pearson_p_value(double r, std::size_t n);

// Two-sided test that counts are Poisson(mean): S = sum (c - mean)^2 / mean
// has exact mean n and variance n (2 + 1/mean); p from the normal limit.
double poisson_dispersion(const std::vector<long long>& counts, double mean);
// Index of dispersion with estimated mean against chi-square(n - 1), two-sided.
double index_of_dispersion(const std::vector<long long>& counts);

struct MeanEstimate {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean
    std::size_t n = 0;
};

MeanEstimate mean_estimate(const std::vector<double>& xs);
// |est.mean - target| / est.se; infinite when se is 0 and the means differ.
double z_score(const MeanEstimate& est, double target);
// z of the difference of two independent estimates.
double z_score(const MeanEstimate& a, const MeanEstimate& b);
// Two-sided normal p-value for a z score.
double normal_two_sided_p(double z);

}  // namespace blab
