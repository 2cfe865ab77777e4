#pragma once
// Real special functions and the distribution samplers built on them.
// Domain violations throw std::domain_error.

#include <cstdint>
#include <limits>

#include "blab/rng.hpp"

namespace blab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double digamma(double s);
double trigamma(double s);

// Regularized lower incomplete gamma P(s, x); x may be +inf.
double reg_inc_gamma(double s, double x);
// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), accurate in the tail.
double reg_inc_gamma_upper(double s, double x);
// log x with P(s, x) = p, for p in (0,1). Returned on the log scale because
// x underflows for small shapes.
double log_inv_reg_inc_gamma(double s, double p);
// log x with Q(s, x) = q; keeps full precision when q is tiny.
double log_inv_reg_inc_gamma_upper(double s, double q);

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

// log(e^a + e^b) without overflow; -inf acts as log 0.
double log_sum_exp(double a, double b) noexcept;
// log(1 + e^a).
double softplus(double a) noexcept;
// log(e^a - 1) for a > 0.
double log_expm1(double a) noexcept;

// Samplers. Each consumes a variable number of counters from rng.
double sample_normal(Rng& rng);
double sample_exponential(Rng& rng, double rate = 1.0);
double sample_log_gamma(Rng& rng, double shape);
double sample_gamma(Rng& rng, double shape);
double sample_inverse_gamma(Rng& rng, double shape);
// log of a Ga^{-1}(shape) draw, equal to -sample_log_gamma on the same stream.
double sample_log_inverse_gamma(Rng& rng, double shape);
double sample_beta(Rng& rng, double a, double b);
std::int64_t sample_poisson(Rng& rng, double mean);

}  // namespace blab
