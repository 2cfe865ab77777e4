#pragma once
// The Busemann value across one edge as a function of rho: an initial
// log-inverse-gamma value plus the jumps of a marked Poisson point process
// with intensity e^{-y(alpha - s)} / (1 - e^{-y}) ds dy.

#include <cstdint>
#include <vector>

#include "blab/rng.hpp"
#include "blab/stats.hpp"

namespace blab {

struct JumpPoint {
    double s = 0.0;  // location in (0, rho_max]
    double y = 0.0;  // jump size
    double u = 0.0;  // independent uniform mark
};

struct JumpProcessSample {
    double alpha = 1.0;
    double rho_max = 0.5;
    double y_min = 1e-6;
    bool compensate = true;  // add the mean of the discarded jumps below y_min
    double u0 = 0.5;         // uniform behind z0
    double z0 = 0.0;         // Z(0) = -log Q^{-1}(alpha, u0), a log Ga^{-1}(alpha) value
    std::vector<JumpPoint> points;  // sorted by s
};

double ppp_intensity(double alpha, double s, double y);

// Exact sample on (0, rho_max] x [y_min, inf) by thinning a dominating
// process with y-marginal max(1, rho_max) e^{-(alpha - rho_max) y} / y.
JumpProcessSample sample_ppp(double alpha, double rho_max, double y_min, Rng& rng, bool compensate = true);

// Mean total jump below y_min over s in (0, rho].
double small_jump_compensator(double alpha, double rho, double y_min);

double trajectory(const JumpProcessSample& sample, double rho);
// Trajectory on an ascending grid in one pass.
std::vector<double> trajectory_on_grid(const JumpProcessSample& sample, const std::vector<double>& grid);

// Expected number of points with y >= delta and s in (s_lo, s_hi].
double expected_jump_count(double alpha, double delta, double s_lo, double s_hi);
std::int64_t jump_count(const JumpProcessSample& sample, double delta, double s_lo, double s_hi);

// int_0^rho int_{y_min}^inf (1 - e^{-t y}) sigma(s, y) dy ds.
double laplace_exponent(double alpha, double rho, double t, double y_min);

// KS of n sampled Z(rho) against the log Ga^{-1}(alpha - rho) law.
KsResult marginal_check(double alpha, double rho, std::size_t n, std::uint64_t seed);

struct CoupledTrajectories {
    std::vector<double> grid;
    std::vector<double> positive;  // alpha-process on the reference scale
    std::vector<double> zero;      // zero-temperature process
};

// Thins a reference sample (alpha = 1, with marks) into the rescaled
// alpha-process and the zero-temperature process.
CoupledTrajectories zero_temp_couple(const JumpProcessSample& reference, double alpha,
                                     const std::vector<double>& grid);
double sup_gap(const CoupledTrajectories& c);

// |u^alpha(xi) - xi|_1 at one direction.
double reparam_gap(double alpha, double xi1);
// Max of reparam_gap over an interior grid of `points` directions.
double reparam_bound(double alpha, int points = 10000);

}  // namespace blab
