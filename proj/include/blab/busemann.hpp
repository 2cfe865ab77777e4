#pragma once
// Stationary cocycles built row by row from the update map, the coupled
// multi-direction chain, partition-function ratio estimates of Busemann
// values, and the eternal solutions of the discrete heat recursion.

#include <cstdint>
#include <utility>
#include <vector>

#include "blab/lattice.hpp"
#include "blab/seqmaps.hpp"

namespace blab {

// Sites (k, t) with k in [lo, hi], t in [0, T]; k is x1 and t is x2.
struct Rect {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int32_t T = 0;
};

// log I_k(t) on horizontal edges ((k-1,t),(k,t)) and log J_k(t) on vertical
// edges ((k,t-1),(k,t)). Row 0 carries no J values.
struct CocycleGrid {
    Rect rect;
    RhoParam rho;
    std::vector<std::vector<double>> log_i;  // [t][k - lo]
    std::vector<std::vector<double>> log_j;  // [t][k - lo], empty at t = 0
    std::vector<std::vector<double>> log_w;  // [t][k - lo]
    std::int64_t bulk_lo = 0;                // first bulk column

    double li(std::int64_t k, std::int32_t t) const { return log_i[t][static_cast<std::size_t>(k - rect.lo)]; }
    double lj(std::int64_t k, std::int32_t t) const { return log_j[t][static_cast<std::size_t>(k - rect.lo)]; }
    double lw(std::int64_t k, std::int32_t t) const { return log_w[t][static_cast<std::size_t>(k - rect.lo)]; }
    bool in_bulk(Point x) const { return x.x1 >= bulk_lo && x.x1 <= rect.hi && x.x2 >= 1 && x.x2 <= rect.T; }
};

// Row t of the field as a window with its known Cesaro mean.
LogSeqWindow field_row(const WeightField& field, std::int32_t t, std::int64_t lo, std::int64_t hi);

// Bottom row i.i.d. Ga^{-1}(alpha - rho) and left-column J seeds i.i.d.
// Ga^{-1}(rho), unless opts.log_j_seed fixes them.
CocycleGrid stationary_cocycle(const WeightField& field, const RhoParam& rho, const Rect& rect, Rng& rng,
                               const UpdateOptions& opts = {});

// Row {0, hi, 1} wide enough for parallel_chain over rhos at the default
// burn-in: one burn per adjacent pair of Cesaro means in (W, I^1, ..., I^m)
// plus one for level 1. The coupling point of the shadow run has an
// exponential tail; three times that width exhausts in well under 1e-6 of
// replicas.
Rect chain_rect(double alpha, std::vector<double> rhos);

// Jointly coupled grids, one per entry of rhos (any order, repeats allowed).
// Level 0 is drawn from the stationary joint law through the triangular array
// over (W(0), I^1, ..., I^m); every level above uses the same field row for
// every component. The bulk starts past the last column where a change of
// left-boundary data still moves any value by more than 1e-12.
std::vector<CocycleGrid> parallel_chain(const WeightField& field, const std::vector<RhoParam>& rhos,
                                        const Rect& rect, Rng& rng, const UpdateOptions& opts = {});

// Max over bulk sites of |W (1/I + 1/J) - 1|.
double recovery_residual(const CocycleGrid& g);
// Max over bulk sites of |log J_k(t) + log I_k(t-1) - log I_k(t) - log J_{k-1}(t)|.
double additivity_residual(const CocycleGrid& g);

// The lattice point at distance `depth` behind `base` along -xi, rounded
// by cumulative fractional part.
Point direction_point(Point base, Direction d, std::int32_t depth);

// log Z_{x_l, y} - log Z_{x_l, x}, with x_l taken `depth` steps behind min(x, y).
double busemann_ratio_estimate(const WeightField& field, Point x, Point y, Direction d, std::int32_t depth);

struct EternalSolution {
    Point base{};
    std::int64_t k_lo = 0;  // columns [k_lo, k_hi], rows [0, T]
    std::int64_t k_hi = 0;
    std::int32_t T = 0;
    std::vector<std::vector<long double>> log_z;  // [t][k - k_lo]

    long double at(Point x) const { return log_z[x.x2][static_cast<std::size_t>(x.x1 - k_lo)]; }
};

EternalSolution eternal_from_cocycle(const CocycleGrid& grid, Point base);
// Max over interior sites of |W_x (Z(x-e1) + Z(x-e2)) / Z(x) - 1|.
double she_residual(const CocycleGrid& grid, const EternalSolution& z);

// (pi(x, x-e1), pi(x, x-e2)) = (W_x / I_x, W_x / J_x).
std::pair<double, double> backward_probabilities(const CocycleGrid& grid, Point x);

// Backward Gibbs walk from v; returns v and the `steps` sites after it.
std::vector<Point> gibbs_backward_walk(const CocycleGrid& grid, Point v, std::int32_t steps, Rng& rng);

}  // namespace blab
