#pragma once
// Competition-interface couplings: up-right walks to a fixed target driven by
// one uniform per site, down-left Busemann walks, and the random direction
// eta*(x) at which the backward step flips.

#include <cstdint>
#include <vector>

#include "blab/busemann.hpp"
#include "blab/lattice.hpp"
#include "blab/stats.hpp"

namespace blab {

struct UniformField {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    double u(Point x) const;
};

// Up-right walk from u to v with step probabilities
// pi_v(x, x+e_r) = W_{x+e_r} Z_{x+e_r,v} / Z_{x,v}; e1 is taken iff U_x < pi_v(x, x+e1).
template <WeightSource F>
std::vector<Point> finite_coupled_walk(const F& field, const UniformField& uf, Point u, Point v) {
    if (!leq(u, v)) throw std::invalid_argument("unordered endpoints");
    const std::int32_t n1 = v.x1 - u.x1 + 1, n2 = v.x2 - u.x2 + 1;
    // back[a][b] = log Z_{(u1+a, u2+b), v}
    std::vector<double> back(static_cast<std::size_t>(n1) * n2, kNegInf);
    auto idx = [n2](std::int32_t a, std::int32_t b) { return static_cast<std::size_t>(a) * n2 + b; };
    for (std::int32_t a = n1 - 1; a >= 0; --a)
        for (std::int32_t b = n2 - 1; b >= 0; --b) {
            if (a == n1 - 1 && b == n2 - 1) {
                back[idx(a, b)] = 0.0;
                continue;
            }
            const Point x{u.x1 + a, u.x2 + b};
            const double right = a + 1 < n1 ? field.log_weight(x + kE1) + back[idx(a + 1, b)] : kNegInf;
            const double up = b + 1 < n2 ? field.log_weight(x + kE2) + back[idx(a, b + 1)] : kNegInf;
            back[idx(a, b)] = log_sum_exp(right, up);
        }
    std::vector<Point> path{u};
    Point x = u;
    while (!(x == v)) {
        const std::int32_t a = x.x1 - u.x1, b = x.x2 - u.x2;
        bool right;
        if (x.x1 == v.x1) right = false;
        else if (x.x2 == v.x2) right = true;
        else {
            const double p1 = std::exp(field.log_weight(x + kE1) + back[idx(a + 1, b)] - back[idx(a, b)]);
            right = uf.u(x) < p1;
        }
        x = right ? x + kE1 : x + kE2;
        path.push_back(x);
    }
    return path;
}

enum class Tiebreak { e1, e2 };

struct WalkSpec {
    Point root{};
    Tiebreak tiebreak = Tiebreak::e1;
};

// pi^xi(x, x-e1) = W_x / I_x.
double backward_pi(const CocycleGrid& grid, Point x);

// Down-left walk: x-e1 when U_x < pi, x-e2 when U_x > pi, tiebreaker at equality.
std::vector<Point> semiinf_walk(const CocycleGrid& grid, const UniformField& uf, const WalkSpec& spec,
                                std::int32_t steps);

// Bracket of eta*(x) on a direction grid, in xi1 coordinates. eta1 lies in
// (lo1, hi1] and eta2 in [lo2, hi2); 0 and 1 stand for the axes beyond the grid.
struct EtaStar {
    double lo1 = 0.0, hi1 = 1.0;
    double lo2 = 0.0, hi2 = 1.0;
    bool bracketed = true;   // false when eta* falls outside the grid
    bool degenerate = true;  // no grid value ties U_x
};

// grids: jointly coupled family sharing one field, any order of rho.
EtaStar eta_star(const std::vector<CocycleGrid>& grids, const UniformField& uf, Point x);

// eta*(x) precedes xi(rho) in the southeast order iff pi^{xi(rho)}(x, x-e1) >= U_x.
bool eta_star_precedes(const CocycleGrid& grid, const UniformField& uf, Point x);

// Estimate of P(xi* precedes xi(rho)) = E[W / I^{xi(rho)}] over independent
// stationary cocycles; the exact value is (alpha - rho) / alpha.
MeanEstimate xi_star_cdf_check(double alpha, double rho, std::size_t replicas, std::uint64_t seed);

// Indicator estimates of P(eta* precedes xi(rho)) for every rho in the grid,
// one coupled family per replica.
struct EtaLaw {
    std::vector<double> rhos;
    std::vector<MeanEstimate> cdf;
    std::size_t nondegenerate = 0;
};
EtaLaw eta_star_cdf_check(double alpha, const std::vector<double>& rhos, std::size_t replicas, std::uint64_t seed);

}  // namespace blab
