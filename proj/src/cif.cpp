#include "blab/cif.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blab/parallel.hpp"

namespace blab {
namespace {

constexpr std::uint64_t kUniformSalt = 0x7f4a7c15b1e2d3c9ULL;

std::int64_t burn_for(double gap) { return static_cast<std::int64_t>(std::ceil(40.0 / gap)); }

// Small window wide enough for the default burn-in of every component.
Rect replica_rect(double alpha, double rho_min) {
    return {0, burn_for(digamma(alpha) - digamma(alpha - rho_min)) + 8, 1};
}

}  // namespace

double UniformField::u(Point x) const {
    return uniform_at(master_seed, site_stream(x.x1, x.x2, kUniformSalt ^ mix64(stream_id)), 0);
}

double backward_pi(const CocycleGrid& grid, Point x) {
    if (x.x1 < grid.bulk_lo || x.x1 > grid.rect.hi || x.x2 < 0 || x.x2 > grid.rect.T)
        throw std::out_of_range("cone exits bulk");
    return std::exp(grid.lw(x.x1, x.x2) - grid.li(x.x1, x.x2));
}

std::vector<Point> semiinf_walk(const CocycleGrid& grid, const UniformField& uf, const WalkSpec& spec,
                                std::int32_t steps) {
    std::vector<Point> path{spec.root};
    Point x = spec.root;
    for (std::int32_t s = 0; s < steps; ++s) {
        if (!grid.in_bulk(x)) throw std::out_of_range("cone exits bulk");
        const double pi = backward_pi(grid, x);
        const double u = uf.u(x);
        bool left;
        if (u < pi) left = true;
        else if (u > pi) left = false;
        else left = spec.tiebreak == Tiebreak::e1;
        x = left ? x - kE1 : x - kE2;
        path.push_back(x);
    }
    return path;
}

EtaStar eta_star(const std::vector<CocycleGrid>& grids, const UniformField& uf, Point x) {
    if (grids.empty()) throw std::invalid_argument("eta_star: empty grid family");
    struct Node {
        double xi1;
        double pi;
    };
    std::vector<Node> nodes;
    for (const auto& g : grids) nodes.push_back({rho_to_xi(g.rho).xi1, backward_pi(g, x)});
    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.xi1 < b.xi1; });
    const double u = uf.u(x);

    EtaStar e;
    // eta1 = inf{xi : pi^xi >= U}: first grid node meeting it closes the bracket.
    std::size_t first = nodes.size();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].pi >= u) {
            first = i;
            break;
        }
    e.lo1 = first == 0 ? 0.0 : nodes[first - 1].xi1;
    e.hi1 = first == nodes.size() ? 1.0 : nodes[first].xi1;
    // eta2 = sup{xi : pi^xi <= U}.
    std::size_t last = nodes.size();
    for (std::size_t i = nodes.size(); i-- > 0;)
        if (nodes[i].pi <= u) {
            last = i;
            break;
        }
    if (last == nodes.size()) {
        e.lo2 = 0.0;
        e.hi2 = nodes.front().xi1;
    } else {
        e.lo2 = nodes[last].xi1;
        e.hi2 = last + 1 < nodes.size() ? nodes[last + 1].xi1 : 1.0;
    }
    e.bracketed = first != 0 && first != nodes.size();
    e.degenerate = std::none_of(nodes.begin(), nodes.end(), [u](const Node& n) { return n.pi == u; });
    return e;
}

bool eta_star_precedes(const CocycleGrid& grid, const UniformField& uf, Point x) {
    return backward_pi(grid, x) >= uf.u(x);
}

MeanEstimate xi_star_cdf_check(double alpha, double rho, std::size_t replicas, std::uint64_t seed) {
    check_rho({rho, alpha});
    const Rect rect = replica_rect(alpha, rho);
    const auto vals = map_replicas(replicas, [&](std::size_t r) {
        const WeightField field{alpha, hash3(seed, r, 0x1)};
        Rng rng{seed, r, 0};
        const CocycleGrid g = stationary_cocycle(field, {rho, alpha}, rect, rng);
        const Point x{static_cast<std::int32_t>(rect.hi), rect.T};
        return backward_pi(g, x);
    });
    return mean_estimate(vals);
}

EtaLaw eta_star_cdf_check(double alpha, const std::vector<double>& rhos, std::size_t replicas, std::uint64_t seed) {
    if (rhos.empty()) throw std::invalid_argument("empty rho grid");
    std::vector<RhoParam> params;
    for (double r : rhos) params.push_back({r, alpha});
    const Rect rect = chain_rect(alpha, rhos);
    struct Rep {
        std::vector<double> ind;
        bool degenerate;
    };
    const auto reps = map_replicas(replicas, [&](std::size_t r) {
        const WeightField field{alpha, hash3(seed, r, 0x2)};
        Rng rng{seed, r, 1};
        const auto grids = parallel_chain(field, params, rect, rng);
        const UniformField uf{seed, r};
        const Point x{static_cast<std::int32_t>(rect.hi), rect.T};
        Rep rep;
        for (const auto& g : grids) rep.ind.push_back(eta_star_precedes(g, uf, x) ? 1.0 : 0.0);
        rep.degenerate = eta_star(grids, uf, x).degenerate;
        return rep;
    });
    EtaLaw law;
    law.rhos = rhos;
    for (std::size_t j = 0; j < rhos.size(); ++j) {
        std::vector<double> col;
        col.reserve(replicas);
        for (const auto& rep : reps) col.push_back(rep.ind[j]);
        law.cdf.push_back(mean_estimate(col));
    }
    for (const auto& rep : reps) law.nondegenerate += rep.degenerate ? 0 : 1;
    return law;
}

}  // namespace blab
