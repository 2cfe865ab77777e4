#include <cmath>
#include <vector>

#include "blab/busemann.hpp"
#include "blab/special_functions.hpp"
#include "blab/stats.hpp"
#include "doctest.h"

using namespace blab;

namespace {

// P(log Y <= y) for Y ~ Ga^{-1}(a).
auto log_inv_gamma_cdf(double a) {
    return [a](double y) { return reg_inc_gamma_upper(a, std::exp(-y)); };
}

std::vector<double> bulk_row(const CocycleGrid& g, std::int32_t t) {
    std::vector<double> out;
    for (std::int64_t k = g.bulk_lo; k <= g.rect.hi; ++k) out.push_back(g.li(k, t));
    return out;
}

}  // namespace

TEST_CASE("stationary cocycle invariants") {
    const WeightField f{2.0, 11};
    Rng rng{11, 0, 0};
    const CocycleGrid g = stationary_cocycle(f, {0.5, 2.0}, {0, 3000, 20}, rng);
    CHECK(g.bulk_lo > 0);
    CHECK(g.bulk_lo < 200);
    CHECK(recovery_residual(g) < 1e-12);
    CHECK(additivity_residual(g) < 1e-12);
    CHECK(g.log_j[0].empty());
    CHECK(g.in_bulk({static_cast<std::int32_t>(g.bulk_lo), 1}));
    CHECK_FALSE(g.in_bulk({static_cast<std::int32_t>(g.bulk_lo), 0}));
    CHECK_FALSE(g.in_bulk({static_cast<std::int32_t>(g.bulk_lo - 1), 5}));
    for (std::int64_t k = g.rect.lo; k <= g.rect.hi; k += 97) CHECK(g.lw(k, 7) == f.log_weight({static_cast<std::int32_t>(k), 7}));

    Rng r2{1, 0, 0};
    CHECK_THROWS_AS(stationary_cocycle(f, {2.5, 2.0}, {0, 100, 2}, r2), std::invalid_argument);
    CHECK_THROWS_AS(stationary_cocycle(f, {0.5, 3.0}, {0, 100, 2}, r2), std::invalid_argument);
    CHECK_THROWS_AS(stationary_cocycle(f, {0.5, 2.0}, {0, 10, 2}, r2), std::length_error);
}

TEST_CASE("stationary cocycle marginals") {
    const double alpha = 2.0, rho = 0.8;
    const WeightField f{alpha, 12};
    Rng rng{12, 0, 0};
    const CocycleGrid g = stationary_cocycle(f, {rho, alpha}, {0, 40000, 3}, rng);
    for (std::int32_t t = 0; t <= 3; ++t) {
        std::vector<double> row = bulk_row(g, t);
        CHECK_MESSAGE(ks_one_sample(row, log_inv_gamma_cdf(alpha - rho)).p_value > 1e-3, "row " << t);
    }
    // A vertical line is a down-right path: its J values are i.i.d.
    const WeightField f2{alpha, 13};
    Rng rng2{13, 0, 0};
    const CocycleGrid tall = stationary_cocycle(f2, {rho, alpha}, {0, 120, 20000}, rng2);
    std::vector<double> col;
    for (std::int32_t t = 1; t <= 20000; ++t) col.push_back(tall.lj(120, t));
    CHECK(ks_one_sample(col, log_inv_gamma_cdf(rho)).p_value > 1e-3);
}

TEST_CASE("parallel chain ordering and coupling") {
    const WeightField f{2.0, 21};
    Rng rng{21, 0, 0};
    const std::vector<RhoParam> rhos{{1.5, 2.0}, {0.6, 2.0}, {1.5, 2.0}, {1.0, 2.0}};
    const std::vector<CocycleGrid> gs = parallel_chain(f, rhos, {0, 3000, 10}, rng);
    REQUIRE(gs.size() == 4);
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(gs[c].rho.rho == rhos[c].rho);
        CHECK(recovery_residual(gs[c]) < 1e-12);
        CHECK(additivity_residual(gs[c]) < 1e-12);
    }
    CHECK(gs[0].log_i == gs[2].log_i);
    CHECK(gs[0].log_j == gs[2].log_j);
    // Smaller rho: more horizontal direction, smaller I, larger J.
    const std::int64_t lo = std::max({gs[0].bulk_lo, gs[1].bulk_lo, gs[3].bulk_lo});
    for (std::int32_t t = 1; t <= 10; ++t)
        for (std::int64_t k = lo; k <= 3000; ++k) {
            CHECK(gs[1].li(k, t) <= gs[3].li(k, t));
            CHECK(gs[3].li(k, t) <= gs[0].li(k, t));
            CHECK(gs[1].lj(k, t) >= gs[3].lj(k, t));
            CHECK(gs[3].lj(k, t) >= gs[0].lj(k, t));
        }
    for (std::int32_t t = 0; t <= 10; ++t) CHECK(gs[0].log_w[t] == gs[1].log_w[t]);
}

TEST_CASE("parallel chain strict ordering propagates") {
    const WeightField f{2.0, 22};
    Rng rng{22, 0, 0};
    const std::vector<CocycleGrid> gs = parallel_chain(f, {{0.7, 2.0}, {1.2, 2.0}}, {0, 2000, 5}, rng);
    const std::int64_t lo = std::max(gs[0].bulk_lo, gs[1].bulk_lo);
    for (std::int32_t t = 1; t <= 5; ++t)
        for (std::int64_t k = lo; k <= 2000; ++k) CHECK(gs[0].li(k, t) < gs[1].li(k, t));
}

TEST_CASE("parallel chain joint law") {
    // Ratios along a row are serially dependent, so each replica contributes
    // one site per level.
    const double alpha = 2.0, rho1 = 0.6, rho2 = 1.2;
    const int n = 4000;
    std::vector<std::vector<double>> ratio(2), a(2), b(2);
    for (int r = 0; r < n; ++r) {
        const WeightField f{alpha, hash3(23, static_cast<std::uint64_t>(r), 0)};
        Rng rng{23, static_cast<std::uint64_t>(r), 1};
        const std::vector<CocycleGrid> gs = parallel_chain(f, {{rho1, alpha}, {rho2, alpha}}, {0, 600, 1}, rng);
        for (std::int32_t t = 0; t <= 1; ++t) {
            const std::int64_t k = 600;
            ratio[t].push_back(std::exp(gs[0].lw(k, t) - gs[0].li(k, t)));
            a[t].push_back(gs[1].li(k, t) - gs[0].li(k, t));
            b[t].push_back(gs[0].li(k, t) - gs[0].lw(k, t));
        }
    }
    const auto beta_cdf = [&](double x) { return reg_inc_beta(alpha - rho1, rho1, std::clamp(x, 0.0, 1.0)); };
    for (int t = 0; t <= 1; ++t) {
        CHECK_MESSAGE(ks_one_sample(ratio[t], beta_cdf).p_value > 1e-3, "level " << t);
        // Consecutive increments in rho are independent.
        CHECK(std::fabs(pearson(a[t], b[t])) < 3.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("ratios along one row are serially dependent") {
    // W/D(W,I) has the right marginal but 1/J_k = (1/W_k)(1 - B_k) links
    // neighbouring ratios B_k, B_{k+1}.
    Rng rng{24, 0, 0};
    const LogSeqWindow w = iid_log_inverse_gamma(rng, 2.0, 0, 200000);
    const LogSeqWindow i = iid_log_inverse_gamma(rng, 1.4, 0, 200000);
    const UpdateOutput u = update(w, i);
    std::vector<double> x, y;
    for (std::int64_t k = u.valid_lo; k < 200000; ++k) {
        x.push_back(std::exp(w.at(k) - u.i_tilde.at(k)));
        y.push_back(std::exp(w.at(k + 1) - u.i_tilde.at(k + 1)));
    }
    CHECK(pearson(x, y) > 10.0 / std::sqrt(static_cast<double>(x.size())));
}

TEST_CASE("busemann ratio estimate") {
    const WeightField f{2.0, 31};
    const Direction d = rho_to_xi({0.5, 2.0});
    const Point x{5, -3};
    CHECK(busemann_ratio_estimate(f, x, x, d, 50) == 0.0);
    for (Point y : {x + kE1, x + kE2, Point{9, 4}, Point{-2, 0}}) {
        CHECK(busemann_ratio_estimate(f, x, y, d, 60) == -busemann_ratio_estimate(f, y, x, d, 60));
    }
    CHECK_THROWS_AS(busemann_ratio_estimate(f, x, x + kE1, d, 0), std::invalid_argument);
    const Point p = direction_point({0, 0}, Direction{0.3}, 10);
    CHECK(p == Point{-3, -7});
    CHECK(level(direction_point({4, 4}, Direction{0.77}, 123)) == 8 - 123);
}

TEST_CASE("eternal solution") {
    const double alpha = 2.0, rho = 0.7;
    const WeightField f{alpha, 41};
    Rng rng{41, 0, 0};
    const CocycleGrid g = stationary_cocycle(f, {rho, alpha}, {0, 1500, 400}, rng);
    const Point base{static_cast<std::int32_t>(g.bulk_lo), 1};
    const EternalSolution z = eternal_from_cocycle(g, base);
    CHECK(z.at(base) == 0.0L);
    CHECK(she_residual(g, z) < 1e-12);
    CHECK_THROWS_AS(eternal_from_cocycle(g, {0, 1}), std::out_of_range);

    // Slope along the anti-diagonal from base.
    const std::int32_t n = 380;
    const Point far{base.x1 + n, base.x2 + 399 - n};
    const double expected = -digamma(alpha - rho) + digamma(rho);
    const double per_step = static_cast<double>(z.at(far) - z.at({base.x1, base.x2 + 399})) / n;
    // Each step adds a log I - log J difference; noise is O(1/sqrt(n)).
    const double sd = std::sqrt(trigamma(alpha - rho) + trigamma(rho));
    CHECK(std::fabs(per_step - expected) < 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("backward walk probabilities") {
    const WeightField f{2.0, 51};
    Rng rng{51, 0, 0};
    const CocycleGrid g = stationary_cocycle(f, {0.9, 2.0}, {0, 500, 50}, rng);
    for (std::int64_t k = g.bulk_lo; k <= 500; k += 7)
        for (std::int32_t t = 1; t <= 50; t += 3) {
            const auto [p1, p2] = backward_probabilities(g, {static_cast<std::int32_t>(k), t});
            CHECK(std::fabs(p1 + p2 - 1.0) < 1e-12);
            CHECK(p1 > 0.0);
            CHECK(p2 > 0.0);
        }
    CHECK_THROWS_AS(backward_probabilities(g, {500, 0}), std::out_of_range);
    Rng wr{52, 0, 0};
    const std::vector<Point> path = gibbs_backward_walk(g, {500, 50}, 30, wr);
    REQUIRE(path.size() == 31);
    for (std::size_t s = 1; s < path.size(); ++s) {
        const Point step = path[s - 1] - path[s];
        CHECK((step == kE1 || step == kE2));
    }
    Rng wr2{53, 0, 0};
    CHECK_THROWS_AS(gibbs_backward_walk(g, {500, 50}, 1000, wr2), std::out_of_range);
}

TEST_CASE("first backward step frequency") {
    const double alpha = 2.0, rho = 0.6;
    const int n = 100000;
    int horizontal = 0;
    for (int r = 0; r < n; ++r) {
        const WeightField f{alpha, hash3(61, static_cast<std::uint64_t>(r), 0)};
        Rng rng{61, static_cast<std::uint64_t>(r), 1};
        const CocycleGrid g = stationary_cocycle(f, {rho, alpha}, {0, 40, 1}, rng, UpdateOptions{JSeed::start_at_mean, 30, std::nullopt, 0.0});
        const std::vector<Point> p = gibbs_backward_walk(g, {40, 1}, 1, rng);
        horizontal += (p[0] - p[1] == kE1);
    }
    const double mean = static_cast<double>(horizontal) / n;
    const double target = (alpha - rho) / alpha;
    CHECK(std::fabs(mean - target) < 3.0 * std::sqrt(target * (1 - target) / n));
}

TEST_CASE("backward walk direction") {
    const double alpha = 2.0, rho = 0.6;
    const double xi1 = rho_to_xi({rho, alpha}).xi1;
    const WeightField f{alpha, 71};
    Rng rng{71, 0, 0};
    const CocycleGrid g = stationary_cocycle(f, {rho, alpha}, {0, 1100, 500}, rng);
    Rng wr{72, 0, 0};
    const std::vector<Point> path = gibbs_backward_walk(g, {1100, 500}, 1000, wr);
    const double frac = static_cast<double>(path.front().x1 - path.back().x1) / 1000.0;
    CHECK(std::fabs(frac - xi1) < 0.05 * xi1);
}

TEST_CASE("chain rect sizing") {
    CHECK_THROWS_AS(chain_rect(2.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(chain_rect(2.0, {2.5}), std::invalid_argument);
    const Rect one = chain_rect(2.0, {1.0});
    CHECK(one.lo == 0);
    CHECK(one.T == 1);
    // Order and repeats do not matter; closer Cesaro means need more room.
    CHECK(chain_rect(2.0, {1.2, 0.6, 0.6}).hi == chain_rect(2.0, {0.6, 1.2}).hi);
    CHECK(chain_rect(2.0, {0.5}).hi > one.hi);
    for (std::size_t r = 0; r < 2000; ++r) {
        const WeightField f{2.0, hash3(61, r, 0)};
        Rng rng{61, r, 1};
        const auto gs = parallel_chain(f, {{0.5, 2.0}, {1.0, 2.0}}, chain_rect(2.0, {0.5, 1.0}), rng);
        if (gs[0].bulk_lo > gs[0].rect.hi) FAIL("bulk outside rect");
    }
}
