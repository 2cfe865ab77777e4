#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "blab/grsk.hpp"
#include "blab/lattice.hpp"
#include "blab/special_functions.hpp"
#include "blab/stats.hpp"
#include "doctest.h"

using namespace blab;

namespace {

Word random_word(Rng& rng, std::int32_t start, std::size_t len) {
    Word w{start, {}};
    for (std::size_t i = 0; i < len; ++i) w.log_entries.push_back(-1.5 + 3.0 * rng.uniform());
    return w;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Path sum over the weight matrix from (1,1) to (m,k), both ends included.
double brute_force(const std::vector<std::vector<double>>& logw, int m, int k) {
    std::function<double(int, int)> rec = [&](int r, int c) -> double {
        const double here = std::exp(logw[r - 1][c - 1]);
        if (r == m && c == k) return here;
        double s = 0.0;
        if (r < m) s += rec(r + 1, c);
        if (c < k) s += rec(r, c + 1);
        return here * s;
    };
    return rec(1, 1);
}

}  // namespace

TEST_CASE("row insertion small cases") {
    const RowInsertResult r1 = row_insert(Word{3, {0.4}}, Word{3, {-1.1}});
    CHECK(r1.xi_prime.start == 3);
    CHECK(r1.xi_prime.log_entries[0] == doctest::Approx(-0.7).epsilon(1e-15));
    CHECK(r1.b_prime.empty());

    const RowInsertResult r2 = row_insert(Word{1, {0.0, 0.0}}, Word{1, {0.0, 0.0}});
    REQUIRE(r2.xi_prime.size() == 2);
    CHECK(std::fabs(r2.xi_prime.log_entries[0]) < 1e-15);
    CHECK(std::fabs(r2.xi_prime.log_entries[1] - std::log(2.0)) < 1e-15);
    REQUIRE(r2.b_prime.size() == 1);
    CHECK(r2.b_prime.start == 2);
    CHECK(std::fabs(r2.b_prime.log_entries[0] - std::log(0.5)) < 1e-15);

    CHECK_THROWS_AS(row_insert(Word{1, {0.0, 0.0}}, Word{1, {0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(row_insert(Word{1, {0.0}}, Word{2, {0.0}}), std::invalid_argument);
}

TEST_CASE("row insertion conserves last entry times the output word") {
    // b'_k telescopes: xi'_N prod b' = xi_N prod b.
    Rng rng{1, 0, 0};
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t len = 1 + static_cast<std::size_t>(rng.uniform() * 7);
        const Word xi = random_word(rng, 2, len), b = random_word(rng, 2, len);
        const RowInsertResult r = row_insert(xi, b);
        const double lhs = r.xi_prime.log_entries.back() +
                           std::accumulate(r.b_prime.log_entries.begin(), r.b_prime.log_entries.end(), 0.0);
        const double rhs = xi.log_entries.back() + std::accumulate(b.log_entries.begin(), b.log_entries.end(), 0.0);
        CHECK(std::fabs(lhs - rhs) < 1e-12);
        // Direct evaluation of the recursion.
        double prev = kNegInf;
        for (std::size_t k = 0; k < len; ++k) {
            const double expect = b.log_entries[k] + (k == 0 ? xi.log_entries[0] : log_sum_exp(prev, xi.log_entries[k]));
            CHECK(std::fabs(r.xi_prime.log_entries[k] - expect) < 1e-13);
            prev = r.xi_prime.log_entries[k];
        }
    }
}

TEST_CASE("array insertion") {
    FullArray one = FullArray::ones(1);
    one.log_at(1, 1) = 0.3;
    const FullArray out = array_insert(one, Word{1, {0.5}});
    CHECK(out.log_at(1, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_AS(array_insert(FullArray::ones(3), Word{1, {0.0, 0.0}}), std::invalid_argument);

    // All-ones: first column counts lattice paths.
    for (int n = 1; n <= 5; ++n) {
        FullArray z = FullArray::ones(n);
        for (int k = 1; k <= n; ++k) z.log_at(k, 1) = 0.0;
        for (int m = 2; m <= 6; ++m) {
            z = array_insert(z, Word{1, std::vector<double>(static_cast<std::size_t>(n), 0.0)});
            for (int k = 1; k <= n; ++k) CHECK(std::exp(z.log_at(k, 1)) == doctest::Approx(binom(m + k - 2, k - 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("first column of the array is the partition function") {
    Rng rng{2, 0, 0};
    for (int n : {3, 4}) {
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<std::vector<double>> logw(static_cast<std::size_t>(n));
            for (auto& row : logw) row = random_word(rng, 1, static_cast<std::size_t>(n)).log_entries;
            const FullArray z = grsk_from_rows(logw);
            MatrixField m{{1, 1}, n, n, {}};
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) m.logs.push_back(logw[r][c]);
            for (int k = 1; k <= n; ++k) {
                CHECK(std::fabs(z.log_at(k, 1) - log_partition(m, {1, 1}, {n, k}, true)) < 1e-10);
                CHECK(std::fabs(z.log_at(k, 1) - std::log(brute_force(logw, n, k))) < 1e-10);
            }
        }
    }
}

TEST_CASE("network step") {
    const NetworkStepResult r0 = array_network_step({0.7}, 0.25, Word{1, {}});
    REQUIRE(r0.log_z.size() == 1);
    CHECK(r0.log_z[0] == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(r0.dual_w.empty());
    CHECK_THROWS_AS(array_network_step({0.0, 0.0}, 0.0, Word{1, {}}), std::invalid_argument);
}

TEST_CASE("network columns reproduce the update map") {
    Rng rng{3, 0, 0};
    const std::int64_t lo = 0, hi = 1999;
    const LogSeqWindow w1 = iid_log_inverse_gamma(rng, 2.0, lo, hi);
    const LogSeqWindow w2 = iid_log_inverse_gamma(rng, 2.0, lo, hi);
    const LogSeqWindow i = iid_log_inverse_gamma(rng, 0.9, lo, hi);
    // Column k = lo - 1, levels 0..2.
    std::vector<double> z{0.0, 0.4, 0.1};
    UpdateOptions o1, o2;
    o1.log_j_seed = z[1] - z[0];
    o2.log_j_seed = z[2] - z[1];
    o1.burn_in = o2.burn_in = 1;
    std::vector<double> li1, lj1, dual1, li2, lj2;
    for (std::int64_t k = lo; k <= hi; ++k) {
        const NetworkStepResult step = array_network_step(z, i.at(k), Word{1, {w1.at(k), w2.at(k)}});
        li1.push_back(step.log_z[1] - z[1]);
        lj1.push_back(step.log_z[1] - step.log_z[0]);
        li2.push_back(step.log_z[2] - z[2]);
        lj2.push_back(step.log_z[2] - step.log_z[1]);
        dual1.push_back(step.dual_w.log_entries[0]);
        z = step.log_z;
    }
    const UpdateOutput u1 = update(w1, i, o1);
    // The second level sees the first level's output, with its own seed.
    const UpdateOutput u2 = update(w2, u1.i_tilde, o2);
    for (std::int64_t k = lo; k <= hi; ++k) {
        const auto idx = static_cast<std::size_t>(k - lo);
        CHECK(std::fabs(li1[idx] - u1.i_tilde.at(k)) < 1e-10);
        CHECK(std::fabs(lj1[idx] - u1.j.at(k)) < 1e-10);
        CHECK(std::fabs(dual1[idx] - u1.w_tilde.at(k)) < 1e-10);
        CHECK(std::fabs(li2[idx] - u2.i_tilde.at(k)) < 1e-10);
        CHECK(std::fabs(lj2[idx] - u2.j.at(k)) < 1e-10);
    }
}

TEST_CASE("triangular array structure") {
    Rng rng{4, 0, 0};
    const SeqTuple single({iid_log_inverse_gamma(rng, 1.0, 0, 999)});
    const TriangularArray t1 = build_triangular(single);
    CHECK(t1.x(1, 1).values == single[0].values);
    CHECK(t1.v(1, 1).values == single[0].values);

    const UpdateOptions o{JSeed::start_at_mean, 500, std::nullopt, 0.0};
    for (std::size_t n = 2; n <= 4; ++n) {
        const std::vector<double> lam{1.5, 1.0, 0.5, 0.3};
        std::vector<LogSeqWindow> ws;
        for (std::size_t c = 0; c < n; ++c) ws.push_back(iid_log_inverse_gamma(rng, lam[c], 0, 3999));
        const SeqTuple in(ws);
        const TriangularArray t = build_triangular(in, o);
        const SeqTuple d = daop(in, o);
        for (std::int32_t i = 1; i <= static_cast<std::int32_t>(n); ++i) {
            CHECK(max_abs_gap(t.x(i, i), d[static_cast<std::size_t>(i - 1)]) < 1e-10);
            CHECK(t.x(i, i).values == t.v(i, i).values);
            CHECK(t.x(i, 1).values == in[static_cast<std::size_t>(i - 1)].values);
        }
        // Column j is the sequential step of column j-1 driven by X^{j-1,j-1}.
        for (std::int32_t j = 2; j <= static_cast<std::int32_t>(n); ++j) {
            std::vector<LogSeqWindow> prev;
            for (std::int32_t i = j; i <= static_cast<std::int32_t>(n); ++i) prev.push_back(t.x(i, j - 1));
            const SeqTuple s = sequential_step(t.x(j - 1, j - 1), SeqTuple(prev), o);
            for (std::int32_t i = j; i <= static_cast<std::int32_t>(n); ++i)
                CHECK(max_abs_gap(t.x(i, j), s[static_cast<std::size_t>(i - j)]) < 1e-10);
        }
    }
    const SeqTuple short_in({iid_log_inverse_gamma(rng, 1.5, 0, 99), iid_log_inverse_gamma(rng, 0.5, 0, 99)});
    CHECK_THROWS_WITH(build_triangular(short_in, UpdateOptions{JSeed::start_at_mean, 150, std::nullopt, 0.0}),
                      doctest::Contains("window exhausted"));
}

TEST_CASE("triangular array rows have independent inverse-gamma marginals") {
    Rng rng{5, 0, 0};
    const std::vector<double> lam{1.5, 1.0, 0.5};
    std::vector<LogSeqWindow> ws;
    for (double l : lam) ws.push_back(iid_log_inverse_gamma(rng, l, 0, 30999));
    const TriangularArray t = build_triangular(SeqTuple(ws));
    for (std::int32_t i = 1; i <= 3; ++i)
        for (std::int32_t j = 1; j <= i; ++j) {
            const LogSeqWindow& v = t.v(i, j);
            std::vector<double> xs(v.values.begin() + (v.valid_lo - v.lo), v.values.end());
            const double l = lam[static_cast<std::size_t>(j - 1)];
            // log W with W ~ Ga^{-1}(l): P(log W <= y) = Q(l, e^{-y}).
            const auto cdf = [l](double y) { return reg_inc_gamma_upper(l, std::exp(-y)); };
            CHECK_MESSAGE(ks_one_sample(xs, cdf).p_value > 1e-3, "cell " << i << "," << j);
        }
}
