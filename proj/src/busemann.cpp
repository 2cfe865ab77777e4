#include "blab/busemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blab/grsk.hpp"
#include "blab/special_functions.hpp"

namespace blab {
namespace {

void check_rect(const Rect& r) {
    if (r.hi <= r.lo) throw std::invalid_argument("rect: need hi > lo");
    if (r.T < 0) throw std::invalid_argument("rect: need T >= 0");
    if (r.lo < INT32_MIN || r.hi > INT32_MAX) throw std::invalid_argument("rect: columns must fit in 32 bits");
}

CocycleGrid empty_grid(const Rect& rect, const RhoParam& rho) {
    CocycleGrid g;
    g.rect = rect;
    g.rho = rho;
    const auto rows = static_cast<std::size_t>(rect.T) + 1;
    g.log_i.resize(rows);
    g.log_j.resize(rows);
    g.log_w.resize(rows);
    return g;
}

}  // namespace

LogSeqWindow field_row(const WeightField& field, std::int32_t t, std::int64_t lo, std::int64_t hi) {
    LogSeqWindow w;
    w.lo = lo;
    w.valid_lo = lo;
    w.values.resize(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t k = lo; k <= hi; ++k)
        w.values[static_cast<std::size_t>(k - lo)] = field.log_weight({static_cast<std::int32_t>(k), t});
    w.cesaro_hint = -digamma(field.alpha);
    return w;
}

CocycleGrid stationary_cocycle(const WeightField& field, const RhoParam& rho, const Rect& rect, Rng& rng,
                               const UpdateOptions& opts) {
    check_rho(rho);
    check_rect(rect);
    if (rho.alpha != field.alpha) throw std::invalid_argument("rho.alpha must match the field");
    CocycleGrid g = empty_grid(rect, rho);
    LogSeqWindow row = iid_log_inverse_gamma(rng, rho.alpha - rho.rho, rect.lo, rect.hi);
    g.log_w[0] = field_row(field, 0, rect.lo, rect.hi).values;
    g.log_i[0] = row.values;
    std::int64_t bulk = rect.lo;
    for (std::int32_t t = 1; t <= rect.T; ++t) {
        const LogSeqWindow w = field_row(field, t, rect.lo, rect.hi);
        // Ga^{-1}(rho) on the left column and Ga^{-1}(alpha - rho) on the bottom
        // row make the quadrant exactly stationary.
        UpdateOptions o = opts;
        if (!o.log_j_seed) o.log_j_seed = sample_log_inverse_gamma(rng, rho.rho);
        UpdateOutput u = update(w, row, o);
        bulk = std::max(bulk, u.valid_lo);
        g.log_w[t] = w.values;
        g.log_j[t] = std::move(u.j.values);
        row = std::move(u.i_tilde);
        g.log_i[t] = row.values;
    }
    g.bulk_lo = rect.T > 0 ? bulk : rect.lo;
    return g;
}

namespace {

// Largest column at which two runs differ by more than tol, or lo - 1.
std::int64_t last_disagreement(const std::vector<double>& a, const std::vector<double>& b, std::int64_t lo,
                               double tol) {
    for (std::size_t k = a.size(); k-- > 0;)
        if (std::fabs(a[k] - b[k]) > tol) return lo + static_cast<std::int64_t>(k);
    return lo - 1;
}

}  // namespace

std::vector<CocycleGrid> parallel_chain(const WeightField& field, const std::vector<RhoParam>& rhos,
                                        const Rect& rect, Rng& rng, const UpdateOptions& opts) {
    check_rect(rect);
    if (rhos.empty()) throw std::invalid_argument("parallel_chain: no directions");
    std::vector<double> sorted;
    for (const auto& r : rhos) {
        check_rho(r);
        if (r.alpha != field.alpha) throw std::invalid_argument("rho.alpha must match the field");
        sorted.push_back(r.rho);
    }
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const std::size_t m_count = sorted.size();

    // Level 0: diagonal of the array over (W(0), I^1, ..., I^m), rho ascending.
    std::vector<LogSeqWindow> inputs;
    inputs.push_back(field_row(field, 0, rect.lo, rect.hi));
    const Rng base = rng.split(rng.next_u64());
    for (std::size_t m = 0; m < m_count; ++m) {
        Rng sub = base.split(m + 1);
        inputs.push_back(iid_log_inverse_gamma(sub, field.alpha - sorted[m], rect.lo, rect.hi));
    }
    const TriangularArray arr = build_triangular(SeqTuple(inputs), opts);

    // The left boundary is only approximately stationary for the joint law. A
    // shadow run with different boundary data (raw level-0 inputs left of the
    // valid range, deterministic J seeds) marks where the boundary still
    // matters; the bulk starts past the last disagreement.
    std::vector<LogSeqWindow> state, shadow;
    std::int64_t bulk = rect.lo;
    for (std::size_t m = 0; m < m_count; ++m) {
        const auto i = static_cast<std::int32_t>(m + 2);
        state.push_back(arr.x(i, i));
        bulk = std::max(bulk, state.back().valid_lo);
        LogSeqWindow sh = state.back();
        for (std::int64_t k = sh.lo; k < sh.valid_lo; ++k) sh.at(k) = inputs[m + 1].at(k);
        shadow.push_back(std::move(sh));
    }

    std::vector<CocycleGrid> grids;
    for (double r : sorted) grids.push_back(empty_grid(rect, {r, field.alpha}));
    for (std::size_t m = 0; m < m_count; ++m) {
        grids[m].log_w[0] = inputs[0].values;
        grids[m].log_i[0] = state[m].values;
    }
    Rng seeds = base.split(0);
    constexpr double kAgree = 1e-12;
    for (std::int32_t t = 1; t <= rect.T; ++t) {
        const LogSeqWindow w = field_row(field, t, rect.lo, rect.hi);
        const double u0 = seeds.uniform();
        for (std::size_t m = 0; m < m_count; ++m) {
            // Quantile coupling keeps the seeds ordered across directions.
            UpdateOptions o = opts;
            if (!o.log_j_seed) o.log_j_seed = -log_inv_reg_inc_gamma_upper(sorted[m], u0);
            UpdateOutput u = update(w, state[m], o);
            UpdateOutput v = update(w, shadow[m], opts);
            bulk = std::max({bulk, u.valid_lo, v.valid_lo,
                             last_disagreement(u.i_tilde.values, v.i_tilde.values, rect.lo, kAgree) + 1,
                             last_disagreement(u.j.values, v.j.values, rect.lo, kAgree) + 1});
            grids[m].log_w[t] = w.values;
            grids[m].log_j[t] = std::move(u.j.values);
            state[m] = std::move(u.i_tilde);
            shadow[m] = std::move(v.i_tilde);
            grids[m].log_i[t] = state[m].values;
        }
    }
    if (bulk > rect.hi) throw std::length_error("parallel_chain: window exhausted");
    for (auto& g : grids) g.bulk_lo = bulk;

    std::vector<CocycleGrid> out;
    out.reserve(rhos.size());
    for (const auto& r : rhos) {
        const auto it = std::lower_bound(sorted.begin(), sorted.end(), r.rho);
        out.push_back(grids[static_cast<std::size_t>(it - sorted.begin())]);
    }
    return out;
}

double recovery_residual(const CocycleGrid& g) {
    double m = 0.0;
    for (std::int32_t t = 1; t <= g.rect.T; ++t)
        for (std::int64_t k = g.bulk_lo; k <= g.rect.hi; ++k) {
            const double lw = g.lw(k, t);
            const double r = std::exp(lw - g.li(k, t)) + std::exp(lw - g.lj(k, t)) - 1.0;
            m = std::max(m, std::fabs(r));
        }
    return m;
}

double additivity_residual(const CocycleGrid& g) {
    double m = 0.0;
    for (std::int32_t t = 1; t <= g.rect.T; ++t)
        for (std::int64_t k = std::max(g.bulk_lo, g.rect.lo + 1); k <= g.rect.hi; ++k) {
            const double r = g.lj(k, t) + g.li(k, t - 1) - g.li(k, t) - g.lj(k - 1, t);
            m = std::max(m, std::fabs(r));
        }
    return m;
}

Point direction_point(Point base, Direction d, std::int32_t depth) {
    const auto a = static_cast<std::int32_t>(std::floor(depth * d.xi1 + 0.5));
    return {base.x1 - a, base.x2 - (depth - a)};
}

double busemann_ratio_estimate(const WeightField& field, Point x, Point y, Direction d, std::int32_t depth) {
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    if (x == y) return 0.0;
    const Point base{std::min(x.x1, y.x1), std::min(x.x2, y.x2)};
    const Point top{std::max(x.x1, y.x1), std::max(x.x2, y.x2)};
    const Point xl = direction_point(base, d, depth);
    const PartitionTable t = log_partition_table(field, xl, top);
    return t.at(y) - t.at(x);
}

EternalSolution eternal_from_cocycle(const CocycleGrid& grid, Point base) {
    if (base.x1 < grid.bulk_lo || base.x1 > grid.rect.hi || base.x2 < 0 || base.x2 > grid.rect.T)
        throw std::out_of_range("base outside bulk");
    EternalSolution z;
    z.base = base;
    z.k_lo = grid.bulk_lo;
    z.k_hi = grid.rect.hi;
    z.T = grid.rect.T;
    const auto width = static_cast<std::size_t>(z.k_hi - z.k_lo + 1);
    z.log_z.assign(static_cast<std::size_t>(z.T) + 1, std::vector<long double>(width, 0.0L));

    // Base column first, then each row horizontally from it.
    const std::int64_t kb = base.x1;
    std::vector<long double> col(static_cast<std::size_t>(z.T) + 1, 0.0L);
    for (std::int32_t t = base.x2 + 1; t <= z.T; ++t) col[t] = col[t - 1] + grid.lj(kb, t);
    for (std::int32_t t = base.x2; t-- > 0;) col[t] = col[t + 1] - grid.lj(kb, t + 1);
    for (std::int32_t t = 0; t <= z.T; ++t) {
        auto& row = z.log_z[t];
        row[static_cast<std::size_t>(kb - z.k_lo)] = col[t];
        for (std::int64_t k = kb + 1; k <= z.k_hi; ++k)
            row[static_cast<std::size_t>(k - z.k_lo)] = row[static_cast<std::size_t>(k - 1 - z.k_lo)] + grid.li(k, t);
        for (std::int64_t k = kb - 1; k >= z.k_lo; --k)
            row[static_cast<std::size_t>(k - z.k_lo)] = row[static_cast<std::size_t>(k + 1 - z.k_lo)] - grid.li(k + 1, t);
    }
    return z;
}

double she_residual(const CocycleGrid& grid, const EternalSolution& z) {
    double m = 0.0;
    for (std::int32_t t = 1; t <= z.T; ++t)
        for (std::int64_t k = z.k_lo + 1; k <= z.k_hi; ++k) {
            const Point x{static_cast<std::int32_t>(k), t};
            const long double lz = z.at(x);
            const long double s = std::exp(z.at(x - kE1) - lz) + std::exp(z.at(x - kE2) - lz);
            const long double r = std::exp(static_cast<long double>(grid.lw(k, t))) * s - 1.0L;
            m = std::max(m, static_cast<double>(std::fabs(r)));
        }
    return m;
}

std::pair<double, double> backward_probabilities(const CocycleGrid& grid, Point x) {
    if (!grid.in_bulk(x)) throw std::out_of_range("cone exits bulk");
    const double lw = grid.lw(x.x1, x.x2);
    return {std::exp(lw - grid.li(x.x1, x.x2)), std::exp(lw - grid.lj(x.x1, x.x2))};
}

std::vector<Point> gibbs_backward_walk(const CocycleGrid& grid, Point v, std::int32_t steps, Rng& rng) {
    std::vector<Point> path{v};
    path.reserve(static_cast<std::size_t>(steps) + 1);
    Point x = v;
    for (std::int32_t s = 0; s < steps; ++s) {
        const double p1 = backward_probabilities(grid, x).first;
        x = rng.uniform() < p1 ? x - kE1 : x - kE2;
        path.push_back(x);
    }
    return path;
}

Rect chain_rect(double alpha, std::vector<double> rhos) {
    if (rhos.empty()) throw std::invalid_argument("empty rho grid");
    for (double r : rhos) check_rho({r, alpha});
    auto burn_for = [](double gap) { return static_cast<std::int64_t>(std::ceil(40.0 / gap)); };
    std::sort(rhos.begin(), rhos.end());
    rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());
    std::int64_t width = 0;
    double prev = -digamma(alpha);
    for (double r : rhos) {
        const double c = -digamma(alpha - r);
        width += burn_for(c - prev);
        prev = c;
    }
    width += burn_for(-digamma(alpha - rhos.front()) + digamma(alpha));
    return {0, 3 * width + 32, 1};
}

}  // namespace blab
