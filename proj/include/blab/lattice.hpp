#pragma once
// Lattice weights, point-to-point partition functions and the inverse-gamma
// shape function with its rho <-> direction bijection.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "blab/special_functions.hpp"

namespace blab {

struct Point {
    std::int32_t x1 = 0;
    std::int32_t x2 = 0;
    friend bool operator==(Point, Point) = default;
};

inline Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline constexpr Point kE1{1, 0};
inline constexpr Point kE2{0, 1};

// Coordinatewise order.
inline bool leq(Point a, Point b) { return a.x1 <= b.x1 && a.x2 <= b.x2; }
inline std::int64_t level(Point a) { return std::int64_t{a.x1} + a.x2; }

// Anything that can report a log-weight for a lattice site.
template <class F>
concept WeightSource = requires(const F& f, Point p) {
    { f.log_weight(p) } -> std::convertible_to<double>;
};

// I.i.d. inverse-gamma(alpha) weights, each a pure function of (seed, site).
struct WeightField {
    double alpha = 2.0;
    std::uint64_t master_seed = 0;
    double log_weight(Point x) const;
};

// Log-weight at x; same as field.log_weight(x).
double weight(const WeightField& field, Point x);

// The same weight at every site.
struct ConstantField {
    double log_value = 0.0;
    double log_weight(Point) const { return log_value; }
};

// Explicit weights on a rectangle [origin, origin + (n1-1, n2-1)].
struct MatrixField {
    Point origin{};
    std::int32_t n1 = 0;
    std::int32_t n2 = 0;
    std::vector<double> logs;  // index (x1 - origin.x1) * n2 + (x2 - origin.x2)

    double log_weight(Point x) const {
        const std::int32_t a = x.x1 - origin.x1, b = x.x2 - origin.x2;
        if (a < 0 || b < 0 || a >= n1 || b >= n2) throw std::out_of_range("MatrixField: site outside matrix");
        return logs[static_cast<std::size_t>(a) * n2 + b];
    }
};

// log Z_{u,x} for every x in the rectangle [u, v].
struct PartitionTable {
    Point u{};
    std::int32_t n1 = 0;
    std::int32_t n2 = 0;
    std::vector<double> logz;

    double at(Point x) const {
        const std::int32_t a = x.x1 - u.x1, b = x.x2 - u.x2;
        if (a < 0 || b < 0 || a >= n1 || b >= n2) throw std::out_of_range("PartitionTable: point outside table");
        return logz[static_cast<std::size_t>(a) * n2 + b];
    }
};

// Forward recursion Z_{u,x} = (Z_{u,x-e1} + Z_{u,x-e2}) W_x. The weight at u
// is excluded unless include_initial is set.
template <WeightSource F>
PartitionTable log_partition_table(const F& field, Point u, Point v, bool include_initial = false) {
    if (!leq(u, v)) throw std::invalid_argument("unordered endpoints");
    PartitionTable t{u, v.x1 - u.x1 + 1, v.x2 - u.x2 + 1, {}};
    t.logz.assign(static_cast<std::size_t>(t.n1) * t.n2, kNegInf);
    for (std::int32_t a = 0; a < t.n1; ++a) {
        for (std::int32_t b = 0; b < t.n2; ++b) {
            const std::size_t idx = static_cast<std::size_t>(a) * t.n2 + b;
            const Point x{u.x1 + a, u.x2 + b};
            if (a == 0 && b == 0) {
                t.logz[idx] = include_initial ? field.log_weight(x) : 0.0;
                continue;
            }
            const double left = a > 0 ? t.logz[idx - t.n2] : kNegInf;
            const double down = b > 0 ? t.logz[idx - 1] : kNegInf;
            t.logz[idx] = log_sum_exp(left, down) + field.log_weight(x);
        }
    }
    return t;
}

template <WeightSource F>
double log_partition(const F& field, Point u, Point v, bool include_initial = false) {
    if (!leq(u, v)) throw std::invalid_argument("unordered endpoints");
    // Single rolling column keeps memory linear.
    const std::int32_t n1 = v.x1 - u.x1 + 1, n2 = v.x2 - u.x2 + 1;
    std::vector<double> col(static_cast<std::size_t>(n2), kNegInf);
    for (std::int32_t a = 0; a < n1; ++a) {
        for (std::int32_t b = 0; b < n2; ++b) {
            const Point x{u.x1 + a, u.x2 + b};
            if (a == 0 && b == 0) {
                col[0] = include_initial ? field.log_weight(x) : 0.0;
                continue;
            }
            const double down = b > 0 ? col[b - 1] : kNegInf;
            col[b] = log_sum_exp(col[b], down) + field.log_weight(x);
        }
    }
    return col.back();
}

// Probability under the point-to-point polymer measure Q_{u,v} that the path
// visits every site in `sites`.
template <WeightSource F>
double finite_marginal(const F& field, Point u, Point v, const std::vector<Point>& sites) {
    Point prev = u;
    for (const Point& s : sites) {
        if (!leq(prev, s)) throw std::invalid_argument("incompatible sites");
        prev = s;
    }
    if (!leq(prev, v)) throw std::invalid_argument("incompatible sites");
    double acc = -log_partition(field, u, v);
    prev = u;
    for (const Point& s : sites) {
        acc += log_partition(field, prev, s);
        prev = s;
    }
    acc += log_partition(field, prev, v);
    return std::exp(acc);
}

// Interior direction (xi1, 1 - xi1).
struct Direction {
    double xi1 = 0.5;
    double xi2() const { return 1.0 - xi1; }
};

enum class Axis { e1, e2 };

struct RhoParam {
    double rho = 1.0;
    double alpha = 2.0;
};

// Validates 0 < rho < alpha.
void check_rho(const RhoParam& p);

Direction rho_to_xi(const RhoParam& p);
RhoParam xi_to_rho(double alpha, Direction d);

// Lambda(scale * xi) for the inverse-gamma(alpha) polymer.
double shape_function(double alpha, Direction d, double scale = 1.0);
double shape_function(double alpha, Axis a, double scale = 1.0);

// Gradient of Lambda at xi: (-psi0(alpha - rho), -psi0(rho)).
std::pair<double, double> shape_gradient(double alpha, Direction d);

}  // namespace blab
