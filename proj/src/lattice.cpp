#include "blab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blab {
namespace {
constexpr std::uint64_t kWeightSalt = 0x57e1647f1e1dULL;
}

double WeightField::log_weight(Point x) const {
    Rng rng{master_seed, site_stream(x.x1, x.x2, kWeightSalt), 0};
    return sample_log_inverse_gamma(rng, alpha);
}

double weight(const WeightField& field, Point x) { return field.log_weight(x); }

void check_rho(const RhoParam& p) {
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) throw std::invalid_argument("alpha must be positive");
    if (!(p.rho > 0.0 && p.rho < p.alpha)) throw std::invalid_argument("rho must lie in (0, alpha)");
}

Direction rho_to_xi(const RhoParam& p) {
    check_rho(p);
    const double a = trigamma(p.rho);
    const double b = trigamma(p.alpha - p.rho);
    return {a / (a + b)};
}

RhoParam xi_to_rho(double alpha, Direction d) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(d.xi1 > 0.0 && d.xi1 < 1.0)) throw std::invalid_argument("direction must be interior");
    // f increases in rho.
    auto f = [&](double r) { return d.xi1 * trigamma(alpha - r) - d.xi2() * trigamma(r); };
    const double eps = 1e-9 * std::min(1.0, alpha);
    double lo = eps, hi = alpha - eps;
    if (f(lo) > 0.0 || f(hi) < 0.0) throw std::runtime_error("xi_to_rho: root not bracketed");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * alpha; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) lo = mid; else hi = mid;
    }
    return {0.5 * (lo + hi), alpha};
}

double shape_function(double alpha, Direction d, double scale) {
    if (!(scale >= 0.0)) throw std::invalid_argument("scale must be nonnegative");
    const double rho = xi_to_rho(alpha, d).rho;
    return scale * (-d.xi1 * digamma(alpha - rho) - d.xi2() * digamma(rho));
}

double shape_function(double alpha, Axis, double scale) {
    if (!(scale >= 0.0)) throw std::invalid_argument("scale must be nonnegative");
    return -scale * digamma(alpha);
}

std::pair<double, double> shape_gradient(double alpha, Direction d) {
    const double rho = xi_to_rho(alpha, d).rho;
    return {-digamma(alpha - rho), -digamma(rho)};
}

}  // namespace blab
