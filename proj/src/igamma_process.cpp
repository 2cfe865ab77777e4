#include "blab/igamma_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "blab/lattice.hpp"
#include "blab/special_functions.hpp"

namespace blab {
namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;
using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;

// e^{-y alpha} (e^{y b} - e^{y a}) / (1 - e^{-y}), the s-integral of y * sigma over (a, b].
double s_integrated(double alpha, double a, double b, double y) {
    return std::exp(-y * (alpha - b)) * -std::expm1(-y * (b - a)) / -std::expm1(-y);
}

double integrate_tail(const auto& f, double from) {
    return Kronrod::integrate(f, from, std::numeric_limits<double>::infinity(), 15, 1e-13);
}

// int_0^{y_min} e^{-y c} expm1(y r) / h(y) dy for a kernel h vanishing at 0.
double small_jumps(double y_min, const auto& integrand) {
    if (y_min <= 0.0) return 0.0;
    return Gauss::integrate(integrand, 0.0, y_min);
}

}  // namespace

double ppp_intensity(double alpha, double s, double y) {
    return std::exp(-y * (alpha - s)) / -std::expm1(-y);
}

JumpProcessSample sample_ppp(double alpha, double rho_max, double y_min, Rng& rng, bool compensate) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(rho_max >= 0.0 && rho_max < alpha)) throw std::invalid_argument("rho_max must lie in [0, alpha)");
    if (!(y_min > 0.0) || !std::isfinite(y_min)) throw std::domain_error("infinite mass");

    JumpProcessSample out;
    out.alpha = alpha;
    out.rho_max = rho_max;
    out.y_min = y_min;
    out.compensate = compensate;
    out.u0 = rng.uniform();
    out.z0 = -log_inv_reg_inc_gamma_upper(alpha, out.u0);
    if (rho_max == 0.0) return out;

    const double c = alpha - rho_max;
    const double m = std::max(1.0, rho_max);
    const double b = std::max(y_min, 1.0 / c);
    // y-marginal of the target: e^{-cy} (1 - e^{-y rho_max}) / (y (1 - e^{-y})).
    auto target = [&](double y) { return std::exp(-c * y) * -std::expm1(-y * rho_max) / (y * -std::expm1(-y)); };
    auto envelope = [&](double y) { return y <= b ? m / y : m * std::exp(-c * y) / b; };
    auto accept_and_place = [&](double y) {
        if (rng.uniform() * envelope(y) > target(y)) return;
        // s has density proportional to e^{y s} on (0, rho_max].
        const double v = rng.uniform();
        double s = rho_max + std::log(v + (1.0 - v) * std::exp(-y * rho_max)) / y;
        s = std::clamp(s, std::numeric_limits<double>::min(), rho_max);
        out.points.push_back({s, y, rng.uniform()});
    };

    const double mass_body = m * std::log(b / y_min);
    const std::int64_t n_body = sample_poisson(rng, mass_body);
    for (std::int64_t i = 0; i < n_body; ++i) accept_and_place(y_min * std::pow(b / y_min, rng.uniform()));

    const double mass_tail = m * std::exp(-c * b) / (b * c);
    const std::int64_t n_tail = sample_poisson(rng, mass_tail);
    for (std::int64_t i = 0; i < n_tail; ++i) accept_and_place(b + sample_exponential(rng, c));

    std::sort(out.points.begin(), out.points.end(), [](const JumpPoint& p, const JumpPoint& q) { return p.s < q.s; });
    return out;
}

double small_jump_compensator(double alpha, double rho, double y_min) {
    return small_jumps(y_min, [&](double y) { return s_integrated(alpha, 0.0, rho, y); });
}

double trajectory(const JumpProcessSample& sample, double rho) {
    if (!(rho >= 0.0 && rho <= sample.rho_max)) throw std::out_of_range("rho out of range");
    double z = sample.z0;
    for (const auto& p : sample.points) {
        if (p.s > rho) break;
        z += p.y;
    }
    if (sample.compensate) z += small_jump_compensator(sample.alpha, rho, sample.y_min);
    return z;
}

std::vector<double> trajectory_on_grid(const JumpProcessSample& sample, const std::vector<double>& grid) {
    std::vector<double> out;
    out.reserve(grid.size());
    double z = sample.z0;
    std::size_t idx = 0;
    double prev = -1.0;
    for (double r : grid) {
        if (!(r >= 0.0 && r <= sample.rho_max) || r < prev) throw std::out_of_range("rho out of range");
        prev = r;
        while (idx < sample.points.size() && sample.points[idx].s <= r) z += sample.points[idx++].y;
        out.push_back(z + (sample.compensate ? small_jump_compensator(sample.alpha, r, sample.y_min) : 0.0));
    }
    return out;
}

double expected_jump_count(double alpha, double delta, double s_lo, double s_hi) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (!(s_lo <= s_hi && s_lo >= 0.0 && s_hi < alpha)) throw std::invalid_argument("bad s interval");
    if (s_lo == s_hi) return 0.0;
    return integrate_tail([&](double y) { return s_integrated(alpha, s_lo, s_hi, y) / y; }, delta);
}

std::int64_t jump_count(const JumpProcessSample& sample, double delta, double s_lo, double s_hi) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    std::int64_t n = 0;
    for (const auto& p : sample.points)
        if (p.y >= delta && p.s > s_lo && p.s <= s_hi) ++n;
    return n;
}

double laplace_exponent(double alpha, double rho, double t, double y_min) {
    return integrate_tail(
        [&](double y) { return -std::expm1(-t * y) * s_integrated(alpha, 0.0, rho, y) / y; }, y_min);
}

KsResult marginal_check(double alpha, double rho, std::size_t n, std::uint64_t seed) {
    if (!(rho > 0.0 && rho < alpha)) throw std::invalid_argument("rho must lie in (0, alpha)");
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng{seed, i, 0};
        z[i] = trajectory(sample_ppp(alpha, rho, 1e-6, rng), rho);
    }
    const double shape = alpha - rho;
    return ks_one_sample(std::move(z), [shape](double v) { return reg_inc_gamma_upper(shape, std::exp(-v)); });
}

CoupledTrajectories zero_temp_couple(const JumpProcessSample& reference, double alpha,
                                     const std::vector<double>& grid) {
    if (reference.alpha != 1.0) throw std::invalid_argument("reference sample must have alpha = 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    CoupledTrajectories c;
    c.grid = grid;
    const double y_min = reference.y_min;
    double zp = -alpha * log_inv_reg_inc_gamma_upper(alpha, reference.u0);
    double z0 = -std::log1p(-reference.u0);
    std::size_t idx = 0;
    double prev = -1.0;
    for (double r : grid) {
        if (!(r >= 0.0 && r <= reference.rho_max) || r < prev) throw std::out_of_range("rho out of range");
        prev = r;
        for (; idx < reference.points.size() && reference.points[idx].s <= r; ++idx) {
            const auto& p = reference.points[idx];
            const double keep0 = -std::expm1(-p.y);
            if (p.u <= keep0 / -std::expm1(-p.y / alpha)) zp += p.y;
            if (p.u <= keep0) z0 += p.y;
        }
        double comp_p = 0.0, comp_0 = 0.0;
        if (reference.compensate) {
            comp_p = small_jumps(y_min, [&](double y) { return std::exp(-y) * std::expm1(y * r) / -std::expm1(-y / alpha); });
            comp_0 = small_jumps(y_min, [&](double y) { return std::exp(-y) * std::expm1(y * r); });
        }
        c.positive.push_back(zp + comp_p);
        c.zero.push_back(z0 + comp_0);
    }
    return c;
}

double sup_gap(const CoupledTrajectories& c) {
    double m = 0.0;
    for (std::size_t i = 0; i < c.grid.size(); ++i) m = std::max(m, std::fabs(c.positive[i] - c.zero[i]));
    return m;
}

double reparam_gap(double alpha, double xi1) {
    if (!(xi1 > 0.0 && xi1 < 1.0)) throw std::invalid_argument("direction must be interior");
    const double a = std::sqrt(1.0 - xi1), b = std::sqrt(xi1);
    const double s0 = a / (a + b);
    const Direction u = rho_to_xi({alpha * s0, alpha});
    return 2.0 * std::fabs(u.xi1 - xi1);
}

double reparam_bound(double alpha, int points) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (points < 1) throw std::invalid_argument("points must be positive");
    double m = 0.0;
    for (int i = 1; i <= points; ++i) m = std::max(m, reparam_gap(alpha, static_cast<double>(i) / (points + 1)));
    return m;
}

}  // namespace blab
