#include "blab/seqmaps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blab/special_functions.hpp"

namespace blab {
namespace {

// Log-domain primitives for either scalar type.
template <class Real>
Real exp_(const Real& x) {
    using std::exp;
    return exp(x);
}
template <class Real>
Real log_(const Real& x) {
    using std::log;
    return log(x);
}
template <class Real>
Real log1p_(const Real& x) {
    using std::log1p;
    return log1p(x);
}
template <class Real>
Real expm1_(const Real& x) {
    using std::expm1;
    return expm1(x);
}

template <class Real>
Real softplus_(const Real& a) {
    return a > 0 ? Real(a + log1p_(exp_(Real(-a)))) : log1p_(exp_(a));
}

// log(e^a + e^b) for finite arguments.
template <class Real>
Real lse_(const Real& a, const Real& b) {
    return a > b ? Real(a + softplus_(Real(b - a))) : Real(b + softplus_(Real(a - b)));
}

// log(e^a - 1), a > 0.
template <class Real>
Real log_expm1_(const Real& a) {
    return a > 30 ? Real(a + log1p_(Real(-exp_(Real(-a))))) : log_(expm1_(a));
}

template <class Real>
void check_shared_range(const BasicLogSeqWindow<Real>& a, const BasicLogSeqWindow<Real>& b) {
    if (a.lo != b.lo || a.hi() != b.hi()) throw std::invalid_argument("windows must share one index range");
}

}  // namespace

LogSeqWindow constant_window(std::int64_t lo, std::int64_t hi, double log_value) {
    if (hi < lo) throw std::invalid_argument("window: hi < lo");
    LogSeqWindow w;
    w.lo = lo;
    w.valid_lo = lo;
    w.values.assign(static_cast<std::size_t>(hi - lo + 1), log_value);
    w.cesaro_hint = log_value;
    return w;
}

LogSeqWindow iid_log_inverse_gamma(Rng& rng, double lambda, std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("window: hi < lo");
    LogSeqWindow w;
    w.lo = lo;
    w.valid_lo = lo;
    w.values.resize(static_cast<std::size_t>(hi - lo + 1));
    for (double& v : w.values) v = sample_log_inverse_gamma(rng, lambda);
    w.cesaro_hint = -digamma(lambda);
    return w;
}

template <class Real>
double cesaro_mean(const BasicLogSeqWindow<Real>& w) {
    if (w.size() < 2) throw std::invalid_argument("cesaro_mean: window length must be at least 2");
    Real sum = 0;
    for (const Real& v : w.values) sum += v;
    return static_cast<double>(sum) / static_cast<double>(w.size());
}

template <class Real>
double cesaro_estimate(const BasicLogSeqWindow<Real>& w) {
    return w.cesaro_hint ? *w.cesaro_hint : cesaro_mean(w);
}

template <class Real>
BasicLogSeqWindow<Real> trim(const BasicLogSeqWindow<Real>& w, std::int64_t new_lo) {
    if (new_lo < w.lo || new_lo > w.hi()) throw std::out_of_range("trim: new lower end outside window");
    BasicLogSeqWindow<Real> out;
    out.lo = new_lo;
    out.values.assign(w.values.begin() + (new_lo - w.lo), w.values.end());
    out.cesaro_hint = w.cesaro_hint;
    out.valid_lo = std::max(w.valid_lo, new_lo);
    return out;
}

template <class Real>
BasicSeqTuple<Real>::BasicSeqTuple(std::vector<BasicLogSeqWindow<Real>> ws) : windows(std::move(ws)) {
    if (windows.empty()) throw std::invalid_argument("SeqTuple: empty");
    for (const auto& w : windows)
        if (w.lo != windows.front().lo || w.hi() != windows.front().hi())
            throw std::invalid_argument("SeqTuple: windows must share one index range");
}

template <class Real>
std::int64_t BasicSeqTuple<Real>::valid_lo() const {
    std::int64_t v = windows.front().valid_lo;
    for (const auto& w : windows) v = std::max(v, w.valid_lo);
    return v;
}

template <class Real>
std::int64_t resolve_burn_in(const BasicLogSeqWindow<Real>& w, const BasicLogSeqWindow<Real>& i,
                             const UpdateOptions& opts) {
    const double cw = cesaro_estimate(w);
    const double ci = cesaro_estimate(i);
    if (cw >= ci + opts.order_tolerance) throw std::domain_error("Cesaro order violated");
    const std::int64_t length = w.hi() - w.lo;
    if (opts.burn_in) {
        if (*opts.burn_in < 0) throw std::invalid_argument("burn_in must be nonnegative");
        if (*opts.burn_in >= length) throw std::length_error("window too short");
        return *opts.burn_in;
    }
    const double gap = ci - cw;
    const double b = gap > 0.0 ? std::ceil(40.0 / gap) : HUGE_VAL;
    if (!(b < static_cast<double>(length))) throw std::length_error("window too short");
    return static_cast<std::int64_t>(b);
}

template <class Real>
BasicUpdateOutput<Real> update(const BasicLogSeqWindow<Real>& w, const BasicLogSeqWindow<Real>& i,
                               const UpdateOptions& opts) {
    check_shared_range(w, i);
    const std::int64_t burn = resolve_burn_in(w, i, opts);

    Real lj_prev;
    if (opts.log_j_seed) {
        lj_prev = *opts.log_j_seed;
    } else if (opts.seed == JSeed::start_at_weight) {
        lj_prev = w.values.front();
    } else {
        // Fixed point J = W c / (c - W) with both replaced by their Cesaro means.
        const double cw = cesaro_estimate(w), ci = cesaro_estimate(i);
        lj_prev = cw - std::log1p(-std::exp(cw - ci));
    }

    BasicUpdateOutput<Real> out;
    const std::size_t n = w.size();
    for (auto* win : {&out.i_tilde, &out.j, &out.w_tilde}) {
        win->lo = w.lo;
        win->values.resize(n);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Real& lw = w.values[k];
        const Real& li = i.values[k];
        const Real a = lj_prev - li;
        out.i_tilde.values[k] = lw + softplus_(Real(-a));
        out.w_tilde.values[k] = -lse_(Real(-li), Real(-lj_prev));
        lj_prev = lw + softplus_(a);
        out.j.values[k] = lj_prev;
    }
    out.valid_lo = std::max({w.lo + burn, w.valid_lo, i.valid_lo});
    out.i_tilde.cesaro_hint = i.cesaro_hint;
    out.w_tilde.cesaro_hint = w.cesaro_hint;
    out.i_tilde.valid_lo = out.j.valid_lo = out.w_tilde.valid_lo = out.valid_lo;
    return out;
}

template <class Real>
BasicLogSeqWindow<Real> inverse_h(const BasicLogSeqWindow<Real>& w, const BasicLogSeqWindow<Real>& i_tilde) {
    check_shared_range(w, i_tilde);
    const std::size_t n = w.size();
    if (n < 2) throw std::length_error("window too short");
    std::vector<Real> lem1(n);  // log(e^{d_k} - 1), d_k = log(I~_k / W_k)
    for (std::size_t k = 0; k < n; ++k) {
        const Real d = i_tilde.values[k] - w.values[k];
        if (!(d > 0)) throw std::domain_error("not in image");
        lem1[k] = log_expm1_(d);
    }
    BasicLogSeqWindow<Real> out;
    out.lo = w.lo + 1;
    out.values.resize(n - 1);
    for (std::size_t k = 1; k < n; ++k) out.values[k - 1] = lem1[k] + i_tilde.values[k - 1] - lem1[k - 1];
    out.cesaro_hint = i_tilde.cesaro_hint;
    out.valid_lo = std::max(w.valid_lo, i_tilde.valid_lo) + 1;
    return out;
}

template <class Real>
BasicLogSeqWindow<Real> d_iterated(const BasicSeqTuple<Real>& inputs, const UpdateOptions& opts) {
    // Right fold D(I^1, D(I^2, ... I^N)).
    BasicLogSeqWindow<Real> acc = inputs.windows.back();
    for (std::size_t a = inputs.size() - 1; a-- > 0;) acc = update(inputs[a], acc, opts).i_tilde;
    return acc;
}

template <class Real>
BasicSeqTuple<Real> daop(const BasicSeqTuple<Real>& inputs, const UpdateOptions& opts) {
    std::vector<BasicLogSeqWindow<Real>> out;
    out.reserve(inputs.size());
    for (std::size_t b = 0; b < inputs.size(); ++b) {
        BasicLogSeqWindow<Real> acc = inputs[b];
        for (std::size_t a = b; a-- > 0;) acc = update(inputs[a], acc, opts).i_tilde;
        out.push_back(std::move(acc));
    }
    return BasicSeqTuple<Real>(std::move(out));
}

template <class Real>
BasicSeqTuple<Real> haop(const BasicSeqTuple<Real>& inputs) {
    // Level j+1 holds H(L_j[0], L_j[i]) for i >= 1; component m is L_{m-1}[0].
    const std::size_t n = inputs.size();
    std::vector<BasicLogSeqWindow<Real>> result;
    result.reserve(n);
    std::vector<BasicLogSeqWindow<Real>> level = inputs.windows;
    while (!level.empty()) {
        result.push_back(level.front());
        std::vector<BasicLogSeqWindow<Real>> next;
        next.reserve(level.size() - 1);
        for (std::size_t i = 1; i < level.size(); ++i) next.push_back(inverse_h(level.front(), level[i]));
        level = std::move(next);
    }
    const std::int64_t common_lo = inputs.lo() + static_cast<std::int64_t>(n) - 1;
    for (auto& w : result) w = trim(w, common_lo);
    return BasicSeqTuple<Real>(std::move(result));
}

template <class Real>
BasicSeqTuple<Real> parallel_step(const BasicLogSeqWindow<Real>& w, const BasicSeqTuple<Real>& state,
                                  const UpdateOptions& opts) {
    std::vector<BasicLogSeqWindow<Real>> out;
    out.reserve(state.size());
    for (const auto& comp : state.windows) out.push_back(update(w, comp, opts).i_tilde);
    return BasicSeqTuple<Real>(std::move(out));
}

template <class Real>
BasicSeqTuple<Real> sequential_step(const BasicLogSeqWindow<Real>& w, const BasicSeqTuple<Real>& state,
                                    const UpdateOptions& opts) {
    std::vector<BasicLogSeqWindow<Real>> out;
    out.reserve(state.size());
    BasicLogSeqWindow<Real> weights = w;
    for (const auto& comp : state.windows) {
        BasicUpdateOutput<Real> u = update(weights, comp, opts);
        out.push_back(std::move(u.i_tilde));
        weights = std::move(u.w_tilde);
    }
    return BasicSeqTuple<Real>(std::move(out));
}

template <class Real>
double max_abs_gap(const BasicLogSeqWindow<Real>& a, const BasicLogSeqWindow<Real>& b) {
    const std::int64_t lo = std::max({a.valid_lo, b.valid_lo, a.lo, b.lo});
    const std::int64_t hi = std::min(a.hi(), b.hi());
    if (lo > hi) throw std::length_error("no common valid range");
    double m = 0.0;
    for (std::int64_t k = lo; k <= hi; ++k) {
        const Real diff = a.at(k) - b.at(k);
        m = std::max(m, std::fabs(static_cast<double>(diff)));
    }
    return m;
}

#define BLAB_SEQMAPS_INSTANTIATE(R)                                                                  \
    template double cesaro_mean(const BasicLogSeqWindow<R>&);                                      \
    template double cesaro_estimate(const BasicLogSeqWindow<R>&);                                  \
    template BasicLogSeqWindow<R> trim(const BasicLogSeqWindow<R>&, std::int64_t);                 \
    template struct BasicSeqTuple<R>;                                                              \
    template std::int64_t resolve_burn_in(const BasicLogSeqWindow<R>&, const BasicLogSeqWindow<R>&, \
                                          const UpdateOptions&);                                   \
    template BasicUpdateOutput<R> update(const BasicLogSeqWindow<R>&, const BasicLogSeqWindow<R>&, \
                                         const UpdateOptions&);                                    \
    template BasicLogSeqWindow<R> inverse_h(const BasicLogSeqWindow<R>&, const BasicLogSeqWindow<R>&); \
    template BasicLogSeqWindow<R> d_iterated(const BasicSeqTuple<R>&, const UpdateOptions&);       \
    template BasicSeqTuple<R> daop(const BasicSeqTuple<R>&, const UpdateOptions&);                 \
    template BasicSeqTuple<R> haop(const BasicSeqTuple<R>&);                                       \
    template BasicSeqTuple<R> parallel_step(const BasicLogSeqWindow<R>&, const BasicSeqTuple<R>&,  \
                                            const UpdateOptions&);                                 \
    template BasicSeqTuple<R> sequential_step(const BasicLogSeqWindow<R>&, const BasicSeqTuple<R>&, \
                                              const UpdateOptions&);                               \
    template double max_abs_gap(const BasicLogSeqWindow<R>&, const BasicLogSeqWindow<R>&);

BLAB_SEQMAPS_INSTANTIATE(double)
BLAB_SEQMAPS_INSTANTIATE(Quad)

}  // namespace blab
