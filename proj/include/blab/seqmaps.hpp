#pragma once
// Finite windows of bi-infinite positive sequences (stored as logs) and the
// update maps acting on them.
//
// Every map keeps the full storage range [lo, hi] of its inputs and records in
// valid_lo the first index at which the output has forgotten the boundary
// seed. Identity checks only compare on [valid_lo, hi].
//
// The maps are instantiated for double and for a 113-bit quad type. The
// inverse maps amplify rounding by 1/log(D(W,I)/W), which compounds across
// the levels of H^(N); quad storage keeps those inversions exact to double
// precision.

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/float128.hpp>

#include "blab/rng.hpp"

namespace blab {

using Quad = boost::multiprecision::float128;

template <class Real>
struct BasicLogSeqWindow {
    std::int64_t lo = 0;
    std::vector<Real> values;           // values[k - lo] = log I_k
    std::optional<double> cesaro_hint;  // known Cesaro mean, if any
    std::int64_t valid_lo = 0;

    std::int64_t hi() const { return lo + static_cast<std::int64_t>(values.size()) - 1; }
    std::size_t size() const { return values.size(); }
    const Real& at(std::int64_t k) const { return values[static_cast<std::size_t>(k - lo)]; }
    Real& at(std::int64_t k) { return values[static_cast<std::size_t>(k - lo)]; }
};

using LogSeqWindow = BasicLogSeqWindow<double>;
using QuadLogSeqWindow = BasicLogSeqWindow<Quad>;

LogSeqWindow constant_window(std::int64_t lo, std::int64_t hi, double log_value);
// I.i.d. log Ga^{-1}(lambda) entries, hint -psi0(lambda).
LogSeqWindow iid_log_inverse_gamma(Rng& rng, double lambda, std::int64_t lo, std::int64_t hi);

template <class To, class From>
BasicLogSeqWindow<To> convert_window(const BasicLogSeqWindow<From>& w) {
    BasicLogSeqWindow<To> out{w.lo, {}, w.cesaro_hint, w.valid_lo};
    out.values.reserve(w.size());
    for (const From& v : w.values) out.values.push_back(static_cast<To>(v));
    return out;
}

// Arithmetic mean of the stored log-values.
template <class Real>
double cesaro_mean(const BasicLogSeqWindow<Real>& w);
// The hint when present, otherwise cesaro_mean.
template <class Real>
double cesaro_estimate(const BasicLogSeqWindow<Real>& w);
// Copy restricted to [new_lo, hi].
template <class Real>
BasicLogSeqWindow<Real> trim(const BasicLogSeqWindow<Real>& w, std::int64_t new_lo);

template <class Real>
struct BasicSeqTuple {
    std::vector<BasicLogSeqWindow<Real>> windows;

    BasicSeqTuple() = default;
    explicit BasicSeqTuple(std::vector<BasicLogSeqWindow<Real>> ws);
    std::size_t size() const { return windows.size(); }
    const BasicLogSeqWindow<Real>& operator[](std::size_t i) const { return windows[i]; }
    std::int64_t lo() const { return windows.front().lo; }
    std::int64_t hi() const { return windows.front().hi(); }
    // Largest valid_lo over the components.
    std::int64_t valid_lo() const;
};

using SeqTuple = BasicSeqTuple<double>;
using QuadSeqTuple = BasicSeqTuple<Quad>;

template <class To, class From>
BasicSeqTuple<To> convert_tuple(const BasicSeqTuple<From>& t) {
    std::vector<BasicLogSeqWindow<To>> ws;
    for (const auto& w : t.windows) ws.push_back(convert_window<To>(w));
    return BasicSeqTuple<To>(std::move(ws));
}

enum class JSeed { start_at_mean, start_at_weight };

struct UpdateOptions {
    JSeed seed = JSeed::start_at_mean;
    std::optional<std::int64_t> burn_in;  // default ceil(40 / gap)
    std::optional<double> log_j_seed;     // explicit log J_{lo-1}; overrides `seed`
    double order_tolerance = 0.0;
};

template <class Real>
struct BasicUpdateOutput {
    BasicLogSeqWindow<Real> i_tilde;  // D(W, I)
    BasicLogSeqWindow<Real> j;        // S(W, I)
    BasicLogSeqWindow<Real> w_tilde;  // R(W, I)
    std::int64_t valid_lo = 0;
};

using UpdateOutput = BasicUpdateOutput<double>;

// Burn-in implied by the Cesaro gap between i and w, or by opts.burn_in.
template <class Real>
std::int64_t resolve_burn_in(const BasicLogSeqWindow<Real>& w, const BasicLogSeqWindow<Real>& i,
                             const UpdateOptions& opts);

template <class Real>
BasicUpdateOutput<Real> update(const BasicLogSeqWindow<Real>& w, const BasicLogSeqWindow<Real>& i,
                               const UpdateOptions& opts = {});

// Recovers I from (W, D(W, I)); the result starts at lo + 1.
template <class Real>
BasicLogSeqWindow<Real> inverse_h(const BasicLogSeqWindow<Real>& w, const BasicLogSeqWindow<Real>& i_tilde);

template <class Real>
BasicLogSeqWindow<Real> d_iterated(const BasicSeqTuple<Real>& inputs, const UpdateOptions& opts = {});
template <class Real>
BasicSeqTuple<Real> daop(const BasicSeqTuple<Real>& inputs, const UpdateOptions& opts = {});
// Left inverse of daop. Component m loses m - 1 leading indices; the result is
// trimmed to the common range [lo + N - 1, hi].
template <class Real>
BasicSeqTuple<Real> haop(const BasicSeqTuple<Real>& inputs);

template <class Real>
BasicSeqTuple<Real> parallel_step(const BasicLogSeqWindow<Real>& w, const BasicSeqTuple<Real>& state,
                                  const UpdateOptions& opts = {});
template <class Real>
BasicSeqTuple<Real> sequential_step(const BasicLogSeqWindow<Real>& w, const BasicSeqTuple<Real>& state,
                                    const UpdateOptions& opts = {});

// Max |a_k - b_k| over the common valid range of the two windows.
template <class Real>
double max_abs_gap(const BasicLogSeqWindow<Real>& a, const BasicLogSeqWindow<Real>& b);

#define BLAB_SEQMAPS_EXTERN(R)                                                                              \
    extern template double cesaro_mean(const BasicLogSeqWindow<R>&);                                      \
    extern template double cesaro_estimate(const BasicLogSeqWindow<R>&);                                  \
    extern template BasicLogSeqWindow<R> trim(const BasicLogSeqWindow<R>&, std::int64_t);                 \
    extern template struct BasicSeqTuple<R>;                                                              \
    extern template std::int64_t resolve_burn_in(const BasicLogSeqWindow<R>&, const BasicLogSeqWindow<R>&, \
                                                 const UpdateOptions&);                                   \
    extern template BasicUpdateOutput<R> update(const BasicLogSeqWindow<R>&, const BasicLogSeqWindow<R>&, \
                                                const UpdateOptions&);                                    \
    extern template BasicLogSeqWindow<R> inverse_h(const BasicLogSeqWindow<R>&, const BasicLogSeqWindow<R>&); \
    extern template BasicLogSeqWindow<R> d_iterated(const BasicSeqTuple<R>&, const UpdateOptions&);       \
    extern template BasicSeqTuple<R> daop(const BasicSeqTuple<R>&, const UpdateOptions&);                 \
    extern template BasicSeqTuple<R> haop(const BasicSeqTuple<R>&);                                       \
    extern template BasicSeqTuple<R> parallel_step(const BasicLogSeqWindow<R>&, const BasicSeqTuple<R>&,  \
                                                   const UpdateOptions&);                                 \
    extern template BasicSeqTuple<R> sequential_step(const BasicLogSeqWindow<R>&, const BasicSeqTuple<R>&, \
                                                     const UpdateOptions&);                               \
    extern template double max_abs_gap(const BasicLogSeqWindow<R>&, const BasicLogSeqWindow<R>&);

BLAB_SEQMAPS_EXTERN(double)
BLAB_SEQMAPS_EXTERN(Quad)
#undef BLAB_SEQMAPS_EXTERN

}  // namespace blab
