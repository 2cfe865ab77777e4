#include "blab/grsk.hpp"

#include <stdexcept>

#include "blab/special_functions.hpp"

namespace blab {

RowInsertResult row_insert(const Word& xi, const Word& b) {
    if (xi.start != b.start || xi.size() != b.size()) throw std::invalid_argument("row_insert: length/index mismatch");
    if (xi.empty()) throw std::invalid_argument("row_insert: empty word");
    const std::size_t n = xi.size();
    const auto& x = xi.log_entries;
    const auto& bb = b.log_entries;
    RowInsertResult r;
    r.xi_prime.start = xi.start;
    r.xi_prime.log_entries.resize(n);
    r.b_prime.start = xi.start + 1;
    r.b_prime.log_entries.resize(n - 1);
    auto& xp = r.xi_prime.log_entries;
    xp[0] = bb[0] + x[0];
    for (std::size_t k = 1; k < n; ++k) {
        xp[k] = bb[k] + log_sum_exp(xp[k - 1], x[k]);
        r.b_prime.log_entries[k - 1] = bb[k] + x[k] + xp[k - 1] - x[k - 1] - xp[k];
    }
    return r;
}

FullArray FullArray::ones(std::int32_t n) {
    if (n < 1) throw std::invalid_argument("FullArray: size must be positive");
    FullArray z;
    z.n = n;
    z.diagonals.resize(static_cast<std::size_t>(n));
    for (std::int32_t l = 1; l <= n; ++l) z.diagonals[l - 1].assign(static_cast<std::size_t>(n - l + 1), 0.0);
    return z;
}

FullArray array_insert(const FullArray& z, const Word& b) {
    if (b.start != 1 || static_cast<std::int32_t>(b.size()) != z.n) throw std::invalid_argument("array_insert: size mismatch");
    FullArray out = z;
    Word carry = b;
    for (std::int32_t l = 1; l <= z.n; ++l) {
        RowInsertResult r = row_insert(Word{l, z.diagonals[l - 1]}, carry);
        out.diagonals[l - 1] = std::move(r.xi_prime.log_entries);
        carry = std::move(r.b_prime);
    }
    return out;
}

FullArray grsk_from_rows(const std::vector<std::vector<double>>& logw) {
    if (logw.empty()) throw std::invalid_argument("grsk_from_rows: no rows");
    const auto n = static_cast<std::int32_t>(logw.front().size());
    FullArray z = FullArray::ones(n);
    double acc = 0.0;
    for (std::int32_t k = 1; k <= n; ++k) {
        acc += logw[0][k - 1];
        z.log_at(k, 1) = acc;
    }
    for (std::size_t m = 1; m < logw.size(); ++m) {
        if (static_cast<std::int32_t>(logw[m].size()) != n) throw std::invalid_argument("grsk_from_rows: ragged rows");
        z = array_insert(z, Word{1, logw[m]});
    }
    return z;
}

NetworkStepResult array_network_step(const std::vector<double>& log_z_prev, double log_boundary_i,
                                     const Word& w_col) {
    if (log_z_prev.size() != w_col.size() + 1) throw std::invalid_argument("array_network_step: length mismatch");
    const std::size_t m = w_col.size();
    NetworkStepResult r;
    r.log_z.resize(m + 1);
    r.dual_w.start = w_col.start;
    r.dual_w.log_entries.resize(m);
    r.log_z[0] = log_z_prev[0] + log_boundary_i;
    for (std::size_t t = 1; t <= m; ++t) {
        const double lw = w_col.log_entries[t - 1];
        r.log_z[t] = lw + log_sum_exp(r.log_z[t - 1], log_z_prev[t]);
        r.dual_w.log_entries[t - 1] = lw + r.log_z[t - 1] + log_z_prev[t] - log_z_prev[t - 1] - r.log_z[t];
    }
    return r;
}

TriangularArray build_triangular(const SeqTuple& inputs, const UpdateOptions& opts) {
    const auto n = static_cast<std::int32_t>(inputs.size());
    TriangularArray arr;
    arr.n = n;
    arr.x_cells.resize(static_cast<std::size_t>(n));
    arr.v_cells.resize(static_cast<std::size_t>(n));
    try {
        for (std::int32_t i = 1; i <= n; ++i) {
            auto& xrow = arr.x_cells[i - 1];
            auto& vrow = arr.v_cells[i - 1];
            xrow.reserve(static_cast<std::size_t>(i));
            vrow.reserve(static_cast<std::size_t>(i));
            xrow.push_back(inputs[static_cast<std::size_t>(i - 1)]);
            for (std::int32_t j = 2; j <= i; ++j) {
                UpdateOutput u = update(arr.v(i - 1, j - 1), xrow.back(), opts);
                if (u.valid_lo > u.i_tilde.hi()) throw std::length_error("window exhausted");
                xrow.push_back(std::move(u.i_tilde));
                vrow.push_back(std::move(u.w_tilde));
            }
            vrow.push_back(xrow.back());
        }
    } catch (const std::length_error&) {
        throw std::length_error("window exhausted");
    }
    return arr;
}

}  // namespace blab
