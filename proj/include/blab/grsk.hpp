#pragma once
// Geometric row insertion, insertion into full triangular arrays, the column
// step of the insertion network with a boundary, and the triangular arrays
// whose diagonal realises the intertwining map.

#include <cstdint>
#include <utility>
#include <vector>

#include "blab/seqmaps.hpp"

namespace blab {

// Word (b_start, ..., b_{start+len-1}) of positive reals, stored as logs.
struct Word {
    std::int32_t start = 1;
    std::vector<double> log_entries;

    bool empty() const { return log_entries.empty(); }
    std::size_t size() const { return log_entries.size(); }
    std::int32_t end() const { return start + static_cast<std::int32_t>(log_entries.size()) - 1; }
};

struct RowInsertResult {
    Word xi_prime;
    Word b_prime;  // starts one index later; empty for length-1 input
};

RowInsertResult row_insert(const Word& xi, const Word& b);

// Cells z_{k,l}, 1 <= l <= k <= n, as logs. Diagonal l is (z_{l,l}, ..., z_{n,l}).
struct FullArray {
    std::int32_t n = 0;
    std::vector<std::vector<double>> diagonals;  // diagonals[l-1][k-l]

    static FullArray ones(std::int32_t n);
    double log_at(std::int32_t k, std::int32_t l) const { return diagonals[l - 1][k - l]; }
    double& log_at(std::int32_t k, std::int32_t l) { return diagonals[l - 1][k - l]; }
};

FullArray array_insert(const FullArray& z, const Word& b);

// Array after inserting rows 2..M of a weight matrix whose first row seeds the
// first diagonal with prefix products; other diagonals start at 1. Row m of
// the matrix is logw[m-1] (length n).
FullArray grsk_from_rows(const std::vector<std::vector<double>>& logw);

struct NetworkStepResult {
    std::vector<double> log_z;  // Z_{(k,0..M)}
    Word dual_w;                // dual weights at t = 1..M
};

// One column step: log_z_prev holds Z_{(k-1,0..M)}, w_col holds W_{(k,1..M)}.
NetworkStepResult array_network_step(const std::vector<double>& log_z_prev, double log_boundary_i,
                                     const Word& w_col);

// X^{i,j} and V^{i,j} for 1 <= j <= i <= N, stored at [i-1][j-1].
struct TriangularArray {
    std::int32_t n = 0;
    std::vector<std::vector<LogSeqWindow>> x_cells;
    std::vector<std::vector<LogSeqWindow>> v_cells;

    const LogSeqWindow& x(std::int32_t i, std::int32_t j) const { return x_cells[i - 1][j - 1]; }
    const LogSeqWindow& v(std::int32_t i, std::int32_t j) const { return v_cells[i - 1][j - 1]; }
};

TriangularArray build_triangular(const SeqTuple& inputs, const UpdateOptions& opts = {});

}  // namespace blab
