#include "saddlegkb/spd_factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "saddlegkb/error.hpp"

namespace saddlegkb {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Lower triangle (diagonal included) of P M P^T, row by row.
struct PermutedLower {
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> cols;
  std::vector<double> values;
};

PermutedLower permute_lower(const SparseSymMatrix& m, const std::vector<std::size_t>& perm,
                            const std::vector<std::size_t>& pinv) {
  const auto n = m.size();
  PermutedLower c;
  c.row_ptr.assign(n + 1, 0);
  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t k = 0; k < n; ++k) {
    const auto r = m.matrix().row(perm[k]);
    row.clear();
    for (std::size_t p = 0; p < r.cols.size(); ++p) {
      const auto j = pinv[r.cols[p]];
      if (j <= k) row.emplace_back(j, r.values[p]);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [j, v] : row) {
      c.cols.push_back(j);
      c.values.push_back(v);
    }
    c.row_ptr[k + 1] = c.cols.size();
  }
  return c;
}

std::vector<std::size_t> elimination_tree(const PermutedLower& c, std::size_t n) {
  std::vector<std::size_t> parent(n, kNone);
  std::vector<std::size_t> ancestor(n, kNone);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t p = c.row_ptr[k]; p < c.row_ptr[k + 1]; ++p) {
      auto i = c.cols[p];
      while (i != kNone && i < k) {
        const auto next = ancestor[i];
        ancestor[i] = k;  // path compression
        if (next == kNone) parent[i] = k;
        i = next;
      }
    }
  }
  return parent;
}

// Nonzero pattern of row k of L (excluding the diagonal), written to
// stack[top..n) in topological order. Returns top.
std::size_t row_pattern(const PermutedLower& c, std::size_t k, const std::vector<std::size_t>& parent,
                        std::vector<std::size_t>& stack, std::vector<std::size_t>& mark) {
  const auto n = parent.size();
  auto top = n;
  mark[k] = k;
  for (std::size_t p = c.row_ptr[k]; p < c.row_ptr[k + 1]; ++p) {
    auto i = c.cols[p];
    if (i >= k) continue;
    std::size_t len = 0;
    for (; mark[i] != k; i = parent[i]) {
      stack[len++] = i;
      mark[i] = k;
    }
    while (len > 0) stack[--top] = stack[--len];
  }
  return top;
}

}  // namespace

SpdFactor spd_factor(const SparseSymMatrix& m, Ordering ordering) {
  const auto n = m.size();
  if (n == 0) throw Error(ErrorCode::EmptyMatrix, "cannot factor an empty matrix");

  SpdFactor f;
  f.n_ = n;
  if (ordering == Ordering::MinimumDegree) {
    f.perm_ = minimum_degree_ordering(m);
  } else {
    f.perm_.resize(n);
    std::iota(f.perm_.begin(), f.perm_.end(), std::size_t{0});
  }
  std::vector<std::size_t> pinv(n);
  for (std::size_t k = 0; k < n; ++k) pinv[f.perm_[k]] = k;

  const auto c = permute_lower(m, f.perm_, pinv);
  const auto parent = elimination_tree(c, n);

  double max_diag = 0.0;
  for (double d : m.diagonal_values()) max_diag = std::max(max_diag, d);
  const double pivot_floor = 1e-14 * max_diag;

  // symbolic: column counts of L
  std::vector<std::size_t> stack(n), mark(n, kNone);
  std::vector<std::size_t> counts(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    const auto top = row_pattern(c, k, parent, stack, mark);
    for (auto t = top; t < n; ++t) ++counts[stack[t]];
  }
  f.col_ptr_.assign(n + 1, 0);
  std::partial_sum(counts.begin(), counts.end(), f.col_ptr_.begin() + 1);
  f.row_idx_.assign(f.col_ptr_[n], 0);
  f.values_.assign(f.col_ptr_[n], 0.0);

  // numeric: up-looking, one row of L per step
  std::vector<std::size_t> next(f.col_ptr_.begin(), f.col_ptr_.end() - 1);
  std::vector<double> x(n, 0.0);
  std::fill(mark.begin(), mark.end(), kNone);
  for (std::size_t k = 0; k < n; ++k) {
    const auto top = row_pattern(c, k, parent, stack, mark);
    for (std::size_t p = c.row_ptr[k]; p < c.row_ptr[k + 1]; ++p) x[c.cols[p]] = c.values[p];
    double d = x[k];
    x[k] = 0.0;
    for (auto t = top; t < n; ++t) {
      const auto j = stack[t];
      const double lkj = x[j] / f.values_[f.col_ptr_[j]];
      x[j] = 0.0;
      for (auto p = f.col_ptr_[j] + 1; p < next[j]; ++p) x[f.row_idx_[p]] -= f.values_[p] * lkj;
      d -= lkj * lkj;
      f.row_idx_[next[j]] = k;
      f.values_[next[j]++] = lkj;
    }
    if (!(d > pivot_floor)) throw NotPositiveDefiniteError(f.perm_[k], d);
    f.row_idx_[next[k]] = k;
    f.values_[next[k]++] = std::sqrt(d);
  }
  return f;
}

Vector SpdFactor::solve(const Vector& b) const {
  require_same_size(n_, b.size(), "spd_solve");
  std::vector<double> y(n_);
  for (std::size_t k = 0; k < n_; ++k) y[k] = b[perm_[k]];
  for (std::size_t j = 0; j < n_; ++j) {
    y[j] /= values_[col_ptr_[j]];
    const double yj = y[j];
    for (auto p = col_ptr_[j] + 1; p < col_ptr_[j + 1]; ++p) y[row_idx_[p]] -= values_[p] * yj;
  }
  for (std::size_t j = n_; j-- > 0;) {
    double s = y[j];
    for (auto p = col_ptr_[j] + 1; p < col_ptr_[j + 1]; ++p) s -= values_[p] * y[row_idx_[p]];
    y[j] = s / values_[col_ptr_[j]];
  }
  Vector x(n_);
  for (std::size_t k = 0; k < n_; ++k) x[perm_[k]] = y[k];
  return x;
}

SparseMatrix SpdFactor::lower() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (std::size_t j = 0; j < n_; ++j) {
    for (auto p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) t.push_back({row_idx_[p], j, values_[p]});
  }
  return SparseMatrix::from_triplets(n_, n_, t);
}

Vector spd_solve(const SpdFactor& f, const Vector& b) { return f.solve(b); }

}  // namespace saddlegkb
