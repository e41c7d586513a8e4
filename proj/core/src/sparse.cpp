#include "saddlegkb/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "saddlegkb/error.hpp"

namespace saddlegkb {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidMatrix, what); }

}  // namespace

SparseMatrix::SparseMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != nrows_ + 1) invalid("row pointer must have nrows+1 entries");
  if (row_ptr_.front() != 0) invalid("row pointer must start at 0");
  if (col_idx_.size() != values_.size()) invalid("column index and value arrays differ in length");
  if (row_ptr_.back() != values_.size()) invalid("last row pointer must equal the number of values");
  for (std::size_t i = 0; i < nrows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) invalid("row pointer is decreasing at row " + std::to_string(i));
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] >= ncols_) invalid("column index out of range in row " + std::to_string(i));
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1]) {
        invalid("column indices not strictly increasing in row " + std::to_string(i));
      }
      if (values_[p] == 0.0) invalid("explicit zero stored in row " + std::to_string(i));
      if (!std::isfinite(values_[p])) {
        throw Error(ErrorCode::NonFinite, "non-finite value in row " + std::to_string(i));
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t nrows, std::size_t ncols,
                                         std::span<const Triplet> triplets) {
  std::vector<Triplet> sorted(triplets.begin(), triplets.end());
  for (const auto& t : sorted) {
    if (t.row >= nrows || t.col >= ncols) {
      invalid("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
              ") outside " + std::to_string(nrows) + "x" + std::to_string(ncols));
    }
    if (!std::isfinite(t.value)) throw Error(ErrorCode::NonFinite, "non-finite triplet value");
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<std::size_t> row_ptr(nrows + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(sorted.size());
  values.reserve(sorted.size());
  for (std::size_t p = 0; p < sorted.size();) {
    const auto row = sorted[p].row;
    const auto col = sorted[p].col;
    double sum = 0.0;
    for (; p < sorted.size() && sorted[p].row == row && sorted[p].col == col; ++p) sum += sorted[p].value;
    if (sum == 0.0) continue;
    col_idx.push_back(col);
    values.push_back(sum);
    ++row_ptr[row + 1];
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  return SparseMatrix(nrows, ncols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> diag) {
  std::vector<Triplet> t;
  t.reserve(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) t.push_back({i, i, diag[i]});
  return from_triplets(diag.size(), diag.size(), t);
}

SparseMatrix::RowView SparseMatrix::row(std::size_t i) const {
  const auto begin = row_ptr_[i];
  const auto len = row_ptr_[i + 1] - begin;
  return {std::span<const std::size_t>(col_idx_).subspan(begin, len),
          std::span<const double>(values_).subspan(begin, len)};
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= nrows_ || j >= ncols_) {
    throw Error(ErrorCode::DimensionMismatch, "index (" + std::to_string(i) + ", " +
                                                  std::to_string(j) + ") out of range");
  }
  const auto r = row(i);
  const auto it = std::lower_bound(r.cols.begin(), r.cols.end(), j);
  if (it == r.cols.end() || *it != j) return 0.0;
  return r.values[static_cast<std::size_t>(it - r.cols.begin())];
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> counts(ncols_ + 1, 0);
  for (auto c : col_idx_) ++counts[c + 1];
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  std::vector<std::size_t> next(counts.begin(), counts.end() - 1);
  std::vector<std::size_t> cols(nnz());
  std::vector<double> vals(nnz());
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const auto dst = next[col_idx_[p]]++;
      cols[dst] = i;
      vals[dst] = values_[p];
    }
  }
  return SparseMatrix(ncols_, nrows_, std::move(counts), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::scaled(double factor) const {
  if (factor == 0.0) return SparseMatrix(nrows_, ncols_, std::vector<std::size_t>(nrows_ + 1, 0), {}, {});
  auto vals = values_;
  for (auto& v : vals) v *= factor;
  return SparseMatrix(nrows_, ncols_, row_ptr_, col_idx_, std::move(vals));
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) out.push_back({i, col_idx_[p], values_[p]});
  }
  return out;
}

SparseSymMatrix::SparseSymMatrix(SparseMatrix full) : full_(std::move(full)) {
  if (full_.nrows() != full_.ncols()) invalid("symmetric matrix must be square");
  if (!(full_.transpose() == full_)) invalid("matrix is not exactly symmetric");
}

SparseSymMatrix SparseSymMatrix::from_triangle_triplets(std::size_t n, std::span<const Triplet> triplets) {
  std::vector<Triplet> upper;
  upper.reserve(triplets.size());
  for (const auto& t : triplets) upper.push_back({std::min(t.row, t.col), std::max(t.row, t.col), t.value});
  const auto canonical = SparseMatrix::from_triplets(n, n, upper);
  std::vector<Triplet> full;
  full.reserve(2 * canonical.nnz());
  for (const auto& t : canonical.triplets()) {
    full.push_back(t);
    if (t.row != t.col) full.push_back({t.col, t.row, t.value});
  }
  return SparseSymMatrix(SparseMatrix::from_triplets(n, n, full));
}

SparseSymMatrix SparseSymMatrix::identity(std::size_t n) { return SparseSymMatrix(SparseMatrix::identity(n)); }

SparseSymMatrix SparseSymMatrix::diagonal(std::span<const double> diag) {
  return SparseSymMatrix(SparseMatrix::diagonal(diag));
}

std::vector<double> SparseSymMatrix::diagonal_values() const {
  std::vector<double> d(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) d[i] = full_.at(i, i);
  return d;
}

SparseSymMatrix SparseSymMatrix::scaled(double factor) const { return SparseSymMatrix(full_.scaled(factor)); }

Vector mat_vec(const SparseMatrix& a, const Vector& x) {
  require_same_size(a.ncols(), x.size(), "mat_vec");
  Vector y(a.nrows());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    double s = 0.0;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) s += va[p] * x[ci[p]];
    y[i] = s;
  }
  return y;
}

Vector mat_vec(const SparseSymMatrix& a, const Vector& x) { return mat_vec(a.matrix(), x); }

Vector transpose_mat_vec(const SparseMatrix& a, const Vector& y) {
  require_same_size(a.nrows(), y.size(), "transpose_mat_vec");
  Vector x(a.ncols());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) x[ci[p]] += va[p] * yi;
  }
  return x;
}

double one_norm(const SparseMatrix& a) {
  std::vector<double> colsum(a.ncols(), 0.0);
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t p = 0; p < a.nnz(); ++p) colsum[ci[p]] += std::abs(va[p]);
  return colsum.empty() ? 0.0 : *std::max_element(colsum.begin(), colsum.end());
}

double one_norm(const SparseSymMatrix& a) { return one_norm(a.matrix()); }

double weighted_dot(const Vector& x, const Vector& y, const SparseSymMatrix& m) {
  require_same_size(m.size(), x.size(), "weighted_dot");
  return dot(x, mat_vec(m, y));
}

double weighted_norm(const Vector& v, const SparseSymMatrix& m) {
  require_same_size(m.size(), v.size(), "weighted_norm");
  const double q = dot(v, mat_vec(m, v));
  if (q >= 0.0) return std::sqrt(q);
  const double nv = norm2(v);
  if (q < -1e-14 * nv * nv * one_norm(m)) {
    throw Error(ErrorCode::IndefiniteNorm, "v^T M v = " + std::to_string(q) + " is negative");
  }
  return 0.0;
}

SparseSymMatrix add_outer_product(const SparseSymMatrix& w, double alpha, const SparseMatrix& a,
                                  double beta) {
  const auto m = w.size();
  if (a.nrows() != m) {
    throw Error(ErrorCode::DimensionMismatch, "A has " + std::to_string(a.nrows()) +
                                                  " rows, W is " + std::to_string(m) + "x" +
                                                  std::to_string(m));
  }
  std::vector<Triplet> upper;
  for (const auto& t : w.matrix().triplets()) {
    if (t.row <= t.col && alpha != 0.0) upper.push_back({t.row, t.col, alpha * t.value});
  }
  if (beta != 0.0) {
    const auto at = a.transpose();
    std::vector<double> acc(m, 0.0);
    std::vector<char> mark(m, 0);
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < m; ++i) {
      const auto ri = a.row(i);
      for (std::size_t p = 0; p < ri.cols.size(); ++p) {
        const auto ck = at.row(ri.cols[p]);
        for (std::size_t q = 0; q < ck.cols.size(); ++q) {
          const auto j = ck.cols[q];
          if (j < i) continue;
          if (!mark[j]) {
            mark[j] = 1;
            touched.push_back(j);
          }
          acc[j] += ri.values[p] * ck.values[q];
        }
      }
      for (auto j : touched) {
        upper.push_back({i, j, beta * acc[j]});
        acc[j] = 0.0;
        mark[j] = 0;
      }
      touched.clear();
    }
  }
  return SparseSymMatrix::from_triangle_triplets(m, upper);
}

}  // namespace saddlegkb
