#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "saddlegkb/vector.hpp"

namespace saddlegkb {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed sparse row storage.
//
// Invariants (checked by the validating constructor):
//   row_ptr has nrows+1 non-decreasing entries, row_ptr.back() == nnz;
//   column indices within a row are strictly increasing and < ncols;
//   no stored zeros, all values finite.
class SparseMatrix {
 public:
  struct RowView {
    std::span<const std::size_t> cols;
    std::span<const double> values;
  };

  SparseMatrix() = default;
  SparseMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_ptr,
               std::vector<std::size_t> col_idx, std::vector<double> values);

  // Duplicates are summed; entries that sum to exactly zero are dropped.
  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                    std::span<const Triplet> triplets);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(std::span<const double> diag);

  std::size_t nrows() const noexcept { return nrows_; }
  std::size_t ncols() const noexcept { return ncols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  RowView row(std::size_t i) const;
  double at(std::size_t i, std::size_t j) const;

  SparseMatrix transpose() const;
  SparseMatrix scaled(double factor) const;
  std::vector<Triplet> triplets() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

// Square matrix stored with its full (both triangles) pattern. Symmetry is
// exact: a(i,j) and a(j,i) are bitwise equal.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  // Throws InvalidMatrix if `full` is not square or not exactly symmetric.
  explicit SparseSymMatrix(SparseMatrix full);

  // Each off-diagonal triplet (i,j,v) contributes v to both (i,j) and (j,i);
  // callers pass one triangle (either one, or a mix) without duplication.
  static SparseSymMatrix from_triangle_triplets(std::size_t n, std::span<const Triplet> triplets);
  static SparseSymMatrix identity(std::size_t n);
  static SparseSymMatrix diagonal(std::span<const double> diag);

  std::size_t size() const noexcept { return full_.nrows(); }
  std::size_t nnz() const noexcept { return full_.nnz(); }
  const SparseMatrix& matrix() const noexcept { return full_; }
  double at(std::size_t i, std::size_t j) const { return full_.at(i, j); }
  std::vector<double> diagonal_values() const;
  SparseSymMatrix scaled(double factor) const;

  friend bool operator==(const SparseSymMatrix&, const SparseSymMatrix&) = default;

 private:
  SparseMatrix full_;
};

Vector mat_vec(const SparseMatrix& a, const Vector& x);
Vector mat_vec(const SparseSymMatrix& a, const Vector& x);
// A^T y without forming A^T.
Vector transpose_mat_vec(const SparseMatrix& a, const Vector& y);

// Maximum absolute column sum.
double one_norm(const SparseMatrix& a);
double one_norm(const SparseSymMatrix& a);

// sqrt(v^T M v). Round-off negatives down to -1e-14 * ||v||_2^2 * ||M||_1
// clamp to zero; anything more negative throws IndefiniteNorm.
double weighted_norm(const Vector& v, const SparseSymMatrix& m);
double weighted_dot(const Vector& x, const Vector& y, const SparseSymMatrix& m);

// alpha * W + beta * A A^T with exactly symmetric values.
SparseSymMatrix add_outer_product(const SparseSymMatrix& w, double alpha, const SparseMatrix& a,
                                  double beta);

}  // namespace saddlegkb
