#pragma once

#include <cstddef>
#include <vector>

#include "saddlegkb/sparse.hpp"
#include "saddlegkb/vector.hpp"

namespace saddlegkb {

enum class Ordering { Natural, MinimumDegree };

// Greedy minimum-degree ordering on the explicit elimination graph. Ties go
// to the lowest index, so the result is deterministic. perm[k] is the
// original index eliminated k-th. Meant for desk-scale problems (a few
// thousand unknowns); there is no quotient-graph compression.
std::vector<std::size_t> minimum_degree_ordering(const SparseSymMatrix& m);

// Sparse Cholesky factor P M P^T = L L^T. Immutable once built; solve() is
// const and allocates its own workspace, so one factor may be shared by
// concurrent solvers.
class SpdFactor {
 public:
  std::size_t size() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  const std::vector<std::size_t>& permutation() const noexcept { return perm_; }

  Vector solve(const Vector& b) const;

  // L in the permuted numbering, as a CSR lower-triangular matrix.
  SparseMatrix lower() const;

 private:
  friend SpdFactor spd_factor(const SparseSymMatrix& m, Ordering ordering);

  std::size_t n_ = 0;
  std::vector<std::size_t> perm_;
  // L by columns; the diagonal is the first entry of each column
  std::vector<std::size_t> col_ptr_{0};
  std::vector<std::size_t> row_idx_;
  std::vector<double> values_;
};

// Throws NotPositiveDefiniteError when a pivot falls to
// 1e-14 * max(initial diagonal) or below; the reported index is in the
// original numbering.
SpdFactor spd_factor(const SparseSymMatrix& m, Ordering ordering = Ordering::MinimumDegree);
Vector spd_solve(const SpdFactor& f, const Vector& b);

}  // namespace saddlegkb
