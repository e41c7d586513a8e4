#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "saddlegkb/saddle.hpp"
#include "saddlegkb/sparse.hpp"
#include "saddlegkb/vector.hpp"

namespace saddlegkb {

// Dense reference computations. Every routine here densifies its input and
// refuses (TooLargeForDense) once the dense dimension exceeds the limit.
inline constexpr std::size_t kDefaultDenseLimit = 2000;

struct DirectSolution {
  Vector w;
  Vector p;
};

// LU on the assembled block matrix. Throws SingularSystem when the
// reciprocal condition estimate is below 1e-14.
DirectSolution direct_saddle_solve(const SaddleSystem& sys, std::size_t limit = kDefaultDenseLimit);

// Singular values of N^{-1/2} A^T M^{-1/2} with N = (1/eta) I, descending.
std::vector<double> elliptic_singular_values(const SparseSymMatrix& m, const SparseMatrix& a, double eta,
                                             std::size_t limit = kDefaultDenseLimit);
struct EllipticSpectrum {
  std::vector<double> sigma;  // descending
  std::vector<double> mu;     // sigma^2, same order
  double condition = 0.0;     // sigma_1 / sigma_n
};

EllipticSpectrum elliptic_svd(const SparseSymMatrix& m, const SparseMatrix& a, double eta,
                              std::size_t limit = kDefaultDenseLimit);

// Eigenvalues of eta A^T M^{-1} A, ascending (second route to the above).
std::vector<double> elliptic_eigenvalues(const SparseSymMatrix& m, const SparseMatrix& a, double eta,
                                         std::size_t limit = kDefaultDenseLimit);

// Eigenvalues of A^T W^{-1} A, ascending. W must be positive definite.
std::vector<double> schur_eigenvalues(const SparseSymMatrix& w, const SparseMatrix& a,
                                      std::size_t limit = kDefaultDenseLimit);
double lambda_min_schur(const SparseSymMatrix& w, const SparseMatrix& a,
                        std::size_t limit = kDefaultDenseLimit);

// Eigenvalues of a symmetric matrix, ascending.
std::vector<double> symmetric_eigenvalues(const SparseSymMatrix& m, std::size_t limit = kDefaultDenseLimit);

struct SpectralReport {
  double eta = 0.0;
  std::vector<double> lambda;        // A^T W^{-1} A, ascending
  std::vector<double> predicted_mu;  // eta lambda / (1 + eta lambda), ascending
  std::vector<double> measured_mu;   // squared singular values, ascending
  double max_mu_deviation = 0.0;
  double kappa_squared = 0.0;        // measured
  double kappa_squared_bound = 0.0;  // (1 + eta lambda_1) / (eta lambda_1)
  bool eta_lambda_at_least_one = false;
};

// Singular values of M^{-1/2} A sqrt(eta) with M = W + eta A A^T against
// the closed form in terms of the eigenvalues of A^T W^{-1} A.
SpectralReport verify_theorem(const SparseSymMatrix& w, const SparseMatrix& a, double eta,
                              std::size_t limit = kDefaultDenseLimit);

inline constexpr std::size_t kRankCheckLimit = 500;

struct KernelReport {
  bool rank_checked = false;  // false: A larger than kRankCheckLimit columns, rank trusted
  std::size_t rank = 0;
  bool full_column_rank = true;
  bool kernel_condition = true;  // W + A A^T positive definite
  std::optional<std::size_t> failing_pivot;
};

std::size_t numerical_rank(const SparseMatrix& a, std::size_t limit = kDefaultDenseLimit);
// Full column rank of A and ker(W) with ker(A^T) = {0}. The second is
// tested by factoring W + A A^T with the sparse Cholesky.
KernelReport check_kernel_assumptions(const SaddleSystem& sys);

}  // namespace saddlegkb
