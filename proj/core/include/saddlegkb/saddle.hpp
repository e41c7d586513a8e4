#pragma once

#include <cstddef>
#include <memory>
#include <string_view>

#include "saddlegkb/spd_factor.hpp"
#include "saddlegkb/sparse.hpp"
#include "saddlegkb/vector.hpp"

namespace saddlegkb {

// Block system [W A; A^T 0][w; p] = [g; r], W m-by-m symmetric positive
// semidefinite, A m-by-n with n <= m.
struct SaddleSystem {
  SparseSymMatrix W;
  SparseMatrix A;
  Vector g;
  Vector r;

  std::size_t m() const noexcept { return W.size(); }
  std::size_t n() const noexcept { return A.ncols(); }
};

// Validates block dimensions (and n <= m); throws DimensionMismatch.
SaddleSystem make_saddle_system(SparseSymMatrix w, SparseMatrix a, Vector g, Vector r);

// System after the augmented-Lagrangian transform:
//   M = W/gamma + eta A A^T,  s = M^{-1}(g/gamma + eta A r),  b = r - A^T s,
// so that [M A; A^T 0][u; p'] = [0; b], w = u + s and p = gamma p'.
// The bidiagonalization uses N = (1/eta) I; for eta == 0 (M = W) it uses
// N = I instead.
class RegularizedSystem {
 public:
  const SparseSymMatrix& M() const noexcept { return m_; }
  const SpdFactor& M_factor() const noexcept { return factor_; }
  const SparseMatrix& A() const noexcept { return source_->A; }
  const SaddleSystem& source() const noexcept { return *source_; }

  double eta() const noexcept { return eta_; }
  double gamma() const noexcept { return gamma_; }
  // N^{-1} = n_inverse_scale() * I
  double n_inverse_scale() const noexcept { return n_inverse_scale_; }

  const Vector& b() const noexcept { return b_; }
  const Vector& shift() const noexcept { return shift_; }

  std::size_t m() const noexcept { return m_.size(); }
  std::size_t n() const noexcept { return source_->A.ncols(); }

  // Assemble directly from M and A with a given right-hand side b (zero
  // shift, gamma = 1). Used when the transformed system is the input.
  static RegularizedSystem from_transformed(SparseSymMatrix m, SparseMatrix a, double eta, Vector b);

 private:
  friend RegularizedSystem regularize(const SaddleSystem& sys, double eta, double gamma);

  std::shared_ptr<const SaddleSystem> source_;
  SparseSymMatrix m_;
  SpdFactor factor_;
  double eta_ = 0.0;
  double gamma_ = 1.0;
  double n_inverse_scale_ = 1.0;
  Vector b_;
  Vector shift_;
};

// Throws NonpositiveEta for eta < 0 or gamma <= 0, NotPositiveDefiniteError
// when M cannot be factored (violated kernel assumption).
RegularizedSystem regularize(const SaddleSystem& sys, double eta, double gamma = 1.0);

// w = u + s
Vector recover_displacement(const RegularizedSystem& reg, const Vector& u);
// p = gamma * p'
Vector recover_multiplier(const RegularizedSystem& reg, const Vector& p);

// gamma = (min W_ii + max W_ii) / 2, zero diagonals included.
double compute_gamma(const SparseSymMatrix& w);

enum class EtaMode { WNorm, WNormOverGamma, GolubGreiff, Explicit };

EtaMode parse_eta_mode(std::string_view text);
std::string_view to_string(EtaMode mode) noexcept;

//   WNorm          ||W||_1
//   WNormOverGamma ||W||_1 / gamma
//   GolubGreiff    gamma ||W||_1 / ||A||_1^2
//   Explicit       explicit_value
// Throws NonpositiveEta if the result is not > 0, or if gamma <= 0 where
// the mode uses it.
double recommend_eta(const SparseSymMatrix& w, const SparseMatrix& a, double gamma, EtaMode mode,
                     double explicit_value = 0.0);

// Double Lagrange multiplier form
//   K = [ W     gA    gA ]
//       [ gA^T  -gI   gI ]
//       [ gA^T  gI   -gI ]
// with right-hand side [g; f1; f2].
struct DoubleLagrangeSystem {
  SparseSymMatrix K;
  double gamma = 1.0;
  std::size_t m = 0;
  std::size_t n = 0;
  Vector rhs;  // length m + 2n, may be empty
};

// Right-hand side blocks are f1 = f2 = gamma r.
DoubleLagrangeSystem build_double_lagrange(const SaddleSystem& sys, double gamma);

// gamma as stored in K: -K(m, m). Throws PatternMismatch if not positive.
double infer_gamma(const SparseSymMatrix& k, std::size_t m, std::size_t n);

// Checks the block pattern against dl.gamma and returns (W, A, g, r) with
// the gamma factor on A removed; r = (f1 + f2) / (2 gamma). W is returned
// as stored. A entries are recovered as the value nearest block/gamma that
// maps back to the stored block exactly. Throws PatternMismatch naming the
// first offending entry (1-based).
SaddleSystem extract_double_lagrange(const DoubleLagrangeSystem& dl);

}  // namespace saddlegkb
