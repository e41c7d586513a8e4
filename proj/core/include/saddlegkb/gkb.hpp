#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "saddlegkb/saddle.hpp"
#include "saddlegkb/vector.hpp"

namespace saddlegkb {

enum class BoundMode { Lower, Upper, Both };
// AsPrinted follows the d-bar / varpi recurrence that uses beta_k at step k.
// GaussRadau is the standard Gauss-Radau rule on the (k+1)-point Jacobi
// matrix, which needs beta_{k+1}.
enum class RadauFormula { AsPrinted, GaussRadau };
enum class GkbStatus { Converged, LuckyBreakdown, MaxitReached, Breakdown };

BoundMode parse_bound_mode(std::string_view text);
std::string_view to_string(BoundMode mode) noexcept;
RadauFormula parse_radau_formula(std::string_view text);
std::string_view to_string(RadauFormula formula) noexcept;
std::string_view to_string(GkbStatus status) noexcept;

struct GkbConfig {
  double tau = 1e-5;        // absolute tolerance on the error estimate, in (0, 1)
  std::size_t delay = 5;    // d
  std::size_t maxit = 1000; // largest iteration index k
  BoundMode bound_mode = BoundMode::Lower;
  std::optional<double> sigma_lower_bound;  // a, needed by Upper/Both
  RadauFormula radau_formula = RadauFormula::AsPrinted;
  bool reorthogonalize = false;
  bool keep_basis = false;
  // When set, each record carries ||reference - u^(k)||_M.
  std::optional<Vector> reference_u;

  // Throws InvalidConfig.
  void validate() const;
};

// Bidiagonalization state after k steps. The next beta (and the unnormalized
// next q) are computed eagerly, so the residual and the Gauss-Radau estimate
// of iterate k are available before step k+1 runs.
class GkbState {
 public:
  std::size_t iteration() const noexcept { return k_; }
  const Vector& u() const noexcept { return u_; }
  const Vector& p() const noexcept { return p_; }
  const Vector& v() const noexcept { return v_; }
  const Vector& q() const noexcept { return q_; }
  const Vector& d() const noexcept { return d_; }

  // alphas()[j-1] = alpha_j, zetas()[j-1] = zeta_j for j = 1..k;
  // betas()[j-1] = beta_j for j = 1..k+1.
  const std::vector<double>& alphas() const noexcept { return alphas_; }
  const std::vector<double>& betas() const noexcept { return betas_; }
  const std::vector<double>& zetas() const noexcept { return zetas_; }

  double alpha() const { return alphas_.at(k_ - 1); }
  double beta() const { return betas_.at(k_ - 1); }
  double zeta() const { return zetas_.at(k_ - 1); }
  double next_beta() const { return betas_.at(k_); }
  double beta1() const noexcept { return beta1_; }
  double breakdown_threshold() const noexcept { return threshold_; }

  bool zero_rhs() const noexcept { return zero_rhs_; }
  // beta_{k+1} vanished: u^(k) is the exact solution
  bool lucky_breakdown() const noexcept { return lucky_; }
  // alpha vanished: the last step could not be completed
  bool alpha_breakdown() const noexcept { return alpha_breakdown_; }

  // Filled when the basis is kept (or reorthogonalization is on).
  const std::vector<Vector>& v_basis() const noexcept { return v_basis_; }
  const std::vector<Vector>& q_basis() const noexcept { return q_basis_; }

  const RegularizedSystem& system() const noexcept { return *sys_; }

 private:
  friend GkbState gkb_init(const RegularizedSystem& reg, bool reorthogonalize, bool keep_basis);
  friend void gkb_step(GkbState& state);

  void look_ahead();

  const RegularizedSystem* sys_ = nullptr;
  bool reorth_ = false;
  bool keep_ = false;
  std::size_t k_ = 0;
  double beta1_ = 0.0;
  double threshold_ = 0.0;
  bool zero_rhs_ = false;
  bool lucky_ = false;
  bool alpha_breakdown_ = false;

  Vector u_, p_, v_, q_, d_;
  Vector next_q_;  // beta_{k+1} q_{k+1}
  std::vector<double> alphas_, betas_, zetas_;
  std::vector<Vector> v_basis_, q_basis_;
};

// The system must outlive the state.
GkbState gkb_init(const RegularizedSystem& reg, bool reorthogonalize = false, bool keep_basis = false);
// Advances k by one. Throws InvalidConfig when the state is already in
// breakdown (or was built from a zero right-hand side).
void gkb_step(GkbState& state);

// ||r^(k)||_{N^{-1}} of the second block equation, |beta_{k+1} zeta_k|.
double residual_dual_norm(const GkbState& state);

struct BoundCheck {
  bool converged = false;
  std::optional<double> value;
};

// xi^2 = sum of zeta_j^2 for j = k-d+1..k, defined once k > d.
// zetas[j-1] = zeta_j.
BoundCheck check_lower_bound(std::span<const double> zetas, std::size_t k, std::size_t d, double tau);
// Xi^2 = xi^2 + phi_k.
BoundCheck check_upper_bound(std::span<const double> zetas, std::size_t k, std::size_t d, double tau,
                             double phi_k);

// Running Gauss-Radau quadrature term phi_k for a prescribed lower bound a
// on the smallest singular value of the bidiagonal operator.
class GaussRadauBound {
 public:
  GaussRadauBound(double a, RadauFormula formula);

  // Feed iteration k (called for k = 1, 2, ... in order). beta_next is only
  // read by the GaussRadau formula. Throws InvalidSingularValueBound when a
  // radicand or pivot is not positive, i.e. a is too large.
  double update(double alpha_k, double beta_k, double beta_next, double zeta_k);

  double a() const noexcept { return a_; }
  std::size_t iteration() const noexcept { return k_; }
  double phi() const noexcept { return phi_; }

 private:
  double a_;
  RadauFormula formula_;
  std::size_t k_ = 0;
  double pivot_ = 0.0;       // d-bar_k or delta_k
  double varpi_ = 0.0;
  double prev_alpha_ = 0.0;
  double phi_ = 0.0;
};

struct IterationRecord {
  std::size_t k = 0;
  double zeta = 0.0;
  std::optional<double> xi;
  std::optional<double> Xi;
  std::optional<double> residual_proxy;
  std::optional<double> true_error;
  double ms = 0.0;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct ConvergenceHistory {
  std::vector<IterationRecord> records;
  std::optional<std::size_t> stop_iteration;
  // Iterate whose error the stopping estimate bounds (k - d).
  std::optional<std::size_t> certified_iteration;
};

struct GkbResult {
  Vector u;
  Vector p;
  GkbStatus status = GkbStatus::MaxitReached;
  std::size_t iterations = 0;
  ConvergenceHistory history;
  std::string diagnostic;
  // kept only with GkbConfig::keep_basis
  std::vector<Vector> v_basis;
  std::vector<Vector> q_basis;
};

// Craig-variant GKB on [M A; A^T 0][u; p] = [0; b]. Breakdowns come back as
// statuses; configuration errors throw.
GkbResult gkb_solve(const RegularizedSystem& reg, const GkbConfig& config);

struct SaddleSolution {
  Vector w;
  Vector p;
  GkbResult gkb;
};

// Runs gkb_solve and maps (u, p') back to the original unknowns.
SaddleSolution solve_saddle(const RegularizedSystem& reg, const GkbConfig& config);

}  // namespace saddlegkb
