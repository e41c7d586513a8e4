#include "saddlegkb/gkb.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "saddlegkb/error.hpp"

namespace saddlegkb {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Two passes of classical Gram-Schmidt against `basis` in the inner product
// x^T (scale * G) y, where apply_g(x) computes G x.
template <class ApplyG>
void orthogonalize(Vector& x, const std::vector<Vector>& basis, ApplyG apply_g) {
  for (int pass = 0; pass < 2; ++pass) {
    const Vector gx = apply_g(x);
    std::vector<double> c(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) c[j] = dot(basis[j], gx);
    for (std::size_t j = 0; j < basis.size(); ++j) axpy(-c[j], basis[j], x);
  }
}

}  // namespace

BoundMode parse_bound_mode(std::string_view text) {
  if (text == "lower") return BoundMode::Lower;
  if (text == "upper") return BoundMode::Upper;
  if (text == "both") return BoundMode::Both;
  throw Error(ErrorCode::InvalidConfig, "unknown bound mode '" + std::string(text) + "'");
}

std::string_view to_string(BoundMode mode) noexcept {
  switch (mode) {
    case BoundMode::Lower: return "lower";
    case BoundMode::Upper: return "upper";
    case BoundMode::Both: return "both";
  }
  return "lower";
}

RadauFormula parse_radau_formula(std::string_view text) {
  if (text == "as-printed") return RadauFormula::AsPrinted;
  if (text == "gauss-radau") return RadauFormula::GaussRadau;
  throw Error(ErrorCode::InvalidConfig, "unknown radau formula '" + std::string(text) + "'");
}

std::string_view to_string(RadauFormula formula) noexcept {
  return formula == RadauFormula::AsPrinted ? "as-printed" : "gauss-radau";
}

std::string_view to_string(GkbStatus status) noexcept {
  switch (status) {
    case GkbStatus::Converged: return "converged";
    case GkbStatus::LuckyBreakdown: return "lucky-breakdown";
    case GkbStatus::MaxitReached: return "maxit-reached";
    case GkbStatus::Breakdown: return "breakdown";
  }
  return "breakdown";
}

void GkbConfig::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::InvalidConfig, "tau must lie in (0, 1)");
  if (delay == 0) throw Error(ErrorCode::InvalidConfig, "delay must be >= 1");
  if (maxit == 0) throw Error(ErrorCode::InvalidConfig, "maxit must be >= 1");
  if (bound_mode != BoundMode::Lower) {
    if (!sigma_lower_bound) {
      throw Error(ErrorCode::InvalidConfig,
                  "bound mode " + std::string(to_string(bound_mode)) + " needs sigma_lb");
    }
  }
  if (sigma_lower_bound && (!(*sigma_lower_bound > 0.0) || !std::isfinite(*sigma_lower_bound))) {
    throw Error(ErrorCode::InvalidConfig, "sigma_lb must be > 0");
  }
}

void GkbState::look_ahead() {
  const auto& reg = *sys_;
  const double s = reg.n_inverse_scale();
  Vector g = transpose_mat_vec(reg.A(), v_);
  g *= s;
  axpy(-alphas_.back(), q_, g);
  if (reorth_) {
    orthogonalize(g, q_basis_, [s](const Vector& x) { return (1.0 / s) * x; });
  }
  const double beta = std::sqrt(dot(g, g) / s);
  betas_.push_back(beta);
  next_q_ = std::move(g);
  lucky_ = !(beta > threshold_);
}

GkbState gkb_init(const RegularizedSystem& reg, bool reorthogonalize, bool keep_basis) {
  GkbState st;
  st.sys_ = &reg;
  st.reorth_ = reorthogonalize;
  st.keep_ = keep_basis || reorthogonalize;
  const auto m = reg.m();
  const auto n = reg.n();
  st.u_ = Vector(m);
  st.p_ = Vector(n);

  const double s = reg.n_inverse_scale();
  const auto& b = reg.b();
  st.beta1_ = std::sqrt(s) * norm2(b);
  st.threshold_ = 1e-13 * (st.beta1_ + 1.0);
  if (st.beta1_ == 0.0) {
    st.zero_rhs_ = true;
    return st;
  }
  st.q_ = (s / st.beta1_) * b;
  Vector w = reg.M_factor().solve(mat_vec(reg.A(), st.q_));
  const double alpha = weighted_norm(w, reg.M());
  st.betas_.push_back(st.beta1_);
  if (!(alpha > st.threshold_)) {
    st.alpha_breakdown_ = true;
    return st;
  }
  st.v_ = (1.0 / alpha) * std::move(w);
  const double zeta = st.beta1_ / alpha;
  st.d_ = (1.0 / alpha) * st.q_;
  st.u_ = zeta * st.v_;
  st.p_ = (-zeta) * st.d_;
  st.alphas_.push_back(alpha);
  st.zetas_.push_back(zeta);
  st.k_ = 1;
  if (st.keep_) {
    st.v_basis_.push_back(st.v_);
    st.q_basis_.push_back(st.q_);
  }
  st.look_ahead();
  return st;
}

void gkb_step(GkbState& st) {
  if (st.zero_rhs_ || st.lucky_ || st.alpha_breakdown_ || st.k_ == 0) {
    throw Error(ErrorCode::InvalidConfig, "cannot step a GKB state that has terminated");
  }
  const auto& reg = *st.sys_;
  const double beta = st.betas_.back();
  Vector q = (1.0 / beta) * st.next_q_;
  Vector w = reg.M_factor().solve(mat_vec(reg.A(), q));
  axpy(-beta, st.v_, w);
  if (st.reorth_) {
    orthogonalize(w, st.v_basis_, [&reg](const Vector& x) { return mat_vec(reg.M(), x); });
  }
  const double alpha = weighted_norm(w, reg.M());
  if (!(alpha > st.threshold_)) {
    st.alpha_breakdown_ = true;
    return;
  }
  const double zeta = -(beta / alpha) * st.zetas_.back();
  st.v_ = (1.0 / alpha) * std::move(w);
  Vector d = q;
  axpy(-beta, st.d_, d);
  d *= 1.0 / alpha;
  st.q_ = std::move(q);
  st.d_ = std::move(d);
  axpy(zeta, st.v_, st.u_);
  axpy(-zeta, st.d_, st.p_);
  st.alphas_.push_back(alpha);
  st.zetas_.push_back(zeta);
  ++st.k_;
  if (st.keep_) {
    st.v_basis_.push_back(st.v_);
    st.q_basis_.push_back(st.q_);
  }
  st.look_ahead();
}

double residual_dual_norm(const GkbState& state) {
  if (state.iteration() == 0) return state.beta1();
  return std::abs(state.next_beta() * state.zeta());
}

BoundCheck check_lower_bound(std::span<const double> zetas, std::size_t k, std::size_t d, double tau) {
  if (d == 0) throw Error(ErrorCode::InvalidConfig, "delay must be >= 1");
  if (zetas.size() < k) {
    throw Error(ErrorCode::DimensionMismatch, "need " + std::to_string(k) + " zetas, have " +
                                                  std::to_string(zetas.size()));
  }
  if (k <= d) return {};
  double sum = 0.0;
  for (std::size_t j = k - d; j < k; ++j) sum += zetas[j] * zetas[j];
  const double xi = std::sqrt(sum);
  return {xi <= tau, xi};
}

BoundCheck check_upper_bound(std::span<const double> zetas, std::size_t k, std::size_t d, double tau,
                             double phi_k) {
  const auto lower = check_lower_bound(zetas, k, d, tau);
  if (!lower.value) return {};
  const double Xi = std::sqrt(*lower.value * *lower.value + phi_k);
  return {Xi <= tau, Xi};
}

GaussRadauBound::GaussRadauBound(double a, RadauFormula formula) : a_(a), formula_(formula) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::InvalidSingularValueBound, "a must be > 0");
  }
}

double GaussRadauBound::update(double alpha_k, double beta_k, double beta_next, double zeta_k) {
  ++k_;
  const double a2 = a_ * a_;
  auto invalid = [this](const char* what, double value) {
    throw Error(ErrorCode::InvalidSingularValueBound,
                std::string(what) + " = " + std::to_string(value) + " at k = " + std::to_string(k_) +
                    "; a = " + std::to_string(a_) + " exceeds the smallest singular value");
  };
  if (formula_ == RadauFormula::AsPrinted) {
    const double base = alpha_k * alpha_k + beta_k * beta_k;
    pivot_ = k_ == 1 ? base - a2 : base - varpi_;
    if (!(pivot_ > 0.0)) invalid("d-bar", pivot_);
    varpi_ = a2 + (alpha_k * alpha_k * beta_k * beta_k) / pivot_;
    const double radicand = pivot_ + a2 - beta_k * beta_k;
    if (!(radicand > 0.0)) invalid("radicand", radicand);
    phi_ = beta_k * beta_k * zeta_k * zeta_k / std::sqrt(radicand);
  } else {
    if (k_ == 1) {
      pivot_ = alpha_k * alpha_k - a2;
    } else {
      const double c = prev_alpha_ * beta_k;
      pivot_ = alpha_k * alpha_k + beta_k * beta_k - a2 - c * c / pivot_;
    }
    if (!(pivot_ > 0.0)) invalid("delta", pivot_);
    const double c = alpha_k * beta_next;
    varpi_ = a2 + c * c / pivot_;
    const double denom = varpi_ - beta_next * beta_next;
    if (!(denom > 0.0)) invalid("omega - beta^2", denom);
    phi_ = beta_next * beta_next * zeta_k * zeta_k / denom;
    prev_alpha_ = alpha_k;
  }
  return phi_;
}

GkbResult gkb_solve(const RegularizedSystem& reg, const GkbConfig& config) {
  config.validate();
  if (config.reference_u) require_same_size(reg.m(), config.reference_u->size(), "reference_u");

  GkbResult result;
  auto start = Clock::now();
  GkbState st = gkb_init(reg, config.reorthogonalize, config.keep_basis);
  double step_ms = elapsed_ms(start);

  if (st.zero_rhs()) {
    result.u = st.u();
    result.p = st.p();
    result.status = GkbStatus::Converged;
    result.diagnostic = "zero right-hand side";
    result.history.stop_iteration = 0;
    return result;
  }
  if (st.alpha_breakdown() && st.iteration() == 0) {
    result.u = st.u();
    result.p = st.p();
    result.status = GkbStatus::Breakdown;
    result.diagnostic = "alpha_1 vanished: A^T has b outside its range under M";
    result.history.stop_iteration = 0;
    return result;
  }

  std::optional<GaussRadauBound> radau;
  if (config.bound_mode != BoundMode::Lower) {
    radau.emplace(*config.sigma_lower_bound, config.radau_formula);
  }

  while (true) {
    const auto k = st.iteration();
    IterationRecord rec;
    rec.k = k;
    rec.zeta = st.zeta();
    rec.ms = step_ms;
    rec.residual_proxy = residual_dual_norm(st);
    if (config.reference_u) rec.true_error = weighted_norm(*config.reference_u - st.u(), reg.M());

    const auto lower = check_lower_bound(st.zetas(), k, config.delay, config.tau);
    rec.xi = lower.value;
    BoundCheck upper;
    if (radau) {
      const double phi = radau->update(st.alpha(), st.beta(), st.next_beta(), st.zeta());
      upper = check_upper_bound(st.zetas(), k, config.delay, config.tau, phi);
      rec.Xi = upper.value;
    }
    result.history.records.push_back(rec);

    const bool converged = config.bound_mode == BoundMode::Upper ? upper.converged : lower.converged;
    if (converged) {
      result.status = GkbStatus::Converged;
      result.history.certified_iteration = k - config.delay;
      break;
    }
    if (st.lucky_breakdown()) {
      result.status = GkbStatus::LuckyBreakdown;
      result.diagnostic = "beta_" + std::to_string(k + 1) + " vanished; iterate is exact";
      break;
    }
    if (k >= config.maxit) {
      result.status = GkbStatus::MaxitReached;
      break;
    }
    start = Clock::now();
    gkb_step(st);
    step_ms = elapsed_ms(start);
    if (st.alpha_breakdown()) {
      result.status = GkbStatus::Breakdown;
      result.diagnostic = "alpha_" + std::to_string(k + 1) + " vanished; returning iterate " +
                          std::to_string(k);
      break;
    }
  }

  result.iterations = st.iteration();
  result.history.stop_iteration = st.iteration();
  result.u = st.u();
  result.p = st.p();
  if (config.keep_basis) {
    result.v_basis = st.v_basis();
    result.q_basis = st.q_basis();
  }
  return result;
}

SaddleSolution solve_saddle(const RegularizedSystem& reg, const GkbConfig& config) {
  SaddleSolution out;
  out.gkb = gkb_solve(reg, config);
  out.w = recover_displacement(reg, out.gkb.u);
  out.p = recover_multiplier(reg, out.gkb.p);
  return out;
}

}  // namespace saddlegkb
