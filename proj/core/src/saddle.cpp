#include "saddlegkb/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "saddlegkb/error.hpp"

namespace saddlegkb {

namespace {

std::string coords(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

[[noreturn]] void pattern_error(std::size_t i, std::size_t j, const std::string& why) {
  throw Error(ErrorCode::PatternMismatch, "entry " + coords(i, j) + ": " + why);
}

// The double nearest to scaled/gamma whose product with gamma rounds back
// to `scaled`; falls back to the plain quotient when no neighbour does.
double unscale(double scaled, double gamma) {
  const double q = scaled / gamma;
  if (q * gamma == scaled) return q;
  double up = q;
  double down = q;
  for (int step = 0; step < 4; ++step) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    if (up * gamma == scaled) return up;
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (down * gamma == scaled) return down;
  }
  return q;
}

}  // namespace

SaddleSystem make_saddle_system(SparseSymMatrix w, SparseMatrix a, Vector g, Vector r) {
  const auto m = w.size();
  if (a.nrows() != m) {
    throw Error(ErrorCode::DimensionMismatch,
                "A has " + std::to_string(a.nrows()) + " rows but W is " + std::to_string(m) + "x" +
                    std::to_string(m));
  }
  if (a.ncols() > m) {
    throw Error(ErrorCode::DimensionMismatch, "more constraints (" + std::to_string(a.ncols()) +
                                                  ") than unknowns (" + std::to_string(m) + ")");
  }
  require_same_size(m, g.size(), "g");
  require_same_size(a.ncols(), r.size(), "r");
  return SaddleSystem{std::move(w), std::move(a), std::move(g), std::move(r)};
}

RegularizedSystem regularize(const SaddleSystem& sys, double eta, double gamma) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::NonpositiveEta, "eta must be >= 0, got " + std::to_string(eta));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::NonpositiveEta, "gamma must be > 0, got " + std::to_string(gamma));
  }
  RegularizedSystem reg;
  reg.source_ = std::make_shared<const SaddleSystem>(
      make_saddle_system(sys.W, sys.A, sys.g, sys.r));
  reg.eta_ = eta;
  reg.gamma_ = gamma;
  reg.n_inverse_scale_ = eta > 0.0 ? eta : 1.0;

  const double w_scale = gamma == 1.0 ? 1.0 : 1.0 / gamma;
  reg.m_ = add_outer_product(sys.W, w_scale, sys.A, eta);
  reg.factor_ = spd_factor(reg.m_);

  Vector rhs = sys.g;
  if (gamma != 1.0) rhs *= w_scale;
  // M w + A p' = g/gamma + eta A r, so the shift carries +eta A r
  if (eta > 0.0) axpy(eta, mat_vec(sys.A, sys.r), rhs);
  reg.shift_ = reg.factor_.solve(rhs);
  reg.b_ = sys.r - transpose_mat_vec(sys.A, reg.shift_);
  return reg;
}

RegularizedSystem RegularizedSystem::from_transformed(SparseSymMatrix m, SparseMatrix a, double eta,
                                                      Vector b) {
  if (!(eta > 0.0)) throw Error(ErrorCode::NonpositiveEta, "eta must be > 0");
  const auto size = m.size();
  RegularizedSystem reg;
  reg.source_ = std::make_shared<const SaddleSystem>(make_saddle_system(m, std::move(a), Vector(size), b));
  reg.m_ = std::move(m);
  reg.factor_ = spd_factor(reg.m_);
  reg.eta_ = eta;
  reg.gamma_ = 1.0;
  reg.n_inverse_scale_ = eta;
  reg.b_ = std::move(b);
  reg.shift_ = Vector(size);
  return reg;
}

Vector recover_displacement(const RegularizedSystem& reg, const Vector& u) {
  require_same_size(reg.m(), u.size(), "recover_displacement");
  return u + reg.shift();
}

Vector recover_multiplier(const RegularizedSystem& reg, const Vector& p) {
  require_same_size(reg.n(), p.size(), "recover_multiplier");
  if (reg.gamma() == 1.0) return p;
  return reg.gamma() * p;
}

double compute_gamma(const SparseSymMatrix& w) {
  if (w.size() == 0) throw Error(ErrorCode::EmptyMatrix, "gamma needs a nonempty diagonal");
  const auto d = w.diagonal_values();
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  return 0.5 * (*lo + *hi);
}

EtaMode parse_eta_mode(std::string_view text) {
  if (text == "wnorm") return EtaMode::WNorm;
  if (text == "wnorm-over-gamma") return EtaMode::WNormOverGamma;
  if (text == "golub-greiff") return EtaMode::GolubGreiff;
  if (text == "explicit") return EtaMode::Explicit;
  throw Error(ErrorCode::InvalidConfig, "unknown eta mode '" + std::string(text) + "'");
}

std::string_view to_string(EtaMode mode) noexcept {
  switch (mode) {
    case EtaMode::WNorm: return "wnorm";
    case EtaMode::WNormOverGamma: return "wnorm-over-gamma";
    case EtaMode::GolubGreiff: return "golub-greiff";
    case EtaMode::Explicit: return "explicit";
  }
  return "explicit";
}

double recommend_eta(const SparseSymMatrix& w, const SparseMatrix& a, double gamma, EtaMode mode,
                     double explicit_value) {
  const bool uses_gamma = mode == EtaMode::WNormOverGamma || mode == EtaMode::GolubGreiff;
  if (uses_gamma && !(gamma > 0.0)) {
    throw Error(ErrorCode::NonpositiveEta, "gamma must be > 0 for eta mode " + std::string(to_string(mode)));
  }
  double eta = 0.0;
  switch (mode) {
    case EtaMode::WNorm: eta = one_norm(w); break;
    case EtaMode::WNormOverGamma: eta = one_norm(w) / gamma; break;
    case EtaMode::GolubGreiff: {
      const double an = one_norm(a);
      eta = an > 0.0 ? gamma * one_norm(w) / (an * an) : 0.0;
      break;
    }
    case EtaMode::Explicit: eta = explicit_value; break;
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::NonpositiveEta, "eta = " + std::to_string(eta) + " is not positive");
  }
  return eta;
}

DoubleLagrangeSystem build_double_lagrange(const SaddleSystem& sys, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::NonpositiveEta, "gamma must be > 0");
  const auto m = sys.m();
  const auto n = sys.n();
  std::vector<Triplet> t;
  for (const auto& e : sys.W.matrix().triplets()) {
    if (e.row <= e.col) t.push_back(e);
  }
  for (const auto& e : sys.A.triplets()) {
    const double v = gamma * e.value;
    t.push_back({e.row, m + e.col, v});
    t.push_back({e.row, m + n + e.col, v});
  }
  for (std::size_t j = 0; j < n; ++j) {
    t.push_back({m + j, m + j, -gamma});
    t.push_back({m + n + j, m + n + j, -gamma});
    t.push_back({m + j, m + n + j, gamma});
  }
  DoubleLagrangeSystem dl;
  dl.K = SparseSymMatrix::from_triangle_triplets(m + 2 * n, t);
  dl.gamma = gamma;
  dl.m = m;
  dl.n = n;
  dl.rhs = Vector(m + 2 * n);
  for (std::size_t i = 0; i < m; ++i) dl.rhs[i] = sys.g[i];
  for (std::size_t j = 0; j < n; ++j) {
    dl.rhs[m + j] = gamma * sys.r[j];
    dl.rhs[m + n + j] = gamma * sys.r[j];
  }
  return dl;
}

double infer_gamma(const SparseSymMatrix& k, std::size_t m, std::size_t n) {
  if (k.size() != m + 2 * n || n == 0) {
    throw Error(ErrorCode::PatternMismatch, "K is " + std::to_string(k.size()) + "x" +
                                                std::to_string(k.size()) + ", expected m + 2n = " +
                                                std::to_string(m + 2 * n) + " with n > 0");
  }
  const double gamma = -k.at(m, m);
  if (!(gamma > 0.0)) pattern_error(m, m, "expected -gamma < 0 on the multiplier diagonal");
  return gamma;
}

SaddleSystem extract_double_lagrange(const DoubleLagrangeSystem& dl) {
  const auto m = dl.m;
  const auto n = dl.n;
  const auto& k = dl.K.matrix();
  if (k.nrows() != m + 2 * n) {
    throw Error(ErrorCode::PatternMismatch, "K is " + std::to_string(k.nrows()) + "x" +
                                                std::to_string(k.nrows()) + ", expected " +
                                                std::to_string(m + 2 * n));
  }
  const double gamma = dl.gamma;
  if (!(gamma > 0.0)) throw Error(ErrorCode::PatternMismatch, "gamma must be > 0");

  std::vector<Triplet> w_entries;
  std::vector<Triplet> a_entries;
  std::vector<std::pair<std::size_t, double>> first;
  std::vector<std::pair<std::size_t, double>> second;
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = k.row(i);
    first.clear();
    second.clear();
    for (std::size_t p = 0; p < r.cols.size(); ++p) {
      const auto j = r.cols[p];
      if (j < m) {
        w_entries.push_back({i, j, r.values[p]});
      } else if (j < m + n) {
        first.emplace_back(j - m, r.values[p]);
      } else {
        second.emplace_back(j - m - n, r.values[p]);
      }
    }
    const auto common = std::min(first.size(), second.size());
    for (std::size_t q = 0; q < common; ++q) {
      if (first[q].first != second[q].first) {
        const auto c = std::min(first[q].first, second[q].first);
        pattern_error(i, (c == first[q].first ? m : m + n) + c, "gamma*A blocks differ in pattern");
      }
      if (first[q].second != second[q].second) {
        pattern_error(i, m + n + second[q].first, "gamma*A blocks differ in value");
      }
    }
    if (first.size() != second.size()) {
      const bool extra_first = first.size() > second.size();
      const auto c = extra_first ? first[common].first : second[common].first;
      pattern_error(i, (extra_first ? m : m + n) + c, "gamma*A blocks differ in pattern");
    }
    for (const auto& [c, v] : first) a_entries.push_back({i, c, unscale(v, gamma)});
  }

  for (std::size_t i = m; i < m + 2 * n; ++i) {
    const auto r = k.row(i);
    const bool upper_block = i < m + n;
    const auto t = upper_block ? i - m : i - m - n;
    const std::size_t own = i;
    const std::size_t partner = upper_block ? m + n + t : m + t;
    bool seen_own = false;
    bool seen_partner = false;
    for (std::size_t p = 0; p < r.cols.size(); ++p) {
      const auto j = r.cols[p];
      if (j < m) continue;  // gamma*A^T, mirrored from the rows above
      if (j == own) {
        if (r.values[p] != -gamma) pattern_error(i, j, "expected -gamma = " + std::to_string(-gamma));
        seen_own = true;
      } else if (j == partner) {
        if (r.values[p] != gamma) pattern_error(i, j, "expected gamma = " + std::to_string(gamma));
        seen_partner = true;
      } else {
        pattern_error(i, j, "unexpected entry in the multiplier blocks");
      }
    }
    if (!seen_own) pattern_error(i, own, "missing -gamma");
    if (!seen_partner) pattern_error(i, partner, "missing gamma");
  }

  Vector g(m);
  Vector r(n);
  if (!dl.rhs.empty()) {
    require_same_size(m + 2 * n, dl.rhs.size(), "double-Lagrange right-hand side");
    for (std::size_t i = 0; i < m; ++i) g[i] = dl.rhs[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double f1 = dl.rhs[m + j];
      const double f2 = dl.rhs[m + n + j];
      r[j] = f1 == f2 ? unscale(f1, gamma) : (f1 + f2) / (2.0 * gamma);
    }
  }
  return make_saddle_system(SparseSymMatrix(SparseMatrix::from_triplets(m, m, w_entries)),
                            SparseMatrix::from_triplets(m, n, a_entries), std::move(g), std::move(r));
}

}  // namespace saddlegkb
