// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed
// here; a failing line is a finding, not something to tune away.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "saddlegkb/generators.hpp"
#include "saddlegkb/gkb.hpp"
#include "saddlegkb/io.hpp"
#include "saddlegkb/oracle.hpp"
#include "saddlegkb/saddle.hpp"

using namespace saddlegkb;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> info;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::printf("criterion %d %s: %s | %s\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
  for (const auto& line : o.info) std::printf("    %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Vector reference_u(const RegularizedSystem& reg) {
  return direct_saddle_solve(reg.source()).w - reg.shift();
}

// ---- 1 ---------------------------------------------------------------------

constexpr double kKappaSlack = 1e-8;
constexpr double kMuTol = 1e-10;

Outcome theorem_bound() {
  const auto t0 = Clock::now();
  std::vector<SaddleSystem> cases;
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<std::size_t> m_dist(60, 200);
  for (int i = 0; i < 20; ++i) {
    const auto m = m_dist(rng);
    const auto n = std::uniform_int_distribution<std::size_t>(5, std::min<std::size_t>(50, m / 2))(rng);
    const double cond = std::pow(10.0, std::uniform_real_distribution<double>(0.5, 4.0)(rng));
    cases.push_back(gen_random(m, n, 1000 + static_cast<std::uint64_t>(i), cond));
  }
  cases.push_back(gen_constrained_grid(8));
  cases.push_back(gen_constrained_grid(16));

  double worst_kappa = 0.0;
  double worst_mu = 0.0;
  std::size_t checks = 0;
  for (const auto& sys : cases) {
    const double lambda1 = lambda_min_schur(sys.W, sys.A);
    for (double c : {1.0, 2.0, 10.0}) {
      const auto rep = verify_theorem(sys.W, sys.A, c / lambda1);
      worst_kappa = std::max(worst_kappa, rep.kappa_squared);
      worst_mu = std::max(worst_mu, rep.max_mu_deviation);
      ++checks;
    }
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = worst_kappa <= 2.0 + kKappaSlack && worst_mu <= kMuTol && elapsed < 60.0;
  o.detail = std::to_string(checks) + " (instance, c) pairs; max kappa^2 " + fmt("%.6f", worst_kappa) +
             " (<= 2 + 1e-8), max |mu - eta lambda/(1+eta lambda)| " + fmt("%.2e", worst_mu) + " (<= 1e-10), " +
             fmt("%.1f", elapsed) + " s (< 60 s)";
  o.info.push_back("sanity: eta lambda_1 = 1.02 gives bound " + fmt("%.4f", (1.0 + 1.02) / 1.02) +
                   ", the reference measurement 1.978 lies below it");
  return o;
}

// ---- 2 ---------------------------------------------------------------------

constexpr double kOracleTol = 1e-8;

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  struct Case {
    std::string name;
    SaddleSystem sys;
  };
  std::vector<Case> cases{
      {"constrained-grid 16", gen_constrained_grid(16)},
      {"constrained-grid 16 chain", gen_constrained_grid(16, PatchForm::Chain, true)},
      {"semidefinite-coupled 16", gen_semidefinite_coupled(16, 8)},
      {"semidefinite-coupled 8 inhomogeneous", gen_semidefinite_coupled(8, 6, PatchForm::Star, true)},
      {"random 200x40", gen_random(200, 40, 7, 1e3, true)},
      {"random 150x60", gen_random(150, 60, 8, 1e5, true)},
  };
  GkbConfig cfg;
  cfg.tau = 1e-10;
  cfg.delay = 2;
  double worst_w = 0.0;
  double worst_p = 0.0;
  std::string worst_name;
  bool all_converged = true;
  for (const auto& c : cases) {
    const auto reg = regularize(c.sys, one_norm(c.sys.W));
    const auto sol = solve_saddle(reg, cfg);
    all_converged = all_converged && sol.gkb.status != GkbStatus::MaxitReached && sol.gkb.status != GkbStatus::Breakdown;
    const auto direct = direct_saddle_solve(c.sys);
    const double ew = norm2(sol.w - direct.w) / norm2(direct.w);
    const double ep = norm2(sol.p - direct.p) / norm2(direct.p);
    if (std::max(ew, ep) > std::max(worst_w, worst_p)) worst_name = c.name;
    worst_w = std::max(worst_w, ew);
    worst_p = std::max(worst_p, ep);
  }
  // gamma-scaled path as taken by double Lagrange input
  {
    const auto sys = gen_semidefinite_coupled(8, 6);
    const double gamma = compute_gamma(sys.W);
    const auto reg = regularize(sys, recommend_eta(sys.W, sys.A, gamma, EtaMode::WNormOverGamma), gamma);
    const auto sol = solve_saddle(reg, cfg);
    const auto direct = direct_saddle_solve(sys);
    worst_w = std::max(worst_w, norm2(sol.w - direct.w) / norm2(direct.w));
    worst_p = std::max(worst_p, norm2(sol.p - direct.p) / norm2(direct.p));
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = all_converged && worst_w <= kOracleTol && worst_p <= kOracleTol && elapsed < 120.0;
  o.detail = std::to_string(cases.size() + 1) + " systems, tau 1e-10, d 2: max rel err w " + fmt("%.2e", worst_w) +
             ", p " + fmt("%.2e", worst_p) + " (<= 1e-8), worst " + worst_name + ", " + fmt("%.1f", elapsed) +
             " s (< 120 s)";
  return o;
}

// ---- 3 and 6 share one run ---------------------------------------------------

constexpr double kIdentityTol = 1e-6;
// Error magnitudes below this fraction of ||u||_M sit within a few orders
// of the dense oracle's own accuracy and are not compared.
constexpr double kIdentityFloor = 1e-8;
constexpr double kBoundSlack = 1e-12;
constexpr double kResidualTol = 1e-8;

struct GridRun {
  RegularizedSystem reg;
  Vector u;
  double sigma_n = 0.0;
  std::size_t delay = 5;
  GkbResult printed;
  GkbResult textbook;
  std::vector<Vector> iterates;
  std::vector<double> zetas;
  std::vector<double> proxies;
};

GridRun& grid_run() {
  static GridRun run = [] {
    static const auto sys = gen_constrained_grid(16);
    const double eta = one_norm(sys.W);
    GridRun r{regularize(sys, eta), {}, 0.0, 5, {}, {}, {}, {}, {}};
    r.u = reference_u(r.reg);
    r.sigma_n = elliptic_singular_values(r.reg.M(), sys.A, eta).back();
    GkbConfig cfg;
    cfg.tau = 1e-14;
    cfg.delay = r.delay;
    cfg.maxit = sys.n();
    cfg.bound_mode = BoundMode::Both;
    cfg.sigma_lower_bound = 0.9 * r.sigma_n;
    cfg.reference_u = r.u;
    r.printed = gkb_solve(r.reg, cfg);
    cfg.radau_formula = RadauFormula::GaussRadau;
    r.textbook = gkb_solve(r.reg, cfg);

    auto st = gkb_init(r.reg);
    while (true) {
      r.iterates.push_back(st.u());
      r.proxies.push_back(residual_dual_norm(st));
      if (st.iteration() >= r.printed.iterations || st.lucky_breakdown()) break;
      gkb_step(st);
    }
    r.zetas = st.zetas();
    return r;
  }();
  return run;
}

Outcome error_identity_and_sandwich() {
  auto& r = grid_run();
  const double u_norm = weighted_norm(r.u, r.reg.M());
  const auto& recs = r.printed.history.records;
  Outcome o;
  if (recs.size() != r.iterates.size()) {
    o.pass = false;
    o.detail = "manual and library runs differ in length";
    return o;
  }

  double worst_identity = 0.0;
  std::size_t identity_checked = 0;
  for (std::size_t k = 1; k <= recs.size(); ++k) {
    const double err = *recs[k - 1].true_error;
    if (err < kIdentityFloor * u_norm) continue;
    double tail = 0.0;
    for (std::size_t j = k; j < r.zetas.size(); ++j) tail += r.zetas[j] * r.zetas[j];
    worst_identity = std::max(worst_identity, std::abs(err * err - tail) / (err * err));
    ++identity_checked;
  }

  auto err_at = [&](std::size_t k) { return *recs[k - 1].true_error; };
  double worst_lower = -1e300;
  double worst_printed = -1e300;
  std::size_t worst_printed_k = 0;
  double worst_textbook = -1e300;
  std::size_t bound_checks = 0;
  for (const auto& rec : recs) {
    if (!rec.xi) continue;
    const double e = err_at(rec.k - r.delay);
    worst_lower = std::max(worst_lower, *rec.xi - e);
    if (e - *rec.Xi > worst_printed) {
      worst_printed = e - *rec.Xi;
      worst_printed_k = rec.k;
    }
    ++bound_checks;
  }
  for (const auto& rec : r.textbook.history.records) {
    if (rec.Xi) worst_textbook = std::max(worst_textbook, err_at(rec.k - r.delay) - *rec.Xi);
  }

  const bool identity_ok = identity_checked > 0 && worst_identity <= kIdentityTol;
  const bool lower_ok = worst_lower <= kBoundSlack;
  const bool upper_ok = worst_printed <= kBoundSlack;
  o.pass = identity_ok && lower_ok && upper_ok;
  o.detail = "grid 16, k = 1.." + std::to_string(recs.size()) + ": identity max rel dev " +
             fmt("%.2e", worst_identity) + " over " + std::to_string(identity_checked) + " iterates (<= 1e-6); max(xi - ||e||) " +
             fmt("%.2e", worst_lower) + " (<= 1e-12); max(||e|| - Xi) " + fmt("%.2e", worst_printed) + " at k = " +
             std::to_string(worst_printed_k) + " (<= 1e-12)";
  o.info.push_back("upper bound uses the phi_k recurrence as printed (square root over the shifted pivot), a = 0.9 sigma_n = " +
                   fmt("%.6g", 0.9 * r.sigma_n) + (upper_ok ? "" : "; the printed recurrence undercuts the true error"));
  o.info.push_back("info: textbook Gauss-Radau recurrence on the same run: max(||e|| - Xi) " + fmt("%.2e", worst_textbook) +
                   (worst_textbook <= kBoundSlack ? " (holds)" : " (violated)"));
  o.info.push_back("xi and Xi at step k are compared with ||e^(k-d)||_M, d = " + std::to_string(r.delay) +
                   "; identity compared while ||e||_M >= 1e-8 ||u||_M");
  return o;
}

// Forward error of the explicit residual: |fl(A^T u - b) - (A^T u - b)| is
// bounded componentwise by (c + 1) u_round (|A^T| |u| + |b|), c the largest
// column count of A. The identity is checked to 1e-8 relative on top of it.
double explicit_residual_rounding(const RegularizedSystem& reg, const Vector& u) {
  const auto& a = reg.A();
  std::vector<std::size_t> col_count(a.ncols(), 0);
  for (auto c : a.col_idx()) ++col_count[c];
  const auto c = *std::max_element(col_count.begin(), col_count.end());
  Vector abs_u(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) abs_u[i] = std::abs(u[i]);
  std::vector<Triplet> t;
  for (const auto& e : a.triplets()) t.push_back({e.row, e.col, std::abs(e.value)});
  auto bound = transpose_mat_vec(SparseMatrix::from_triplets(a.nrows(), a.ncols(), t), abs_u);
  for (std::size_t j = 0; j < bound.size(); ++j) bound[j] += std::abs(reg.b()[j]);
  const double unit = std::ldexp(1.0, -53);
  return static_cast<double>(c + 1) * unit * std::sqrt(reg.n_inverse_scale()) * norm2(bound);
}

Outcome residual_identity() {
  auto& r = grid_run();
  double worst_strict = 0.0;
  double worst_loose = 0.0;
  std::size_t strict = 0;
  bool pass = !r.iterates.empty();
  for (std::size_t i = 0; i < r.iterates.size(); ++i) {
    const auto res = transpose_mat_vec(r.reg.A(), r.iterates[i]) - r.reg.b();
    const double explicit_norm = std::sqrt(r.reg.n_inverse_scale()) * norm2(res);
    const double rounding = explicit_residual_rounding(r.reg, r.iterates[i]);
    const double dev = std::abs(r.proxies[i] - explicit_norm);
    pass = pass && dev <= kResidualTol * explicit_norm + rounding;
    if (rounding <= kResidualTol * explicit_norm) {
      ++strict;
      worst_strict = std::max(worst_strict, dev / explicit_norm);
    } else {
      worst_loose = std::max(worst_loose, dev / (kResidualTol * explicit_norm + rounding));
    }
  }
  Outcome o;
  o.pass = pass;
  o.detail = "|beta_{k+1} zeta_k| vs ||A^T u^(k) - b||_{N^-1}, k = 1.." + std::to_string(r.iterates.size()) + ": " +
             std::to_string(strict) + " iterates resolvable to 1e-8, max rel gap " + fmt("%.2e", worst_strict) +
             " (<= 1e-8); " + std::to_string(r.iterates.size() - strict) +
             " later iterates checked against 1e-8 rel + explicit rounding bound, max gap/allowance " +
             fmt("%.2f", worst_loose) + " (<= 1)";
  return o;
}

// ---- 4 ---------------------------------------------------------------------

Outcome mesh_independence() {
  std::vector<std::size_t> counts;
  bool converged = true;
  std::string row;
  for (std::size_t ng : {8U, 16U, 32U}) {
    const auto sys = gen_constrained_grid(ng);
    const auto reg = regularize(sys, one_norm(sys.W));
    GkbConfig cfg;
    cfg.tau = 1e-5;
    cfg.delay = 5;
    const auto res = gkb_solve(reg, cfg);
    converged = converged && res.status == GkbStatus::Converged;
    counts.push_back(res.iterations);
    row += (row.empty() ? "" : ", ") + std::to_string(ng) + ": " + std::to_string(res.iterations);
  }
  const auto spread = *std::max_element(counts.begin(), counts.end()) - *std::min_element(counts.begin(), counts.end());
  Outcome o;
  o.pass = converged && spread <= 3;
  o.detail = "iterations " + row + "; spread " + std::to_string(spread) + " (<= 3)";
  return o;
}

// ---- 5 ---------------------------------------------------------------------

Outcome eta_monotonicity() {
  const auto sys = gen_constrained_grid(16);
  const double wnorm = one_norm(sys.W);
  const std::vector<double> factors{0.0, 0.1, 1.0, 10.0};
  std::vector<std::size_t> counts;
  std::string row;
  bool converged = true;
  for (double f : factors) {
    const auto reg = regularize(sys, f * wnorm);
    const auto res = gkb_solve(reg, GkbConfig{});
    converged = converged && res.status == GkbStatus::Converged;
    counts.push_back(res.iterations);
    row += (row.empty() ? "" : ", ") + fmt("%g", f) + ": " + std::to_string(res.iterations);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < counts.size(); ++i) monotone = monotone && counts[i] <= counts[i - 1];
  const double ratio = static_cast<double>(counts[2]) / static_cast<double>(counts[0]);
  Outcome o;
  o.pass = converged && monotone && ratio <= 0.25;
  o.detail = "iterations by eta/||W||_1 {" + row + "}; non-increasing " + (monotone ? "yes" : "no") +
             "; count(1)/count(0) = " + fmt("%.3f", ratio) + " (<= 0.25)";
  return o;
}

// ---- 7 ---------------------------------------------------------------------

constexpr std::size_t kOrthoSteps = 30;

double max_deviation(const GkbState& st, const RegularizedSystem& reg, std::size_t upto) {
  double worst = 0.0;
  const auto& v = st.v_basis();
  const auto& q = st.q_basis();
  for (std::size_t i = 0; i < upto; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double id = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(weighted_dot(v[i], v[j], reg.M()) - id));
      worst = std::max(worst, std::abs(dot(q[i], q[j]) / reg.n_inverse_scale() - id));
    }
  }
  return worst;
}

Outcome orthogonality() {
  const auto sys = gen_constrained_grid(16);
  const auto reg = regularize(sys, one_norm(sys.W));
  auto run = [&](bool reorth) {
    auto st = gkb_init(reg, reorth, true);
    while (st.iteration() < kOrthoSteps && !st.lucky_breakdown()) gkb_step(st);
    return st;
  };
  const auto with = run(true);
  const auto without = run(false);
  const double dev_with = max_deviation(with, reg, with.iteration());
  const double dev_without = max_deviation(without, reg, without.iteration());
  std::size_t last_ok = 0;
  for (std::size_t k = 1; k <= without.iteration(); ++k) {
    if (max_deviation(without, reg, k) <= 1e-6) last_ok = k;
  }
  Outcome o;
  o.pass = with.iteration() == kOrthoSteps && dev_with <= 1e-8 && dev_without <= 1e-6;
  o.detail = "grid 16, k <= " + std::to_string(with.iteration()) + ": reorthogonalized max dev " + fmt("%.2e", dev_with) +
             " (<= 1e-8), plain max dev " + fmt("%.2e", dev_without) + " (<= 1e-6)";
  o.info.push_back("plain recurrence stays within 1e-6 up to k = " + std::to_string(last_ok));
  GkbConfig cfg;
  cfg.tau = 1e-10;
  cfg.delay = 2;
  const auto res = gkb_solve(reg, cfg);
  o.info.push_back("a tau = 1e-10, d = 2 solve stops at k = " + std::to_string(res.iterations) +
                   "; the error there is already far below the point where orthogonality is lost");
  return o;
}

// ---- 8 ---------------------------------------------------------------------

bool bitwise_equal(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

Outcome io_round_trips() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-200, 200);
  auto value = [&] { return std::ldexp(mant(rng), expo(rng)); };

  std::size_t mm_ok = 0;
  std::size_t mm_total = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<Triplet> trip;
    for (std::size_t i = 0; i < 30; ++i) {
      for (std::size_t j = 0; j < 12; ++j) {
        if ((i * 7 + j * 3 + static_cast<std::size_t>(t)) % 5 == 0) trip.push_back({i, j, value()});
      }
    }
    const auto a = SparseMatrix::from_triplets(30, 12, trip);
    std::stringstream s;
    write_matrix_market(a, s);
    const auto back = std::get<SparseMatrix>(parse_matrix_market(s));
    mm_ok += back == a && bitwise_equal(back.values(), a.values());
    ++mm_total;

    const auto sys = gen_random(40, 8, static_cast<std::uint64_t>(t) + 1, 1e3, true);
    std::stringstream ss;
    write_matrix_market(sys.W, ss);
    const auto wback = std::get<SparseSymMatrix>(parse_matrix_market(ss));
    mm_ok += wback == sys.W && bitwise_equal(wback.matrix().values(), sys.W.matrix().values());
    ++mm_total;

    std::stringstream vs;
    write_vector(sys.g, vs);
    mm_ok += bitwise_equal(parse_vector_market(vs).span(), sys.g.span());
    ++mm_total;
  }

  bool history_ok = true;
  {
    const auto& h = grid_run().printed.history;
    std::stringstream j1;
    write_history(h, j1, HistoryFormat::Json);
    const auto from_json = parse_history(j1, HistoryFormat::Json);
    std::stringstream c;
    write_history(from_json, c, HistoryFormat::Csv);
    auto from_csv = parse_history(c, HistoryFormat::Csv);
    from_csv.stop_iteration = from_json.stop_iteration;
    from_csv.certified_iteration = from_json.certified_iteration;
    std::stringstream j2;
    write_history(from_csv, j2, HistoryFormat::Json);
    history_ok = from_json.records == h.records && from_csv.records == h.records && j1.str() == j2.str();
    for (std::size_t i = 0; history_ok && i < h.records.size(); ++i) {
      history_ok = std::bit_cast<std::uint64_t>(from_csv.records[i].zeta) ==
                   std::bit_cast<std::uint64_t>(h.records[i].zeta);
    }
  }

  struct DlCase {
    std::string name;
    SaddleSystem sys;
  };
  std::vector<DlCase> dl_cases{
      {"constrained-grid 16", gen_constrained_grid(16)},
      {"semidefinite-coupled 16", gen_semidefinite_coupled(16, 8)},
      {"random 120x30", gen_random(120, 30, 3, 1e3)},
  };
  std::vector<std::string> dl_fail;
  std::vector<std::string> info;
  for (const auto& c : dl_cases) {
    const double gamma = compute_gamma(c.sys.W);
    const auto back = extract_double_lagrange(build_double_lagrange(c.sys, gamma));
    if (back.W == c.sys.W && back.A == c.sys.A) continue;
    dl_fail.push_back(c.name);
    std::size_t differing = 0;
    double worst_ulps = 0.0;
    const auto av = c.sys.A.values();
    const auto bv = back.A.values();
    for (std::size_t p = 0; p < std::min(av.size(), bv.size()); ++p) {
      if (av[p] != bv[p]) {
        ++differing;
        worst_ulps = std::max(worst_ulps, std::abs(av[p] - bv[p]) / (std::nextafter(std::abs(av[p]), 1e300) - std::abs(av[p])));
      }
    }
    info.push_back(c.name + ": gamma = " + fmt("%.17g", gamma) + ", " + std::to_string(differing) + " of " +
                   std::to_string(av.size()) + " A entries differ, by at most " + fmt("%.0f", worst_ulps) +
                   " ulp; several A values share the same rounded gamma*A, so no extraction can tell them apart");
  }

  Outcome o;
  o.pass = mm_ok == mm_total && history_ok && dl_fail.empty();
  std::string dl = dl_fail.empty() ? "exact" : "not exact for";
  for (const auto& n : dl_fail) dl += " " + n;
  o.detail = "Matrix Market " + std::to_string(mm_ok) + "/" + std::to_string(mm_total) + " bitwise; history JSON/CSV " +
             (history_ok ? "lossless" : "lossy") + "; double Lagrange build/extract " + dl;
  o.info = std::move(info);
  return o;
}

// ---- 9 ---------------------------------------------------------------------

Outcome finite_termination() {
  std::size_t reached = 0;
  std::string row;
  const std::size_t sizes[10][2] = {{60, 20}, {80, 30}, {100, 40}, {120, 50}, {150, 60},
                                    {180, 70}, {200, 80}, {220, 90}, {250, 100}, {300, 100}};
  for (std::size_t i = 0; i < 10; ++i) {
    const auto sys = gen_random(sizes[i][0], sizes[i][1], 500 + i, 1e3, true);
    const auto reg = regularize(sys, one_norm(sys.W));
    const auto u = reference_u(reg);
    const double u_norm = weighted_norm(u, reg.M());
    GkbConfig cfg;
    cfg.tau = 1e-15;
    cfg.delay = 1;
    cfg.maxit = sys.n();
    cfg.reference_u = u;
    const auto res = gkb_solve(reg, cfg);
    std::size_t first = 0;
    for (const auto& rec : res.history.records) {
      if (*rec.true_error <= 1e-8 * u_norm) {
        first = rec.k;
        break;
      }
    }
    if (first != 0 && first <= sys.n()) ++reached;
    row += (row.empty() ? "" : ", ") + std::to_string(first ? first : 0) + "/" + std::to_string(sys.n());
  }
  Outcome o;
  o.pass = reached == 10;
  o.detail = std::to_string(reached) + "/10 random instances reach rel M-error <= 1e-8 at k <= n (k/n: " + row + ")";
  return o;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  report(1, "condition bound for eta >= 1/lambda_1", theorem_bound);
  report(2, "GKB agrees with the dense direct solve", oracle_equivalence);
  report(3, "error identity and bound sandwich", error_identity_and_sandwich);
  report(4, "mesh independence", mesh_independence);
  report(5, "iteration count falls with eta", eta_monotonicity);
  report(6, "residual identity", residual_identity);
  report(7, "orthogonality of the bases", orthogonality);
  report(8, "lossless round-trips", io_round_trips);
  report(9, "finite termination", finite_termination);
  std::printf("%d of 9 criteria failed, %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
