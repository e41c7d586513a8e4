#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>
#include <thread>

#include "cli/cli.hpp"
#include "cli/report.hpp"
#include "saddlegkb/error.hpp"
#include "saddlegkb/gkb.hpp"
#include "saddlegkb/oracle.hpp"
#include "saddlegkb/saddle.hpp"

namespace saddlegkb::cli {

namespace {

namespace fs = std::filesystem;

std::string exact(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

fs::path prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

double resolve_eta(const RunConfig& cfg, const SaddleSystem& sys) {
  if (!cfg.eta.mode) return cfg.eta.value;
  return recommend_eta(sys.W, sys.A, cfg.gamma, *cfg.eta.mode);
}

int exit_code(GkbStatus s) {
  switch (s) {
    case GkbStatus::Converged:
    case GkbStatus::LuckyBreakdown: return kExitOk;
    case GkbStatus::MaxitReached: return kExitMaxit;
    case GkbStatus::Breakdown: return kExitError;
  }
  return kExitError;
}

struct Reference {
  Vector w;
  Vector p;
  std::string source;
};

// Dense oracle at desk scale, otherwise a tight GKB run.
Reference reference_solution(const SaddleSystem& sys, double eta, double gamma) {
  if (sys.m() + sys.n() <= kDefaultDenseLimit) {
    auto d = direct_saddle_solve(sys);
    return {std::move(d.w), std::move(d.p), "dense"};
  }
  if (!(eta > 0.0)) eta = recommend_eta(sys.W, sys.A, gamma, EtaMode::WNorm);
  const auto reg = regularize(sys, eta, gamma);
  GkbConfig tight;
  tight.tau = 1e-12;
  tight.maxit = 100000;
  auto s = solve_saddle(reg, tight);
  return {std::move(s.w), std::move(s.p), "gkb(tau=1e-12)"};
}

double relative(double diff, double base) { return base > 0.0 ? diff / base : diff; }

struct Errors {
  double w_m = 0.0;
  double p_2 = 0.0;
};

Errors errors_against(const Reference& ref, const SaddleSolution& sol, const RegularizedSystem& reg) {
  return {relative(weighted_norm(sol.w - ref.w, reg.M()), weighted_norm(ref.w, reg.M())),
          relative(norm2(sol.p - ref.p), norm2(ref.p))};
}

template <class F>
void parallel_for(std::size_t count, std::size_t threads, F f) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(count);
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        f(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const auto extra = std::min(threads, count) > 0 ? std::min(threads, count) - 1 : 0;
  for (std::size_t t = 0; t < extra; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : failures) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

int cmd_solve(const SolveOptions& opt, std::ostream& out) {
  const auto& cfg = opt.config;
  cfg.validate();
  const auto sys = load_system(cfg);
  const double eta = resolve_eta(cfg, sys);
  const auto reg = regularize(sys, eta, cfg.gamma);
  auto gkb = cfg.gkb_config();
  if (opt.reference) {
    const auto direct = direct_saddle_solve(sys);
    gkb.reference_u = direct.w - reg.shift();
  }
  const auto sol = solve_saddle(reg, gkb);

  const auto dir = prepare_dir(cfg.output_directory());
  write_vector(sol.w, dir / "w.mtx");
  write_vector(sol.p, dir / "p.mtx");
  const auto history_path = dir / (std::string("history") + std::string(extension(cfg.format)));
  write_history(sol.gkb.history, history_path, cfg.format);

  const auto& rec = sol.gkb.history.records;
  out << "problem: m = " << sys.m() << ", n = " << sys.n() << ", eta = " << exact(eta) << '\n';
  out << "status: " << to_string(sol.gkb.status) << '\n';
  out << "iterations: " << sol.gkb.iterations << '\n';
  if (!rec.empty()) {
    const auto& last = rec.back();
    out << "xi: " << (last.xi ? format_number(*last.xi) : std::string("n/a")) << '\n';
    if (cfg.bound != BoundMode::Lower) {
      out << "Xi: " << (last.Xi ? format_number(*last.Xi) : std::string("n/a")) << '\n';
    }
    if (last.residual_proxy) out << "residual: " << format_number(*last.residual_proxy) << '\n';
  }
  if (!sol.gkb.diagnostic.empty()) out << "note: " << sol.gkb.diagnostic << '\n';
  out << "wrote " << (dir / "w.mtx").string() << ", " << (dir / "p.mtx").string() << ", "
      << history_path.string() << '\n';
  return exit_code(sol.gkb.status);
}

int cmd_generate(const GenerateOptions& opt, std::ostream& out) {
  const auto sys = generate(opt.spec);
  const auto dir = prepare_dir(opt.out_dir ? *opt.out_dir : default_output_directory());
  write_matrix_market(sys.W, dir / "W.mtx");
  write_matrix_market(sys.A, dir / "A.mtx");
  write_vector(sys.g, dir / "g.mtx");
  write_vector(sys.r, dir / "r.mtx");
  out << "family: " << to_string(opt.spec.family) << '\n';
  out << "m = " << sys.m() << ", n = " << sys.n() << ", nnz(W) = " << sys.W.nnz()
      << ", nnz(A) = " << sys.A.nnz() << '\n';
  if (opt.double_lagrange) {
    const double gamma = opt.gamma ? *opt.gamma : compute_gamma(sys.W);
    const auto dl = build_double_lagrange(sys, gamma);
    write_matrix_market(dl.K, dir / "K.mtx");
    write_vector(dl.rhs, dir / "K_rhs.mtx");
    out << "gamma: " << exact(gamma) << '\n';
  }
  out << "wrote " << dir.string() << '\n';
  return kExitOk;
}

int cmd_eta_sweep(const EtaSweepOptions& opt, std::ostream& out) {
  const auto& cfg = opt.config;
  if (opt.etas.size() + opt.factors.size() < 2) {
    throw Error(ErrorCode::InvalidConfig, "eta-sweep needs at least two eta values");
  }
  for (double v : opt.etas) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidConfig, "eta values must be >= 0");
  }
  for (double v : opt.factors) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidConfig, "eta factors must be >= 0");
  }
  cfg.validate();
  const auto sys = load_system(cfg);
  const double wnorm = one_norm(sys.W);
  std::vector<double> etas = opt.etas;
  for (double f : opt.factors) etas.push_back(f * wnorm);

  const auto ref = reference_solution(sys, wnorm, cfg.gamma);
  struct Row {
    std::size_t iterations = 0;
    GkbStatus status = GkbStatus::MaxitReached;
    Errors err;
  };
  std::vector<Row> rows(etas.size());
  parallel_for(etas.size(), cfg.threads, [&](std::size_t i) {
    const auto reg = regularize(sys, etas[i], cfg.gamma);
    const auto sol = solve_saddle(reg, cfg.gkb_config());
    rows[i] = {sol.gkb.iterations, sol.gkb.status, errors_against(ref, sol, reg)};
  });

  Table table({"eta", "iterations", "status", "rel_err_w_M", "rel_err_p_2"});
  int code = kExitOk;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    table.add_row({etas[i], rows[i].iterations, std::string(to_string(rows[i].status)), rows[i].err.w_m,
                   rows[i].err.p_2});
    code = std::max(code, exit_code(rows[i].status));
  }
  out << "m = " << sys.m() << ", n = " << sys.n() << ", ||W||_1 = " << exact(wnorm)
      << ", reference: " << ref.source << '\n';
  table.print(out);
  const auto dir = prepare_dir(cfg.output_directory());
  const auto path = dir / (std::string("eta_sweep") + std::string(extension(cfg.format)));
  table.write(path, cfg.format);
  out << "wrote " << path.string() << '\n';
  return code;
}

int cmd_mesh_study(const MeshStudyOptions& opt, std::ostream& out) {
  const auto& cfg = opt.config;
  if (opt.grids.size() < 2) throw Error(ErrorCode::InvalidConfig, "mesh-study needs at least two grid sizes");
  if (!cfg.problem) throw Error(ErrorCode::InvalidConfig, "mesh-study works on generated families only");
  if (cfg.problem->family == Family::Random) {
    throw Error(ErrorCode::InvalidConfig, "the random family has no mesh parameter");
  }
  cfg.validate();

  struct Row {
    std::size_t m = 0, n = 0, iterations = 0;
    double eta = 0.0;
    GkbStatus status = GkbStatus::MaxitReached;
    Errors err;
    std::string source;
  };
  std::vector<Row> rows(opt.grids.size());
  parallel_for(opt.grids.size(), cfg.threads, [&](std::size_t i) {
    auto spec = *cfg.problem;
    spec.grid = opt.grids[i];
    const auto sys = generate(spec);
    const double eta = resolve_eta(cfg, sys);
    const auto reg = regularize(sys, eta, cfg.gamma);
    const auto sol = solve_saddle(reg, cfg.gkb_config());
    const auto ref = reference_solution(sys, eta, cfg.gamma);
    rows[i] = {sys.m(), sys.n(), sol.gkb.iterations, eta, sol.gkb.status, errors_against(ref, sol, reg),
               ref.source};
  });

  Table table({"grid", "m", "n", "eta", "iterations", "status", "rel_err_w_M", "rel_err_p_2", "reference"});
  int code = kExitOk;
  std::size_t lo = rows.front().iterations;
  std::size_t hi = lo;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    table.add_row({opt.grids[i], r.m, r.n, r.eta, r.iterations, std::string(to_string(r.status)), r.err.w_m,
                   r.err.p_2, r.source});
    code = std::max(code, exit_code(r.status));
    lo = std::min(lo, r.iterations);
    hi = std::max(hi, r.iterations);
  }
  out << "family: " << to_string(cfg.problem->family) << '\n';
  table.print(out);
  out << "iteration spread: " << hi - lo << (hi - lo <= 3 ? " (within 3)" : " (exceeds 3)") << '\n';
  const auto dir = prepare_dir(cfg.output_directory());
  const auto path = dir / (std::string("mesh_study") + std::string(extension(cfg.format)));
  table.write(path, cfg.format);
  out << "wrote " << path.string() << '\n';
  return code;
}

int cmd_verify_theorem(const VerifyTheoremOptions& opt, std::ostream& out) {
  const auto& cfg = opt.config;
  if (opt.factors.empty()) throw Error(ErrorCode::InvalidConfig, "no eta factors given");
  for (double c : opt.factors) {
    if (!(c > 0.0)) throw Error(ErrorCode::InvalidConfig, "eta factors must be > 0");
  }
  cfg.validate();
  const auto sys = load_system(cfg);
  const double lambda1 = lambda_min_schur(sys.W, sys.A);

  constexpr double kSlack = 1e-8;
  Table table({"c", "lambda_1", "eta", "eta_lambda_1", "bound", "kappa2", "max_mu_dev", "result"});
  bool all_pass = true;
  for (double c : opt.factors) {
    const double eta = c / lambda1;
    const auto rep = verify_theorem(sys.W, sys.A, eta);
    bool pass = rep.kappa_squared <= rep.kappa_squared_bound + kSlack;
    if (c >= 1.0) pass = pass && rep.kappa_squared <= 2.0 + kSlack;
    all_pass = all_pass && pass;
    table.add_row({c, lambda1, eta, eta * lambda1, rep.kappa_squared_bound, rep.kappa_squared,
                   rep.max_mu_deviation, std::string(pass ? "pass" : "FAIL")});
  }
  out << "m = " << sys.m() << ", n = " << sys.n() << '\n';
  table.print(out);
  const auto dir = prepare_dir(cfg.output_directory());
  const auto path = dir / (std::string("verify_theorem") + std::string(extension(cfg.format)));
  table.write(path, cfg.format);
  out << "wrote " << path.string() << '\n';
  return all_pass ? kExitOk : kExitError;
}

int cmd_extract_dl(const ExtractDlOptions& opt, std::ostream& out) {
  if (opt.n == 0) throw Error(ErrorCode::InvalidConfig, "--n must be >= 1");
  const auto k = read_symmetric_matrix(opt.k);
  DoubleLagrangeSystem dl;
  dl.gamma = opt.gamma ? *opt.gamma : infer_gamma(k, opt.m, opt.n);
  dl.K = k;
  dl.m = opt.m;
  dl.n = opt.n;
  if (opt.rhs) dl.rhs = read_vector(*opt.rhs);
  const auto sys = extract_double_lagrange(dl);
  const auto dir = prepare_dir(opt.out_dir ? *opt.out_dir : default_output_directory());
  write_matrix_market(sys.W, dir / "W.mtx");
  write_matrix_market(sys.A, dir / "A.mtx");
  if (opt.rhs) {
    write_vector(sys.g, dir / "g.mtx");
    write_vector(sys.r, dir / "r.mtx");
  }
  out << "gamma: " << exact(dl.gamma) << '\n';
  out << "m = " << sys.m() << ", n = " << sys.n() << '\n';
  out << "wrote " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace saddlegkb::cli
