#include "cli/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "cli/commands.hpp"
#include "saddlegkb/error.hpp"

namespace saddlegkb::cli {

namespace {

// Flags shared by the commands that read a problem and run the solver.
struct InputFlags {
  std::optional<std::string> config;
  std::optional<std::string> w, a, g, r, spec;
  std::optional<std::string> eta;
  std::optional<double> gamma, tau, sigma_lb;
  std::optional<std::size_t> delay, maxit, threads;
  std::optional<std::string> bound, radau, out_dir, format;
  bool reorth = false;
};

void add_input_flags(CLI::App* cmd, InputFlags& f, bool with_solver) {
  cmd->add_option("--config", f.config, "run configuration file (key = value)");
  cmd->add_option("--w", f.w, "W as Matrix Market (symmetric)");
  cmd->add_option("--a", f.a, "A as Matrix Market");
  cmd->add_option("--g", f.g, "g as Matrix Market array (default 0)");
  cmd->add_option("--r", f.r, "r as Matrix Market array (default 0)");
  cmd->add_option("--spec", f.spec, "problem spec: key=value,... or a file");
  cmd->add_option("--gamma", f.gamma, "divide W and g by gamma before solving (default 1)");
  cmd->add_option("--out-dir", f.out_dir, "output directory (default $SADDLEGKB_OUT_DIR or .)");
  cmd->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  if (!with_solver) return;
  cmd->add_option("--eta", f.eta, "wnorm | wnorm-over-gamma | golub-greiff | <value>");
  cmd->add_option("--tau", f.tau, "tolerance on the error estimate (default 1e-5)");
  cmd->add_option("--delay", f.delay, "delay d (default 5)");
  cmd->add_option("--maxit", f.maxit, "iteration limit (default 1000)");
  cmd->add_option("--bound", f.bound, "lower | upper | both")->check(CLI::IsMember({"lower", "upper", "both"}));
  cmd->add_option("--sigma-lb", f.sigma_lb, "a, lower bound on the smallest singular value");
  cmd->add_option("--radau", f.radau, "as-printed | gauss-radau")
      ->check(CLI::IsMember({"as-printed", "gauss-radau"}));
  cmd->add_flag("--reorth", f.reorth, "full reorthogonalization");
  cmd->add_option("--threads", f.threads, "worker threads for sweeps and studies");
}

ProblemSpec load_spec(const std::string& arg) {
  if (arg.find('=') != std::string::npos) return parse_problem_spec(arg);
  std::ifstream in(arg);
  if (!in) throw Error(ErrorCode::IoError, "cannot open spec file '" + arg + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_spec(buf.str());
}

RunConfig build_config(const InputFlags& f) {
  RunConfig c = f.config ? read_run_config(*f.config) : RunConfig{};
  const bool paths = f.w || f.a || f.g || f.r;
  if (paths || f.spec) {
    // flags replace whatever input the config file named
    c.w.reset();
    c.a.reset();
    c.g.reset();
    c.r.reset();
    c.problem.reset();
  }
  if (f.w) c.w = *f.w;
  if (f.a) c.a = *f.a;
  if (f.g) c.g = *f.g;
  if (f.r) c.r = *f.r;
  if (f.spec) c.problem = load_spec(*f.spec);
  if (f.eta) c.eta = parse_eta_setting(*f.eta);
  if (f.gamma) c.gamma = *f.gamma;
  if (f.tau) c.tau = *f.tau;
  if (f.delay) c.delay = *f.delay;
  if (f.maxit) c.maxit = *f.maxit;
  if (f.bound) c.bound = parse_bound_mode(*f.bound);
  if (f.sigma_lb) c.sigma_lb = *f.sigma_lb;
  if (f.radau) c.radau = parse_radau_formula(*f.radau);
  if (f.reorth) c.reorthogonalize = true;
  if (f.out_dir) c.out_dir = *f.out_dir;
  if (f.format) c.format = parse_history_format(*f.format);
  if (f.threads) c.threads = *f.threads;
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Saddle-point solver based on generalized Golub-Kahan bidiagonalization", "saddlegkb"};
  app.require_subcommand(1);
  app.allow_extras(false);

  InputFlags solve_flags;
  bool reference = false;
  auto* solve = app.add_subcommand("solve", "solve a saddle-point system");
  add_input_flags(solve, solve_flags, true);
  solve->add_flag("--reference", reference, "record the true error against the dense solution");

  std::string gen_spec;
  std::optional<std::string> gen_out;
  bool gen_dl = false;
  std::optional<double> gen_gamma;
  auto* gen = app.add_subcommand("generate", "write a generated problem as Matrix Market files");
  gen->add_option("--spec", gen_spec, "problem spec: key=value,... or a file")->required();
  gen->add_option("--out-dir", gen_out, "output directory");
  gen->add_flag("--double-lagrange", gen_dl, "also write the double Lagrange matrix K.mtx");
  gen->add_option("--gamma", gen_gamma, "gamma for K (default (min W_ii + max W_ii)/2)");

  InputFlags sweep_flags;
  std::vector<double> sweep_etas;
  std::vector<double> sweep_factors;
  auto* sweep = app.add_subcommand("eta-sweep", "iteration counts and errors across eta");
  add_input_flags(sweep, sweep_flags, true);
  sweep->add_option("--etas", sweep_etas, "eta values")->delimiter(',');
  sweep->add_option("--eta-factors", sweep_factors, "eta as multiples of ||W||_1")->delimiter(',');

  InputFlags mesh_flags;
  std::vector<std::size_t> mesh_grids;
  std::string mesh_family = "constrained-grid";
  std::optional<std::size_t> mesh_slaves;
  std::optional<std::string> mesh_patch;
  auto* mesh = app.add_subcommand("mesh-study", "iteration counts across grid refinements");
  add_input_flags(mesh, mesh_flags, true);
  mesh->add_option("--grids", mesh_grids, "grid sizes")->delimiter(',')->required();
  mesh->add_option("--family", mesh_family, "constrained-grid | semidefinite-coupled")
      ->check(CLI::IsMember({"constrained-grid", "semidefinite-coupled"}));
  mesh->add_option("--slaves", mesh_slaves, "slave unknowns for the semidefinite family");
  mesh->add_option("--patch-form", mesh_patch, "star | chain")->check(CLI::IsMember({"star", "chain"}));

  InputFlags theorem_flags;
  std::vector<double> theorem_factors{1.0, 2.0, 10.0};
  auto* theorem = app.add_subcommand("verify-theorem", "check the condition-number bound for eta = c / lambda_1");
  add_input_flags(theorem, theorem_flags, false);
  theorem->add_option("--factors", theorem_factors, "values of c (default 1,2,10)")->delimiter(',');

  ExtractDlOptions dl_opt;
  std::string dl_k;
  std::optional<std::string> dl_rhs, dl_out;
  auto* extract = app.add_subcommand("extract-dl", "recover W and A from a double Lagrange matrix");
  extract->add_option("--k", dl_k, "K as Matrix Market (symmetric)")->required();
  extract->add_option("--m", dl_opt.m, "size of W")->required();
  extract->add_option("--n", dl_opt.n, "number of constraints")->required();
  extract->add_option("--rhs", dl_rhs, "right-hand side of K (Matrix Market array)");
  extract->add_option("--gamma", dl_opt.gamma, "gamma (default read from K)");
  extract->add_option("--out-dir", dl_out, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (solve->parsed()) return cmd_solve({build_config(solve_flags), reference}, out);
    if (gen->parsed()) {
      GenerateOptions g{load_spec(gen_spec), std::nullopt, gen_dl, gen_gamma};
      if (gen_out) g.out_dir = *gen_out;
      return cmd_generate(g, out);
    }
    if (sweep->parsed()) return cmd_eta_sweep({build_config(sweep_flags), sweep_etas, sweep_factors}, out);
    if (mesh->parsed()) {
      MeshStudyOptions m;
      if (mesh_grids.size() < 2) throw Error(ErrorCode::InvalidConfig, "mesh-study needs at least two grid sizes");
      if (mesh_flags.w || mesh_flags.a) throw Error(ErrorCode::InvalidConfig, "mesh-study takes no input files");
      m.config = build_config(mesh_flags);
      if (!m.config.problem) {
        m.config.problem = parse_problem_spec("family=" + mesh_family);
      }
      if (mesh_slaves) m.config.problem->slaves = *mesh_slaves;
      if (mesh_patch) m.config.problem->patch_form = *mesh_patch == "chain" ? PatchForm::Chain : PatchForm::Star;
      m.grids = mesh_grids;
      return cmd_mesh_study(m, out);
    }
    if (theorem->parsed()) return cmd_verify_theorem({build_config(theorem_flags), theorem_factors}, out);
    if (extract->parsed()) {
      dl_opt.k = dl_k;
      if (dl_rhs) dl_opt.rhs = *dl_rhs;
      if (dl_out) dl_opt.out_dir = *dl_out;
      return cmd_extract_dl(dl_opt, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace saddlegkb::cli
