#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "saddlegkb/generators.hpp"
#include "saddlegkb/io.hpp"

namespace saddlegkb::cli {

struct SolveOptions {
  RunConfig config;
  bool reference = false;  // dense reference -> true_error column
};

struct GenerateOptions {
  ProblemSpec spec;
  std::optional<std::filesystem::path> out_dir;
  bool double_lagrange = false;
  std::optional<double> gamma;  // default compute_gamma(W)
};

struct EtaSweepOptions {
  RunConfig config;
  std::vector<double> etas;     // absolute values
  std::vector<double> factors;  // multiples of ||W||_1
};

struct MeshStudyOptions {
  RunConfig config;  // problem holds the family template; grid is overwritten
  std::vector<std::size_t> grids;
};

struct VerifyTheoremOptions {
  RunConfig config;
  std::vector<double> factors;
};

struct ExtractDlOptions {
  std::filesystem::path k;
  std::size_t m = 0;
  std::size_t n = 0;
  std::optional<std::filesystem::path> rhs;
  std::optional<double> gamma;  // default -K(m+1, m+1)
  std::optional<std::filesystem::path> out_dir;
};

int cmd_solve(const SolveOptions& opt, std::ostream& out);
int cmd_generate(const GenerateOptions& opt, std::ostream& out);
int cmd_eta_sweep(const EtaSweepOptions& opt, std::ostream& out);
int cmd_mesh_study(const MeshStudyOptions& opt, std::ostream& out);
int cmd_verify_theorem(const VerifyTheoremOptions& opt, std::ostream& out);
int cmd_extract_dl(const ExtractDlOptions& opt, std::ostream& out);

}  // namespace saddlegkb::cli
