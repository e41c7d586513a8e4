#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "saddlegkb/generators.hpp"
#include "saddlegkb/gkb.hpp"
#include "saddlegkb/saddle.hpp"
#include "saddlegkb/sparse.hpp"
#include "saddlegkb/vector.hpp"

namespace saddlegkb {

// ---- Matrix Market --------------------------------------------------------
//
// Supported headers: `matrix coordinate real general|symmetric` for
// matrices and `matrix array real general` for vectors (one column).
// Indices are 1-based; duplicates are summed; symmetric files list one
// triangle and are expanded. Values are written with 17 significant digits.

using MatrixMarketMatrix = std::variant<SparseMatrix, SparseSymMatrix>;

MatrixMarketMatrix parse_matrix_market(std::istream& in);
MatrixMarketMatrix read_matrix_market(const std::filesystem::path& path);

// A symmetric file, or a general one whose pattern and values are exactly
// symmetric.
SparseSymMatrix read_symmetric_matrix(const std::filesystem::path& path);
// Any coordinate file; symmetric ones come back expanded.
SparseMatrix read_general_matrix(const std::filesystem::path& path);

Vector parse_vector_market(std::istream& in);
Vector read_vector(const std::filesystem::path& path);

void write_matrix_market(const SparseMatrix& a, std::ostream& out);
void write_matrix_market(const SparseSymMatrix& a, std::ostream& out);
void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path);
void write_matrix_market(const SparseSymMatrix& a, const std::filesystem::path& path);
void write_vector(const Vector& v, std::ostream& out);
void write_vector(const Vector& v, const std::filesystem::path& path);

// ---- convergence history ---------------------------------------------------

enum class HistoryFormat { Csv, Json };

HistoryFormat parse_history_format(std::string_view text);
std::string_view to_string(HistoryFormat format) noexcept;
std::string_view extension(HistoryFormat format) noexcept;

// CSV columns k,zeta,xi,Xi,residual_proxy,true_error,ms with empty cells
// for missing values. JSON is {"records": [...]} plus the stop and
// certified iterations when known.
void write_history(const ConvergenceHistory& h, std::ostream& out, HistoryFormat format);
void write_history(const ConvergenceHistory& h, const std::filesystem::path& path, HistoryFormat format);
ConvergenceHistory parse_history(std::istream& in, HistoryFormat format);
ConvergenceHistory read_history(const std::filesystem::path& path, HistoryFormat format);

// ---- run configuration -----------------------------------------------------
//
// Flat `key = value` text, one pair per line, '#' comments, optional double
// quotes around values. Keys:
//   w, a, g, r             input paths (w and a required when any is given)
//   family, grid, ...      an inline problem spec (see ProblemSpec)
//   eta                    wnorm | wnorm-over-gamma | golub-greiff | <value>
//   gamma                  scaling of W and g (default 1)
//   tau, delay, maxit      stopping
//   bound, sigma_lb, radau bound mode, a, upper-bound formula
//   reorthogonalize        true | false
//   out_dir, format, threads

struct EtaSetting {
  std::optional<EtaMode> mode;  // empty: explicit value
  double value = 0.0;

  friend bool operator==(const EtaSetting&, const EtaSetting&) = default;
};

EtaSetting parse_eta_setting(std::string_view text);
std::string to_string(const EtaSetting& eta);

struct RunConfig {
  std::optional<std::filesystem::path> w, a, g, r;
  std::optional<ProblemSpec> problem;
  EtaSetting eta{EtaMode::WNorm, 0.0};
  double gamma = 1.0;
  double tau = 1e-5;
  std::size_t delay = 5;
  std::size_t maxit = 1000;
  BoundMode bound = BoundMode::Lower;
  std::optional<double> sigma_lb;
  RadauFormula radau = RadauFormula::AsPrinted;
  bool reorthogonalize = false;
  std::optional<std::filesystem::path> out_dir;
  HistoryFormat format = HistoryFormat::Csv;
  std::size_t threads = 1;

  // Throws InvalidConfig.
  void validate() const;
  GkbConfig gkb_config() const;
  std::filesystem::path output_directory() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_run_config(std::string_view text);
RunConfig read_run_config(const std::filesystem::path& path);
std::string serialize(const RunConfig& config);

// $SADDLEGKB_OUT_DIR when set and nonempty, else the current directory.
std::filesystem::path default_output_directory();

// Loads the system named by the config: files, or the generated problem.
SaddleSystem load_system(const RunConfig& config);

}  // namespace saddlegkb
