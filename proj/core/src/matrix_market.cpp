#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "saddlegkb/error.hpp"
#include "saddlegkb/io.hpp"
#include "text.hpp"

namespace saddlegkb {

namespace {

struct Header {
  bool coordinate = true;
  bool symmetric = false;
};

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next line that is neither blank nor a comment.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      const auto t = text::trim(line);
      if (t.empty() || t.front() == '%') continue;
      return true;
    }
    return false;
  }

  bool raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    return true;
  }

  std::size_t number() const noexcept { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

Header read_header(LineReader& lines) {
  std::string line;
  if (!lines.raw(line)) throw ParseError(1, "empty input, expected a %%MatrixMarket banner");
  const auto tok = text::split_ws(line);
  if (tok.empty() || text::lower(tok[0]) != "%%matrixmarket") {
    throw ParseError(1, "missing %%MatrixMarket banner");
  }
  if (tok.size() != 5) throw ParseError(1, "banner needs object, format, field and symmetry");
  if (text::lower(tok[1]) != "matrix") throw ParseError(1, "object must be 'matrix'");
  Header h;
  const auto format = text::lower(tok[2]);
  if (format == "coordinate") {
    h.coordinate = true;
  } else if (format == "array") {
    h.coordinate = false;
  } else {
    throw ParseError(1, "format must be coordinate or array, got '" + format + "'");
  }
  const auto field = text::lower(tok[3]);
  if (field != "real") {
    if (field == "complex" || field == "pattern" || field == "integer") {
      throw Error(ErrorCode::UnsupportedField, "field '" + field + "' is not supported (real only)");
    }
    throw ParseError(1, "unknown field '" + field + "'");
  }
  const auto sym = text::lower(tok[4]);
  if (sym == "symmetric") {
    h.symmetric = true;
  } else if (sym != "general") {
    if (sym == "skew-symmetric" || sym == "hermitian") {
      throw Error(ErrorCode::UnsupportedField, "symmetry '" + sym + "' is not supported");
    }
    throw ParseError(1, "unknown symmetry '" + sym + "'");
  }
  if (!h.coordinate && h.symmetric) throw ParseError(1, "symmetric array files are not supported");
  return h;
}

std::size_t to_index(std::string_view tok, std::size_t line, const char* what) {
  const auto v = text::parse_int(tok);
  if (!v) throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  return *v;
}

double to_value(std::string_view tok, std::size_t line) {
  const auto v = text::parse_double(tok);
  if (!v) throw ParseError(line, "bad value '" + std::string(tok) + "'");
  if (!std::isfinite(*v)) throw ParseError(line, "non-finite value '" + std::string(tok) + "'");
  return *v;
}

struct Parsed {
  Header header;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Triplet> entries;  // 0-based
};

Parsed parse_body(std::istream& in) {
  LineReader lines(in);
  Parsed p;
  p.header = read_header(lines);
  std::string line;
  if (!lines.next(line)) throw ParseError(lines.number() + 1, "missing size line");
  const auto size_line = lines.number();
  const auto sz = text::split_ws(line);
  const std::size_t expected_tokens = p.header.coordinate ? 3 : 2;
  if (sz.size() != expected_tokens) {
    throw ParseError(size_line, "size line needs " + std::to_string(expected_tokens) + " integers");
  }
  p.rows = to_index(sz[0], size_line, "row count");
  p.cols = to_index(sz[1], size_line, "column count");
  if (p.header.symmetric && p.rows != p.cols) throw ParseError(size_line, "symmetric matrix must be square");

  if (p.header.coordinate) {
    const auto nnz = to_index(sz[2], size_line, "entry count");
    p.entries.reserve(nnz);
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!lines.next(line)) {
        throw ParseError(lines.number() + 1, "expected " + std::to_string(nnz) + " entries, found " +
                                                  std::to_string(e));
      }
      const auto ln = lines.number();
      const auto tok = text::split_ws(line);
      if (tok.size() != 3) throw ParseError(ln, "entry needs 'row col value'");
      const auto i = to_index(tok[0], ln, "row index");
      const auto j = to_index(tok[1], ln, "column index");
      if (i < 1 || i > p.rows || j < 1 || j > p.cols) {
        throw ParseError(ln, "index (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
      }
      p.entries.push_back({i - 1, j - 1, to_value(tok[2], ln)});
    }
  } else {
    const auto total = p.rows * p.cols;
    std::size_t e = 0;
    while (e < total) {
      if (!lines.next(line)) {
        throw ParseError(lines.number() + 1, "expected " + std::to_string(total) + " values, found " +
                                                  std::to_string(e));
      }
      for (auto tok : text::split_ws(line)) {
        if (e == total) throw ParseError(lines.number(), "more values than the size line declares");
        const double v = to_value(tok, lines.number());
        // zeros kept so that -0.0 survives a vector round-trip
        p.entries.push_back({e % p.rows, e / p.rows, v});
        ++e;
      }
    }
  }
  if (lines.next(line)) throw ParseError(lines.number(), "unexpected data after the last entry");
  return p;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

template <class F>
auto with_path(const std::filesystem::path& path, F f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.reason(), path.string());
  }
}

}  // namespace

MatrixMarketMatrix parse_matrix_market(std::istream& in) {
  auto p = parse_body(in);
  if (p.header.symmetric) return SparseSymMatrix::from_triangle_triplets(p.rows, p.entries);
  return SparseMatrix::from_triplets(p.rows, p.cols, p.entries);
}

MatrixMarketMatrix read_matrix_market(const std::filesystem::path& path) {
  auto in = open_in(path);
  return with_path(path, [&] { return parse_matrix_market(in); });
}

SparseSymMatrix read_symmetric_matrix(const std::filesystem::path& path) {
  auto m = read_matrix_market(path);
  if (auto* s = std::get_if<SparseSymMatrix>(&m)) return std::move(*s);
  try {
    return SparseSymMatrix(std::get<SparseMatrix>(std::move(m)));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

SparseMatrix read_general_matrix(const std::filesystem::path& path) {
  auto m = read_matrix_market(path);
  if (auto* s = std::get_if<SparseSymMatrix>(&m)) return s->matrix();
  return std::get<SparseMatrix>(std::move(m));
}

Vector parse_vector_market(std::istream& in) {
  const auto p = parse_body(in);
  if (p.header.symmetric || p.cols != 1) {
    throw ParseError(0, "vector files must have exactly one column");
  }
  Vector v(p.rows);
  for (const auto& e : p.entries) v[e.row] = e.value;
  return v;
}

Vector read_vector(const std::filesystem::path& path) {
  auto in = open_in(path);
  return with_path(path, [&] { return parse_vector_market(in); });
}

void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.nrows() << ' ' << a.ncols() << ' ' << a.nnz() << '\n';
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t p = 0; p < r.cols.size(); ++p) {
      out << i + 1 << ' ' << r.cols[p] + 1 << ' ' << text::format_17(r.values[p]) << '\n';
    }
  }
}

void write_matrix_market(const SparseSymMatrix& a, std::ostream& out) {
  const auto& full = a.matrix();
  std::size_t lower = 0;
  for (std::size_t i = 0; i < full.nrows(); ++i) {
    for (auto j : full.row(i).cols) lower += j <= i ? 1 : 0;
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.size() << ' ' << a.size() << ' ' << lower << '\n';
  for (std::size_t i = 0; i < full.nrows(); ++i) {
    const auto r = full.row(i);
    for (std::size_t p = 0; p < r.cols.size() && r.cols[p] <= i; ++p) {
      out << i + 1 << ' ' << r.cols[p] + 1 << ' ' << text::format_17(r.values[p]) << '\n';
    }
  }
}

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_matrix_market(a, out);
  finish(out, path);
}

void write_matrix_market(const SparseSymMatrix& a, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_matrix_market(a, out);
  finish(out, path);
}

void write_vector(const Vector& v, std::ostream& out) {
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  for (double x : v) out << text::format_17(x) << '\n';
}

void write_vector(const Vector& v, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_vector(v, out);
  finish(out, path);
}

}  // namespace saddlegkb
