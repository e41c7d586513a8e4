#include "saddlegkb/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "saddlegkb/error.hpp"
#include "text.hpp"

namespace saddlegkb {

namespace {

[[noreturn]] void invalid_spec(const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); }

void require_grid(std::size_t n_grid) {
  if (n_grid < 4) {
    throw Error(ErrorCode::InvalidGrid, "n_grid must be >= 4, got " + std::to_string(n_grid));
  }
}

std::vector<Triplet> laplacian_upper(std::size_t ng) {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < ng; ++j) {
    for (std::size_t i = 0; i < ng; ++i) {
      const auto k = j * ng + i;
      t.push_back({k, k, 4.0});
      if (i + 1 < ng) t.push_back({k, k + 1, -1.0});
      if (j + 1 < ng) t.push_back({k, k + ng, -1.0});
    }
  }
  return t;
}

// A small deterministic right-hand side for the constraint block.
Vector patterned_r(std::size_t n, double scale) {
  Vector r(n);
  for (std::size_t j = 0; j < n; ++j) {
    r[j] = scale * static_cast<double>(static_cast<long>((j * 7) % 11) - 5);
  }
  return r;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }
  void shuffle(std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::ConstrainedGrid: return "constrained-grid";
    case Family::SemidefiniteCoupled: return "semidefinite-coupled";
    case Family::Random: return "random";
  }
  return "constrained-grid";
}

std::string_view to_string(ConstraintStyle c) noexcept {
  return c == ConstraintStyle::RigidPatch ? "rigid-patch" : "linear-coupling";
}

std::string_view to_string(PatchForm p) noexcept { return p == PatchForm::Star ? "star" : "chain"; }

Family parse_family(std::string_view text) {
  if (text == "constrained-grid") return Family::ConstrainedGrid;
  if (text == "semidefinite-coupled") return Family::SemidefiniteCoupled;
  if (text == "random") return Family::Random;
  invalid_spec("unknown family '" + std::string(text) + "'");
}

namespace {

constexpr std::string_view kKeys[] = {"family", "grid",       "slaves",    "m",
                                      "n",      "seed",       "cond",      "constraint",
                                      "patch_form", "inhomogeneous"};

template <class T>
T need(std::optional<T> v, std::string_view key, std::string_view value) {
  if (!v) invalid_spec("bad value '" + std::string(value) + "' for '" + std::string(key) + "'");
  return *v;
}

}  // namespace

bool is_problem_spec_key(std::string_view key) {
  return std::find(std::begin(kKeys), std::end(kKeys), key) != std::end(kKeys);
}

void set_problem_spec_field(ProblemSpec& spec, std::string_view key, std::string_view value) {
  value = text::trim(value);
  if (key == "family") {
    spec.family = parse_family(value);
  } else if (key == "grid") {
    spec.grid = need(text::parse_int(value), key, value);
  } else if (key == "slaves") {
    spec.slaves = need(text::parse_int(value), key, value);
  } else if (key == "m") {
    spec.m = need(text::parse_int(value), key, value);
  } else if (key == "n") {
    spec.n = need(text::parse_int(value), key, value);
  } else if (key == "seed") {
    spec.seed = need(text::parse_int<std::uint64_t>(value), key, value);
  } else if (key == "cond") {
    spec.cond = need(text::parse_double(value), key, value);
  } else if (key == "constraint") {
    if (value == "rigid-patch") {
      spec.constraint = ConstraintStyle::RigidPatch;
    } else if (value == "linear-coupling") {
      spec.constraint = ConstraintStyle::LinearCoupling;
    } else {
      invalid_spec("unknown constraint style '" + std::string(value) + "'");
    }
  } else if (key == "patch_form") {
    if (value == "star") {
      spec.patch_form = PatchForm::Star;
    } else if (value == "chain") {
      spec.patch_form = PatchForm::Chain;
    } else {
      invalid_spec("unknown patch form '" + std::string(value) + "'");
    }
  } else if (key == "inhomogeneous") {
    spec.inhomogeneous = need(text::parse_bool(value), key, value);
  } else {
    invalid_spec("unknown problem key '" + std::string(key) + "'");
  }
}

ProblemSpec parse_problem_spec(std::string_view text) {
  ProblemSpec spec;
  bool constraint_given = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find_first_of(",\n", pos);
    if (end == std::string_view::npos) end = text.size();
    auto item = text.substr(pos, end - pos);
    if (const auto hash = item.find('#'); hash != std::string_view::npos) item = item.substr(0, hash);
    item = text::trim(item);
    pos = end + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) invalid_spec("expected key=value, got '" + std::string(item) + "'");
    const auto key = text::trim(item.substr(0, eq));
    set_problem_spec_field(spec, key, item.substr(eq + 1));
    constraint_given = constraint_given || key == "constraint";
  }
  if (!constraint_given) {
    spec.constraint = spec.family == Family::SemidefiniteCoupled ? ConstraintStyle::LinearCoupling
                                                                 : ConstraintStyle::RigidPatch;
  }
  return spec;
}

std::string serialize(const ProblemSpec& spec) {
  std::string out;
  auto line = [&out](std::string_view k, const std::string& v) {
    out.append(k).append("=").append(v).append("\n");
  };
  line("family", std::string(to_string(spec.family)));
  line("grid", std::to_string(spec.grid));
  line("slaves", std::to_string(spec.slaves));
  line("m", std::to_string(spec.m));
  line("n", std::to_string(spec.n));
  line("seed", std::to_string(spec.seed));
  line("cond", text::format_shortest(spec.cond));
  line("constraint", std::string(to_string(spec.constraint)));
  line("patch_form", std::string(to_string(spec.patch_form)));
  line("inhomogeneous", spec.inhomogeneous ? "true" : "false");
  return out;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> patch_ties(std::size_t ng, PatchForm form) {
  // (i+1)/(ng+1) in [1/4, 3/4], decided in integers
  auto inside = [ng](std::size_t i) { return 4 * (i + 1) >= ng + 1 && 4 * (i + 1) <= 3 * (ng + 1); };
  std::vector<std::vector<std::size_t>> patch_rows;
  for (std::size_t j = 0; j < ng; ++j) {
    if (!inside(j)) continue;
    patch_rows.emplace_back();
    for (std::size_t i = 0; i < ng; ++i) {
      if (inside(i)) patch_rows.back().push_back(j * ng + i);
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> ties;
  if (form == PatchForm::Star) {
    const auto centre = patch_rows.front().front();
    for (const auto& row : patch_rows) {
      for (auto k : row) {
        if (k != centre) ties.emplace_back(k, centre);
      }
    }
  } else {
    std::vector<std::size_t> snake;
    for (std::size_t r = 0; r < patch_rows.size(); ++r) {
      if (r % 2 == 0) {
        snake.insert(snake.end(), patch_rows[r].begin(), patch_rows[r].end());
      } else {
        snake.insert(snake.end(), patch_rows[r].rbegin(), patch_rows[r].rend());
      }
    }
    for (std::size_t t = 0; t + 1 < snake.size(); ++t) ties.emplace_back(snake[t], snake[t + 1]);
  }
  return ties;
}

std::vector<Triplet> tie_columns(const std::vector<std::pair<std::size_t, std::size_t>>& ties) {
  std::vector<Triplet> a;
  for (std::size_t c = 0; c < ties.size(); ++c) {
    a.push_back({ties[c].first, c, 1.0});
    a.push_back({ties[c].second, c, -1.0});
  }
  return a;
}

}  // namespace

SaddleSystem gen_constrained_grid(std::size_t ng, PatchForm form, bool inhomogeneous) {
  require_grid(ng);
  const auto m = ng * ng;
  const double h = 1.0 / static_cast<double>(ng + 1);
  const auto ties = patch_ties(ng, form);
  const auto n = ties.size();
  Vector r = inhomogeneous ? patterned_r(n, 0.01 * h) : Vector(n);
  return make_saddle_system(SparseSymMatrix::from_triangle_triplets(m, laplacian_upper(ng)),
                            SparseMatrix::from_triplets(m, n, tie_columns(ties)), Vector(m, h * h),
                            std::move(r));
}

SaddleSystem gen_semidefinite_coupled(std::size_t ng, std::size_t n_slave, PatchForm form, bool inhomogeneous) {
  require_grid(ng);
  if (n_slave == 0) invalid_spec("n_slave must be >= 1");
  const auto m_grid = ng * ng;
  const auto m = m_grid + n_slave;
  const double h = 1.0 / static_cast<double>(ng + 1);

  const auto ties = patch_ties(ng, form);
  std::vector<Triplet> a = tie_columns(ties);
  const auto first = ties.size();
  const auto n = first + n_slave;
  for (std::size_t s = 0; s < n_slave; ++s) {
    const double t = (static_cast<double>(s) + 0.5) / static_cast<double>(n_slave);
    const double x = 0.1 + 0.8 * t;
    const double y = 0.3 + 0.4 * t;
    // cell with lower-left node index c: corners at (c+1)h and (c+2)h
    auto cell = [&](double coord, double& frac) {
      auto c = static_cast<long>(std::floor(coord / h)) - 1;
      c = std::clamp(c, 0L, static_cast<long>(ng) - 2);
      frac = std::clamp(coord / h - static_cast<double>(c + 1), 0.0, 1.0);
      return static_cast<std::size_t>(c);
    };
    double tx = 0.0;
    double ty = 0.0;
    const auto ci = cell(x, tx);
    const auto cj = cell(y, ty);
    const auto slave = m_grid + s;
    a.push_back({slave, first + s, 1.0});
    const std::size_t corners[4] = {cj * ng + ci, cj * ng + ci + 1, (cj + 1) * ng + ci, (cj + 1) * ng + ci + 1};
    const double weights[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
    for (int c = 0; c < 4; ++c) {
      if (weights[c] != 0.0) a.push_back({corners[c], first + s, -weights[c]});
    }
  }

  Vector g(m, h * h);
  Vector r = inhomogeneous ? patterned_r(n, 0.01 * h) : Vector(n);
  return make_saddle_system(SparseSymMatrix::from_triangle_triplets(m, laplacian_upper(ng)),
                            SparseMatrix::from_triplets(m, n, a), std::move(g), std::move(r));
}

SaddleSystem gen_random(std::size_t m, std::size_t n, std::uint64_t seed, double cond_target,
                        bool inhomogeneous) {
  if (m == 0 || n == 0) invalid_spec("m and n must be >= 1");
  if (n > m) invalid_spec("n = " + std::to_string(n) + " exceeds m = " + std::to_string(m));
  if (!(cond_target >= 1.0) || !std::isfinite(cond_target)) invalid_spec("cond_target must be >= 1");
  Rng rng(seed);

  SparseSymMatrix w;
  if (cond_target == 1.0) {
    w = SparseSymMatrix::identity(m);
  } else {
    std::vector<double> dense(m * m, 0.0);
    auto at = [&dense, m](std::size_t i, std::size_t j) -> double& { return dense[i * m + j]; };
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    rng.shuffle(order);
    for (std::size_t i = 0; i < m; ++i) {
      const double t = m > 1 ? static_cast<double>(i) / static_cast<double>(m - 1) : 0.0;
      at(order[i], order[i]) = std::pow(cond_target, t);
    }
    for (int layer = 0; layer < 3; ++layer) {
      rng.shuffle(order);
      for (std::size_t p = 0; p + 1 < m; p += 2) {
        const auto i = order[p];
        const auto j = order[p + 1];
        const double theta = rng.uniform(0.0, 2.0 * 3.141592653589793);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (std::size_t k = 0; k < m; ++k) {  // rows
          const double wi = at(i, k);
          const double wj = at(j, k);
          at(i, k) = c * wi - s * wj;
          at(j, k) = s * wi + c * wj;
        }
        for (std::size_t k = 0; k < m; ++k) {  // columns
          const double wi = at(k, i);
          const double wj = at(k, j);
          at(k, i) = c * wi - s * wj;
          at(k, j) = s * wi + c * wj;
        }
      }
    }
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        if (at(i, j) != 0.0) t.push_back({i, j, at(i, j)});
      }
    }
    w = SparseSymMatrix::from_triangle_triplets(m, t);
  }

  std::vector<std::size_t> rows(m);
  for (std::size_t i = 0; i < m; ++i) rows[i] = i;
  rng.shuffle(rows);
  std::vector<Triplet> a;
  for (std::size_t j = 0; j < n; ++j) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    a.push_back({rows[j], j, sign * (1.0 + rng.uniform())});
    for (int e = 0; e < 2; ++e) {
      auto row = rng.index(m);
      if (row == rows[j]) row = (row + 1) % m;
      a.push_back({row, j, rng.uniform(-0.5, 0.5)});
    }
  }

  Vector g(m);
  for (std::size_t i = 0; i < m; ++i) g[i] = rng.uniform(-1.0, 1.0);
  Vector r(n);
  if (inhomogeneous) {
    for (std::size_t j = 0; j < n; ++j) r[j] = rng.uniform(-1.0, 1.0);
  }
  return make_saddle_system(std::move(w), SparseMatrix::from_triplets(m, n, a), std::move(g), std::move(r));
}

SaddleSystem generate(const ProblemSpec& spec) {
  switch (spec.family) {
    case Family::ConstrainedGrid:
      if (spec.constraint != ConstraintStyle::RigidPatch) {
        invalid_spec("constrained-grid supports constraint=rigid-patch only");
      }
      return gen_constrained_grid(spec.grid, spec.patch_form, spec.inhomogeneous);
    case Family::SemidefiniteCoupled:
      if (spec.constraint != ConstraintStyle::LinearCoupling) {
        invalid_spec("semidefinite-coupled supports constraint=linear-coupling only");
      }
      return gen_semidefinite_coupled(spec.grid, spec.slaves, spec.patch_form, spec.inhomogeneous);
    case Family::Random:
      return gen_random(spec.m, spec.n, spec.seed, spec.cond, spec.inhomogeneous);
  }
  invalid_spec("unknown family");
}

}  // namespace saddlegkb
