#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "saddlegkb/saddle.hpp"

namespace saddlegkb {

enum class Family { ConstrainedGrid, SemidefiniteCoupled, Random };
enum class ConstraintStyle { RigidPatch, LinearCoupling };
// Rigid patch written as u_i - u_c = 0 against one centre node (star) or as
// u_i - u_{i+1} = 0 along a snake through the patch (chain).
enum class PatchForm { Star, Chain };

struct ProblemSpec {
  Family family = Family::ConstrainedGrid;
  std::size_t grid = 16;
  std::size_t slaves = 8;
  std::size_t m = 100;
  std::size_t n = 20;
  std::uint64_t seed = 1;
  double cond = 100.0;
  ConstraintStyle constraint = ConstraintStyle::RigidPatch;
  PatchForm patch_form = PatchForm::Star;
  bool inhomogeneous = false;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

std::string_view to_string(Family f) noexcept;
std::string_view to_string(ConstraintStyle c) noexcept;
std::string_view to_string(PatchForm p) noexcept;
Family parse_family(std::string_view text);

// key=value pairs separated by newlines or commas; '#' starts a comment.
// When `constraint` is absent it follows the family (rigid-patch for the
// grid, linear-coupling for the semidefinite family). Throws InvalidSpec.
ProblemSpec parse_problem_spec(std::string_view text);
// One key=value per line, every field written.
std::string serialize(const ProblemSpec& spec);

bool is_problem_spec_key(std::string_view key);
// Applies one key; throws InvalidSpec on an unknown key or bad value.
void set_problem_spec_field(ProblemSpec& spec, std::string_view key, std::string_view value);

// 5-point Laplacian on the n_grid x n_grid interior nodes of the unit
// square (Dirichlet boundary eliminated, so m = n_grid^2), node (i, j) at
// ((i+1)h, (j+1)h) with index j*n_grid + i and h = 1/(n_grid+1). Nodes in
// [1/4, 3/4]^2 form the rigid patch. g = h^2, r = 0. Throws InvalidGrid
// for n_grid < 4.
SaddleSystem gen_constrained_grid(std::size_t n_grid, PatchForm form = PatchForm::Star,
                                  bool inhomogeneous = false);

// The constrained grid plus n_slave extra unknowns with zero rows in W.
// Slave s sits on the segment (0.1, 0.3)-(0.9, 0.7) and is tied to the
// corners of its cell by bilinear weights, u_s - sum w_c u_c = 0; these
// columns follow the rigid-patch ones. The slave columns alone would be
// trivial for the solver (every singular value is exactly 1), so the patch
// is kept to give the family a nontrivial spectrum.
SaddleSystem gen_semidefinite_coupled(std::size_t n_grid, std::size_t n_slave, PatchForm form = PatchForm::Star,
                                      bool inhomogeneous = false);

// W = Q D Q^T with D log-spaced on [1, cond_target] and Q three layers of
// Givens rotations on random pairings (so W stays sparse); A has one
// dominant entry per column in distinct rows plus two small random ones.
// cond_target = 1 gives W = I exactly.
SaddleSystem gen_random(std::size_t m, std::size_t n, std::uint64_t seed, double cond_target,
                        bool inhomogeneous = false);

SaddleSystem generate(const ProblemSpec& spec);

}  // namespace saddlegkb
