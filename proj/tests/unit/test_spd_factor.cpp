#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "saddlegkb/error.hpp"
#include "saddlegkb/spd_factor.hpp"
#include "support/dense.hpp"

using namespace saddlegkb;

namespace {

SparseSymMatrix two_by_two() {
  return SparseSymMatrix::from_triangle_triplets(2, std::vector<Triplet>{{0, 0, 2.0}, {0, 1, 1.0}, {1, 1, 2.0}});
}

// ||P^T L L^T P - M||_F / ||M||_F
double reconstruction_error(const SpdFactor& f, const SparseSymMatrix& m) {
  const auto l = testsupport::to_dense(f.lower());
  const auto md = testsupport::to_dense(m);
  const auto& perm = f.permutation();
  const auto n = m.size();
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double llt = 0.0;
      for (std::size_t k = 0; k < n; ++k) llt += l[i][k] * l[j][k];
      const double mij = md[perm[i]][perm[j]];
      diff += (llt - mij) * (llt - mij);
      ref += mij * mij;
    }
  }
  return std::sqrt(diff / ref);
}

}  // namespace

TEST(SpdFactor, IdentityFactorIsIdentity) {
  const auto f = spd_factor(SparseSymMatrix::identity(3));
  const auto l = f.lower();
  EXPECT_EQ(l, SparseMatrix::identity(3));
}

TEST(SpdFactor, DiagonalFactor) {
  const std::vector<double> d{4.0, 9.0};
  const auto f = spd_factor(SparseSymMatrix::diagonal(d), Ordering::Natural);
  const auto l = f.lower();
  EXPECT_EQ(l.at(0, 0), 2.0);
  EXPECT_EQ(l.at(1, 1), 3.0);
  EXPECT_EQ(l.nnz(), 2u);
}

TEST(SpdFactor, SolveExamples) {
  const auto f = spd_factor(two_by_two());
  const auto x = spd_solve(f, Vector{3.0, 3.0});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0, 1e-15);
  const auto y = spd_solve(f, Vector{1.0, 0.0});
  EXPECT_NEAR(y[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(y[1], -1.0 / 3.0, 1e-15);

  EXPECT_EQ(spd_solve(spd_factor(SparseSymMatrix::identity(2)), Vector{5.0, -3.0}), (Vector{5.0, -3.0}));
  const std::vector<double> d{2.0, 4.0};
  const auto z = spd_solve(spd_factor(SparseSymMatrix::diagonal(d)), Vector{2.0, 4.0});
  EXPECT_NEAR(z[0], 1.0, 1e-15);
  EXPECT_NEAR(z[1], 1.0, 1e-15);
  EXPECT_THROW(spd_solve(f, Vector{1.0}), Error);
}

TEST(SpdFactor, NotPositiveDefiniteReportsPivot) {
  const std::vector<double> d{1.0, 0.0, 3.0};
  try {
    (void)spd_factor(SparseSymMatrix::diagonal(d));
    FAIL();
  } catch (const NotPositiveDefiniteError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
    EXPECT_EQ(e.pivot_index(), 1u);
  }
  const auto indefinite =
      SparseSymMatrix::from_triangle_triplets(2, std::vector<Triplet>{{0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 1.0}});
  EXPECT_THROW((void)spd_factor(indefinite), NotPositiveDefiniteError);
  EXPECT_THROW((void)spd_factor(SparseSymMatrix{}), Error);
}

TEST(SpdFactor, RandomSpdResidualAndReconstruction) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 15; ++t) {
    const std::size_t n = 5 + rng() % 195;
    const auto m = testsupport::random_spd(n, 3.0 / static_cast<double>(n), 1e-3, rng);
    for (auto ordering : {Ordering::Natural, Ordering::MinimumDegree}) {
      const auto f = spd_factor(m, ordering);
      const auto b = testsupport::random_vector(n, rng);
      const auto x = f.solve(b);
      EXPECT_LE(norm2(mat_vec(m, x) - b), 1e-10 * norm2(b));
      const auto l = f.lower();
      for (std::size_t i = 0; i < n; ++i) EXPECT_GT(l.at(i, i), 0.0);
      if (n <= 80) {
        EXPECT_LE(reconstruction_error(f, m), 1e-12);
      }
    }
  }
}

TEST(SpdFactor, IllConditionedResidual) {
  // diagonal spread 1..1e8 mixed by a sparse coupling
  const std::size_t n = 60;
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, std::pow(10.0, 8.0 * static_cast<double>(i) / (n - 1)) + 0.5});
    if (i + 1 < n) t.push_back({i, i + 1, 0.25});
  }
  const auto m = SparseSymMatrix::from_triangle_triplets(n, t);
  std::mt19937_64 rng(9);
  const auto b = testsupport::random_vector(n, rng);
  const auto x = spd_solve(spd_factor(m), b);
  EXPECT_LE(norm2(mat_vec(m, x) - b), 1e-10 * norm2(b));
}

TEST(MinimumDegree, IsPermutationAndReducesFillOnArrow) {
  // arrow matrix: dense first row/column; natural order fills completely
  const std::size_t n = 30;
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, 10.0});
    if (i > 0) t.push_back({0, i, 1.0});
  }
  const auto m = SparseSymMatrix::from_triangle_triplets(n, t);
  auto perm = minimum_degree_ordering(m);
  ASSERT_EQ(perm.size(), n);
  auto sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(sorted[i], i);
  // the hub waits until only one leaf is left, then ties with it at degree 1
  EXPECT_EQ(perm[n - 2], 0u);
  const auto natural = spd_factor(m, Ordering::Natural);
  const auto md = spd_factor(m, Ordering::MinimumDegree);
  EXPECT_EQ(md.nnz(), 2 * n - 1);
  EXPECT_EQ(natural.nnz(), n * (n + 1) / 2);
}

TEST(SpdFactor, DeterministicOrdering) {
  std::mt19937_64 rng(1);
  const auto m = testsupport::random_spd(50, 0.05, 1.0, rng);
  EXPECT_EQ(minimum_degree_ordering(m), minimum_degree_ordering(m));
}
