#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "saddlegkb/error.hpp"
#include "saddlegkb/generators.hpp"
#include "saddlegkb/gkb.hpp"
#include "saddlegkb/oracle.hpp"
#include "saddlegkb/saddle.hpp"

using namespace saddlegkb;

namespace {

// W = [2], A = [1], eta = 1: M = [3], b = (1)
RegularizedSystem one_by_one(double eta = 1.0, Vector b = Vector{1.0}) {
  return RegularizedSystem::from_transformed(SparseSymMatrix::diagonal(std::vector<double>{3.0}),
                                             SparseMatrix::identity(1), eta, std::move(b));
}

// Exact u of the transformed system via the dense oracle.
Vector reference_u(const RegularizedSystem& reg) {
  return direct_saddle_solve(reg.source()).w - reg.shift();
}

double dual_norm(const RegularizedSystem& reg, const Vector& y) {
  return std::sqrt(reg.n_inverse_scale()) * norm2(y);
}

struct Run {
  std::vector<Vector> iterates;  // iterates[k-1] = u^(k)
  std::vector<double> residual_proxy;
  GkbState state;
};

Run run_to_end(const RegularizedSystem& reg, bool reorth, std::size_t max_k) {
  Run run{{}, {}, gkb_init(reg, reorth, true)};
  while (true) {
    run.iterates.push_back(run.state.u());
    run.residual_proxy.push_back(residual_dual_norm(run.state));
    if (run.state.lucky_breakdown() || run.state.iteration() >= max_k) break;
    gkb_step(run.state);
    if (run.state.alpha_breakdown()) break;
  }
  return run;
}

}  // namespace

TEST(GkbConfig, Validation) {
  GkbConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  for (double tau : {0.0, 1.0, -1e-3, 2.0}) {
    GkbConfig c;
    c.tau = tau;
    EXPECT_THROW(c.validate(), Error) << tau;
  }
  GkbConfig c1;
  c1.delay = 0;
  EXPECT_THROW(c1.validate(), Error);
  GkbConfig c2;
  c2.maxit = 0;
  EXPECT_THROW(c2.validate(), Error);
  GkbConfig c3;
  c3.bound_mode = BoundMode::Upper;
  EXPECT_THROW(c3.validate(), Error);
  c3.sigma_lower_bound = 0.5;
  EXPECT_NO_THROW(c3.validate());
  c3.sigma_lower_bound = -0.5;
  EXPECT_THROW(c3.validate(), Error);
}

TEST(GkbEnums, ParseAndPrint) {
  EXPECT_EQ(parse_bound_mode("both"), BoundMode::Both);
  EXPECT_EQ(to_string(BoundMode::Upper), "upper");
  EXPECT_EQ(parse_radau_formula("gauss-radau"), RadauFormula::GaussRadau);
  EXPECT_EQ(to_string(RadauFormula::AsPrinted), "as-printed");
  EXPECT_EQ(to_string(GkbStatus::LuckyBreakdown), "lucky-breakdown");
  EXPECT_THROW((void)parse_bound_mode("middle"), Error);
}

TEST(GkbInit, OneByOneTrace) {
  const auto reg = one_by_one();
  const auto st = gkb_init(reg);
  EXPECT_EQ(st.iteration(), 1U);
  EXPECT_DOUBLE_EQ(st.beta1(), 1.0);
  EXPECT_DOUBLE_EQ(st.q()[0], 1.0);
  EXPECT_DOUBLE_EQ(st.alpha(), 1.0 / std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(st.v()[0], 1.0 / std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(st.zeta(), std::sqrt(3.0));
  EXPECT_NEAR(st.u()[0], 1.0, 1e-15);
  EXPECT_NEAR(st.p()[0], -3.0, 1e-14);
  // beta_2 vanishes at once
  EXPECT_TRUE(st.lucky_breakdown());
  EXPECT_LE(st.next_beta(), st.breakdown_threshold());
  EXPECT_EQ(residual_dual_norm(st), std::abs(st.next_beta() * st.zeta()));
  EXPECT_LE(residual_dual_norm(st), 1e-15);
}

TEST(GkbInit, ZeroRightHandSide) {
  const auto reg = one_by_one(1.0, Vector{0.0});
  auto st = gkb_init(reg);
  EXPECT_TRUE(st.zero_rhs());
  EXPECT_EQ(st.u(), Vector(1));
  EXPECT_THROW(gkb_step(st), Error);

  const auto res = gkb_solve(reg, GkbConfig{});
  EXPECT_EQ(res.status, GkbStatus::Converged);
  EXPECT_EQ(res.u, Vector(1));
  EXPECT_EQ(res.iterations, 0U);
}

TEST(GkbInit, EtaScalingOnlyRescalesBeta) {
  const auto sys = gen_constrained_grid(6);
  const auto base = regularize(sys, 2.0);
  const auto a = RegularizedSystem::from_transformed(base.M(), sys.A, 2.0, base.b());
  const auto b = RegularizedSystem::from_transformed(base.M(), sys.A, 4.0, base.b());
  const auto sa = gkb_init(a);
  const auto sb = gkb_init(b);
  EXPECT_NEAR(sb.beta1() / sa.beta1(), std::sqrt(2.0), 1e-14);
  EXPECT_LE(norm2(sa.u() - sb.u()), 1e-13 * norm2(sa.u()));
}

TEST(GkbStep, SteppingATerminatedStateThrows) {
  const auto reg = one_by_one();
  auto st = gkb_init(reg);
  ASSERT_TRUE(st.lucky_breakdown());
  try {
    gkb_step(st);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
}

TEST(GkbSolve, OneByOne) {
  GkbConfig cfg;
  cfg.delay = 1;
  const auto res = gkb_solve(one_by_one(), cfg);
  EXPECT_EQ(res.status, GkbStatus::LuckyBreakdown);
  EXPECT_NEAR(res.u[0], 1.0, 1e-15);
  EXPECT_NEAR(res.p[0], -3.0, 1e-14);
  ASSERT_EQ(res.history.records.size(), 1U);
  EXPECT_FALSE(res.history.records[0].xi.has_value());
}

TEST(GkbSolve, MaxitOneStopsAfterOneRecord) {
  const auto sys = gen_constrained_grid(16);
  const auto reg = regularize(sys, 1e-3);
  GkbConfig cfg;
  cfg.maxit = 1;
  const auto res = gkb_solve(reg, cfg);
  EXPECT_EQ(res.status, GkbStatus::MaxitReached);
  EXPECT_EQ(res.history.records.size(), 1U);
  EXPECT_EQ(res.iterations, 1U);
}

TEST(GkbSolve, IdentityBlocks) {
  const std::size_t m = 12;
  const std::size_t n = 5;
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < n; ++j) t.push_back({j, j, 1.0});
  Vector g(m);
  Vector r(n);
  for (std::size_t i = 0; i < m; ++i) g[i] = std::sin(1.0 + static_cast<double>(i));
  for (std::size_t j = 0; j < n; ++j) r[j] = std::cos(2.0 * static_cast<double>(j));
  const auto sys = make_saddle_system(SparseSymMatrix::identity(m), SparseMatrix::from_triplets(m, n, t), g, r);
  const auto reg = regularize(sys, 1.0);
  GkbConfig cfg;
  cfg.tau = 1e-14;
  cfg.delay = 1;
  const auto res = solve_saddle(reg, cfg);
  EXPECT_LE(res.gkb.iterations, n);
  const auto direct = direct_saddle_solve(sys);
  EXPECT_LE(norm2(res.w - direct.w), 1e-12 * norm2(direct.w));
  EXPECT_LE(norm2(res.p - direct.p), 1e-12 * norm2(direct.p));
}

TEST(GkbSolve, GridSixteenMeetsTolerance) {
  const auto sys = gen_constrained_grid(16);
  const auto reg = regularize(sys, one_norm(sys.W));
  const auto u = reference_u(reg);
  GkbConfig cfg;
  const auto res = gkb_solve(reg, cfg);
  EXPECT_EQ(res.status, GkbStatus::Converged);
  EXPECT_LE(res.iterations, sys.n());
  EXPECT_LE(weighted_norm(u - res.u, reg.M()), cfg.tau * weighted_norm(u, reg.M()));
  ASSERT_TRUE(res.history.certified_iteration.has_value());
  EXPECT_EQ(*res.history.certified_iteration + cfg.delay, *res.history.stop_iteration);
  for (std::size_t i = 0; i < res.history.records.size(); ++i) {
    const auto& rec = res.history.records[i];
    EXPECT_EQ(rec.k, i + 1);
    EXPECT_EQ(rec.xi.has_value(), rec.k > cfg.delay);
  }
}

TEST(GkbSolve, ReferenceGivesTrueError) {
  const auto sys = gen_constrained_grid(8);
  const auto reg = regularize(sys, one_norm(sys.W));
  GkbConfig cfg;
  cfg.reference_u = reference_u(reg);
  const auto res = gkb_solve(reg, cfg);
  for (const auto& rec : res.history.records) ASSERT_TRUE(rec.true_error.has_value());
  cfg.reference_u = Vector(3);
  EXPECT_THROW((void)gkb_solve(reg, cfg), Error);
}

TEST(LowerBound, Examples) {
  const std::vector<double> z{9.0, 9.0, 9.0, 9.0, 9.0, 0.003, 0.004};
  EXPECT_FALSE(check_lower_bound(z, 2, 2, 0.01).value.has_value());
  EXPECT_FALSE(check_lower_bound(z, 2, 2, 0.01).converged);
  const auto c = check_lower_bound(z, 7, 2, 0.01);
  ASSERT_TRUE(c.value.has_value());
  EXPECT_NEAR(*c.value, 0.005, 1e-17);
  EXPECT_TRUE(c.converged);
  EXPECT_FALSE(check_lower_bound(z, 7, 3, 0.01).converged);
  EXPECT_THROW((void)check_lower_bound(z, 8, 2, 0.01), Error);
}

TEST(UpperBound, PrintedRecurrenceArithmetic) {
  GaussRadauBound bound(0.5, RadauFormula::AsPrinted);
  // d-bar_1 = 1 + 1 - 0.25 = 1.75, phi = 1 / sqrt(1.75 + 0.25 - 1) = 1
  EXPECT_DOUBLE_EQ(bound.update(1.0, 1.0, 0.0, 1.0), 1.0);
  // varpi_1 = 0.25 + 1/1.75, d-bar_2 = 2 - varpi_1, radicand 3/7
  EXPECT_NEAR(bound.update(1.0, 1.0, 0.0, 1.0), std::sqrt(7.0 / 3.0), 1e-14);
  EXPECT_EQ(bound.iteration(), 2U);

  const std::vector<double> z{1.0, 1.0, 0.3, 0.4};
  const auto c = check_upper_bound(z, 4, 2, 0.6, 0.11);
  ASSERT_TRUE(c.value.has_value());
  EXPECT_NEAR(*c.value, 0.6, 1e-15);
  EXPECT_FALSE(check_upper_bound(z, 2, 2, 0.6, 0.11).value.has_value());
}

TEST(UpperBound, TooLargeSigmaIsRejected) {
  GaussRadauBound printed(2.0, RadauFormula::AsPrinted);
  try {
    (void)printed.update(1.0, 1.0, 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSingularValueBound);
  }
  GaussRadauBound textbook(2.0, RadauFormula::GaussRadau);
  EXPECT_THROW((void)textbook.update(1.0, 1.0, 1.0, 1.0), Error);
}

TEST(GkbProperties, ZetaRecurrenceAndSigns) {
  const auto sys = gen_random(60, 15, 5, 100.0, true);
  const auto reg = regularize(sys, one_norm(sys.W));
  const auto run = run_to_end(reg, false, 15);
  const auto& z = run.state.zetas();
  const auto& a = run.state.alphas();
  const auto& b = run.state.betas();
  ASSERT_GE(z.size(), 5U);
  for (std::size_t j = 1; j < z.size(); ++j) {
    EXPECT_EQ(z[j], -(b[j] / a[j]) * z[j - 1]);
    EXPECT_LT(z[j] * z[j - 1], 0.0);
  }
}

class GkbOnFamilies : public ::testing::TestWithParam<int> {
 protected:
  SaddleSystem make() const {
    switch (GetParam()) {
      case 0: return gen_constrained_grid(8);
      case 1: return gen_semidefinite_coupled(8, 6);
      default: return gen_random(80, 20, 11, 1e3, true);
    }
  }
};

TEST_P(GkbOnFamilies, ResidualIdentity) {
  const auto sys = make();
  const auto reg = regularize(sys, one_norm(sys.W));
  const auto run = run_to_end(reg, false, sys.n());
  const double floor = 1e-12 * run.state.beta1();
  for (std::size_t i = 0; i < run.iterates.size(); ++i) {
    const double explicit_norm = dual_norm(reg, transpose_mat_vec(reg.A(), run.iterates[i]) - reg.b());
    EXPECT_LE(std::abs(run.residual_proxy[i] - explicit_norm), 1e-8 * explicit_norm + floor) << "k=" << i + 1;
  }
}

TEST_P(GkbOnFamilies, OrthogonalityWithReorthogonalization) {
  const auto sys = make();
  const auto reg = regularize(sys, one_norm(sys.W));
  const auto run = run_to_end(reg, true, std::min<std::size_t>(sys.n(), 50));
  const auto& v = run.state.v_basis();
  const auto& q = run.state.q_basis();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      EXPECT_NEAR(weighted_dot(v[i], v[j], reg.M()), expected, 1e-8);
      EXPECT_NEAR(dot(q[i], q[j]) / reg.n_inverse_scale(), expected, 1e-8);
    }
  }
}

TEST_P(GkbOnFamilies, ErrorIdentityMonotoneAndOptimal) {
  const auto sys = make();
  const auto reg = regularize(sys, one_norm(sys.W));
  const auto u = reference_u(reg);
  const auto run = run_to_end(reg, true, sys.n());
  const auto& z = run.state.zetas();
  const double e0 = weighted_norm(u, reg.M());
  double previous = e0;
  for (std::size_t k = 1; k <= run.iterates.size(); ++k) {
    const Vector e = u - run.iterates[k - 1];
    const double err = weighted_norm(e, reg.M());
    double tail = 0.0;
    for (std::size_t j = k; j < z.size(); ++j) tail += z[j] * z[j];
    // the oracle itself carries ~1e-13 relative error; below that the
    // comparison measures the oracle, not the iteration
    if (err > 1e-8 * e0) {
      EXPECT_NEAR(err * err, tail, 1e-6 * err * err) << "k=" << k;
    }
    EXPECT_LE(err, previous + 1e-12 * e0) << "k=" << k;
    previous = err;
    for (std::size_t j = 0; j < k; ++j) {
      EXPECT_LE(std::abs(weighted_dot(run.state.v_basis()[j], e, reg.M())), 1e-6 * err + 1e-13 * e0);
    }
  }
}

TEST_P(GkbOnFamilies, FiniteTermination) {
  const auto sys = make();
  const auto reg = regularize(sys, one_norm(sys.W));
  const auto u = reference_u(reg);
  const auto run = run_to_end(reg, false, sys.n());
  const double e0 = weighted_norm(u, reg.M());
  bool reached = false;
  for (const auto& uk : run.iterates) reached = reached || weighted_norm(u - uk, reg.M()) <= 1e-8 * e0;
  EXPECT_TRUE(reached);
  EXPECT_LE(run.iterates.size(), sys.n());
}

TEST_P(GkbOnFamilies, LowerBoundNeverExceedsError) {
  const auto sys = make();
  const auto reg = regularize(sys, one_norm(sys.W));
  const auto u = reference_u(reg);
  const std::size_t d = 3;
  const auto run = run_to_end(reg, false, sys.n());
  for (std::size_t k = d + 1; k <= run.iterates.size(); ++k) {
    const auto lb = check_lower_bound(run.state.zetas(), k, d, 0.5);
    ASSERT_TRUE(lb.value.has_value());
    EXPECT_LE(*lb.value, weighted_norm(u - run.iterates[k - d - 1], reg.M()) + 1e-12);
  }
}

TEST_P(GkbOnFamilies, TextbookGaussRadauBoundsError) {
  const auto sys = make();
  const double eta = one_norm(sys.W);
  const auto reg = regularize(sys, eta);
  const auto u = reference_u(reg);
  const double a = 0.9 * elliptic_singular_values(reg.M(), sys.A, eta).back();
  GkbConfig cfg;
  cfg.tau = 1e-13;
  cfg.delay = 2;
  cfg.bound_mode = BoundMode::Both;
  cfg.sigma_lower_bound = a;
  cfg.radau_formula = RadauFormula::GaussRadau;
  cfg.maxit = sys.n();
  cfg.keep_basis = true;
  const auto run = run_to_end(reg, false, sys.n());
  const auto res = gkb_solve(reg, cfg);
  const double e0 = weighted_norm(u, reg.M());
  for (const auto& rec : res.history.records) {
    if (!rec.Xi) continue;
    const double err = weighted_norm(u - run.iterates[rec.k - cfg.delay - 1], reg.M());
    EXPECT_GE(*rec.Xi, err - 1e-12 * e0) << "k=" << rec.k;
    EXPECT_GE(*rec.Xi, *rec.xi);
  }
}

INSTANTIATE_TEST_SUITE_P(Families, GkbOnFamilies, ::testing::Values(0, 1, 2));
