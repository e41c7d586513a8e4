#include "saddlegkb/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "saddlegkb/error.hpp"
#include "saddlegkb/spd_factor.hpp"

namespace saddlegkb {

namespace {

using Dense = Eigen::MatrixXd;

void require_dense(std::size_t dim, std::size_t limit, const char* what) {
  if (dim > limit) {
    throw Error(ErrorCode::TooLargeForDense, std::string(what) + ": dimension " + std::to_string(dim) +
                                                 " exceeds the dense limit " + std::to_string(limit));
  }
}

Dense to_dense(const SparseMatrix& a) {
  Dense d = Dense::Zero(static_cast<Eigen::Index>(a.nrows()), static_cast<Eigen::Index>(a.ncols()));
  for (const auto& t : a.triplets()) {
    d(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;
  }
  return d;
}

Dense to_dense(const SparseSymMatrix& m) { return to_dense(m.matrix()); }

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Dense spd_inverse_sqrt(const Dense& m) {
  Eigen::SelfAdjointEigenSolver<Dense> eig(m);
  const auto& ev = eig.eigenvalues();
  if (ev.size() > 0 && !(ev.minCoeff() > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "matrix is not positive definite (smallest eigenvalue " +
                                                    std::to_string(ev.minCoeff()) + ")");
  }
  return eig.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

Dense schur_dense(const SparseSymMatrix& w, const SparseMatrix& a) {
  const Dense wd = to_dense(w);
  const Dense ad = to_dense(a);
  Eigen::LLT<Dense> llt(wd);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "W is not positive definite");
  }
  Dense s = ad.transpose() * llt.solve(ad);
  return 0.5 * (s + s.transpose());
}

}  // namespace

DirectSolution direct_saddle_solve(const SaddleSystem& sys, std::size_t limit) {
  const auto m = static_cast<Eigen::Index>(sys.m());
  const auto n = static_cast<Eigen::Index>(sys.n());
  require_dense(sys.m() + sys.n(), limit, "direct_saddle_solve");
  Dense k = Dense::Zero(m + n, m + n);
  k.topLeftCorner(m, m) = to_dense(sys.W);
  const Dense ad = to_dense(sys.A);
  k.topRightCorner(m, n) = ad;
  k.bottomLeftCorner(n, m) = ad.transpose();
  Eigen::VectorXd rhs(m + n);
  for (Eigen::Index i = 0; i < m; ++i) rhs(i) = sys.g[static_cast<std::size_t>(i)];
  for (Eigen::Index j = 0; j < n; ++j) rhs(m + j) = sys.r[static_cast<std::size_t>(j)];

  Eigen::PartialPivLU<Dense> lu(k);
  // rcond() reports 1 when a pivot is exactly zero, so the pivots are
  // screened separately.
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double rcond = pivots.minCoeff() > 0.0 ? lu.rcond() : 0.0;
  if (!(rcond >= 1e-14)) {
    throw Error(ErrorCode::SingularSystem,
                "saddle matrix is singular to working precision (rcond " + std::to_string(rcond) + ")");
  }
  const Eigen::VectorXd x = lu.solve(rhs);
  DirectSolution out;
  out.w = Vector(std::vector<double>(x.data(), x.data() + m));
  out.p = Vector(std::vector<double>(x.data() + m, x.data() + m + n));
  return out;
}

std::vector<double> elliptic_singular_values(const SparseSymMatrix& m, const SparseMatrix& a, double eta,
                                             std::size_t limit) {
  if (!(eta > 0.0)) throw Error(ErrorCode::NonpositiveEta, "eta must be > 0");
  require_dense(m.size(), limit, "elliptic_singular_values");
  const Dense op = spd_inverse_sqrt(to_dense(m)) * to_dense(a) * std::sqrt(eta);
  Eigen::JacobiSVD<Dense> svd(op);
  return to_std(svd.singularValues());
}

EllipticSpectrum elliptic_svd(const SparseSymMatrix& m, const SparseMatrix& a, double eta, std::size_t limit) {
  EllipticSpectrum out;
  out.sigma = elliptic_singular_values(m, a, eta, limit);
  for (double s : out.sigma) out.mu.push_back(s * s);
  if (!out.sigma.empty()) out.condition = out.sigma.front() / out.sigma.back();
  return out;
}

std::vector<double> elliptic_eigenvalues(const SparseSymMatrix& m, const SparseMatrix& a, double eta,
                                         std::size_t limit) {
  if (!(eta > 0.0)) throw Error(ErrorCode::NonpositiveEta, "eta must be > 0");
  require_dense(m.size(), limit, "elliptic_eigenvalues");
  const Dense ad = to_dense(a);
  Eigen::LDLT<Dense> ldlt(to_dense(m));
  Dense s = eta * (ad.transpose() * ldlt.solve(ad));
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Dense> eig(s, Eigen::EigenvaluesOnly);
  return to_std(eig.eigenvalues());
}

std::vector<double> schur_eigenvalues(const SparseSymMatrix& w, const SparseMatrix& a, std::size_t limit) {
  require_dense(w.size(), limit, "schur_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Dense> eig(schur_dense(w, a), Eigen::EigenvaluesOnly);
  return to_std(eig.eigenvalues());
}

double lambda_min_schur(const SparseSymMatrix& w, const SparseMatrix& a, std::size_t limit) {
  const auto ev = schur_eigenvalues(w, a, limit);
  if (ev.empty()) throw Error(ErrorCode::EmptyMatrix, "A has no columns");
  return ev.front();
}

std::vector<double> symmetric_eigenvalues(const SparseSymMatrix& m, std::size_t limit) {
  require_dense(m.size(), limit, "symmetric_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Dense> eig(to_dense(m), Eigen::EigenvaluesOnly);
  return to_std(eig.eigenvalues());
}

SpectralReport verify_theorem(const SparseSymMatrix& w, const SparseMatrix& a, double eta, std::size_t limit) {
  if (!(eta > 0.0)) throw Error(ErrorCode::NonpositiveEta, "eta must be > 0");
  SpectralReport rep;
  rep.eta = eta;
  rep.lambda = schur_eigenvalues(w, a, limit);
  if (rep.lambda.empty()) throw Error(ErrorCode::EmptyMatrix, "A has no columns");
  for (double l : rep.lambda) rep.predicted_mu.push_back(eta * l / (1.0 + eta * l));

  const auto m = add_outer_product(w, 1.0, a, eta);
  auto sigma = elliptic_singular_values(m, a, eta, limit);
  for (double s : sigma) rep.measured_mu.push_back(s * s);
  std::sort(rep.measured_mu.begin(), rep.measured_mu.end());
  for (std::size_t i = 0; i < rep.measured_mu.size(); ++i) {
    rep.max_mu_deviation = std::max(rep.max_mu_deviation, std::abs(rep.measured_mu[i] - rep.predicted_mu[i]));
  }
  rep.kappa_squared = rep.measured_mu.back() / rep.measured_mu.front();
  const double el = eta * rep.lambda.front();
  rep.kappa_squared_bound = (1.0 + el) / el;
  rep.eta_lambda_at_least_one = el >= 1.0;
  return rep;
}

std::size_t numerical_rank(const SparseMatrix& a, std::size_t limit) {
  require_dense(std::max(a.nrows(), a.ncols()), limit, "numerical_rank");
  Eigen::ColPivHouseholderQR<Dense> qr(to_dense(a));
  return static_cast<std::size_t>(qr.rank());
}

KernelReport check_kernel_assumptions(const SaddleSystem& sys) {
  KernelReport rep;
  if (sys.n() <= kRankCheckLimit && sys.m() <= kDefaultDenseLimit) {
    rep.rank_checked = true;
    rep.rank = numerical_rank(sys.A);
    rep.full_column_rank = rep.rank == sys.n();
  } else {
    rep.rank = sys.n();
  }
  try {
    (void)spd_factor(add_outer_product(sys.W, 1.0, sys.A, 1.0));
  } catch (const NotPositiveDefiniteError& e) {
    rep.kernel_condition = false;
    rep.failing_pivot = e.pivot_index();
  }
  return rep;
}

}  // namespace saddlegkb
