#include "sparse/solve_qbp.hpp"

#include "sparse/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>

namespace sparse {

void QbpConfig::validate() const {
  if (lambda < 0.0) throw ValidationError("QbpConfig: lambda must be >= 0");
  if (rho <= 0.0) throw ValidationError("QbpConfig: rho must be > 0");
  if (eps_abs <= 0.0 || eps_rel <= 0.0 || extraction_tol <= 0.0)
    throw ValidationError("QbpConfig: tolerances must be > 0");
  if (max_iters < 1) throw ValidationError("QbpConfig: max_iters must be >= 1");
}

RVec herm_to_vec(const CMat& X) {
  const Index d = X.rows();
  RVec h(d * d);
  Index m = 0;
  for (Index j = 0; j < d; ++j) h(m++) = X(j, j).real();
  const double s = std::numbers::sqrt2;
  for (Index k = 1; k < d; ++k)
    for (Index j = 0; j < k; ++j) {
      // Average the conjugate pair so drift from X^H is symmetrized away.
      const Complex u = 0.5 * (X(j, k) + std::conj(X(k, j)));
      h(m) = s * u.real();
      h(m + d * (d - 1) / 2) = s * u.imag();
      ++m;
    }
  return h;
}

CMat vec_to_herm(const RVec& h, Index d) {
  CMat X(d, d);
  Index m = 0;
  for (Index j = 0; j < d; ++j) X(j, j) = h(m++);
  const double inv_s = 1.0 / std::numbers::sqrt2;
  const Index pairs = d * (d - 1) / 2;
  for (Index k = 1; k < d; ++k)
    for (Index j = 0; j < k; ++j) {
      const Complex u(h(m) * inv_s, h(m + pairs) * inv_s);
      X(j, k) = u;
      X(k, j) = std::conj(u);
      ++m;
    }
  return X;
}

namespace {

// Coefficients of h -> Tr(phi X(h)) as a complex row over the Hermitian basis.
CVec constraint_row(const CMat& phi) {
  const Index d = phi.rows();
  CVec c(d * d);
  Index m = 0;
  for (Index j = 0; j < d; ++j) c(m++) = phi(j, j);
  const double inv_s = 1.0 / std::numbers::sqrt2;
  const Index pairs = d * (d - 1) / 2;
  const Complex I(0.0, 1.0);
  for (Index k = 1; k < d; ++k)
    for (Index j = 0; j < k; ++j) {
      c(m) = (phi(k, j) + phi(j, k)) * inv_s;
      c(m + pairs) = I * (phi(k, j) - phi(j, k)) * inv_s;
      ++m;
    }
  return c;
}

CMat psd_project(const CMat& V) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(0.5 * (V + V.adjoint()));
  const RVec clamped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().adjoint();
}

// Approximate projection onto {PSD, X(0,0) = 1}: set the entry, re-project
// to the cone, twice, then pin exactly.
CMat pin_psd_project(CMat V) {
  for (int r = 0; r < 2; ++r) {
    V(0, 0) = 1.0;
    V = psd_project(V);
  }
  V(0, 0) = 1.0;
  return V;
}

CMat soft_threshold_matrix(const CMat& V, double t) {
  CMat out(V.rows(), V.cols());
  for (Index j = 0; j < V.cols(); ++j)
    for (Index i = 0; i < V.rows(); ++i) {
      const double m = std::abs(V(i, j));
      out(i, j) = m > t ? V(i, j) * ((m - t) / m) : Complex(0.0, 0.0);
    }
  return out;
}

double l1_entrywise(const CMat& V) { return V.cwiseAbs().sum(); }

}  // namespace

QbpResult qbp_solve(const LiftedProblem& problem, const QbpConfig& cfg) {
  cfg.validate();
  const Index d = problem.lifted_dim();
  const Index N = problem.measurements();
  const Index M = d * d;

  // Realified constraint system: rows (Re, Im) of Tr(phi_i X(h)) = y_i.
  // With real_lift the imaginary coordinates of h are pinned to zero, so the
  // system keeps only the leading diagonal + Re(upper) block of columns.
  const Index cols = cfg.real_lift ? d * (d + 1) / 2 : M;
  RMat Dr(2 * N, cols);
  RVec yr(2 * N);
  for (Index i = 0; i < N; ++i) {
    const CVec c = constraint_row(problem.phis[i]);
    Dr.row(2 * i) = c.real().transpose().head(cols);
    Dr.row(2 * i + 1) = c.imag().transpose().head(cols);
    yr(2 * i) = problem.y(i).real();
    yr(2 * i + 1) = problem.y(i).imag();
  }
  const auto cod = Dr.completeOrthogonalDecomposition();
  const auto affine_project = [&](const RVec& full) -> RVec {
    const RVec head = full.head(cols);
    RVec out = RVec::Zero(M);
    out.head(cols) = head - cod.solve((Dr * head - yr).eval());
    return out;
  };

  // Start at the minimum-norm measurement-consistent Hermitian point.
  RVec h = RVec::Zero(M);
  h.head(cols) = cod.solve(yr);
  CMat X = vec_to_herm(h, d);
  CMat Z = pin_psd_project(X);
  CMat W = X;
  CMat Uz = CMat::Zero(d, d);
  CMat Uw = CMat::Zero(d, d);

  double rho = cfg.rho;
  QbpResult result;
  const double sqrt2m = std::sqrt(2.0 * static_cast<double>(M));

  constexpr double kRelax = 1.6;  // over-relaxation
  for (int k = 0; k < cfg.max_iters; ++k) {
    Z = pin_psd_project(X - Uz);
    W = cfg.lambda > 0.0 ? soft_threshold_matrix(X - Uw, cfg.lambda / rho) : CMat(X - Uw);

    const CMat Zr = kRelax * Z + (1.0 - kRelax) * X;
    const CMat Wr = kRelax * W + (1.0 - kRelax) * X;

    // X-update: trace term enters linearly, then project onto the
    // measurement-consistent affine set through the cached factorization.
    const CMat X_prev = X;
    CMat target = 0.5 * (Zr + Uz + Wr + Uw);
    target -= (0.5 / rho) * CMat::Identity(d, d);
    h = affine_project(herm_to_vec(target));
    X = vec_to_herm(h, d);

    Uz += Zr - X;
    Uw += Wr - X;

    const double r_norm = std::sqrt((Z - X).squaredNorm() + (W - X).squaredNorm());
    const double s_norm = rho * std::numbers::sqrt2 * (X - X_prev).norm();
    const double eps_pri =
        sqrt2m * cfg.eps_abs +
        cfg.eps_rel * std::max(std::sqrt(Z.squaredNorm() + W.squaredNorm()),
                               std::numbers::sqrt2 * X.norm());
    const double eps_dual =
        sqrt2m * cfg.eps_abs +
        cfg.eps_rel * rho * std::sqrt(Uz.squaredNorm() + Uw.squaredNorm());

    result.primal_residual = r_norm;
    result.dual_residual = s_norm;
    result.iterations = k + 1;

    if (std::getenv("SPARSE_QBP_TRACE") && (k % 500 == 0 || k == cfg.max_iters - 1))
      std::fprintf(stderr, "iter %6d rho=%.3g r=%.3e s=%.3e eps_pri=%.3e eps_dual=%.3e\n", k,
                   rho, r_norm, s_norm, eps_pri, eps_dual);

    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      result.converged = true;
      break;
    }

    // Residual balancing on tolerance-normalized residuals keeps the two
    // rates comparable.
    const double r_hat = r_norm / eps_pri;
    const double s_hat = s_norm / eps_dual;
    if (r_hat > 10.0 * s_hat && rho < 1e6) {
      rho *= 2.0;
      Uz *= 0.5;
      Uw *= 0.5;
    } else if (s_hat > 10.0 * r_hat && rho > 1e-6) {
      rho *= 0.5;
      Uz *= 2.0;
      Uw *= 2.0;
    }
  }

  // Polish: alternate between the affine set and the PSD/pin set so the
  // returned X is PSD to eigensolver precision and feasible to eps_abs.
  const double feas_tol = 0.5 * cfg.eps_abs * (1.0 + problem.y.norm());
  for (int t = 0; t < 100; ++t) {
    h = affine_project(herm_to_vec(X));
    X = vec_to_herm(h, d);
    for (int r = 0; r < 2; ++r) {
      X(0, 0) = 1.0;
      X = psd_project(X);
    }
    const double affine_resid = (Dr * herm_to_vec(X).head(cols) - yr).norm();
    if (affine_resid <= feas_tol && std::abs(X(0, 0) - Complex(1.0, 0.0)) <= cfg.extraction_tol)
      break;
  }

  result.X = X;
  result.objective = X.trace().real() + cfg.lambda * l1_entrywise(X);
  const Rank1Decomposition dec = rank1_decompose(X, cfg.extraction_tol);
  result.x = dec.x;
  result.quality = dec.quality;
  result.rank1_reliable = dec.quality <= 1e-3;
  return result;
}

RecoverabilityVerdict qbp_recoverability(const LiftedProblem& problem, const CMat& X_true) {
  const Index d = problem.lifted_dim();
  if (X_true.rows() != d || X_true.cols() != d)
    throw DimensionError("qbp_recoverability: X_true dimension mismatch");
  RecoverabilityVerdict v;
  v.x0_count = (X_true.cwiseAbs().array() > 1e-12).count();
  v.mu = mutual_coherence(problem.dictionary);
  v.bound = v.mu > 0.0 ? 0.5 * (1.0 + 1.0 / v.mu) : std::numeric_limits<double>::infinity();
  v.recoverable = static_cast<double>(v.x0_count) < v.bound;
  return v;
}

}  // namespace sparse
