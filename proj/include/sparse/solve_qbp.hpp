#pragma once

#include "sparse/model.hpp"
#include "sparse/types.hpp"

namespace sparse {

struct QbpConfig {
  double lambda = 50.0;       // element-wise l1 weight
  double rho = 1.0;           // ADMM splitting penalty
  int max_iters = 20000;
  double eps_abs = 1e-7;
  double eps_rel = 1e-6;
  double extraction_tol = 1e-6;
  // Restrict the lifted variable to the real symmetric slice. Valid when the
  // unknown x is declared real (then X = [1; x][1; x]^T is real); roughly
  // halves the degrees of freedom and markedly widens the recovery region.
  bool real_lift = false;

  void validate() const;
};

struct QbpResult {
  CMat X;                  // Hermitian PSD lifted solution, X(0,0) ~= 1
  CVec x;                  // rank-1 extraction
  double quality = 0.0;    // sigma_2 / sigma_1 of X
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;  // Tr(X) + lambda * sum |X_jk|
  int iterations = 0;
  bool converged = false;
  bool rank1_reliable = false;  // quality <= 1e-3
};

// Solves min Tr(X) + lambda ||X||_1 s.t. Tr(phi_i X) = y_i, X(0,0) = 1,
// X PSD Hermitian, by consensus ADMM: a PSD/pin copy Z, an l1 copy W, and
// the affine measurement constraint folded into the X-update through a
// cached factorization of the realified constraint system. The returned X
// is polished by alternating projections so it is PSD to eigensolver
// precision and measurement-feasible to eps_abs * (1 + ||y||).
QbpResult qbp_solve(const LiftedProblem& problem, const QbpConfig& cfg);

struct RecoverabilityVerdict {
  Index x0_count = 0;   // ||X_true||_0 at threshold 1e-12
  double mu = 0.0;      // mutual coherence of the dictionary
  double bound = 0.0;   // 0.5 * (1 + 1/mu)
  bool recoverable = false;
};

// Checks the coherence recoverability condition ||X||_0 < 0.5 (1 + 1/mu(D)).
RecoverabilityVerdict qbp_recoverability(const LiftedProblem& problem, const CMat& X_true);

// Isometric real parametrization of Hermitian matrices:
// [diagonal; sqrt(2) Re upper; sqrt(2) Im upper], so ||X||_F = ||h||_2.
RVec herm_to_vec(const CMat& X);
CMat vec_to_herm(const RVec& h, Index d);

}  // namespace sparse
