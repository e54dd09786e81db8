#pragma once

#include "sparse/model.hpp"
#include "sparse/types.hpp"

namespace sparse {

enum class StepRule { fixed, backtracking };

struct L1Config {
  double lambda = 50.0;
  int max_iters = 50000;
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  StepRule step_rule = StepRule::backtracking;

  void validate() const;
};

// Complex soft threshold: shrinks magnitudes by t, preserving phase.
CVec soft_threshold(const CVec& v, double t);

// Subdifferential residual of min ||Bx - y||^2 + lambda ||x||_1 at x:
// || 2 B^H(Bx - y) + lambda g || minimized over admissible subgradients g.
double bpdn_certificate(const LinearModel& model, double lambda, const CVec& x);

// Penalized form min ||y - Bx||^2 + lambda ||x||_1 by accelerated proximal
// gradient with backtracking. lambda = 0 returns the least-squares solution
// (minimum-norm when underdetermined). Non-convergence is flagged, not thrown.
SolverResult bpdn(const LinearModel& model, const L1Config& cfg);

// Equality-constrained basis pursuit min ||x||_1 s.t. Bx = y, solved by an
// augmented-Lagrangian outer loop around the proximal-gradient machinery.
// Throws InfeasibleError when y is not in the range of B (checked up front
// via the least-squares residual, and re-detected if the outer loop stalls).
SolverResult basis_pursuit(const LinearModel& model, const L1Config& cfg);

}  // namespace sparse
