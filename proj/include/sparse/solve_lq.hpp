#pragma once

#include "sparse/model.hpp"
#include "sparse/types.hpp"

namespace sparse {

struct LqConfig {
  double q = 0.5;           // quasi-norm exponent, 0 < q <= 1
  double eps_init = 1.0;    // smoothing epsilon start
  double eps_decay = 0.1;   // applied when the iterate stops moving
  double eps_floor = 1e-8;
  int max_outer = 5000;     // inner step is a closed-form weighted LS, so outers are cheap
  double tol = 1e-9;

  void validate() const;
};

// min ||x||_q s.t. Bx = y via iteratively reweighted least squares with
// epsilon smoothing. Each outer iteration solves
//   min sum_i w_i |x_i|^2  s.t. Bx = y,   w_i = (|x_i|^2 + eps^2)^(q/2 - 1)
// in closed form through the weighted pseudoinverse, so every iterate is
// exactly feasible. The smoothed objective sum (|x_i|^2 + eps^2)^(q/2) is
// recorded per outer iteration and is non-increasing. Initialization is the
// minimum-l2 feasible point; for q < 1 the result is a reproducible local
// minimizer, not a certified global one.
SolverResult lq_minimize(const LinearModel& model, const LqConfig& cfg);

}  // namespace sparse
