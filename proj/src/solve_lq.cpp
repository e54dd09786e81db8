#include "sparse/solve_lq.hpp"

#include <Eigen/QR>

#include <cmath>

namespace sparse {

void LqConfig::validate() const {
  if (q <= 0.0 || q > 1.0) throw ValidationError("LqConfig: q must be in (0, 1]");
  if (eps_init <= 0.0) throw ValidationError("LqConfig: eps_init must be > 0");
  if (eps_decay <= 0.0 || eps_decay >= 1.0)
    throw ValidationError("LqConfig: eps_decay must be in (0, 1)");
  if (eps_floor <= 0.0 || eps_floor > eps_init)
    throw ValidationError("LqConfig: eps_floor must be in (0, eps_init]");
  if (max_outer < 1) throw ValidationError("LqConfig: max_outer must be >= 1");
  if (tol <= 0.0) throw ValidationError("LqConfig: tol must be > 0");
}

namespace {

double smoothed_objective(const CVec& x, double q, double eps) {
  double v = 0.0;
  for (Index i = 0; i < x.size(); ++i) v += std::pow(std::norm(x(i)) + eps * eps, q / 2.0);
  return v;
}

}  // namespace

SolverResult lq_minimize(const LinearModel& model, const LqConfig& cfg) {
  model.validate();
  cfg.validate();
  const CMat& B = model.sensing;
  const CVec& y = model.y;
  const Index n = model.ambient();

  const double feas_tol = std::max(cfg.tol, 1e-12) * (1.0 + y.norm());
  CVec x = B.completeOrthogonalDecomposition().solve(y);  // min-l2 feasible start
  if ((B * x - y).norm() > feas_tol)
    throw InfeasibleError("lq_minimize: y is not in the range of the sensing matrix");

  SolverResult result;
  double eps = cfg.eps_init;
  int outer = 0;
  bool at_floor = false;

  for (; outer < cfg.max_outer; ++outer) {
    // x = W^{-1/2} z with z the min-norm solution of (B W^{-1/2}) z = y.
    RVec inv_sqrt_w(n);
    for (Index i = 0; i < n; ++i)
      inv_sqrt_w(i) = std::pow(std::norm(x(i)) + eps * eps, (2.0 - cfg.q) / 4.0);
    const CMat scaled = B * inv_sqrt_w.asDiagonal();
    const CVec z = scaled.completeOrthogonalDecomposition().solve(y);
    const CVec x_next = inv_sqrt_w.asDiagonal() * z;

    const double movement = (x_next - x).norm() / std::max(1.0, x.norm());
    x = x_next;
    result.objective_trace.push_back(smoothed_objective(x, cfg.q, eps));

    if (movement < cfg.tol) {
      if (at_floor) {
        result.converged = true;
        ++outer;
        break;
      }
      eps = std::max(eps * cfg.eps_decay, cfg.eps_floor);
      at_floor = eps <= cfg.eps_floor;
    }
  }

  result.estimate = x;
  result.iterations = outer;
  result.primal_residual = (B * x - y).norm();
  result.dual_residual = 0.0;
  if (!result.converged)
    result.message = "stagnated: outer cap reached before the iterate settled at eps_floor";
  return result;
}

}  // namespace sparse
