#include "sparse/solve_l1.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sparse {

namespace {

double l1_norm(const CVec& v) { return v.cwiseAbs().sum(); }

double bpdn_objective(const CMat& B, const CVec& y, double lambda, const CVec& x) {
  return (B * x - y).squaredNorm() + lambda * l1_norm(x);
}

// FISTA with backtracking line search and function-value restart.
// Starts from x0; stops when the subdifferential certificate falls below
// stop_tol. Appends per-iteration objectives to trace.
struct FistaOutcome {
  CVec x;
  int iterations = 0;
  bool converged = false;
  double certificate = 0.0;
};

FistaOutcome fista(const LinearModel& model, double lambda, const L1Config& cfg,
                   const CVec& x0, double stop_tol, std::vector<double>* trace) {
  const CMat& B = model.sensing;
  const CVec& y = model.y;

  // Crude Lipschitz seed for ||2 B^H B||: squared Frobenius norm upper bound.
  double L = std::max(2.0 * B.squaredNorm() / std::max<Index>(1, B.cols()), 1e-12);
  if (cfg.step_rule == StepRule::fixed) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(B.adjoint() * B);
    L = std::max(2.0 * eig.eigenvalues().maxCoeff(), 1e-12);
  }

  FistaOutcome out;
  out.x = x0;
  CVec z = x0;  // extrapolated point
  double t = 1.0;
  double obj_prev = bpdn_objective(B, y, lambda, out.x);
  if (trace) trace->push_back(obj_prev);

  for (int k = 0; k < cfg.max_iters; ++k) {
    const CVec rz = B * z - y;
    const CVec grad = 2.0 * (B.adjoint() * rz);
    const double gz = rz.squaredNorm();

    CVec x_next;
    if (cfg.step_rule == StepRule::backtracking) {
      for (;;) {
        x_next = soft_threshold(z - grad / L, lambda / L);
        const CVec step = x_next - z;
        const double g_new = (B * x_next - y).squaredNorm();
        const double quad = gz + step.dot(grad).real() + (L / 2.0) * step.squaredNorm();
        if (g_new <= quad + 1e-12 * std::abs(quad)) break;
        L *= 2.0;
      }
    } else {
      x_next = soft_threshold(z - grad / L, lambda / L);
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = x_next + ((t - 1.0) / t_next) * (x_next - out.x);
    out.x = x_next;
    t = t_next;
    out.iterations = k + 1;

    const double obj = bpdn_objective(B, y, lambda, out.x);
    if (trace) trace->push_back(obj);
    if (obj > obj_prev) {  // adaptive restart
      z = out.x;
      t = 1.0;
    }
    obj_prev = obj;

    if ((k + 1) % 10 == 0 || obj == 0.0) {
      out.certificate = bpdn_certificate(model, lambda, out.x);
      if (out.certificate <= stop_tol) {
        out.converged = true;
        return out;
      }
    }
  }
  out.certificate = bpdn_certificate(model, lambda, out.x);
  out.converged = out.certificate <= stop_tol;
  return out;
}

}  // namespace

void L1Config::validate() const {
  if (lambda < 0.0) throw ValidationError("L1Config: lambda must be >= 0");
  if (abs_tol <= 0.0 || rel_tol <= 0.0) throw ValidationError("L1Config: tolerances must be > 0");
  if (max_iters < 1) throw ValidationError("L1Config: max_iters must be >= 1");
}

CVec soft_threshold(const CVec& v, double t) {
  CVec out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    out(i) = m > t ? v(i) * ((m - t) / m) : Complex(0.0, 0.0);
  }
  return out;
}

double bpdn_certificate(const LinearModel& model, double lambda, const CVec& x) {
  const CVec grad = 2.0 * (model.sensing.adjoint() * (model.sensing * x - model.y));
  if (lambda == 0.0) return grad.norm();
  const double support_eps = 1e-14 * std::max(1.0, x.size() ? x.cwiseAbs().maxCoeff() : 0.0);
  double sq = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) > support_eps) {
      sq += std::norm(grad(i) + lambda * x(i) / std::abs(x(i)));
    } else {
      const double excess = std::max(std::abs(grad(i)) - lambda, 0.0);
      sq += excess * excess;
    }
  }
  return std::sqrt(sq);
}

SolverResult bpdn(const LinearModel& model, const L1Config& cfg) {
  model.validate();
  cfg.validate();
  SolverResult result;

  if (cfg.lambda == 0.0) {
    result.estimate = model.sensing.completeOrthogonalDecomposition().solve(model.y);
    result.objective_trace.push_back((model.sensing * result.estimate - model.y).squaredNorm());
    result.primal_residual = (model.sensing * result.estimate - model.y).norm();
    result.dual_residual = bpdn_certificate(model, 0.0, result.estimate);
    result.iterations = 1;
    result.converged = true;
    return result;
  }

  const double stop_tol = cfg.abs_tol * (1.0 + model.y.norm());
  const FistaOutcome fo = fista(model, cfg.lambda, cfg, CVec::Zero(model.ambient()), stop_tol,
                                &result.objective_trace);
  result.estimate = fo.x;
  result.primal_residual = (model.sensing * fo.x - model.y).norm();
  result.dual_residual = fo.certificate;
  result.iterations = fo.iterations;
  result.converged = fo.converged;
  if (!fo.converged)
    result.message = "max_iters reached with certificate above tolerance";
  return result;
}

SolverResult basis_pursuit(const LinearModel& model, const L1Config& cfg) {
  model.validate();
  cfg.validate();

  const double feas_tol = cfg.abs_tol * (1.0 + model.y.norm());

  // Range check: least-squares projection residual decides feasibility.
  const auto cod = model.sensing.completeOrthogonalDecomposition();
  const CVec x_ls = cod.solve(model.y);
  if ((model.sensing * x_ls - model.y).norm() > feas_tol)
    throw InfeasibleError("basis_pursuit: y is not in the range of the sensing matrix "
                          "(least-squares residual above tolerance)");

  // Augmented-Lagrangian / Bregman outer loop: repeatedly solve the penalized
  // problem against data with the running residual added back.
  const double grad_scale = (2.0 * (model.sensing.adjoint() * model.y)).cwiseAbs().maxCoeff();
  const double lambda_inner = std::max(0.05 * grad_scale, 1e-12);

  SolverResult result;
  result.estimate = CVec::Zero(model.ambient());
  CVec data = model.y;
  L1Config inner_cfg = cfg;
  inner_cfg.lambda = lambda_inner;

  LinearModel working{model.sensing, data};
  constexpr int kMaxOuter = 500;
  constexpr int kStallWindow = 100;
  int total_iters = 0;
  int stall_count = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  double prev_l1 = 0.0;

  for (int outer = 0; outer < kMaxOuter; ++outer) {
    working.y = data;
    const double inner_tol = 0.1 * inner_cfg.abs_tol * (1.0 + data.norm());
    const FistaOutcome fo =
        fista(working, lambda_inner, inner_cfg, result.estimate, inner_tol, nullptr);
    result.estimate = fo.x;
    total_iters += fo.iterations;

    const CVec residual = model.y - model.sensing * result.estimate;
    const double rnorm = residual.norm();
    const double l1 = l1_norm(result.estimate);
    result.objective_trace.push_back(l1);
    result.primal_residual = rnorm;
    result.dual_residual = fo.certificate;

    if (rnorm <= feas_tol && std::abs(l1 - prev_l1) <= cfg.rel_tol * std::max(1.0, l1)) {
      result.iterations = total_iters;
      result.converged = true;
      return result;
    }
    prev_l1 = l1;

    if (rnorm < best_residual * (1.0 - 1e-6)) {
      best_residual = rnorm;
      stall_count = 0;
    } else if (rnorm > feas_tol && ++stall_count >= kStallWindow) {
      throw InfeasibleError("basis_pursuit: residual stalled at " + std::to_string(rnorm) +
                            " for " + std::to_string(kStallWindow) + " outer iterations");
    }

    data += residual;  // Bregman add-back
  }

  result.iterations = total_iters;
  result.converged = false;
  result.message = "outer iteration cap reached";
  return result;
}

}  // namespace sparse
