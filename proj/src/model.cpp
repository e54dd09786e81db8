#include "sparse/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace sparse {

void LinearModel::validate() const {
  if (sensing.rows() < 1 || sensing.cols() < 1)
    throw DimensionError("LinearModel: sensing matrix must be at least 1x1");
  if (y.size() != sensing.rows())
    throw DimensionError("LinearModel: observations length " + std::to_string(y.size()) +
                         " does not match row count " + std::to_string(sensing.rows()));
}

void QuadraticModel::validate() const {
  const Index N = offsets.size();
  const Index n = linear_left.cols();
  if (N < 1 || n < 1) throw DimensionError("QuadraticModel: need N >= 1 and n >= 1");
  if (linear_left.rows() != N)
    throw DimensionError("QuadraticModel: linear_left has " + std::to_string(linear_left.rows()) +
                         " rows, expected " + std::to_string(N));
  if (linear_right.rows() != N || linear_right.cols() != n)
    throw DimensionError("QuadraticModel: linear_right must be " + std::to_string(N) + "x" +
                         std::to_string(n));
  if (static_cast<Index>(quadratics.size()) != N)
    throw DimensionError("QuadraticModel: " + std::to_string(quadratics.size()) +
                         " quadratic blocks, expected " + std::to_string(N));
  for (Index i = 0; i < N; ++i) {
    if (quadratics[i].rows() != n || quadratics[i].cols() != n)
      throw DimensionError("QuadraticModel: quadratic block " + std::to_string(i) + " is " +
                           std::to_string(quadratics[i].rows()) + "x" +
                           std::to_string(quadratics[i].cols()) + ", expected " +
                           std::to_string(n) + "x" + std::to_string(n));
  }
  if (y.size() != N)
    throw DimensionError("QuadraticModel: observations length " + std::to_string(y.size()) +
                         " does not match N = " + std::to_string(N));
}

CVec QuadraticModel::evaluate(const CVec& x) const {
  if (x.size() != ambient())
    throw DimensionError("QuadraticModel::evaluate: x has length " + std::to_string(x.size()) +
                         ", expected " + std::to_string(ambient()));
  const Index N = measurements();
  CVec out(N);
  for (Index i = 0; i < N; ++i) {
    const Complex bx = linear_left.row(i) * x;                    // b_i^H x
    const Complex xc = std::conj(Complex(linear_right.row(i) * x)); // x^H c_i
    const Complex xqx = x.adjoint() * quadratics[i] * x;
    out(i) = offsets(i) + bx + xc + xqx;
  }
  return out;
}

QuadraticModel to_quadratic(const LinearModel& model) {
  model.validate();
  const Index N = model.measurements();
  const Index n = model.ambient();
  QuadraticModel q;
  q.offsets = CVec::Zero(N);
  q.linear_left = model.sensing;
  q.linear_right = CMat::Zero(N, n);
  q.quadratics.assign(N, CMat::Zero(n, n));
  q.y = model.y;
  return q;
}

CVec vec_column_major(const CMat& m) {
  return Eigen::Map<const CVec>(m.data(), m.size());
}

CVec dictionary_row(const CMat& phi) {
  const CMat t = phi.transpose();
  return vec_column_major(t);
}

CMat lift_point(const CVec& x) {
  const Index n = x.size();
  CVec u(n + 1);
  u(0) = Complex(1.0, 0.0);
  u.tail(n) = x;
  return u * u.adjoint();
}

LiftedProblem LiftedProblem::from_phis(std::vector<CMat> phis, CVec y) {
  if (phis.empty()) throw DimensionError("LiftedProblem: need at least one sensing matrix");
  const Index d = phis.front().rows();
  if (d < 2 || phis.front().cols() != d)
    throw DimensionError("LiftedProblem: sensing matrices must be square with dim >= 2");
  const Index N = static_cast<Index>(phis.size());
  if (y.size() != N)
    throw DimensionError("LiftedProblem: observations length " + std::to_string(y.size()) +
                         " does not match " + std::to_string(N) + " sensing matrices");
  LiftedProblem p;
  p.dictionary.resize(N, d * d);
  for (Index i = 0; i < N; ++i) {
    if (phis[i].rows() != d || phis[i].cols() != d)
      throw DimensionError("LiftedProblem: sensing matrix " + std::to_string(i) +
                           " has mismatched dimensions");
    p.dictionary.row(i) = dictionary_row(phis[i]).transpose();
  }
  p.phis = std::move(phis);
  p.y = std::move(y);
  p.ambient = d - 1;
  return p;
}

LiftedProblem lift(const QuadraticModel& model) {
  model.validate();
  const Index N = model.measurements();
  const Index n = model.ambient();
  std::vector<CMat> phis(N);
  for (Index i = 0; i < N; ++i) {
    CMat phi(n + 1, n + 1);
    phi(0, 0) = model.offsets(i);
    phi.block(0, 1, 1, n) = model.linear_left.row(i);             // b_i^H
    phi.block(1, 0, n, 1) = model.linear_right.row(i).adjoint();  // c_i
    phi.block(1, 1, n, n) = model.quadratics[i];
    phis[i] = std::move(phi);
  }
  return LiftedProblem::from_phis(std::move(phis), model.y);
}

CVec apply_lifted(const LiftedProblem& problem, const CMat& X) {
  const Index d = problem.lifted_dim();
  if (X.rows() != d || X.cols() != d)
    throw DimensionError("apply_lifted: X is " + std::to_string(X.rows()) + "x" +
                         std::to_string(X.cols()) + ", expected " + std::to_string(d) + "x" +
                         std::to_string(d));
  const Index N = problem.measurements();
  CVec out(N);
  for (Index i = 0; i < N; ++i) out(i) = (problem.phis[i] * X).trace();
  return out;
}

double hermitian_deviation(const CMat& X) {
  return (X - X.adjoint()).cwiseAbs().maxCoeff();
}

Rank1Decomposition rank1_decompose(const CMat& X, double tol) {
  const Index d = X.rows();
  if (d < 2 || X.cols() != d)
    throw DimensionError("rank1_decompose: X must be square with dim >= 2");
  const double herm = hermitian_deviation(X);
  if (herm > tol * (1.0 + X.cwiseAbs().maxCoeff()))
    throw ValidationError("rank1_decompose: X is not Hermitian (deviation " +
                          std::to_string(herm) + ")");
  const Index n = d - 1;

  Eigen::SelfAdjointEigenSolver<CMat> eig(X);
  if (eig.info() != Eigen::Success)
    throw DegenerateError("rank1_decompose: eigendecomposition failed");
  const RVec evals = eig.eigenvalues();  // ascending
  const double sigma1 = evals(d - 1);
  const double sigma2 = d >= 2 ? evals(d - 2) : 0.0;
  const double most_negative = evals(0);
  if (sigma1 <= 0.0 || most_negative < -tol * std::max(sigma1, 0.0))
    throw NotPsdError("rank1_decompose: most negative eigenvalue " +
                      std::to_string(most_negative) + " below -tol * sigma_1");

  Rank1Decomposition out;
  out.quality = sigma1 > 0.0 ? std::max(sigma2, 0.0) / sigma1 : 1.0;

  const CVec v1 = eig.eigenvectors().col(d - 1);
  const CVec u = std::sqrt(sigma1) * v1;
  if (std::abs(u(0)) > tol) {
    // Rescale so the implied leading entry of [1; x] is exactly 1.
    out.x = u.tail(n) / u(0);
    return out;
  }

  // First-column fallback when the dominant eigenvector has no usable
  // leading entry (e.g. maximally non-rank-1 X).
  if (std::abs(X(0, 0)) <= tol)
    throw DegenerateError("rank1_decompose: leading eigenvector entry and X(0,0) both below tol");
  out.x = X.block(1, 0, n, 1) / X(0, 0);
  out.used_fallback = true;
  return out;
}

}  // namespace sparse
