#pragma once

#include "sparse/types.hpp"

namespace sparse {

// Linear measurement model y_i = b_i^H x. Row i of `sensing` stores b_i^H.
struct LinearModel {
  CMat sensing;  // N x n
  CVec y;        // N

  Index measurements() const { return sensing.rows(); }
  Index ambient() const { return sensing.cols(); }
  void validate() const;
};

// Quadratic measurement model y_i = a_i + b_i^H x + x^H c_i + x^H Q_i x.
// Row i of `linear_left` stores b_i^H; row i of `linear_right` stores c_i^H.
struct QuadraticModel {
  CVec offsets;                 // a, length N
  CMat linear_left;             // N x n
  CMat linear_right;            // N x n
  std::vector<CMat> quadratics; // N matrices, each n x n
  CVec y;                       // N

  Index measurements() const { return offsets.size(); }
  Index ambient() const { return linear_left.cols(); }
  void validate() const;

  // Evaluates the measurement map at x (does not touch `y`).
  CVec evaluate(const CVec& x) const;
};

// The lifted form: phi_i = [[a_i, b_i^H], [c_i, Q_i]], row i of the
// dictionary is vec(phi_i^T) so that y = D vec(X) equals y_i = Tr(phi_i X).
// vec() is column-major throughout.
struct LiftedProblem {
  std::vector<CMat> phis;  // N matrices, each (n+1) x (n+1)
  CMat dictionary;         // N x (n+1)^2
  CVec y;                  // N
  Index ambient = 0;       // n

  Index measurements() const { return y.size(); }
  Index lifted_dim() const { return ambient + 1; }

  // Builds a lifted problem directly from a stack of sensing matrices.
  static LiftedProblem from_phis(std::vector<CMat> phis, CVec y);
};

// Embeds a linear model as a quadratic one with a = 0, c = 0, Q = 0.
QuadraticModel to_quadratic(const LinearModel& model);

// Column-major stacking of a matrix.
CVec vec_column_major(const CMat& m);

// Dictionary row for a single sensing matrix: vec(phi^T).
CVec dictionary_row(const CMat& phi);

// The rank-1 lift [1; x][1; x]^H.
CMat lift_point(const CVec& x);

LiftedProblem lift(const QuadraticModel& model);

// Applies the linear operator X -> (Tr(phi_i X))_i.
CVec apply_lifted(const LiftedProblem& problem, const CMat& X);

double hermitian_deviation(const CMat& X);

struct Rank1Decomposition {
  CVec x;
  double quality = 0.0;     // sigma_2 / sigma_1, 0 for exact rank 1
  bool used_fallback = false;
};

// Extracts x from a (near-)rank-1 Hermitian PSD lifted matrix. Throws
// NotPsdError when the most negative eigenvalue is below -tol * sigma_1 and
// DegenerateError when neither the eigenvector nor the first-column path
// yields a usable leading entry.
Rank1Decomposition rank1_decompose(const CMat& X, double tol);

}  // namespace sparse
