#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparse {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Index = Eigen::Index;

// A lifted variable is a Hermitian (n+1)x(n+1) matrix.
using LiftedVariable = CMat;

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct NotPsdError : std::runtime_error {
  explicit NotPsdError(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateError : std::runtime_error {
  explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroColumnError : std::runtime_error {
  explicit ZeroColumnError(const std::string& what) : std::runtime_error(what) {}
};

struct CombinatorialBlowupError : std::runtime_error {
  explicit CombinatorialBlowupError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Outcome of an iterative solver run.
struct SolverResult {
  CVec estimate;
  std::vector<double> objective_trace;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

}  // namespace sparse
