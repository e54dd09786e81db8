#pragma once

#include "sparse/model.hpp"
#include "sparse/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sparse {

// Max over i != j of |A_i^H A_j| / (||A_i|| ||A_j||).
double mutual_coherence(const CMat& A);

struct RipOptions {
  enum class Mode { exhaustive, monte_carlo };
  Mode mode = Mode::exhaustive;
  int trials = 2000;          // monte_carlo only
  std::uint64_t seed = 0;     // monte_carlo only
};

struct RipDetail {
  double deviation = 0.0;   // max |ratio - 1| over k-sparse unit inputs
  double max_ratio = 1.0;   // largest ||B(X)||^2 / ||X||^2 seen
  double min_ratio = 1.0;   // smallest ratio seen
  bool lower_bound_only = false;  // true for sampled (monte carlo) estimates
};

// Restricted-isometry deviation of the column operator at sparsity k.
// Exhaustive mode scans every size-k support (extremal singular values of
// the restricted submatrix); it refuses when C(cols, k) exceeds 1e6.
RipDetail rip_estimate_detail(const CMat& columns, int k, const RipOptions& opts,
                              bool normalize_columns);

// Plain-matrix convention: columns are scaled to unit norm first.
double rip_estimate(const LinearModel& model, int k, const RipOptions& opts = {});

// Lifted operators are measured as-is; the dictionary is model data.
double rip_estimate(const LiftedProblem& problem, int k, const RipOptions& opts = {});

struct L0Solution {
  std::vector<Index> support;
  CVec x;
};

// Exact smallest-support solver by exhaustive support enumeration, feasible
// when the least-squares fit on a support reaches residual
// <= 1e-8 * (1 + ||y||). Ties break to the lexicographically first support.
// Refuses when the total number of supports up to s_max exceeds 1e6.
std::optional<L0Solution> l0_oracle(const LinearModel& model, int s_max);

struct DiagnosticsReport {
  double mu = 0.0;
  std::map<int, double> rip;  // sparsity level -> estimated constant
  double coherence_bound = 0.0;  // 0.5 * (1 + 1/mu)
  std::string notes;
};

// Builds a report over the given column operator (sensing matrix or lifted
// dictionary). `normalize_columns` selects the plain-matrix RIP convention.
DiagnosticsReport diagnose_columns(const CMat& columns, const std::vector<int>& levels,
                                   const RipOptions& opts, bool normalize_columns);

}  // namespace sparse
