#include "sparse/diagnostics.hpp"

#include "sparse/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sparse {

namespace {

constexpr double kEnumerationCap = 1e6;

// C(n, k) saturating at cap.
double binomial_capped(Index n, int k, double cap) {
  if (k < 0 || k > n) return 0.0;
  double v = 1.0;
  for (int i = 1; i <= k; ++i) {
    v *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (v > cap) return cap + 1.0;
  }
  return v;
}

// Lexicographic next size-k combination over [0, n). Returns false at the end.
bool next_combination(std::vector<Index>& idx, Index n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - (k - i)) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

double mutual_coherence(const CMat& A) {
  if (A.cols() < 2) throw DimensionError("mutual_coherence: need at least 2 columns");
  const Index k = A.cols();
  RVec norms(k);
  for (Index j = 0; j < k; ++j) {
    norms(j) = A.col(j).norm();
    if (norms(j) == 0.0)
      throw ZeroColumnError("mutual_coherence: column " + std::to_string(j) + " is zero");
  }
  double mu = 0.0;
  for (Index i = 0; i < k; ++i) {
    for (Index j = i + 1; j < k; ++j) {
      const double v = std::abs(Complex(A.col(i).adjoint() * A.col(j))) / (norms(i) * norms(j));
      mu = std::max(mu, v);
    }
  }
  return std::min(mu, 1.0);
}

RipDetail rip_estimate_detail(const CMat& columns, int k, const RipOptions& opts,
                              bool normalize_columns) {
  if (k < 1) throw DimensionError("rip_estimate: sparsity level must be >= 1");
  CMat A = columns;
  if (normalize_columns) {
    for (Index j = 0; j < A.cols(); ++j) {
      const double nrm = A.col(j).norm();
      if (nrm == 0.0)
        throw ZeroColumnError("rip_estimate: column " + std::to_string(j) + " is zero");
      A.col(j) /= nrm;
    }
  }
  const Index cols = A.cols();
  const int kk = static_cast<int>(std::min<Index>(k, cols));

  RipDetail out;
  out.max_ratio = 0.0;
  out.min_ratio = std::numeric_limits<double>::infinity();

  if (opts.mode == RipOptions::Mode::exhaustive) {
    if (binomial_capped(cols, kk, kEnumerationCap) > kEnumerationCap)
      throw CombinatorialBlowupError("rip_estimate: C(" + std::to_string(cols) + ", " +
                                     std::to_string(kk) + ") exceeds the 1e6 enumeration cap");
    std::vector<Index> idx(kk);
    std::iota(idx.begin(), idx.end(), Index{0});
    CMat sub(A.rows(), kk);
    do {
      for (int j = 0; j < kk; ++j) sub.col(j) = A.col(idx[j]);
      Eigen::JacobiSVD<CMat> svd(sub);
      const double smax = svd.singularValues()(0);
      const double smin = svd.singularValues()(svd.singularValues().size() - 1);
      out.max_ratio = std::max(out.max_ratio, smax * smax);
      out.min_ratio = std::min(out.min_ratio, smin * smin);
    } while (next_combination(idx, cols));
  } else {
    out.lower_bound_only = true;
    Rng rng(opts.seed);
    std::vector<Index> pool(cols);
    for (int t = 0; t < opts.trials; ++t) {
      std::iota(pool.begin(), pool.end(), Index{0});
      // Partial Fisher-Yates for a uniform size-k support.
      for (int j = 0; j < kk; ++j) {
        const Index pick = j + static_cast<Index>(rng.uniform_below(cols - j));
        std::swap(pool[j], pool[pick]);
      }
      CVec coeff(kk);
      for (int j = 0; j < kk; ++j) coeff(j) = rng.cgaussian();
      coeff /= coeff.norm();
      CVec image = CVec::Zero(A.rows());
      for (int j = 0; j < kk; ++j) image += A.col(pool[j]) * coeff(j);
      const double ratio = image.squaredNorm();
      out.max_ratio = std::max(out.max_ratio, ratio);
      out.min_ratio = std::min(out.min_ratio, ratio);
    }
  }
  out.deviation = std::max(std::abs(out.max_ratio - 1.0), std::abs(out.min_ratio - 1.0));
  return out;
}

double rip_estimate(const LinearModel& model, int k, const RipOptions& opts) {
  model.validate();
  return rip_estimate_detail(model.sensing, k, opts, /*normalize_columns=*/true).deviation;
}

double rip_estimate(const LiftedProblem& problem, int k, const RipOptions& opts) {
  return rip_estimate_detail(problem.dictionary, k, opts, /*normalize_columns=*/false).deviation;
}

std::optional<L0Solution> l0_oracle(const LinearModel& model, int s_max) {
  model.validate();
  const Index n = model.ambient();
  const int cap = static_cast<int>(std::min<Index>(s_max, n));

  double total = 0.0;
  for (int s = 0; s <= cap; ++s) {
    total += binomial_capped(n, s, kEnumerationCap);
    if (total > kEnumerationCap)
      throw CombinatorialBlowupError("l0_oracle: support count up to s_max = " +
                                     std::to_string(s_max) + " exceeds the 1e6 enumeration cap");
  }

  const double tol = 1e-8 * (1.0 + model.y.norm());

  if (model.y.norm() <= tol) return L0Solution{{}, CVec::Zero(n)};

  for (int s = 1; s <= cap; ++s) {
    std::vector<Index> idx(s);
    std::iota(idx.begin(), idx.end(), Index{0});
    CMat sub(model.sensing.rows(), s);
    do {
      for (int j = 0; j < s; ++j) sub.col(j) = model.sensing.col(idx[j]);
      const CVec coeff = sub.completeOrthogonalDecomposition().solve(model.y);
      if ((sub * coeff - model.y).norm() <= tol) {
        CVec x = CVec::Zero(n);
        for (int j = 0; j < s; ++j) x(idx[j]) = coeff(j);
        return L0Solution{idx, std::move(x)};
      }
    } while (next_combination(idx, n));
  }
  return std::nullopt;
}

DiagnosticsReport diagnose_columns(const CMat& columns, const std::vector<int>& levels,
                                   const RipOptions& opts, bool normalize_columns) {
  DiagnosticsReport report;
  report.mu = mutual_coherence(columns);
  report.coherence_bound = report.mu > 0.0
                               ? 0.5 * (1.0 + 1.0 / report.mu)
                               : std::numeric_limits<double>::infinity();
  std::ostringstream notes;
  notes << "rip values are deviations |ratio - 1| of ||B(X)||^2/||X||^2 from 1; "
           "the literal ratio range is reported alongside. ";
  for (int k : levels) {
    const RipDetail d = rip_estimate_detail(columns, k, opts, normalize_columns);
    report.rip[k] = d.deviation;
    notes << "k=" << k << ": ratio in [" << d.min_ratio << ", " << d.max_ratio << "]"
          << (d.lower_bound_only ? " (sampled lower bound)" : "") << "; ";
  }
  if (normalize_columns) notes << "columns normalized to unit norm before restriction.";
  report.notes = notes.str();
  return report;
}

}  // namespace sparse
