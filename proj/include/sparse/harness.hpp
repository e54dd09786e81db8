#pragma once

#include "sparse/model.hpp"
#include "sparse/rng.hpp"
#include "sparse/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sparse {

enum class Scenario { quadratic_gaussian, partial_fourier, error_correction, linear_gaussian };
enum class SolverKind { bp, bpdn, lq, qbp };

std::string to_string(Scenario s);
std::string to_string(SolverKind s);
Scenario scenario_from_string(const std::string& s);
SolverKind solver_from_string(const std::string& s);

struct ExperimentSpec {
  Scenario scenario = Scenario::quadratic_gaussian;
  int n = 20;
  int N = 18;
  int s = 3;
  int m = 0;  // error-correction encode length; 0 means 2n
  double lambda = 50.0;
  std::optional<double> q;
  int trials = 1;
  std::uint64_t seed = 0;
  std::vector<SolverKind> solvers = {SolverKind::qbp};
  bool real_x = true;

  int encode_length() const { return m > 0 ? m : 2 * n; }
  void validate() const;
};

struct QuadraticInstance {
  QuadraticModel model;
  CVec x_true;
};

struct LinearInstance {
  LinearModel model;
  CVec x_true;
};

struct ErrorCorrectionInstance {
  LinearModel model;  // (B, y = Bz): sensing for the sparse error term
  CMat encode;        // A, m x n with B A = 0
  CVec x_msg;         // encoded message
  CVec z;             // corrupted codeword A x_msg + e
  CVec e_true;        // planted s-sparse error
};

// s-sparse real signal: support uniform without replacement, values N(0,1).
CVec sparse_real_signal(Index n, int s, Rng& rng);

// B and Q_i entries i.i.d. CN(0,1) drawn row-major; C = 0, a = 0; y exact.
QuadraticInstance gen_quadratic_gaussian(const ExperimentSpec& spec);

// N uniformly-sampled rows (without replacement) of the unitary n-point DFT.
LinearInstance gen_partial_fourier(const ExperimentSpec& spec);

// Real Gaussian sensing matrix.
LinearInstance gen_linear_gaussian(const ExperimentSpec& spec);

// Gaussian encode matrix A (m x n, m > n), annihilator B spanning the left
// null space, sparse error e, y = B z. Regenerates (derived seed) up to 3
// times if A comes out rank deficient.
ErrorCorrectionInstance gen_error_correction(const ExperimentSpec& spec);

double relative_error(const CVec& truth, const CVec& estimate);

struct SupportStats {
  double precision = 1.0;
  double recall = 1.0;
  int est_count = 0;
  int true_count = 0;
};

// Support comparison at threshold 1e-3 * ||estimate||_inf.
SupportStats support_stats(const CVec& truth, const CVec& estimate);

struct TrialRecord {
  std::uint64_t seed = 0;
  std::string solver;
  double rel_error = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double wall_ms = 0.0;  // not serialized: sweep/reproduce outputs stay byte-deterministic
  bool converged = false;
};

struct ReproduceSummary {
  int figure = 0;
  std::uint64_t seed = 0;
  int n = 0, N = 0, s = 0;
  double lambda = 0.0;
  std::string solver;
  double rel_error = 0.0;
  SupportStats support;
  bool converged = false;
  int iterations = 0;
};

// Re-runs one of the demonstration figures (2: penalized linear solver on
// quadratic data, 3: QBP lambda = 50, 4: QBP lambda = 0) at N = 18, n = 20.
// Writes truth.csv, estimate.csv, truth.svg, estimate.svg, summary.json.
ReproduceSummary reproduce(int figure, std::uint64_t seed,
                           const std::filesystem::path& out_dir, int s = 3);

struct SweepConfig {
  ExperimentSpec base;
  std::vector<int> s_list;          // empty -> {base.s}
  std::vector<double> lambda_list;  // empty -> {base.lambda}
  std::vector<double> q_list;       // empty -> {base.q or 0.5}; lq cells only
};

// Runs the grid and streams TrialRecords as CSV. Instance seeds derive from
// the master seed and trial index only, so cells that differ in lambda, q or
// solver share instances. Output is byte-identical across runs and worker
// counts except for the generated_at header line.
void run_sweep(const SweepConfig& config, std::ostream& out, int workers = 1);

}  // namespace sparse
