#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sparse/diagnostics.hpp"
#include "sparse/harness.hpp"
#include "sparse/io.hpp"
#include "sparse/model.hpp"
#include "sparse/solve_l1.hpp"

#include <Eigen/QR>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sparse;

namespace {

ExperimentSpec quad_spec(int n, int N, int s, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.scenario = Scenario::quadratic_gaussian;
  spec.n = n;
  spec.N = N;
  spec.s = s;
  spec.seed = seed;
  return spec;
}

// Strips the one non-deterministic header line.
std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("# generated_at=", 0) != 0) out << line << "\n";
  return out.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen_quadratic_gaussian: deterministic, exact y, C = 0 and a = 0") {
  const ExperimentSpec spec = quad_spec(6, 5, 2, 42);
  const QuadraticInstance a = gen_quadratic_gaussian(spec);
  const QuadraticInstance b = gen_quadratic_gaussian(spec);

  CHECK(a.model.linear_left == b.model.linear_left);
  CHECK(a.model.y == b.model.y);
  CHECK(a.x_true == b.x_true);
  for (Index i = 0; i < 5; ++i) CHECK(a.model.quadratics[i] == b.model.quadratics[i]);

  CHECK(a.model.offsets.norm() == 0.0);
  CHECK(a.model.linear_right.norm() == 0.0);
  CHECK((a.model.evaluate(a.x_true) - a.model.y).norm() == 0.0);
  CHECK(a.x_true.imag().norm() == 0.0);

  int nnz = 0;
  for (Index i = 0; i < 6; ++i) nnz += std::abs(a.x_true(i)) > 0.0;
  CHECK(nnz == 2);
}

TEST_CASE("gen_quadratic_gaussian: s = 0 gives zero observations") {
  const QuadraticInstance inst = gen_quadratic_gaussian(quad_spec(5, 4, 0, 7));
  CHECK(inst.x_true.norm() == 0.0);
  CHECK(inst.model.y.norm() == 0.0);
}

TEST_CASE("gen_quadratic_gaussian: lift consistency on generated instances") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const QuadraticInstance inst = gen_quadratic_gaussian(quad_spec(7, 6, 2, seed));
    const LiftedProblem p = lift(inst.model);
    const CVec via_trace = apply_lifted(p, lift_point(inst.x_true));
    CHECK((via_trace - inst.model.y).norm() < 1e-10 * (1.0 + inst.model.y.norm()));
  }
}

TEST_CASE("gen_partial_fourier: unitary rows and exact recovery when square") {
  ExperimentSpec spec;
  spec.scenario = Scenario::partial_fourier;
  spec.n = 8;
  spec.N = 8;
  spec.s = 3;
  spec.seed = 11;
  const LinearInstance inst = gen_partial_fourier(spec);

  const CMat gram = inst.model.sensing * inst.model.sensing.adjoint();
  CHECK((gram - CMat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);

  // Square unitary system: basis pursuit must reproduce the signal exactly.
  L1Config cfg;
  const SolverResult r = basis_pursuit(inst.model, cfg);
  CHECK((r.estimate - inst.x_true).norm() < 1e-6);
}

TEST_CASE("gen_partial_fourier: undersampled rows stay orthonormal, N > n rejected") {
  ExperimentSpec spec;
  spec.scenario = Scenario::partial_fourier;
  spec.n = 12;
  spec.N = 5;
  spec.s = 1;
  spec.seed = 3;
  const LinearInstance inst = gen_partial_fourier(spec);
  const CMat gram = inst.model.sensing * inst.model.sensing.adjoint();
  CHECK((gram - CMat::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((inst.model.sensing * inst.x_true - inst.model.y).norm() == 0.0);

  spec.N = 13;
  CHECK_THROWS_AS(gen_partial_fourier(spec), ValidationError);
}

TEST_CASE("gen_partial_fourier: spike recovery when the coherence bound holds") {
  int qualified = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    ExperimentSpec spec;
    spec.scenario = Scenario::partial_fourier;
    spec.n = 16;
    spec.N = 9;
    spec.s = 1;
    spec.seed = seed;
    const LinearInstance inst = gen_partial_fourier(spec);
    const double mu = mutual_coherence(inst.model.sensing);
    if (!(1.0 < 0.5 * (1.0 + 1.0 / mu))) continue;
    ++qualified;
    L1Config cfg;
    const SolverResult r = basis_pursuit(inst.model, cfg);
    CHECK((r.estimate - inst.x_true).norm() < 1e-5);
  }
  CHECK(qualified > 0);
}

TEST_CASE("gen_error_correction: annihilator, zero-error case, and decode contract") {
  ExperimentSpec spec;
  spec.scenario = Scenario::error_correction;
  spec.n = 6;
  spec.m = 12;
  spec.s = 1;
  spec.seed = 21;
  const ErrorCorrectionInstance inst = gen_error_correction(spec);

  CHECK((inst.model.sensing * inst.encode).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(inst.model.sensing.rows() == 6);   // m - n
  CHECK(inst.model.sensing.cols() == 12);  // m
  CHECK((inst.model.sensing * inst.z - inst.model.y).norm() < 1e-12);

  // e = 0: the annihilator kills the codeword entirely.
  ExperimentSpec zero_spec = spec;
  zero_spec.s = 0;
  const ErrorCorrectionInstance clean = gen_error_correction(zero_spec);
  CHECK(clean.model.y.norm() < 1e-10 * (1.0 + clean.z.norm()));

  // Decode: recover e by basis pursuit, then least-squares for the message.
  const double mu = mutual_coherence(inst.model.sensing);
  if (spec.s < 0.5 * (1.0 + 1.0 / mu)) {
    L1Config cfg;
    const SolverResult r = basis_pursuit(inst.model, cfg);
    const CVec x_hat = inst.encode.completeOrthogonalDecomposition().solve(inst.z - r.estimate);
    CHECK((x_hat - inst.x_msg).norm() < 1e-6);
  }
}

TEST_CASE("gen_linear_gaussian: real entries, planted sparse signal") {
  ExperimentSpec spec;
  spec.scenario = Scenario::linear_gaussian;
  spec.n = 9;
  spec.N = 5;
  spec.s = 2;
  spec.seed = 9;
  const LinearInstance inst = gen_linear_gaussian(spec);
  CHECK(inst.model.sensing.imag().norm() == 0.0);
  CHECK((inst.model.sensing * inst.x_true - inst.model.y).norm() == 0.0);
}

TEST_CASE("support_stats and relative_error") {
  CVec truth = CVec::Zero(5);
  truth(1) = 1.0;
  truth(3) = -2.0;
  CVec est = CVec::Zero(5);
  est(1) = 1.0;
  est(2) = 1e-9;  // below threshold 1e-3 * max
  est(3) = -2.0;
  const SupportStats st = support_stats(truth, est);
  CHECK(st.true_count == 2);
  CHECK(st.est_count == 2);
  CHECK(st.precision == 1.0);
  CHECK(st.recall == 1.0);
  CHECK(relative_error(truth, est) < 1e-9);

  const SupportStats empty = support_stats(CVec::Zero(3), CVec::Zero(3));
  CHECK(empty.precision == 1.0);
  CHECK(empty.recall == 1.0);
}

TEST_CASE("experiment spec validation") {
  ExperimentSpec spec;
  spec.s = 30;  // > n
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.s = 2;
  spec.scenario = Scenario::error_correction;
  spec.m = 10;  // <= n = 20
  CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("problem JSON round trip preserves the model exactly") {
  const QuadraticInstance inst = gen_quadratic_gaussian(quad_spec(4, 3, 1, 33));
  io::Problem p;
  p.model = inst.model;
  p.x_true = inst.x_true;
  p.scenario = "quadratic_gaussian";
  p.seed = 33;

  const io::json j = io::problem_to_json(p);
  const io::Problem back = io::problem_from_json(j);
  CHECK(back.model.linear_left == p.model.linear_left);
  CHECK(back.model.y == p.model.y);
  for (Index i = 0; i < 3; ++i) CHECK(back.model.quadratics[i] == p.model.quadratics[i]);
  CHECK(back.x_true.has_value());
  CHECK(*back.x_true == inst.x_true);
  CHECK(back.seed == 33);

  // Linear documents omit the zero blocks but read back as embedded quadratics.
  ExperimentSpec lin_spec;
  lin_spec.scenario = Scenario::linear_gaussian;
  lin_spec.n = 5;
  lin_spec.N = 3;
  lin_spec.s = 1;
  lin_spec.seed = 4;
  const LinearInstance lin = gen_linear_gaussian(lin_spec);
  io::Problem lp;
  lp.model = to_quadratic(lin.model);
  const io::json lj = io::problem_to_json(lp);
  CHECK_FALSE(lj.contains("Q"));
  const io::Problem lback = io::problem_from_json(lj);
  CHECK(lback.linear_only());
  CHECK(lback.linear_part().sensing == lin.model.sensing);
}

TEST_CASE("experiment spec and sweep config parse from JSON") {
  const io::json j = {{"scenario", "partial_fourier"}, {"n", 16},      {"N", 8},
                      {"s", 2},                        {"lambda", 5.0}, {"trials", 7},
                      {"seed", 99},                    {"solvers", {"bp", "lq"}},
                      {"q", 0.7}};
  const ExperimentSpec spec = io::experiment_spec_from_json(j);
  CHECK(spec.scenario == Scenario::partial_fourier);
  CHECK(spec.n == 16);
  CHECK(spec.trials == 7);
  REQUIRE(spec.solvers.size() == 2);
  CHECK(spec.solvers[1] == SolverKind::lq);
  CHECK(spec.q.value() == 0.7);

  io::json sweep_j = j;
  sweep_j["q_list"] = {0.5, 1.0};
  sweep_j["s_list"] = {1, 2};
  const SweepConfig cfg = io::sweep_config_from_json(sweep_j);
  CHECK(cfg.q_list == std::vector<double>{0.5, 1.0});
  CHECK(cfg.s_list == std::vector<int>{1, 2});

  io::json bad = j;
  bad["scenario"] = "bogus";
  CHECK_THROWS_AS(io::experiment_spec_from_json(bad), ValidationError);
}

TEST_CASE("sweep: byte-identical across runs and worker counts") {
  SweepConfig config;
  config.base.scenario = Scenario::linear_gaussian;
  config.base.n = 8;
  config.base.N = 5;
  config.base.s = 1;
  config.base.trials = 3;
  config.base.seed = 99;
  config.base.solvers = {SolverKind::bp, SolverKind::lq};
  config.q_list = {0.5, 1.0};

  std::ostringstream a, b, c;
  run_sweep(config, a, 1);
  run_sweep(config, b, 1);
  run_sweep(config, c, 4);
  CHECK(without_timestamp(a.str()) == without_timestamp(b.str()));
  CHECK(without_timestamp(a.str()) == without_timestamp(c.str()));
  CHECK(a.str().find("splitmix64") != std::string::npos);  // derivation recorded

  // One row per (cell, trial, solver): 2 q-cells x 3 trials x 2 solvers.
  std::istringstream rows(without_timestamp(a.str()));
  std::string line;
  int data_rows = 0;
  while (std::getline(rows, line))
    if (!line.empty() && line[0] != '#' && line.rfind("scenario", 0) != 0) ++data_rows;
  CHECK(data_rows == 12);
}

TEST_CASE("sweep: cells differing only in q share instances") {
  // bp ignores q, so its rows must repeat identically across the q grid.
  SweepConfig config;
  config.base.scenario = Scenario::linear_gaussian;
  config.base.n = 8;
  config.base.N = 5;
  config.base.s = 1;
  config.base.trials = 2;
  config.base.seed = 123;
  config.base.solvers = {SolverKind::bp};
  config.q_list = {0.5, 1.0};

  std::ostringstream out;
  run_sweep(config, out, 1);
  std::istringstream in(without_timestamp(out.str()));
  std::vector<std::string> bp_rows;
  std::string line;
  while (std::getline(in, line))
    if (line.find(",bp,") != std::string::npos) bp_rows.push_back(line);
  REQUIRE(bp_rows.size() == 4);
  CHECK(bp_rows[0] == bp_rows[2]);  // trial 0 under q=0.5 and q=1.0
  CHECK(bp_rows[1] == bp_rows[3]);
}

TEST_CASE("reproduce: writes the artifact set and a sane summary") {
  const auto dir = std::filesystem::temp_directory_path() / "sparse_repro_test";
  std::filesystem::remove_all(dir);
  const ReproduceSummary summary = reproduce(2, 17, dir, 2);

  CHECK(summary.figure == 2);
  CHECK(summary.solver == "bpdn");
  CHECK(summary.lambda == 50.0);
  for (const char* name : {"truth.csv", "estimate.csv", "truth.svg", "estimate.svg",
                           "summary.json"})
    CHECK(std::filesystem::exists(dir / name));

  const io::json j = io::read_json_file(dir / "summary.json");
  CHECK(j["n"] == 20);
  CHECK(j["N"] == 18);
  CHECK(j["relative_error"].get<double>() >= 0.0);
  CHECK_FALSE(j.contains("wall_ms"));  // serialized outputs carry no timing

  // Determinism: a second run writes byte-identical artifacts.
  const auto dir2 = std::filesystem::temp_directory_path() / "sparse_repro_test2";
  std::filesystem::remove_all(dir2);
  reproduce(2, 17, dir2, 2);
  for (const char* name : {"truth.csv", "estimate.csv", "truth.svg", "estimate.svg",
                           "summary.json"})
    CHECK(slurp(dir / name) == slurp(dir2 / name));

  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
  CHECK_THROWS_AS(reproduce(5, 0, dir, 2), ValidationError);
}
