#include "sparse/diagnostics.hpp"
#include "sparse/harness.hpp"
#include "sparse/io.hpp"
#include "sparse/model.hpp"
#include "sparse/solve_l1.hpp"
#include "sparse/solve_lq.hpp"
#include "sparse/solve_qbp.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace sparse;

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

int cmd_generate(const std::string& scenario_name, int n, int N, int s, int m,
                 std::uint64_t seed, const std::string& out_path) {
  ExperimentSpec spec;
  spec.scenario = scenario_from_string(scenario_name);
  spec.n = n;
  spec.N = N;
  spec.s = s;
  spec.m = m;
  spec.seed = seed;

  io::Problem problem;
  problem.scenario = scenario_name;
  problem.seed = seed;
  switch (spec.scenario) {
    case Scenario::quadratic_gaussian: {
      auto inst = gen_quadratic_gaussian(spec);
      problem.model = std::move(inst.model);
      problem.x_true = std::move(inst.x_true);
      break;
    }
    case Scenario::partial_fourier: {
      auto inst = gen_partial_fourier(spec);
      problem.model = to_quadratic(inst.model);
      problem.x_true = std::move(inst.x_true);
      break;
    }
    case Scenario::linear_gaussian: {
      auto inst = gen_linear_gaussian(spec);
      problem.model = to_quadratic(inst.model);
      problem.x_true = std::move(inst.x_true);
      break;
    }
    case Scenario::error_correction: {
      auto inst = gen_error_correction(spec);
      problem.model = to_quadratic(inst.model);
      problem.x_true = inst.e_true;  // the sparse error is the unknown
      break;
    }
  }
  io::write_json_file(out_path, io::problem_to_json(problem));
  std::cout << "wrote " << out_path << " (" << scenario_name << ", n=" << problem.model.ambient()
            << ", N=" << problem.model.measurements() << ", seed=" << seed << ")\n";
  return 0;
}

int cmd_solve(const std::string& problem_path, const std::string& solver_name, double lambda,
              double q, bool real_lift, const std::string& out_path) {
  const io::Problem problem = io::problem_from_json(io::read_json_file(problem_path));
  const SolverKind solver = solver_from_string(solver_name);

  io::json out;
  bool converged = false;
  CVec estimate;
  if (solver == SolverKind::qbp) {
    QbpConfig cfg;
    cfg.lambda = lambda;
    cfg.real_lift = real_lift;
    const QbpResult r = qbp_solve(lift(problem.model), cfg);
    out = io::qbp_result_to_json(r);
    converged = r.converged;
    estimate = r.x;
    std::cout << "qbp: iterations=" << r.iterations << " quality=" << r.quality
              << " objective=" << r.objective << " converged=" << converged << "\n";
  } else {
    const LinearModel linear = problem.linear_part();
    SolverResult r;
    if (solver == SolverKind::bp) {
      L1Config cfg;
      r = basis_pursuit(linear, cfg);
    } else if (solver == SolverKind::bpdn) {
      L1Config cfg;
      cfg.lambda = lambda;
      r = bpdn(linear, cfg);
    } else {
      LqConfig cfg;
      cfg.q = q;
      r = lq_minimize(linear, cfg);
    }
    out = io::solver_result_to_json(r);
    converged = r.converged;
    estimate = r.estimate;
    std::cout << solver_name << ": iterations=" << r.iterations
              << " residual=" << r.primal_residual << " converged=" << converged << "\n";
  }
  if (problem.x_true)
    std::cout << "relative error vs stored truth: " << relative_error(*problem.x_true, estimate)
              << "\n";
  if (!out_path.empty()) {
    io::write_json_file(out_path, out);
    std::cout << "wrote " << out_path << "\n";
  }
  return converged ? 0 : kExitSolver;
}

int cmd_diagnose(const std::string& problem_path, bool lifted, bool drop_zero_columns,
                 int k_max, int mc_trials, std::uint64_t mc_seed, const std::string& out_path) {
  const io::Problem problem = io::problem_from_json(io::read_json_file(problem_path));
  const bool use_lifted = lifted || !problem.linear_only();
  CMat columns;
  if (use_lifted) {
    columns = lift(problem.model).dictionary;
  } else {
    columns = problem.model.linear_left;
  }
  int dropped = 0;
  if (drop_zero_columns) {
    Index keep = 0;
    for (Index j = 0; j < columns.cols(); ++j)
      if (columns.col(j).norm() > 0.0) columns.col(keep++) = columns.col(j);
    dropped = static_cast<int>(columns.cols() - keep);
    columns.conservativeResize(Eigen::NoChange, keep);
  }

  RipOptions opts;
  if (mc_trials > 0) {
    opts.mode = RipOptions::Mode::monte_carlo;
    opts.trials = mc_trials;
    opts.seed = mc_seed;
  }
  std::vector<int> levels;
  for (int k = 1; k <= k_max; ++k) levels.push_back(k);
  const DiagnosticsReport report =
      diagnose_columns(columns, levels, opts, /*normalize_columns=*/!use_lifted);

  std::printf("operator            : %s (%ld x %ld)\n", use_lifted ? "lifted dictionary" : "sensing matrix",
              static_cast<long>(columns.rows()), static_cast<long>(columns.cols()));
  if (dropped > 0) std::printf("zero columns dropped: %d\n", dropped);
  std::printf("mutual coherence mu : %.6f\n", report.mu);
  std::printf("coherence bound     : %.6f   (recovery guaranteed when ||x||_0 < bound)\n",
              report.coherence_bound);
  for (const auto& [k, v] : report.rip)
    std::printf("rip estimate  k=%-3d : %.6f%s\n", k, v,
                mc_trials > 0 ? " (sampled lower bound)" : "");
  std::printf("notes: %s\n", report.notes.c_str());
  if (!out_path.empty()) {
    io::write_json_file(out_path, io::report_to_json(report));
    std::printf("wrote %s\n", out_path.c_str());
  }
  return 0;
}

int cmd_reproduce(int figure, std::uint64_t seed, const std::string& out_dir, int s) {
  const ReproduceSummary summary = reproduce(figure, seed, out_dir, s);
  std::printf("figure %d (%s, lambda=%g, s=%d, seed=%llu)\n", summary.figure,
              summary.solver.c_str(), summary.lambda, summary.s,
              static_cast<unsigned long long>(summary.seed));
  std::printf("relative error      : %.6g\n", summary.rel_error);
  std::printf("support (est/true)  : %d / %d\n", summary.support.est_count,
              summary.support.true_count);
  std::printf("converged           : %s (%d iterations)\n", summary.converged ? "yes" : "no",
              summary.iterations);
  std::printf("artifacts in %s\n", out_dir.c_str());
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path, int workers) {
  const SweepConfig config = io::sweep_config_from_json(io::read_json_file(config_path));
  if (out_path.empty()) {
    run_sweep(config, std::cout, workers);
  } else {
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot open " + out_path);
    run_sweep(config, out, workers);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse recovery: basis pursuit, lq minimization and quadratic basis pursuit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "generate a problem instance as JSON");
  std::string gen_scenario = "quadratic_gaussian", gen_out = "problem.json";
  int gen_n = 20, gen_N = 18, gen_s = 3, gen_m = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--scenario", gen_scenario,
                  "quadratic_gaussian | partial_fourier | error_correction | linear_gaussian");
  gen->add_option("--n", gen_n, "signal length (message length for error_correction)");
  gen->add_option("--N", gen_N, "number of measurements (ignored for error_correction)");
  gen->add_option("--s", gen_s, "sparsity of the planted signal");
  gen->add_option("--m", gen_m, "error_correction encode length (default 2n)");
  gen->add_option("--seed", gen_seed, "instance seed");
  gen->add_option("--out", gen_out, "output path");

  auto* solve = app.add_subcommand("solve", "solve a problem JSON file");
  std::string solve_problem, solve_solver = "qbp", solve_out;
  double solve_lambda = 50.0, solve_q = 0.5;
  bool solve_real = false;
  solve->add_option("--problem", solve_problem, "problem JSON path")->required();
  solve->add_option("--solver", solve_solver, "bp | bpdn | lq | qbp");
  solve->add_option("--lambda", solve_lambda, "l1 penalty weight (bpdn, qbp)");
  solve->add_option("--q", solve_q, "lq exponent in (0, 1]");
  solve->add_flag("--real-lift", solve_real, "qbp: restrict the lifted variable to real symmetric");
  solve->add_option("--out", solve_out, "result JSON path");

  auto* diag = app.add_subcommand("diagnose", "recovery-condition diagnostics");
  std::string diag_problem, diag_out;
  bool diag_lifted = false, diag_drop_zero = false;
  int diag_kmax = 2, diag_mc = 0;
  std::uint64_t diag_seed = 0;
  diag->add_option("--problem", diag_problem, "problem JSON path")->required();
  diag->add_flag("--lifted", diag_lifted, "diagnose the lifted dictionary even for linear models");
  diag->add_flag("--drop-zero-columns", diag_drop_zero,
                 "exclude all-zero dictionary columns (e.g. a = 0, C = 0 ensembles)");
  diag->add_option("--k-max", diag_kmax, "largest sparsity level for RIP estimates");
  diag->add_option("--monte-carlo", diag_mc, "use sampled RIP with this many trials (0 = exhaustive)");
  diag->add_option("--seed", diag_seed, "sampling seed for monte carlo RIP");
  diag->add_option("--out", diag_out, "report JSON path");

  auto* rep = app.add_subcommand("reproduce", "re-run a demonstration figure");
  int rep_figure = 3, rep_s = 3;
  std::uint64_t rep_seed = 0;
  std::string rep_out = "out";
  rep->add_option("--figure", rep_figure, "2, 3 or 4")->required();
  rep->add_option("--seed", rep_seed, "instance seed");
  rep->add_option("--out", rep_out, "output directory");
  rep->add_option("--s", rep_s, "ground-truth sparsity (default 3)");

  auto* sweep = app.add_subcommand("sweep", "run an experiment grid to CSV");
  std::string sweep_config, sweep_out;
  int sweep_workers = 1;
  sweep->add_option("--config", sweep_config, "sweep config JSON path")->required();
  sweep->add_option("--out", sweep_out, "CSV output path (default stdout)");
  sweep->add_option("--workers", sweep_workers, "parallel workers (output is identical)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (gen->parsed())
      return cmd_generate(gen_scenario, gen_n, gen_N, gen_s, gen_m, gen_seed, gen_out);
    if (solve->parsed())
      return cmd_solve(solve_problem, solve_solver, solve_lambda, solve_q, solve_real, solve_out);
    if (diag->parsed())
      return cmd_diagnose(diag_problem, diag_lifted, diag_drop_zero, diag_kmax, diag_mc,
                          diag_seed, diag_out);
    if (rep->parsed()) return cmd_reproduce(rep_figure, rep_seed, rep_out, rep_s);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_workers);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
