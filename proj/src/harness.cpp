#include "sparse/harness.hpp"

#include "sparse/io.hpp"
#include "sparse/solve_l1.hpp"
#include "sparse/solve_lq.hpp"
#include "sparse/solve_qbp.hpp"
#include "sparse/svg.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace sparse {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::quadratic_gaussian: return "quadratic_gaussian";
    case Scenario::partial_fourier: return "partial_fourier";
    case Scenario::error_correction: return "error_correction";
    case Scenario::linear_gaussian: return "linear_gaussian";
  }
  return "unknown";
}

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::bp: return "bp";
    case SolverKind::bpdn: return "bpdn";
    case SolverKind::lq: return "lq";
    case SolverKind::qbp: return "qbp";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "quadratic_gaussian") return Scenario::quadratic_gaussian;
  if (s == "partial_fourier") return Scenario::partial_fourier;
  if (s == "error_correction") return Scenario::error_correction;
  if (s == "linear_gaussian") return Scenario::linear_gaussian;
  throw ValidationError("unknown scenario: " + s);
}

SolverKind solver_from_string(const std::string& s) {
  if (s == "bp") return SolverKind::bp;
  if (s == "bpdn") return SolverKind::bpdn;
  if (s == "lq") return SolverKind::lq;
  if (s == "qbp") return SolverKind::qbp;
  throw ValidationError("unknown solver: " + s);
}

void ExperimentSpec::validate() const {
  if (n < 1 || N < 1) throw ValidationError("ExperimentSpec: n and N must be >= 1");
  if (s < 0 || s > n) throw ValidationError("ExperimentSpec: need 0 <= s <= n");
  if (trials < 1) throw ValidationError("ExperimentSpec: trials must be >= 1");
  if (lambda < 0.0) throw ValidationError("ExperimentSpec: lambda must be >= 0");
  if (q && (*q <= 0.0 || *q > 1.0)) throw ValidationError("ExperimentSpec: q must be in (0, 1]");
  if (scenario == Scenario::partial_fourier && N > n)
    throw ValidationError("ExperimentSpec: partial_fourier requires N <= n");
  if (scenario == Scenario::error_correction && encode_length() <= n)
    throw ValidationError("ExperimentSpec: error_correction requires encode length m > n");
  if (solvers.empty()) throw ValidationError("ExperimentSpec: need at least one solver");
}

CVec sparse_real_signal(Index n, int s, Rng& rng) {
  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), Index{0});
  for (int j = 0; j < s; ++j) {
    const Index pick = j + static_cast<Index>(rng.uniform_below(n - j));
    std::swap(idx[j], idx[pick]);
  }
  std::sort(idx.begin(), idx.begin() + s);
  CVec x = CVec::Zero(n);
  for (int j = 0; j < s; ++j) x(idx[j]) = rng.gaussian();
  return x;
}

QuadraticInstance gen_quadratic_gaussian(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.scenario != Scenario::quadratic_gaussian)
    throw ValidationError("gen_quadratic_gaussian: wrong scenario");
  Rng rng(spec.seed);
  const Index n = spec.n, N = spec.N;

  QuadraticModel model;
  model.offsets = CVec::Zero(N);
  model.linear_left.resize(N, n);
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j < n; ++j) model.linear_left(i, j) = rng.cgaussian();
  model.linear_right = CMat::Zero(N, n);
  model.quadratics.reserve(N);
  for (Index i = 0; i < N; ++i) {
    CMat Q(n, n);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) Q(r, c) = rng.cgaussian();
    model.quadratics.push_back(std::move(Q));
  }
  CVec x = sparse_real_signal(n, spec.s, rng);
  model.y = model.evaluate(x);
  return {std::move(model), std::move(x)};
}

LinearInstance gen_partial_fourier(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.scenario != Scenario::partial_fourier)
    throw ValidationError("gen_partial_fourier: wrong scenario");
  Rng rng(spec.seed);
  const Index n = spec.n, N = spec.N;

  std::vector<Index> rows(n);
  std::iota(rows.begin(), rows.end(), Index{0});
  for (Index j = 0; j < N; ++j) {
    const Index pick = j + static_cast<Index>(rng.uniform_below(n - j));
    std::swap(rows[j], rows[pick]);
  }
  std::sort(rows.begin(), rows.begin() + N);

  LinearModel model;
  model.sensing.resize(N, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index i = 0; i < N; ++i)
    for (Index k = 0; k < n; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(rows[i]) *
                           static_cast<double>(k) / static_cast<double>(n);
      model.sensing(i, k) = scale * Complex(std::cos(angle), std::sin(angle));
    }
  CVec x = sparse_real_signal(n, spec.s, rng);
  model.y = model.sensing * x;
  return {std::move(model), std::move(x)};
}

LinearInstance gen_linear_gaussian(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.scenario != Scenario::linear_gaussian)
    throw ValidationError("gen_linear_gaussian: wrong scenario");
  Rng rng(spec.seed);
  LinearModel model;
  model.sensing.resize(spec.N, spec.n);
  for (Index i = 0; i < spec.N; ++i)
    for (Index j = 0; j < spec.n; ++j) model.sensing(i, j) = rng.gaussian();
  // Unit-norm columns: the coherence-based recovery guarantees are stated
  // for normalized dictionaries.
  for (Index j = 0; j < spec.n; ++j) model.sensing.col(j) /= model.sensing.col(j).norm();
  CVec x = sparse_real_signal(spec.n, spec.s, rng);
  model.y = model.sensing * x;
  return {std::move(model), std::move(x)};
}

ErrorCorrectionInstance gen_error_correction(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.scenario != Scenario::error_correction)
    throw ValidationError("gen_error_correction: wrong scenario");
  const Index n = spec.n;
  const Index m = spec.encode_length();

  for (int attempt = 0; attempt < 4; ++attempt) {
    Rng rng(attempt == 0 ? spec.seed : Rng::derive(spec.seed, attempt));
    RMat A(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) A(i, j) = rng.gaussian();
    Eigen::ColPivHouseholderQR<RMat> qr(A);
    if (qr.rank() < n) continue;

    const RMat Qfull = qr.householderQ();
    const RMat annihilator = Qfull.rightCols(m - n).transpose();  // (m-n) x m, B A = 0

    CVec x_msg(n);
    for (Index j = 0; j < n; ++j) x_msg(j) = rng.gaussian();
    const CVec e = sparse_real_signal(m, spec.s, rng);
    const CVec z = A.cast<Complex>() * x_msg + e;

    ErrorCorrectionInstance inst;
    inst.encode = A.cast<Complex>();
    inst.model.sensing = annihilator.cast<Complex>();
    inst.model.y = inst.model.sensing * z;
    inst.x_msg = std::move(x_msg);
    inst.z = z;
    inst.e_true = e;
    return inst;
  }
  throw ValidationError("gen_error_correction: encode matrix rank deficient after 3 retries");
}

double relative_error(const CVec& truth, const CVec& estimate) {
  const double t = truth.norm();
  return t > 0.0 ? (estimate - truth).norm() / t : (estimate - truth).norm();
}

SupportStats support_stats(const CVec& truth, const CVec& estimate) {
  SupportStats st;
  const double threshold =
      estimate.size() ? 1e-3 * estimate.cwiseAbs().maxCoeff() : 0.0;
  int inter = 0;
  for (Index i = 0; i < truth.size(); ++i) {
    const bool in_true = std::abs(truth(i)) > 0.0;
    const bool in_est = i < estimate.size() && std::abs(estimate(i)) > threshold;
    st.true_count += in_true;
    st.est_count += in_est;
    inter += in_true && in_est;
  }
  st.precision = st.est_count ? static_cast<double>(inter) / st.est_count
                              : (st.true_count ? 0.0 : 1.0);
  st.recall = st.true_count ? static_cast<double>(inter) / st.true_count : 1.0;
  return st;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_signal_csv(const std::filesystem::path& path, const CVec& v) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string());
  out << "index,re,im\n";
  for (Index i = 0; i < v.size(); ++i)
    out << i << "," << fmt_double(v(i).real()) << "," << fmt_double(v(i).imag()) << "\n";
}

std::vector<double> real_parts(const CVec& v) {
  std::vector<double> out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = v(i).real();
  return out;
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// One solver run on a prepared instance; never throws (infeasibility and
// non-convergence become flags in the record).
TrialRecord run_one(SolverKind solver, const LinearModel& linear, const QuadraticModel& quad,
                    const CVec& truth, double lambda, double q_value, bool real_lift,
                    std::uint64_t seed) {
  TrialRecord rec;
  rec.seed = seed;
  rec.solver = to_string(solver);
  const auto t0 = std::chrono::steady_clock::now();
  CVec estimate;
  try {
    switch (solver) {
      case SolverKind::bp: {
        L1Config cfg;
        const SolverResult r = basis_pursuit(linear, cfg);
        estimate = r.estimate;
        rec.converged = r.converged;
        break;
      }
      case SolverKind::bpdn: {
        L1Config cfg;
        cfg.lambda = lambda;
        const SolverResult r = bpdn(linear, cfg);
        estimate = r.estimate;
        rec.converged = r.converged;
        break;
      }
      case SolverKind::lq: {
        LqConfig cfg;
        cfg.q = q_value;
        const SolverResult r = lq_minimize(linear, cfg);
        estimate = r.estimate;
        rec.converged = r.converged;
        break;
      }
      case SolverKind::qbp: {
        QbpConfig cfg;
        cfg.lambda = lambda;
        cfg.real_lift = real_lift;
        const QbpResult r = qbp_solve(lift(quad), cfg);
        estimate = r.x;
        rec.converged = r.converged;
        break;
      }
    }
    rec.rel_error = relative_error(truth, estimate);
    const SupportStats st = support_stats(truth, estimate);
    rec.precision = st.precision;
    rec.recall = st.recall;
  } catch (const InfeasibleError&) {
    rec.converged = false;
    rec.rel_error = std::numeric_limits<double>::quiet_NaN();
    rec.precision = 0.0;
    rec.recall = 0.0;
  }
  rec.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

struct SweepJob {
  ExperimentSpec spec;  // cell spec with instance seed filled in
  double q_value;
  int trial;
};

std::string run_sweep_job(const SweepJob& job) {
  // Generate the instance once, reuse it for every solver in the cell.
  LinearModel linear;
  QuadraticModel quad;
  CVec truth;
  switch (job.spec.scenario) {
    case Scenario::quadratic_gaussian: {
      auto inst = gen_quadratic_gaussian(job.spec);
      linear = {inst.model.linear_left, inst.model.y};
      quad = std::move(inst.model);
      truth = std::move(inst.x_true);
      break;
    }
    case Scenario::partial_fourier: {
      auto inst = gen_partial_fourier(job.spec);
      quad = to_quadratic(inst.model);
      linear = std::move(inst.model);
      truth = std::move(inst.x_true);
      break;
    }
    case Scenario::linear_gaussian: {
      auto inst = gen_linear_gaussian(job.spec);
      quad = to_quadratic(inst.model);
      linear = std::move(inst.model);
      truth = std::move(inst.x_true);
      break;
    }
    case Scenario::error_correction: {
      auto inst = gen_error_correction(job.spec);
      quad = to_quadratic(inst.model);
      linear = std::move(inst.model);
      truth = std::move(inst.e_true);
      break;
    }
  }

  std::ostringstream rows;
  for (SolverKind solver : job.spec.solvers) {
    const TrialRecord rec = run_one(solver, linear, quad, truth, job.spec.lambda, job.q_value,
                                    job.spec.real_x, job.spec.seed);
    rows << to_string(job.spec.scenario) << "," << job.spec.n << "," << job.spec.N << ","
         << job.spec.s << "," << fmt_double(job.spec.lambda) << ","
         << (solver == SolverKind::lq ? fmt_double(job.q_value) : std::string()) << ","
         << rec.solver << "," << job.trial << "," << rec.seed << ","
         << fmt_double(rec.rel_error) << "," << fmt_double(rec.precision) << ","
         << fmt_double(rec.recall) << "," << (rec.converged ? 1 : 0) << "\n";
  }
  return rows.str();
}

}  // namespace

ReproduceSummary reproduce(int figure, std::uint64_t seed,
                           const std::filesystem::path& out_dir, int s) {
  if (figure < 2 || figure > 4)
    throw ValidationError("reproduce: figure must be 2, 3 or 4");

  ExperimentSpec spec;
  spec.scenario = Scenario::quadratic_gaussian;
  spec.n = 20;
  spec.N = 18;
  spec.s = s;
  spec.seed = seed;
  spec.lambda = figure == 4 ? 0.0 : 50.0;

  const QuadraticInstance inst = gen_quadratic_gaussian(spec);

  ReproduceSummary summary;
  summary.figure = figure;
  summary.seed = seed;
  summary.n = spec.n;
  summary.N = spec.N;
  summary.s = spec.s;
  summary.lambda = spec.lambda;

  CVec estimate;
  if (figure == 2) {
    summary.solver = "bpdn";
    L1Config cfg;
    cfg.lambda = spec.lambda;
    const SolverResult r = bpdn({inst.model.linear_left, inst.model.y}, cfg);
    estimate = r.estimate;
    summary.converged = r.converged;
    summary.iterations = r.iterations;
  } else {
    summary.solver = "qbp";
    QbpConfig cfg;
    cfg.lambda = spec.lambda;
    cfg.real_lift = spec.real_x;  // the planted signal is real
    const QbpResult r = qbp_solve(lift(inst.model), cfg);
    estimate = r.x;
    summary.converged = r.converged;
    summary.iterations = r.iterations;
  }
  summary.rel_error = relative_error(inst.x_true, estimate);
  summary.support = support_stats(inst.x_true, estimate);

  std::filesystem::create_directories(out_dir);
  write_signal_csv(out_dir / "truth.csv", inst.x_true);
  write_signal_csv(out_dir / "estimate.csv", estimate);
  write_stem_svg(out_dir / "truth.svg", {{real_parts(inst.x_true), "#1f77b4", "truth"}},
                 "ground truth (seed " + std::to_string(seed) + ")");
  write_stem_svg(out_dir / "estimate.svg",
                 {{real_parts(inst.x_true), "#1f77b4", "truth"},
                  {real_parts(estimate), "#d62728", summary.solver + " estimate"}},
                 summary.solver + ", lambda = " + fmt_double(spec.lambda));

  io::json j;
  j["figure"] = summary.figure;
  j["seed"] = summary.seed;
  j["n"] = summary.n;
  j["N"] = summary.N;
  j["s"] = summary.s;
  j["lambda"] = summary.lambda;
  j["solver"] = summary.solver;
  j["relative_error"] = summary.rel_error;
  j["support"] = {{"precision", summary.support.precision},
                  {"recall", summary.support.recall},
                  {"estimate_count", summary.support.est_count},
                  {"true_count", summary.support.true_count}};
  j["converged"] = summary.converged;
  j["iterations"] = summary.iterations;
  io::write_json_file(out_dir / "summary.json", j);
  return summary;
}

void run_sweep(const SweepConfig& config, std::ostream& out, int workers) {
  config.base.validate();
  const std::vector<int> s_values = config.s_list.empty() ? std::vector<int>{config.base.s}
                                                          : config.s_list;
  const std::vector<double> lambda_values =
      config.lambda_list.empty() ? std::vector<double>{config.base.lambda} : config.lambda_list;
  const std::vector<double> q_values =
      config.q_list.empty() ? std::vector<double>{config.base.q.value_or(0.5)} : config.q_list;

  std::vector<SweepJob> jobs;
  for (int s : s_values)
    for (double lambda : lambda_values)
      for (double q : q_values)
        for (int t = 0; t < config.base.trials; ++t) {
          SweepJob job;
          job.spec = config.base;
          job.spec.s = s;
          job.spec.lambda = lambda;
          job.spec.q = q;
          job.spec.seed = Rng::derive(config.base.seed, static_cast<std::uint64_t>(t));
          job.q_value = q;
          job.trial = t;
          jobs.push_back(std::move(job));
        }

  out << "# sparse-sweep v1 scenario=" << to_string(config.base.scenario)
      << " master_seed=" << config.base.seed << " trials=" << config.base.trials
      << " instance_seed=splitmix64_mix(master+(trial+1)*0x9E3779B97F4A7C15)\n";
  out << "# generated_at=" << iso_timestamp() << "\n";
  out << "scenario,n,N,s,lambda,q,solver,trial,seed,rel_error,support_precision,"
         "support_recall,converged\n";

  std::vector<std::string> blocks(jobs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) blocks[i] = run_sweep_job(jobs[i]);
  } else {
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < jobs.size(); i += workers) blocks[i] = run_sweep_job(jobs[i]);
      }));
    }
    for (auto& f : futures) f.get();
  }
  for (const auto& block : blocks) out << block;
}

}  // namespace sparse
