#include "sparse/io.hpp"

#include <fstream>

namespace sparse::io {

json to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json to_json(const CVec& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json to_json(const CMat& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ValidationError("expected a complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

CVec cvec_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("expected a vector as an array of [re, im]");
  CVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

CMat cmat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("expected a non-empty matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  CMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ValidationError("matrix row " + std::to_string(i) + " has inconsistent length");
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Index>(i), static_cast<Index>(k)) = complex_from_json(j[i][k]);
  }
  return m;
}

bool Problem::linear_only() const {
  const bool a0 = model.offsets.cwiseAbs().maxCoeff() == 0.0;
  const bool c0 = model.linear_right.size() == 0 || model.linear_right.cwiseAbs().maxCoeff() == 0.0;
  bool q0 = true;
  for (const auto& Q : model.quadratics)
    if (Q.cwiseAbs().maxCoeff() != 0.0) {
      q0 = false;
      break;
    }
  return a0 && c0 && q0;
}

LinearModel Problem::linear_part() const { return {model.linear_left, model.y}; }

json problem_to_json(const Problem& p) {
  json j;
  j["n"] = p.model.ambient();
  j["N"] = p.model.measurements();
  j["b"] = to_json(p.model.linear_left);
  j["y"] = to_json(p.model.y);
  if (!p.linear_only()) {
    j["a"] = to_json(CVec(p.model.offsets));
    j["c"] = to_json(p.model.linear_right);
    json qs = json::array();
    for (const auto& Q : p.model.quadratics) qs.push_back(to_json(Q));
    j["Q"] = std::move(qs);
  }
  if (p.x_true) j["x_true"] = to_json(*p.x_true);
  if (!p.scenario.empty()) j["scenario"] = p.scenario;
  j["seed"] = p.seed;
  return j;
}

Problem problem_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("N") || !j.contains("b") || !j.contains("y"))
    throw ValidationError("problem document requires n, N, b, y");
  const Index n = j["n"].get<Index>();
  const Index N = j["N"].get<Index>();

  Problem p;
  p.model.linear_left = cmat_from_json(j["b"]);
  p.model.y = cvec_from_json(j["y"]);
  p.model.offsets = j.contains("a") ? cvec_from_json(j["a"]) : CVec(CVec::Zero(N));
  p.model.linear_right = j.contains("c") ? cmat_from_json(j["c"]) : CMat(CMat::Zero(N, n));
  if (j.contains("Q")) {
    for (const auto& q : j["Q"]) p.model.quadratics.push_back(cmat_from_json(q));
  } else {
    p.model.quadratics.assign(N, CMat::Zero(n, n));
  }
  if (p.model.linear_left.rows() != N || p.model.linear_left.cols() != n)
    throw ValidationError("problem document: b must be N x n");
  p.model.validate();
  if (j.contains("x_true")) p.x_true = cvec_from_json(j["x_true"]);
  if (j.contains("scenario")) p.scenario = j["scenario"].get<std::string>();
  if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
  return p;
}

json solver_result_to_json(const SolverResult& r) {
  json j;
  j["estimate"] = to_json(r.estimate);
  j["objective_trace"] = r.objective_trace;
  j["primal_residual"] = r.primal_residual;
  j["dual_residual"] = r.dual_residual;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

json qbp_result_to_json(const QbpResult& r) {
  json j;
  j["X"] = to_json(r.X);
  j["x"] = to_json(r.x);
  j["quality"] = r.quality;
  j["primal_residual"] = r.primal_residual;
  j["dual_residual"] = r.dual_residual;
  j["objective"] = r.objective;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["rank1_reliable"] = r.rank1_reliable;
  return j;
}

json report_to_json(const DiagnosticsReport& r) {
  json j;
  j["mu"] = r.mu;
  j["coherence_bound"] = r.coherence_bound;
  json rip = json::object();
  for (const auto& [k, v] : r.rip) rip[std::to_string(k)] = v;
  j["rip"] = std::move(rip);
  j["notes"] = r.notes;
  return j;
}

ExperimentSpec experiment_spec_from_json(const json& j) {
  ExperimentSpec spec;
  if (j.contains("scenario")) spec.scenario = scenario_from_string(j["scenario"].get<std::string>());
  if (j.contains("n")) spec.n = j["n"].get<int>();
  if (j.contains("N")) spec.N = j["N"].get<int>();
  if (j.contains("s")) spec.s = j["s"].get<int>();
  if (j.contains("m")) spec.m = j["m"].get<int>();
  if (j.contains("lambda")) spec.lambda = j["lambda"].get<double>();
  if (j.contains("q")) spec.q = j["q"].get<double>();
  if (j.contains("trials")) spec.trials = j["trials"].get<int>();
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("solvers")) {
    spec.solvers.clear();
    for (const auto& s : j["solvers"]) spec.solvers.push_back(solver_from_string(s.get<std::string>()));
  }
  if (j.contains("real_x")) spec.real_x = j["real_x"].get<bool>();
  spec.validate();
  return spec;
}

SweepConfig sweep_config_from_json(const json& j) {
  SweepConfig cfg;
  cfg.base = experiment_spec_from_json(j);
  if (j.contains("s_list")) cfg.s_list = j["s_list"].get<std::vector<int>>();
  if (j.contains("lambda_list")) cfg.lambda_list = j["lambda_list"].get<std::vector<double>>();
  if (j.contains("q_list")) cfg.q_list = j["q_list"].get<std::vector<double>>();
  return cfg;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  json j;
  in >> j;
  return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace sparse::io
