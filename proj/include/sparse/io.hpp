#pragma once

#include "sparse/diagnostics.hpp"
#include "sparse/harness.hpp"
#include "sparse/model.hpp"
#include "sparse/solve_qbp.hpp"
#include "sparse/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace sparse::io {

using json = nlohmann::json;

// Complex scalars serialize as [re, im]; matrices as row-major nested arrays.
json to_json(const Complex& z);
json to_json(const CVec& v);
json to_json(const CMat& m);
Complex complex_from_json(const json& j);
CVec cvec_from_json(const json& j);
CMat cmat_from_json(const json& j);

// On-disk problem document. Linear problems are quadratic documents whose
// a, c, Q blocks are zero (and may be omitted in the file).
struct Problem {
  QuadraticModel model;
  std::optional<CVec> x_true;
  std::string scenario;
  std::uint64_t seed = 0;

  bool linear_only() const;
  LinearModel linear_part() const;
};

json problem_to_json(const Problem& p);
Problem problem_from_json(const json& j);

json solver_result_to_json(const SolverResult& r);
json qbp_result_to_json(const QbpResult& r);
json report_to_json(const DiagnosticsReport& r);

ExperimentSpec experiment_spec_from_json(const json& j);
SweepConfig sweep_config_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace sparse::io
