#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "liegeo/catalog.hpp"

namespace liegeo {

// JSON analysis input:
//   {"algebra": {"builtin": "aff"}
//             | {"dim": n, "brackets": [{"i": 1, "j": 2, "coeffs": [...]}, ...], "labels": [...]}
//             | {"semidirect": {"k": <builtin or inline>, "rep": [m x m matrices], "m": m}},
//    "metric": {"preset": "g-1"} | {"matrix": [[...], ...]},
//    "params": {"tMax", "relTol", "absTol", "seed", "restarts", "probes", "tGrid": "log:t0,t1,N"}}
// Bracket indices are 1-based with i < j.

struct InlineBracket {
  int i = 0;
  int j = 0;
  std::vector<double> coeffs;
  bool operator==(const InlineBracket&) const = default;
};

struct InlineAlgebra {
  int dim = 0;
  std::vector<InlineBracket> brackets;
  std::vector<std::string> labels;
  bool operator==(const InlineAlgebra&) const = default;
};

/// Exactly one of builtin / inline_def.
struct BaseAlgebraSpec {
  std::optional<std::string> builtin;
  std::optional<InlineAlgebra> inline_def;
  bool operator==(const BaseAlgebraSpec&) const = default;
};

struct SemidirectSpec {
  BaseAlgebraSpec k;
  std::vector<std::vector<std::vector<double>>> rep;
  int m = 0;
  bool operator==(const SemidirectSpec&) const = default;
};

struct AlgebraSpec {
  BaseAlgebraSpec base;                    // unused when semidirect is set
  std::optional<SemidirectSpec> semidirect;
  bool operator==(const AlgebraSpec&) const = default;
};

struct MetricSpec {
  std::optional<std::string> preset;
  std::optional<std::vector<std::vector<double>>> matrix;
  bool operator==(const MetricSpec&) const = default;
};

struct TGrid {
  double t0 = 0.1;
  double t1 = 1e4;
  int count = 64;
  bool operator==(const TGrid&) const = default;
};

struct TaskParams {
  double t_max = 10.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::uint64_t seed = 0;
  int restarts = 64;
  int probes = 8;
  TGrid t_grid;
  bool operator==(const TaskParams&) const = default;
};

struct AnalysisSpec {
  AlgebraSpec algebra;
  MetricSpec metric;
  TaskParams params;
  bool operator==(const AnalysisSpec&) const = default;
};

/// Parses and validates (the algebra is built and checked, the metric resolved against it).
/// Schema errors name the offending JSON path; throws ValidationError.
AnalysisSpec parse_spec(const std::string& text);
AnalysisSpec parse_spec(const nlohmann::json& doc);

nlohmann::json to_json(const AnalysisSpec& spec);

/// "log:t0,t1,N".
TGrid parse_tgrid(const std::string& text);
std::string to_string(const TGrid& grid);

struct ResolvedSpec {
  LieAlgebra algebra{1};
  MetricForm metric{Mat::Identity(1, 1)};
  std::optional<SemidirectDecl> semidirect;
  std::optional<AdjointChart> chart;
  std::string builtin;  // empty unless the algebra came from the catalog
};

/// Builds the algebra (validated with validate_algebra) and the metric.
ResolvedSpec resolve(const AnalysisSpec& spec);

}  // namespace liegeo
