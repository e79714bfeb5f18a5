#include "liegeo/spec.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace liegeo {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path, "missing required field '" + key + "'");
  return obj.at(key);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail(path, "unknown field '" + it.key() + "'");
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

double as_positive(const json& j, const std::string& path) {
  const double v = as_number(j, path);
  if (!(v > 0.0)) fail(path, "expected a positive number");
  return v;
}

long long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_vector(j[i], path + "[" + std::to_string(i) + "]"));
    if (out.back().size() != j.size()) fail(path + "[" + std::to_string(i) + "]", "matrix must be square");
  }
  return out;
}

Mat to_mat(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

InlineAlgebra parse_inline(const json& j, const std::string& path) {
  reject_unknown(j, {"dim", "brackets", "labels"}, path);
  InlineAlgebra a;
  const long long dim = as_integer(member(j, "dim", path), path + ".dim");
  if (dim < 1 || dim > 64) fail(path + ".dim", "dimension must be between 1 and 64");
  a.dim = static_cast<int>(dim);
  if (j.contains("brackets")) {
    const json& bs = j.at("brackets");
    const std::string bpath = path + ".brackets";
    if (!bs.is_array()) fail(bpath, "expected an array");
    for (std::size_t k = 0; k < bs.size(); ++k) {
      const std::string p = bpath + "[" + std::to_string(k) + "]";
      require_object(bs[k], p);
      reject_unknown(bs[k], {"i", "j", "coeffs"}, p);
      InlineBracket b;
      const long long i = as_integer(member(bs[k], "i", p), p + ".i");
      const long long jj = as_integer(member(bs[k], "j", p), p + ".j");
      if (i < 1 || i > dim) fail(p + ".i", "index out of range 1.." + std::to_string(dim));
      if (jj < 1 || jj > dim) fail(p + ".j", "index out of range 1.." + std::to_string(dim));
      if (!(i < jj)) fail(p, "brackets list only pairs with i < j");
      b.i = static_cast<int>(i);
      b.j = static_cast<int>(jj);
      b.coeffs = as_vector(member(bs[k], "coeffs", p), p + ".coeffs");
      if (static_cast<long long>(b.coeffs.size()) != dim) {
        fail(p + ".coeffs", "expected " + std::to_string(dim) + " coefficients");
      }
      a.brackets.push_back(std::move(b));
    }
  }
  if (j.contains("labels")) {
    const json& ls = j.at("labels");
    if (!ls.is_array() || static_cast<long long>(ls.size()) != dim) {
      fail(path + ".labels", "expected " + std::to_string(dim) + " strings");
    }
    for (std::size_t k = 0; k < ls.size(); ++k) {
      a.labels.push_back(as_string(ls[k], path + ".labels[" + std::to_string(k) + "]"));
    }
  }
  return a;
}

BaseAlgebraSpec parse_base(const json& j, const std::string& path) {
  require_object(j, path);
  BaseAlgebraSpec b;
  if (j.contains("builtin")) {
    reject_unknown(j, {"builtin"}, path);
    b.builtin = as_string(j.at("builtin"), path + ".builtin");
  } else if (j.contains("dim")) {
    b.inline_def = parse_inline(j, path);
  } else {
    fail(path, "expected 'builtin' or an inline definition with 'dim'");
  }
  return b;
}

AlgebraSpec parse_algebra(const json& j, const std::string& path) {
  require_object(j, path);
  const int sources = static_cast<int>(j.contains("builtin")) + static_cast<int>(j.contains("dim")) +
                      static_cast<int>(j.contains("semidirect"));
  if (sources != 1) fail(path, "exactly one of 'builtin', inline 'dim'/'brackets', 'semidirect' is required");
  AlgebraSpec a;
  if (j.contains("semidirect")) {
    reject_unknown(j, {"semidirect"}, path);
    const std::string sp = path + ".semidirect";
    const json& s = j.at("semidirect");
    require_object(s, sp);
    reject_unknown(s, {"k", "rep", "m"}, sp);
    SemidirectSpec sd;
    sd.k = parse_base(member(s, "k", sp), sp + ".k");
    const long long m = as_integer(member(s, "m", sp), sp + ".m");
    if (m < 1 || m > 64) fail(sp + ".m", "module dimension must be between 1 and 64");
    sd.m = static_cast<int>(m);
    const json& rep = member(s, "rep", sp);
    if (!rep.is_array()) fail(sp + ".rep", "expected an array of matrices");
    for (std::size_t k = 0; k < rep.size(); ++k) {
      const std::string rp = sp + ".rep[" + std::to_string(k) + "]";
      sd.rep.push_back(as_matrix(rep[k], rp));
      if (static_cast<long long>(sd.rep.back().size()) != m) fail(rp, "expected an m x m matrix");
    }
    a.semidirect = std::move(sd);
  } else {
    a.base = parse_base(j, path);
  }
  return a;
}

MetricSpec parse_metric(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"preset", "matrix"}, path);
  if (j.contains("preset") == j.contains("matrix")) fail(path, "exactly one of 'preset', 'matrix' is required");
  MetricSpec m;
  if (j.contains("preset")) {
    m.preset = as_string(j.at("preset"), path + ".preset");
  } else {
    m.matrix = as_matrix(j.at("matrix"), path + ".matrix");
  }
  return m;
}

TaskParams parse_params(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"tMax", "relTol", "absTol", "seed", "restarts", "probes", "tGrid"}, path);
  TaskParams p;
  if (j.contains("tMax")) p.t_max = as_positive(j.at("tMax"), path + ".tMax");
  if (j.contains("relTol")) p.rel_tol = as_positive(j.at("relTol"), path + ".relTol");
  if (j.contains("absTol")) p.abs_tol = as_positive(j.at("absTol"), path + ".absTol");
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      fail(path + ".seed", "expected a non-negative integer");
    }
    p.seed = s.get<std::uint64_t>();
  }
  if (j.contains("restarts")) {
    const long long r = as_integer(j.at("restarts"), path + ".restarts");
    if (r < 1) fail(path + ".restarts", "expected a positive integer");
    p.restarts = static_cast<int>(r);
  }
  if (j.contains("probes")) {
    const long long r = as_integer(j.at("probes"), path + ".probes");
    if (r < 0) fail(path + ".probes", "expected a non-negative integer");
    p.probes = static_cast<int>(r);
  }
  if (j.contains("tGrid")) {
    try {
      p.t_grid = parse_tgrid(as_string(j.at("tGrid"), path + ".tGrid"));
    } catch (const ValidationError& e) {
      fail(path + ".tGrid", e.what());
    }
  }
  return p;
}

LieAlgebra build_inline(const InlineAlgebra& a) {
  std::vector<LieAlgebra::BracketEntry> entries;
  for (const auto& b : a.brackets) {
    entries.push_back({b.i - 1, b.j - 1, Eigen::Map<const Vec>(b.coeffs.data(), a.dim)});
  }
  return LieAlgebra::from_brackets(a.dim, entries, a.labels);
}

LieAlgebra build_base(const BaseAlgebraSpec& b, std::optional<BuiltinEntry>* entry) {
  if (b.builtin) {
    BuiltinEntry e = load_builtin(*b.builtin);
    LieAlgebra alg = e.algebra;
    if (entry) *entry = std::move(e);
    return alg;
  }
  return build_inline(*b.inline_def);
}

json base_to_json(const BaseAlgebraSpec& b) {
  if (b.builtin) return json{{"builtin", *b.builtin}};
  const auto& a = *b.inline_def;
  json out{{"dim", a.dim}};
  json bs = json::array();
  for (const auto& br : a.brackets) bs.push_back(json{{"i", br.i}, {"j", br.j}, {"coeffs", br.coeffs}});
  out["brackets"] = bs;
  if (!a.labels.empty()) out["labels"] = a.labels;
  return out;
}

}  // namespace

TGrid parse_tgrid(const std::string& text) {
  const std::string prefix = "log:";
  if (text.rfind(prefix, 0) != 0) throw ValidationError("t grid must look like log:t0,t1,N");
  std::istringstream is(text.substr(prefix.size()));
  TGrid g;
  char c1 = 0, c2 = 0;
  if (!(is >> g.t0 >> c1 >> g.t1 >> c2 >> g.count) || c1 != ',' || c2 != ',' || !(is >> std::ws).eof()) {
    throw ValidationError("t grid must look like log:t0,t1,N");
  }
  if (!(g.t0 > 0.0) || !(g.t1 > g.t0) || g.count < 2) {
    throw ValidationError("t grid needs 0 < t0 < t1 and N >= 2");
  }
  return g;
}

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_string(const TGrid& grid) {
  return "log:" + shortest(grid.t0) + "," + shortest(grid.t1) + "," + std::to_string(grid.count);
}

ResolvedSpec resolve(const AnalysisSpec& spec) {
  ResolvedSpec r;
  std::optional<BuiltinEntry> entry;
  if (spec.algebra.semidirect) {
    const auto& sd = *spec.algebra.semidirect;
    const LieAlgebra k = build_base(sd.k, nullptr);
    if (static_cast<int>(sd.rep.size()) != k.dim()) {
      throw ValidationError("$.algebra.semidirect.rep: expected one matrix per basis vector of k (" +
                            std::to_string(k.dim()) + ")");
    }
    std::vector<Mat> rep;
    for (const auto& m : sd.rep) rep.push_back(to_mat(m));
    r.algebra = semidirect_product(k, rep, sd.m);
    r.semidirect = SemidirectDecl{k, rep, sd.m};
  } else {
    r.algebra = build_base(spec.algebra.base, &entry);
    if (entry) {
      r.builtin = entry->name;
      r.chart = entry->chart;
      r.semidirect = entry->semidirect;
    }
  }
  const auto check = validate_algebra(r.algebra);
  if (!check.ok()) {
    const auto& v = check.violations.front();
    std::ostringstream os;
    os << "$.algebra: structure constants violate "
       << (v.kind == AlgebraViolation::Kind::Antisymmetry ? "antisymmetry" : "the Jacobi identity")
       << " (magnitude " << v.magnitude << ", " << check.violations.size() << " violation(s))";
    throw ValidationError(os.str());
  }

  const int n = r.algebra.dim();
  if (spec.metric.matrix) {
    const auto& rows = *spec.metric.matrix;
    if (static_cast<int>(rows.size()) != n) {
      throw ValidationError("$.metric.matrix: dimension mismatch, metric is " + std::to_string(rows.size()) +
                            "x" + std::to_string(rows.size()) + " but the algebra has dimension " +
                            std::to_string(n));
    }
    try {
      r.metric = MetricForm(to_mat(rows));
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("$.metric.matrix: ") + e.what());
    }
  } else {
    const std::string& name = *spec.metric.preset;
    if (name == "identity" || name == "euclidean") {
      r.metric = MetricForm(Mat::Identity(n, n));
    } else if (entry && entry->presets.count(name)) {
      r.metric = entry->presets.at(name);
    } else {
      std::string avail = "identity, euclidean";
      if (entry) {
        for (const auto& [k, unused] : entry->presets) {
          if (k != "identity") avail += ", " + k;
        }
      }
      throw ValidationError("$.metric.preset: unknown preset '" + name + "' (available: " + avail + ")");
    }
  }
  return r;
}

AnalysisSpec parse_spec(const json& doc) {
  require_object(doc, "$");
  reject_unknown(doc, {"algebra", "metric", "params"}, "$");
  AnalysisSpec s;
  s.algebra = parse_algebra(member(doc, "algebra", "$"), "$.algebra");
  s.metric = parse_metric(member(doc, "metric", "$"), "$.metric");
  if (doc.contains("params")) s.params = parse_params(doc.at("params"), "$.params");
  resolve(s);
  return s;
}

AnalysisSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("$: malformed JSON: ") + e.what());
  }
  return parse_spec(doc);
}

json to_json(const AnalysisSpec& spec) {
  json out;
  if (spec.algebra.semidirect) {
    const auto& sd = *spec.algebra.semidirect;
    out["algebra"] = json{{"semidirect", json{{"k", base_to_json(sd.k)}, {"rep", sd.rep}, {"m", sd.m}}}};
  } else {
    out["algebra"] = base_to_json(spec.algebra.base);
  }
  if (spec.metric.preset) {
    out["metric"] = json{{"preset", *spec.metric.preset}};
  } else {
    out["metric"] = json{{"matrix", *spec.metric.matrix}};
  }
  const auto& p = spec.params;
  out["params"] = json{{"tMax", p.t_max},     {"relTol", p.rel_tol},   {"absTol", p.abs_tol},
                       {"seed", p.seed},      {"restarts", p.restarts}, {"probes", p.probes},
                       {"tGrid", to_string(p.t_grid)}};
  return out;
}

}  // namespace liegeo
