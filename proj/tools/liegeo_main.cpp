// liegeo: command-line front end for left-invariant metric analyses.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "liegeo/catalog.hpp"
#include "liegeo/clairaut.hpp"
#include "liegeo/flow.hpp"
#include "liegeo/growth.hpp"
#include "liegeo/report.hpp"
#include "liegeo/repro.hpp"
#include "liegeo/spec.hpp"

using namespace liegeo;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Vec parse_vector(const std::string& text, const std::string& what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ValidationError(what + ": cannot parse '" + item + "' as a number");
    vals.push_back(v);
  }
  if (vals.empty()) throw ValidationError(what + ": empty vector");
  return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void require_dim(const Vec& v, int n, const std::string& what) {
  if (v.size() != n) {
    throw ValidationError(what + ": expected " + std::to_string(n) + " components, got " + std::to_string(v.size()));
  }
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  return out;
}

struct Loaded {
  AnalysisSpec spec;
  ResolvedSpec res;
};

Loaded load(const std::string& path) {
  Loaded l;
  l.spec = parse_spec(read_file(path));
  l.res = resolve(l.spec);
  return l;
}

FlowOptions flow_options(const TaskParams& p) {
  FlowOptions f;
  f.rel_tol = p.rel_tol;
  f.abs_tol = p.abs_tol;
  return f;
}

std::vector<SpectrumRow> spectrum_rows_chart(const MetricField& field, const std::vector<double>& params,
                                             const std::vector<Vec>& points) {
  std::vector<SpectrumRow> rows;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const SymForm h = field(points[i]);
    const auto s = clairaut_spectrum(h, Mat::Identity(h.rows(), h.cols()));
    rows.push_back({params[i], s.lam_min_sq, s.lam_max_sq, h.determinant()});
  }
  return rows;
}

int cmd_validate(const std::string& path) {
  const auto l = load(path);
  const int n = l.res.algebra.dim();
  json out{{"valid", true},
           {"dim", n},
           {"algebra", l.res.builtin.empty() ? (l.spec.algebra.semidirect ? "semidirect" : "inline") : l.res.builtin},
           {"negativeIndex", l.res.metric.negative_index()},
           {"spec", to_json(l.spec)}};
  const auto nil = nilpotency_step(l.res.algebra);
  out["nilpotencyStep"] = nil.step ? json(*nil.step) : json(nullptr);
  emit(out);
  return 0;
}

int cmd_verdict(const std::string& path, std::optional<int> probes, std::optional<std::uint64_t> seed) {
  const auto l = load(path);
  VerdictOptions o;
  o.semidirect = l.res.semidirect;
  o.probes = probes.value_or(l.spec.params.probes);
  o.seed = seed.value_or(l.spec.params.seed);
  o.restarts = l.spec.params.restarts;
  o.probe_t_max = l.spec.params.t_max;
  o.flow = flow_options(l.spec.params);
  const auto& g = l.spec.params.t_grid;
  o.t_grid = log_grid(g.t0, g.t1, g.count);
  emit(verdict_json(completeness_verdict(l.res.algebra, l.res.metric, o), utc_timestamp()));
  return 0;
}

int cmd_geodesic(const std::string& path, const std::string& x0_text, std::optional<double> tmax,
                 const std::string& csv) {
  const auto l = load(path);
  const Vec x0 = parse_vector(x0_text, "--x0");
  require_dim(x0, l.res.algebra.dim(), "--x0");
  const double t_max = tmax.value_or(l.spec.params.t_max);
  if (!(t_max > 0.0)) throw ValidationError("--tmax must be positive");
  const auto traj = integrate_geodesic(l.res.algebra, l.res.metric, x0, t_max, flow_options(l.spec.params));
  if (!csv.empty()) {
    auto out = open_out(csv);
    write_trajectory_csv(out, traj);
  }
  emit(trajectory_summary_json(traj));
  return traj.status.kind == FlowStatus::Kind::ToleranceFailure ? kExitNumerical : 0;
}

int cmd_growth(const std::string& path, const std::string& dir_text, const std::string& tgrid) {
  const auto l = load(path);
  Vec a = parse_vector(dir_text, "--dir");
  require_dim(a, l.res.algebra.dim(), "--dir");
  const SymForm gt = signature_decompose(l.res.metric).g_tilde;
  const double norm = tilde_norm(a, gt);
  if (!(norm > 0.0)) throw ValidationError("--dir must be nonzero");
  a /= norm;
  const TGrid g = tgrid.empty() ? l.spec.params.t_grid : parse_tgrid(tgrid);
  auto rep = one_param_growth_scan(l.res.algebra, a, gt, log_grid(g.t0, g.t1, g.count));
  rep.fit = growth_classify(rep.samples);
  emit(growth_report_json(rep));
  return 0;
}

int cmd_clairaut(const std::string& path, const std::string& curve_name, const std::string& points_file,
                 const std::string& csv) {
  const auto l = load(path);
  const int n = l.res.algebra.dim();
  if (curve_name.empty() == points_file.empty()) throw ValidationError("give exactly one of --curve, --points");
  const WickFrame wick = signature_decompose(l.res.metric);
  json out;
  std::vector<SpectrumRow> rows;

  if (!curve_name.empty()) {
    if (!l.res.chart) throw ValidationError("--curve needs an algebra with a coordinate chart (builtin aff)");
    const auto curves = aff_witness_curves();
    if (!curves.count(curve_name)) {
      std::string avail;
      for (const auto& [k, unused] : curves) avail += (avail.empty() ? "" : ", ") + k;
      throw ValidationError("unknown curve '" + curve_name + "' (available: " + avail + ")");
    }
    const auto& curve = curves.at(curve_name);
    const MetricField field = make_clairaut_field(*l.res.chart, l.res.metric);
    QuadratureOptions q;
    q.estimate_tail = true;
    const auto len = curve_length(make_clairaut_coframe(*l.res.chart, l.res.metric), curve, q);
    out = json{{"curve", curve_name},
               {"t0", curve.t0},
               {"t1", curve.t1},
               {"length", len.length},
               {"errorEstimate", len.error_estimate},
               {"converged", len.converged},
               {"evaluations", len.evaluations},
               {"tailMonotone", len.tail_monotone}};
    if (len.tail_estimate) out["tailEstimate"] = *len.tail_estimate;
    std::vector<double> params;
    std::vector<Vec> points;
    constexpr int kRows = 101;
    for (int i = 0; i < kRows; ++i) {
      params.push_back(curve.t0 + (curve.t1 - curve.t0) * i / (kRows - 1));
      points.push_back(curve.point(params.back()));
    }
    rows = spectrum_rows_chart(field, params, points);
  } else {
    // Rows: param followed by chart coordinates (algebras with a chart) or by the n*n entries of
    // Ad_{p^{-1}} in row-major order.
    std::ifstream in(points_file);
    if (!in) throw ValidationError("cannot read '" + points_file + "'");
    const int width = l.res.chart ? n : n * n;
    std::vector<double> params;
    std::vector<Vec> points;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      Vec row = parse_vector(line, points_file + ":" + std::to_string(lineno));
      if (row.size() != 1 + width) {
        throw ValidationError(points_file + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(1 + width) + " columns");
      }
      params.push_back(row[0]);
      points.push_back(row.tail(width));
    }
    if (points.empty()) throw ValidationError(points_file + ": no points");
    out = json{{"points", points.size()}};
    if (l.res.chart) {
      const MetricField field = make_clairaut_field(*l.res.chart, l.res.metric);
      rows = spectrum_rows_chart(field, params, points);
      if (points.size() >= 2) out["length"] = sampled_curve_length(field, params, points);
    } else {
      for (std::size_t i = 0; i < points.size(); ++i) {
        const Mat ainv = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            points[i].data(), n, n);
        const SymForm h = clairaut_form_at(ainv, l.res.metric, wick);
        const auto s = clairaut_spectrum(h, wick.g_tilde);
        rows.push_back({params[i], s.lam_min_sq, s.lam_max_sq, h.determinant()});
      }
    }
  }
  if (!csv.empty()) {
    auto f = open_out(csv);
    write_spectrum_csv(f, rows);
  }
  out["spectrumRows"] = rows.size();
  emit(out);
  return 0;
}

int cmd_idempotent(const std::string& path, std::optional<int> restarts, std::optional<std::uint64_t> seed) {
  const auto l = load(path);
  IdempotentOptions o;
  o.restarts = restarts.value_or(l.spec.params.restarts);
  o.seed = seed.value_or(l.spec.params.seed);
  const auto found = idempotent_search(l.res.algebra, l.res.metric, o);
  json list = json::array();
  for (const auto& x : found) {
    list.push_back(json{{"x0", vec_json(x)},
                        {"residual", idempotent_residual(l.res.algebra, l.res.metric, x)},
                        {"g1(x0,x0)", l.res.metric(x, x)}});
  }
  emit(json{{"definite", l.res.metric.is_definite()}, {"restarts", o.restarts}, {"seed", o.seed}, {"idempotents", list}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Completeness analysis of left-invariant metrics on Lie groups"};
  app.require_subcommand(1);

  std::string spec_path, x0, dir, tgrid, csv, curve, points;
  std::optional<int> probes, restarts;
  std::optional<std::uint64_t> seed;
  std::optional<double> tmax;

  auto* validate = app.add_subcommand("validate", "Parse and check a spec file");
  validate->add_option("spec", spec_path, "JSON spec")->required();

  auto* verdict = app.add_subcommand("verdict", "Completeness verdict as JSON");
  verdict->add_option("spec", spec_path, "JSON spec")->required();
  verdict->add_option("--probes", probes, "Random geodesic probes")->check(CLI::NonNegativeNumber);
  verdict->add_option("--seed", seed, "Random seed");

  auto* geodesic = app.add_subcommand("geodesic", "Integrate the Euler-Arnold equation");
  geodesic->add_option("spec", spec_path, "JSON spec")->required();
  geodesic->add_option("--x0", x0, "Initial body velocity v1,..,vn")->required();
  geodesic->add_option("--tmax", tmax, "Final time");
  geodesic->add_option("--csv", csv, "Trajectory CSV output");

  auto* growth = app.add_subcommand("growth", "Adjoint growth along a one-parameter subgroup");
  growth->add_option("spec", spec_path, "JSON spec")->required();
  growth->add_option("--dir", dir, "Direction v1,..,vn (normalized)")->required();
  growth->add_option("--tgrid", tgrid, "log:t0,t1,N");

  auto* clairaut = app.add_subcommand("clairaut", "Clairaut metric spectrum and lengths");
  clairaut->add_option("spec", spec_path, "JSON spec")->required();
  auto* curve_opt = clairaut->add_option("--curve", curve, "Named witness curve");
  auto* points_opt = clairaut->add_option("--points", points, "CSV of param,point rows");
  curve_opt->excludes(points_opt);
  clairaut->add_option("--csv", csv, "Spectrum CSV output");

  auto* idem = app.add_subcommand("idempotent", "Search for idempotents");
  idem->add_option("spec", spec_path, "JSON spec")->required();
  idem->add_option("--restarts", restarts, "Newton restarts")->check(CLI::PositiveNumber);
  idem->add_option("--seed", seed, "Random seed");

  auto* repro = app.add_subcommand("repro-aff", "Reproduce the affine group reference numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*validate) return cmd_validate(spec_path);
    if (*verdict) return cmd_verdict(spec_path, probes, seed);
    if (*geodesic) return cmd_geodesic(spec_path, x0, tmax, csv);
    if (*growth) return cmd_growth(spec_path, dir, tgrid);
    if (*clairaut) return cmd_clairaut(spec_path, curve, points, csv);
    if (*idem) return cmd_idempotent(spec_path, restarts, seed);
    if (*repro) return print_reproduction(std::cout, aff_reproduction()) ? 0 : kExitNumerical;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
