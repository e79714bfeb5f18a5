#include "liegeo/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace liegeo {

using nlohmann::json;

namespace {

// Non-finite doubles have no JSON literal.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json vec_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v[i]));
  return out;
}

json growth_report_json(const GrowthReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) samples.push_back(json{{"t", num(s.t)}, {"normAd", num(s.norm_ad)}});
  json fit{{"class", to_string(r.fit.cls)},
           {"fitResidual", num(r.fit.r_squared)},
           {"loglogSlope", num(r.fit.loglog_slope)},
           {"expSlope", num(r.fit.exp_slope)}};
  if (r.fit.cls == GrowthClass::Polynomial || r.fit.cls == GrowthClass::Linear) fit["degree"] = r.fit.degree;
  if (r.fit.cls == GrowthClass::Exponential) fit["rate"] = num(r.fit.rate);
  if (!r.fit.note.empty()) fit["note"] = r.fit.note;
  return json{{"direction", vec_json(r.direction)}, {"samples", samples}, {"truncated", r.truncated}, {"fit", fit}};
}

json probe_json(const ProbeRecord& p) {
  json out{{"x0", vec_json(p.x0)}, {"status", to_string(p.status.kind)}, {"finalNorm", num(p.final_norm)}};
  if (p.status.kind == FlowStatus::Kind::Blowup) {
    out["tLow"] = num(p.status.t_low);
    out["tHigh"] = num(p.status.t_high);
  } else if (p.status.kind == FlowStatus::Kind::ToleranceFailure) {
    out["t"] = num(p.status.t_low);
    out["reason"] = p.status.reason;
  }
  return out;
}

json verdict_json(const CompletenessVerdict& v, const std::string& generated_at) {
  json out{{"verdict", to_string(v.verdict)}};
  if (v.verdict == Verdict::CompleteCertified) out["certificate"] = v.certificate;
  if (v.witness) {
    out["witness"] = json{{"kind", "idempotent"}, {"x0", vec_json(*v.witness)}};
  } else if (v.blowup) {
    out["witness"] = json{{"kind", "blowup"}, {"probe", probe_json(*v.blowup)}};
  }
  json growth = json::array();
  for (const auto& r : v.growth_reports) growth.push_back(growth_report_json(r));
  out["growthReports"] = growth;
  json probes = json::array();
  for (const auto& p : v.probes) probes.push_back(probe_json(p));
  out["probes"] = probes;
  if (!generated_at.empty()) out["generatedAt"] = generated_at;
  return out;
}

json trajectory_summary_json(const GeodesicTrajectory& traj) {
  const auto drift = charge_drift(traj);
  json out{{"status", to_string(traj.status.kind)},
           {"samples", traj.samples.size()},
           {"acceptedSteps", traj.accepted_steps},
           {"rejectedSteps", traj.rejected_steps},
           {"tFinal", num(traj.samples.back().t)},
           {"xFinal", vec_json(traj.samples.back().x)},
           {"energyDrift", num(drift.energy)},
           {"chargeDrift", vec_json(drift.charges)}};
  if (traj.status.kind == FlowStatus::Kind::Blowup) {
    out["tLow"] = num(traj.status.t_low);
    out["tHigh"] = num(traj.status.t_high);
  }
  if (!traj.status.reason.empty()) out["reason"] = traj.status.reason;
  return out;
}

void write_trajectory_csv(std::ostream& os, const GeodesicTrajectory& traj) {
  const auto old = os.precision(17);
  const Eigen::Index n = traj.samples.empty() ? 0 : traj.samples.front().x.size();
  os << "t";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",x_" << i;
  os << ",energy";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",c_" << i;
  os << ",step\n";
  for (const auto& s : traj.samples) {
    os << s.t;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << s.x[i];
    os << ',' << s.energy;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << s.charges[i];
    os << ',' << s.step << '\n';
  }
  os.precision(old);
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRow>& rows) {
  const auto old = os.precision(17);
  os << "param,lamMinSq,lamMaxSq,det\n";
  for (const auto& r : rows) os << r.param << ',' << r.lam_min_sq << ',' << r.lam_max_sq << ',' << r.det << '\n';
  os.precision(old);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace liegeo
