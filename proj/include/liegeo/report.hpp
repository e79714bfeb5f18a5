#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "liegeo/flow.hpp"
#include "liegeo/growth.hpp"

namespace liegeo {

nlohmann::json vec_json(const Vec& v);
nlohmann::json growth_report_json(const GrowthReport& r);
nlohmann::json probe_json(const ProbeRecord& p);

/// {verdict, certificate | witness, growthReports, probes}. `generated_at` is stored under
/// "generatedAt" when non-empty; it is the only field that varies between identical runs.
nlohmann::json verdict_json(const CompletenessVerdict& v, const std::string& generated_at = "");

nlohmann::json trajectory_summary_json(const GeodesicTrajectory& traj);

/// Header t,x_1..x_n,energy,c_1..c_n,step; 17 significant digits.
void write_trajectory_csv(std::ostream& os, const GeodesicTrajectory& traj);

struct SpectrumRow {
  double param;
  double lam_min_sq;
  double lam_max_sq;
  double det;
};

/// Header param,lamMinSq,lamMaxSq,det.
void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRow>& rows);

/// Current UTC time as an ISO-8601 string.
std::string utc_timestamp();

}  // namespace liegeo
