#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "liegeo/algebra.hpp"
#include "liegeo/metric.hpp"

namespace liegeo {

/// ad_x^dagger x with dagger the g1-adjoint. Quadratic in x.
Vec euler_arnold_rhs(const LieAlgebra& alg, const MetricForm& g, const Vec& x);

struct FlowOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  /// 0 records every accepted step; otherwise samples on the uniform grid k * sample_interval
  /// using cubic Hermite interpolation inside accepted steps.
  double sample_interval = 0.0;
  double blowup_norm_threshold = 1e8;
  double blowup_step_floor = 1e-12;
  double blowup_bracket_tol = 1e-3;
  std::size_t max_steps = 20'000'000;
};

struct TrajectorySample {
  double t;
  Vec x;
  Mat adjoint;  // A(t) = Ad_{gamma(t)^{-1}}
  double energy;
  Vec charges;  // c_i = g1(A e_i, x)
  double step;  // size of the accepted step that produced this sample (0 at t = 0)
};

struct FlowStatus {
  enum class Kind { Completed, Blowup, ToleranceFailure };
  Kind kind = Kind::Completed;
  double t_low = 0.0;   // Completed: final time. Blowup: last accepted t. Failure: last good t.
  double t_high = 0.0;  // Blowup: last attempted t. Otherwise equals t_low.
  std::string reason;
};

const char* to_string(FlowStatus::Kind kind);

struct GeodesicTrajectory {
  std::vector<TrajectorySample> samples;
  FlowStatus status;
  FlowOptions options;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

/// Integrates x' = ad_x^dagger x together with A' = -ad_x A from x(0) = x0, A(0) = I.
/// Stops at t_max, on blowup (|x| above the norm threshold while the step drops below the floor),
/// or on step-control failure. Never throws for numerical trouble; inspect `status`.
GeodesicTrajectory integrate_geodesic(const LieAlgebra& alg, const MetricForm& g, const Vec& x0,
                                      double t_max, const FlowOptions& opts = {});

struct ChargeDrift {
  double energy = 0.0;
  Vec charges;
  double max_charge() const { return charges.size() ? charges.maxCoeff() : 0.0; }
};

/// Max |q(t) - q(0)| / max(1, |q(0)|) over samples for energy and each charge.
ChargeDrift charge_drift(const GeodesicTrajectory& traj);

}  // namespace liegeo
