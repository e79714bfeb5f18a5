#include "liegeo/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace liegeo {

Vec euler_arnold_rhs(const LieAlgebra& alg, const MetricForm& g, const Vec& x) {
  return metric_adjoint(ad_matrix(alg, x), g) * x;
}

const char* to_string(FlowStatus::Kind kind) {
  switch (kind) {
    case FlowStatus::Kind::Completed:
      return "Completed";
    case FlowStatus::Kind::Blowup:
      return "Blowup";
    case FlowStatus::Kind::ToleranceFailure:
      return "ToleranceFailure";
  }
  return "?";
}

namespace {

// Coupled state y = [x; vec(A)] (column-major A).
class EulerArnoldSystem {
 public:
  EulerArnoldSystem(const LieAlgebra& alg, const MetricForm& g)
      : n_(alg.dim()), g_(g.matrix()), g_lu_(g.matrix()) {
    g_abs_ = g_.cwiseAbs();
    g_inv_abs_ = g_lu_.inverse().cwiseAbs();
    ads_.reserve(n_);
    for (int i = 0; i < n_; ++i) ads_.push_back(ad_matrix(alg, alg.basis(i)));
  }

  int n() const { return n_; }
  Eigen::Index size() const { return n_ + n_ * n_; }

  Mat ad(const Eigen::Ref<const Vec>& x) const {
    Mat out = Mat::Zero(n_, n_);
    for (int i = 0; i < n_; ++i) {
      if (x[i] != 0.0) out += x[i] * ads_[i];
    }
    return out;
  }

  void eval(const Vec& y, Vec& dy) const {
    const auto x = y.head(n_);
    const Eigen::Map<const Mat> a(y.data() + n_, n_, n_);
    const Mat adx = ad(x);
    dy.resize(size());
    dy.head(n_) = g_lu_.solve(adx.transpose() * (g_ * x));
    Eigen::Map<Mat>(dy.data() + n_, n_, n_) = -adx * a;
  }

  // Size of the summed terms in each component of the right-hand side, which bounds its
  // rounding error up to a factor of machine epsilon.
  Vec term_magnitudes(const Vec& y) const {
    const Vec x_abs = y.head(n_).cwiseAbs();
    const Eigen::Map<const Mat> a(y.data() + n_, n_, n_);
    const Mat adx_abs = ad(y.head(n_)).cwiseAbs();
    Vec out(size());
    out.head(n_) = g_inv_abs_ * (adx_abs.transpose() * (g_abs_ * x_abs));
    Eigen::Map<Mat>(out.data() + n_, n_, n_) = adx_abs * a.cwiseAbs();
    return out;
  }

  double energy(const Vec& x) const { return x.dot(g_ * x); }
  Vec charges(const Vec& x, const Mat& a) const { return a.transpose() * (g_ * x); }
  Vec charge_terms(const Vec& x, const Mat& a) const {
    return a.cwiseAbs().transpose() * (g_ * x).cwiseAbs();
  }

 private:
  int n_;
  Mat g_;
  Eigen::PartialPivLU<Mat> g_lu_;
  Mat g_abs_;
  Mat g_inv_abs_;
  std::vector<Mat> ads_;
};

constexpr double kChargeCancellation = 1e-6;
// Local errors below this multiple of the rounding level of h * f(y) are not resolved.
constexpr double kRoundoffFloor = 64 * std::numeric_limits<double>::epsilon();
// Charges are step-controlled only while the state stays within this factor of its start.
constexpr double kChargeControlRange = 1e4;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

bool all_finite(const Vec& v) { return v.allFinite(); }

// Cubic Hermite interpolation between (y0, f0) at t0 and (y1, f1) at t0 + h.
Vec hermite(const Vec& y0, const Vec& f0, const Vec& y1, const Vec& f1, double h, double theta) {
  const double t2 = theta * theta, t3 = t2 * theta;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + theta;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1;
}

}  // namespace

GeodesicTrajectory integrate_geodesic(const LieAlgebra& alg, const MetricForm& g, const Vec& x0,
                                      double t_max, const FlowOptions& opts) {
  if (!(t_max > 0.0)) throw ValidationError("integrate_geodesic: tMax must be positive");
  if (x0.size() != alg.dim() || g.dim() != alg.dim()) {
    throw ValidationError("integrate_geodesic: dimension mismatch between algebra, metric and x0");
  }
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0)) {
    throw ValidationError("integrate_geodesic: tolerances must be positive");
  }

  const EulerArnoldSystem sys(alg, g);
  const int n = sys.n();
  GeodesicTrajectory traj;
  traj.options = opts;

  Vec y(sys.size());
  y.head(n) = x0;
  Eigen::Map<Mat>(y.data() + n, n, n).setIdentity();

  auto record = [&](double t, const Vec& state, double step) {
    TrajectorySample s;
    s.t = t;
    s.x = state.head(n);
    s.adjoint = Eigen::Map<const Mat>(state.data() + n, n, n);
    s.energy = sys.energy(s.x);
    s.charges = sys.charges(s.x, s.adjoint);
    s.step = step;
    traj.samples.push_back(std::move(s));
  };
  record(0.0, y, 0.0);
  if (!x0.allFinite()) {
    traj.status = {FlowStatus::Kind::ToleranceFailure, 0.0, 0.0, "non-finite initial state"};
    return traj;
  }

  Vec k1, k2, k3, k4, k5, k6, k7, tmp, y_new;
  sys.eval(y, k1);

  auto scale_of = [&](const Vec& a, const Vec& b) {
    return (opts.abs_tol + opts.rel_tol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix();
  };
  auto rms = [](const Vec& v) { return std::sqrt(v.squaredNorm() / static_cast<double>(v.size())); };

  // Initial step from the first-derivative scale.
  double h;
  {
    const Vec sc = scale_of(y, y);
    const double d0 = rms(y.cwiseQuotient(sc));
    const double d1 = rms(k1.cwiseQuotient(sc));
    h = (d0 < 1e-5 || d1 < 1e-5 || !std::isfinite(d1)) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, opts.max_step, t_max});
  }

  const double charge_range = kChargeControlRange * std::max(1.0, x0.norm());
  double t = 0.0;
  double next_sample = opts.sample_interval;
  auto finish = [&](FlowStatus::Kind kind, double lo, double hi, std::string reason) {
    traj.status.kind = kind;
    traj.status.t_low = lo;
    traj.status.t_high = hi;
    traj.status.reason = std::move(reason);
  };

  while (true) {
    if (traj.accepted_steps + traj.rejected_steps >= opts.max_steps) {
      finish(FlowStatus::Kind::ToleranceFailure, t, t, "step budget exhausted");
      break;
    }
    const double x_norm = y.head(n).norm();
    if (h < opts.blowup_step_floor) {
      if (x_norm >= opts.blowup_norm_threshold) {
        finish(FlowStatus::Kind::Blowup, t, t + h, "state norm above threshold with collapsed step");
      } else {
        finish(FlowStatus::Kind::ToleranceFailure, t, t, "step size fell below the floor");
      }
      break;
    }

    const bool last = t + h >= t_max;
    if (last) h = t_max - t;

    tmp = y + h * (a21 * k1);
    sys.eval(tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    sys.eval(tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    sys.eval(tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    sys.eval(tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    sys.eval(tmp, k6);
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    sys.eval(y_new, k7);

    const Vec err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const Vec state_scale = scale_of(y, y_new) + (h * kRoundoffFloor) * sys.term_magnitudes(y_new);
    double err = rms(err_vec.cwiseQuotient(state_scale));
    if (y_new.head(n).norm() <= charge_range) {
      // The charges A^T G x can be O(1) combinations of exponentially large entries of A, so
      // their induced local error is controlled separately, relative to the charge itself but
      // never tighter than kChargeCancellation times the size of the summed terms.
      const Eigen::Map<const Mat> a_new(y_new.data() + n, n, n);
      const Eigen::Map<const Mat> da(err_vec.data() + n, n, n);
      const Vec dx = err_vec.head(n);
      const Vec c_new = sys.charges(y_new.head(n), a_new);
      const Vec dc = sys.charges(y_new.head(n), da) + sys.charges(dx, a_new);
      const Vec terms = sys.charge_terms(y_new.head(n), a_new);
      const Vec ref = c_new.cwiseAbs().cwiseMax(kChargeCancellation * terms);
      err = std::max(err, rms(dc.cwiseQuotient(scale_of(ref, ref))));
    }
    if (!std::isfinite(err) || !all_finite(y_new) || !all_finite(k7)) err = INFINITY;

    if (err <= 1.0) {
      const double t_new = last ? t_max : t + h;
      ++traj.accepted_steps;
      if (opts.sample_interval > 0.0) {
        while (next_sample < t_new && next_sample <= t_max) {
          const double theta = (next_sample - t) / h;
          record(next_sample, hermite(y, k1, y_new, k7, h, theta), h);
          next_sample = opts.sample_interval * (std::floor(next_sample / opts.sample_interval + 0.5) + 1);
        }
      }
      const double h_used = h;
      t = t_new;
      y.swap(y_new);
      k1.swap(k7);
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::min(h_used * factor, opts.max_step);

      if (last) {
        record(t, y, h_used);
        finish(FlowStatus::Kind::Completed, t, t, "");
        break;
      }
      if (opts.sample_interval <= 0.0) record(t, y, h_used);
      if (y.head(n).norm() >= opts.blowup_norm_threshold && h < opts.blowup_step_floor) {
        if (opts.sample_interval > 0.0 && traj.samples.back().t < t) record(t, y, h_used);
        finish(FlowStatus::Kind::Blowup, t, t + h, "state norm above threshold with collapsed step");
        break;
      }
    } else {
      ++traj.rejected_steps;
      const double factor = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0) : 0.2;
      h *= factor;
      if (h < opts.blowup_step_floor && x_norm >= opts.blowup_norm_threshold) {
        if (opts.sample_interval > 0.0 && traj.samples.back().t < t) record(t, y, 0.0);
        finish(FlowStatus::Kind::Blowup, t, t + h / factor, "state norm above threshold with collapsed step");
        break;
      }
    }
  }

  if (traj.status.kind == FlowStatus::Kind::ToleranceFailure && opts.sample_interval > 0.0 &&
      traj.samples.back().t < t) {
    record(t, y, 0.0);
  }
  return traj;
}

ChargeDrift charge_drift(const GeodesicTrajectory& traj) {
  ChargeDrift d;
  if (traj.samples.empty()) return d;
  const auto& first = traj.samples.front();
  d.charges = Vec::Zero(first.charges.size());
  const double e_scale = std::max(1.0, std::abs(first.energy));
  const Vec c_scale = first.charges.cwiseAbs().cwiseMax(1.0);
  for (const auto& s : traj.samples) {
    d.energy = std::max(d.energy, std::abs(s.energy - first.energy) / e_scale);
    d.charges = d.charges.cwiseMax((s.charges - first.charges).cwiseAbs().cwiseQuotient(c_scale));
  }
  return d;
}

}  // namespace liegeo
