#include "liegeo/clairaut.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace liegeo {

namespace {

void require_square(const Mat& m, int n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw ValidationError(std::string(what) + ": dimension mismatch");
  }
}

// Hadamard ratio |det| / prod ||column||, insensitive to column scaling (far-out chart points
// have columns of very different size).
void require_invertible(const Mat& ainv) {
  double ratio = std::abs(ainv.partialPivLu().determinant());
  for (Eigen::Index j = 0; j < ainv.cols(); ++j) {
    const double c = ainv.col(j).norm();
    ratio = c > 0.0 ? ratio / c : 0.0;
  }
  if (!(ratio > 1e-14)) throw ValidationError("adjoint matrix is singular");
}

}  // namespace

SymForm clairaut_form_from_basis(const Mat& ainv, const MetricForm& g, const Mat& basis) {
  const int n = g.dim();
  require_square(ainv, n, "clairaut_form");
  require_square(basis, n, "clairaut_form");
  require_invertible(ainv);
  // Row i of W is the covector u -> g1(Ainv e_i, u).
  const Mat w = basis.transpose() * ainv.transpose() * g.matrix();
  SymForm h = w.transpose() * w;
  return 0.5 * (h + h.transpose());
}

SymForm clairaut_form_at(const Mat& ainv, const MetricForm& g, const WickFrame& w) {
  return clairaut_form_from_basis(ainv, g, w.basis);
}

RelativeEigen relative_eigen(const SymForm& h, const SymForm& g_tilde) {
  if (h.rows() != g_tilde.rows() || h.cols() != g_tilde.cols()) {
    throw ValidationError("relative_eigen: dimension mismatch");
  }
  Eigen::LLT<Mat> llt(g_tilde);
  if (llt.info() != Eigen::Success) throw ValidationError("reference form is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(h, g_tilde);
  if (es.info() != Eigen::Success) throw NumericalError("generalized eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Spectrum clairaut_spectrum(const SymForm& h, const SymForm& g_tilde) {
  const auto re = relative_eigen(h, g_tilde);
  return {re.values.minCoeff(), re.values.maxCoeff()};
}

MetricField make_clairaut_field_from_basis(AdjointChart chart, const MetricForm& g, const Mat& basis) {
  return [chart = std::move(chart), g, basis](const Vec& p) -> SymForm {
    const SymForm body = clairaut_form_from_basis(chart.adjoint_inverse(p), g, basis);
    const Mat frame = chart.frame(p);
    const Mat finv = frame.inverse();
    SymForm coord = finv.transpose() * body * finv;
    return 0.5 * (coord + coord.transpose());
  };
}

MetricField make_clairaut_field(AdjointChart chart, const MetricForm& g) {
  return make_clairaut_field_from_basis(std::move(chart), g, signature_decompose(g).basis);
}

Coframe make_clairaut_coframe_from_basis(AdjointChart chart, const MetricForm& g, const Mat& basis) {
  const int n = g.dim();
  require_square(basis, n, "clairaut_coframe");
  return Coframe{[chart = std::move(chart), gm = g.matrix(), basis, n](const Vec& p) -> Mat {
    const Mat ainv = chart.adjoint_inverse(p);
    require_square(ainv, n, "clairaut_coframe");
    require_invertible(ainv);
    const Mat w = basis.transpose() * ainv.transpose() * gm;
    // Right-multiplying by F^{-1} turns body components into coordinate ones.
    return Mat(chart.frame(p).transpose().partialPivLu().solve(w.transpose()).transpose());
  }};
}

Coframe make_clairaut_coframe(AdjointChart chart, const MetricForm& g) {
  return make_clairaut_coframe_from_basis(std::move(chart), g, signature_decompose(g).basis);
}

namespace {

// Rejects forms with a negative eigenvalue beyond rounding of the largest one.
void require_nonnegative(const SymForm& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  if (!ev.allFinite() || ev[0] < -1e-12 * std::max(0.0, ev[ev.size() - 1]) || ev[ev.size() - 1] <= 0.0) {
    std::ostringstream os;
    os << "curve_length: metric field is not positive definite at parameter " << t;
    throw NumericalError(os.str());
  }
}

class SpeedFunction {
 public:
  using Norm = std::function<double(const Vec& point, const Vec& tangent, double t)>;

  SpeedFunction(Norm norm, const ParametrizedCurve& curve) : norm_(std::move(norm)), curve_(curve) {}

  double operator()(double t) {
    ++evaluations;
    const Vec p = curve_.point(t);
    Vec v;
    if (curve_.tangent) {
      v = curve_.tangent(t);
    } else {
      const double dt = 1e-6 * std::max(1.0, std::abs(t));
      v = (curve_.point(t + dt) - curve_.point(t - dt)) / (2 * dt);
    }
    return norm_(p, v, t);
  }

  std::size_t evaluations = 0;

 private:
  Norm norm_;
  const ParametrizedCurve& curve_;
};

struct Panel {
  double a, b;
  double fa, fm, fb;
  double left, right;  // Simpson on the two halves
  double fl, fr;       // speed at the quarter points
  double error;
  double value() const { return left + right; }
  bool operator<(const Panel& o) const { return error < o.error; }
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

Panel make_panel(SpeedFunction& f, double a, double b, double fa, double fm, double fb) {
  Panel p{a, b, fa, fm, fb, 0, 0, 0, 0, 0};
  const double m = 0.5 * (a + b);
  p.fl = f(0.5 * (a + m));
  p.fr = f(0.5 * (m + b));
  p.left = simpson(a, m, fa, p.fl, fm);
  p.right = simpson(m, b, fm, p.fr, fb);
  p.error = std::abs(p.left + p.right - simpson(a, b, fa, fm, fb)) / 15.0;
  return p;
}

LengthResult integrate_speed(SpeedFunction& speed, const ParametrizedCurve& curve,
                             const QuadratureOptions& opts) {
  if (!(curve.t1 > curve.t0)) throw ValidationError("curve_length: parameter interval must increase");
  std::priority_queue<Panel> queue;
  const int n0 = std::max(1, opts.initial_panels);
  const double width = (curve.t1 - curve.t0) / n0;
  double fa = speed(curve.t0);
  for (int i = 0; i < n0; ++i) {
    const double a = curve.t0 + i * width;
    const double b = i + 1 == n0 ? curve.t1 : a + width;
    const double fm = speed(0.5 * (a + b));
    const double fb = speed(b);
    queue.push(make_panel(speed, a, b, fa, fm, fb));
    fa = fb;
  }

  LengthResult res;
  double total = 0.0, error = 0.0;
  auto tally = [&] {
    total = 0.0;
    error = 0.0;
    auto copy = queue;
    while (!copy.empty()) {
      total += copy.top().value();
      error += copy.top().error;
      copy.pop();
    }
  };
  tally();
  while (queue.size() < opts.max_panels) {
    if (error <= opts.rel_tol * std::abs(total)) {
      res.converged = true;
      break;
    }
    const Panel worst = queue.top();
    queue.pop();
    const double m = 0.5 * (worst.a + worst.b);
    const Panel l = make_panel(speed, worst.a, m, worst.fa, worst.fl, worst.fm);
    const Panel r = make_panel(speed, m, worst.b, worst.fm, worst.fr, worst.fb);
    total += l.value() + r.value() - worst.value();
    error += l.error + r.error - worst.error;
    queue.push(l);
    queue.push(r);
    // Running sums drift; resynchronize occasionally.
    if (queue.size() % 4096 == 0) tally();
  }
  tally();
  if (!res.converged) res.converged = error <= opts.rel_tol * std::abs(total);
  res.length = total;
  res.error_estimate = error;

  if (opts.estimate_tail) {
    const double span = curve.t1 - curve.t0;
    constexpr int kProbe = 8;
    std::vector<double> s(kProbe + 1);
    for (int i = 0; i <= kProbe; ++i) s[i] = speed(curve.t1 - span * 0.1 * (kProbe - i) / kProbe);
    bool monotone = true;
    for (int i = 1; i <= kProbe; ++i) monotone = monotone && s[i] < s[i - 1];
    res.tail_monotone = monotone;
    if (monotone && s[kProbe] > 0.0) {
      const double dt = span * 0.1 / kProbe;
      const double rate = std::log(s[kProbe - 1] / s[kProbe]) / dt;
      if (rate > 0.0) res.tail_estimate = s[kProbe] / rate;
    }
  }
  res.evaluations = speed.evaluations;
  return res;
}

}  // namespace

LengthResult curve_length(const MetricField& field, const ParametrizedCurve& curve,
                          const QuadratureOptions& opts) {
  SpeedFunction speed(
      [&field](const Vec& p, const Vec& v, double t) {
        const SymForm h = field(p);
        require_nonnegative(h, t);
        return std::sqrt(std::max(0.0, v.dot(h * v)));
      },
      curve);
  return integrate_speed(speed, curve, opts);
}

LengthResult curve_length(const Coframe& coframe, const ParametrizedCurve& curve,
                          const QuadratureOptions& opts) {
  SpeedFunction speed(
      [&coframe](const Vec& p, const Vec& v, double t) {
        const Vec w = coframe.at(p) * v;
        if (!w.allFinite()) {
          std::ostringstream os;
          os << "curve_length: coframe is not finite at parameter " << t;
          throw NumericalError(os.str());
        }
        return w.norm();
      },
      curve);
  return integrate_speed(speed, curve, opts);
}

double sampled_curve_length(const MetricField& field, const std::vector<double>& params,
                            const std::vector<Vec>& points, const std::vector<Vec>& tangents) {
  const std::size_t n = params.size();
  if (n < 2 || points.size() != n || (!tangents.empty() && tangents.size() != n)) {
    throw ValidationError("sampled_curve_length: need >= 2 samples with matching points/tangents");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(params[i] > params[i - 1])) {
      throw ValidationError("sampled_curve_length: parameters must strictly increase");
    }
  }
  std::vector<double> speeds(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec v;
    if (!tangents.empty()) {
      v = tangents[i];
    } else if (i == 0) {
      v = (points[1] - points[0]) / (params[1] - params[0]);
    } else if (i + 1 == n) {
      v = (points[n - 1] - points[n - 2]) / (params[n - 1] - params[n - 2]);
    } else {
      v = (points[i + 1] - points[i - 1]) / (params[i + 1] - params[i - 1]);
    }
    const SymForm h = field(points[i]);
    require_nonnegative(h, params[i]);
    speeds[i] = std::sqrt(std::max(0.0, v.dot(h * v)));
  }
  double len = 0.0;
  for (std::size_t i = 1; i < n; ++i) len += 0.5 * (speeds[i] + speeds[i - 1]) * (params[i] - params[i - 1]);
  return len;
}

BiLipschitzProbe bi_lipschitz_probe(const MetricField& field_a, const MetricField& field_b,
                                    const std::vector<ProbeSample>& samples, bool along_ray) {
  BiLipschitzProbe out;
  if (samples.empty()) return out;
  out.ratios.reserve(samples.size());
  for (const auto& s : samples) {
    const double a = s.direction.dot(field_a(s.point) * s.direction);
    const double b = s.direction.dot(field_b(s.point) * s.direction);
    out.ratios.push_back(a / b);
  }
  out.ratio_min = *std::min_element(out.ratios.begin(), out.ratios.end());
  out.ratio_max = *std::max_element(out.ratios.begin(), out.ratios.end());
  if (along_ray && out.ratios.size() >= 2 && out.ratio_min > 0.0) {
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < out.ratios.size(); ++i) {
      inc = inc && out.ratios[i] > out.ratios[i - 1];
      dec = dec && out.ratios[i] < out.ratios[i - 1];
    }
    out.divergent = (inc || dec) && out.ratio_max / out.ratio_min >= 100.0;
  }
  return out;
}

}  // namespace liegeo
