#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "liegeo/metric.hpp"

namespace liegeo {

// Points of the group enter only through Ainv = Ad_{p^{-1}}; forms are returned in the body
// frame (u, v in the algebra, meaning tangent vectors p.u, p.v) unless stated otherwise.

/// h_p(p.u, p.v) = gTilde(Ainv* psi u, Ainv* psi v), * the gTilde-adjoint. Always positive definite.
SymForm clairaut_form_at(const Mat& ainv, const MetricForm& g, const WickFrame& w);

/// Clairaut form built from an arbitrary basis (columns of `basis`):
/// h_p(p.u, p.v) = sum_i g1(Ainv e_i, u) g1(Ainv e_i, v).
SymForm clairaut_form_from_basis(const Mat& ainv, const MetricForm& g, const Mat& basis);

struct Spectrum {
  double lam_min_sq;
  double lam_max_sq;
};

/// Extreme generalized eigenvalues of H relative to the positive-definite gTilde.
Spectrum clairaut_spectrum(const SymForm& h, const SymForm& g_tilde);

struct RelativeEigen {
  Vec values;   // ascending
  Mat vectors;  // gTilde-orthonormal columns
};
RelativeEigen relative_eigen(const SymForm& h, const SymForm& g_tilde);

/// Coordinate point -> Gram matrix of a Riemannian metric in coordinates.
using MetricField = std::function<SymForm(const Vec& point)>;

/// A coordinate chart on (part of) the group: Ad_{p^{-1}} at a point, and the frame matrix whose
/// columns are the coordinate expressions of the left-invariant vectors p.e_i.
struct AdjointChart {
  std::function<Mat(const Vec&)> adjoint_inverse;
  std::function<Mat(const Vec&)> frame;
};

/// Coordinate-frame Clairaut field F^{-T} H F^{-1} of the Wick frame of g.
MetricField make_clairaut_field(AdjointChart chart, const MetricForm& g);
MetricField make_clairaut_field_from_basis(AdjointChart chart, const MetricForm& g, const Mat& basis);

/// A field given by a factor: h(point) = W^T W, so speeds are ||W v|| without the cancellation
/// that forming h introduces far out along a curve. Row i of the Clairaut factor is the
/// coordinate covector of the i-th first integral.
struct Coframe {
  std::function<Mat(const Vec& point)> at;
};

Coframe make_clairaut_coframe(AdjointChart chart, const MetricForm& g);
Coframe make_clairaut_coframe_from_basis(AdjointChart chart, const MetricForm& g, const Mat& basis);

struct ParametrizedCurve {
  std::function<Vec(double)> point;
  std::function<Vec(double)> tangent;  // optional; central differences when empty
  double t0 = 0.0;
  double t1 = 1.0;
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  int initial_panels = 64;
  std::size_t max_panels = std::size_t{1} << 21;
  bool estimate_tail = false;
};

struct LengthResult {
  double length = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  /// Present only when the speed decreases monotonically over the last tenth of the interval;
  /// the estimate extrapolates that decay exponentially past t1.
  std::optional<double> tail_estimate;
  bool tail_monotone = false;
};

/// Adaptive composite Simpson quadrature of sqrt(field(point)(tangent, tangent)).
/// Throws NumericalError if the field is clearly indefinite at an evaluated point.
LengthResult curve_length(const MetricField& field, const ParametrizedCurve& curve,
                          const QuadratureOptions& opts = {});
LengthResult curve_length(const Coframe& coframe, const ParametrizedCurve& curve,
                          const QuadratureOptions& opts = {});

/// Length of a sampled path: trapezoid rule over the given parameters. Tangents may be empty,
/// in which case they are finite-differenced from the points. Parameters must strictly increase.
double sampled_curve_length(const MetricField& field, const std::vector<double>& params,
                            const std::vector<Vec>& points, const std::vector<Vec>& tangents = {});

struct ProbeSample {
  Vec point;
  Vec direction;
};

struct BiLipschitzProbe {
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  bool divergent = false;
  std::vector<double> ratios;
};

/// Ratios fieldA(v,v) / fieldB(v,v). With `along_ray`, samples are taken to be ordered along a
/// ray and the pair is flagged divergent when the ratios are strictly monotone and span at least
/// two decades.
BiLipschitzProbe bi_lipschitz_probe(const MetricField& field_a, const MetricField& field_b,
                                    const std::vector<ProbeSample>& samples, bool along_ray = false);

}  // namespace liegeo
