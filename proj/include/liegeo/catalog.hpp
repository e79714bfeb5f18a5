#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liegeo/algebra.hpp"
#include "liegeo/clairaut.hpp"
#include "liegeo/growth.hpp"
#include "liegeo/metric.hpp"

namespace liegeo {

struct BuiltinEntry {
  std::string name;
  LieAlgebra algebra;
  std::map<std::string, MetricForm> presets;
  std::optional<AdjointChart> chart;          // aff only
  std::optional<SemidirectDecl> semidirect;   // e2 only
};

/// Names accepted by load_builtin ("abelian:n" is listed as such).
std::vector<std::string> builtin_names();

/// "abelian:n", "aff", "heis3", "n4", "so3", "sl2", "e2". Every entry carries the "identity"
/// preset; see the implementation for the others. Throws ValidationError listing the names.
BuiltinEntry load_builtin(const std::string& name);

/// Chart p = (x, y), x > 0, on the affine group: Ad_{p^{-1}} = [[1,0],[y/x,1/x]] and the frame
/// diag(x, x) of left-invariant fields. Both throw DomainError for x <= 0.
AdjointChart aff_chart();

struct AffReference {
  SymForm h_coord;
  double det;
  double evl_minus;
  double evl_plus;
};

/// Closed-form coordinate-frame Clairaut matrix (1/x^4)[[x^2, eps x y],[eps x y, 1 + y^2]] of the
/// affine group for the metric diag(1, eps), its determinant and its eigenvalues.
AffReference aff_reference(double x, double y, int eps);

/// Named curves in the (x, y) chart with exact tangents:
/// "g-1-geodesic" (1/(1-t), 1/(1-t)) on [0, 1), "cosh-sinh" (cosh t, sinh t),
/// "h0-ray" (t, 0), "g0-geodesic" (1/(1-t), 0) on [0, 1).
std::map<std::string, ParametrizedCurve> aff_witness_curves();

}  // namespace liegeo
