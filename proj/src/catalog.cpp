#include "liegeo/catalog.hpp"

#include <cmath>
#include <sstream>

namespace liegeo {

namespace {

using BE = LieAlgebra::BracketEntry;

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

MetricForm diag(std::initializer_list<double> xs) { return MetricForm(v(xs).asDiagonal().toDenseMatrix()); }

MetricForm identity(int n) { return MetricForm(Mat::Identity(n, n)); }

std::string available() {
  std::ostringstream os;
  const auto names = builtin_names();
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i];
  return os.str();
}

BuiltinEntry make_abelian(int n) {
  BuiltinEntry e{"abelian:" + std::to_string(n), LieAlgebra(n), {}, std::nullopt, std::nullopt};
  e.presets.emplace("identity", identity(n));
  return e;
}

BuiltinEntry make_aff() {
  BuiltinEntry e{"aff", LieAlgebra::from_brackets(2, {BE{0, 1, v({0, 1})}}), {}, aff_chart(), std::nullopt};
  e.presets.emplace("identity", identity(2));
  e.presets.emplace("g1", identity(2));
  e.presets.emplace("g-1", diag({1, -1}));
  Mat g0(2, 2);
  g0 << 0, 1, 1, 0;
  e.presets.emplace("g0", MetricForm(g0));
  return e;
}

BuiltinEntry make_heis3() {
  BuiltinEntry e{"heis3", LieAlgebra::from_brackets(3, {BE{0, 1, v({0, 0, 1})}}), {}, std::nullopt,
                 std::nullopt};
  e.presets.emplace("identity", identity(3));
  e.presets.emplace("lorentz", diag({1, 1, -1}));
  return e;
}

BuiltinEntry make_n4() {
  BuiltinEntry e{"n4",
                 LieAlgebra::from_brackets(4, {BE{0, 1, v({0, 0, 1, 0})}, BE{0, 2, v({0, 0, 0, 1})}}),
                 {},
                 std::nullopt,
                 std::nullopt};
  e.presets.emplace("identity", identity(4));
  e.presets.emplace("lorentz", diag({1, 1, 1, -1}));
  return e;
}

BuiltinEntry make_so3() {
  BuiltinEntry e{"so3",
                 LieAlgebra::from_brackets(
                     3, {BE{0, 1, v({0, 0, 1})}, BE{1, 2, v({1, 0, 0})}, BE{0, 2, v({0, -1, 0})}}),
                 {},
                 std::nullopt,
                 std::nullopt};
  e.presets.emplace("identity", identity(3));
  e.presets.emplace("neg-killing", diag({2, 2, 2}));
  e.presets.emplace("rigid-body", diag({1, 2, 3}));
  return e;
}

BuiltinEntry make_sl2() {
  // Basis (h, e, f).
  BuiltinEntry e{"sl2",
                 LieAlgebra::from_brackets(
                     3, {BE{0, 1, v({0, 2, 0})}, BE{0, 2, v({0, 0, -2})}, BE{1, 2, v({1, 0, 0})}},
                     {"h", "e", "f"}),
                 {},
                 std::nullopt,
                 std::nullopt};
  e.presets.emplace("identity", identity(3));
  Mat k(3, 3);
  k << 8, 0, 0, 0, 0, 4, 0, 4, 0;
  e.presets.emplace("killing", MetricForm(k));
  return e;
}

BuiltinEntry make_e2() {
  LieAlgebra so2(1, {0.0}, {"u"});
  Mat rot(2, 2);
  rot << 0, -1, 1, 0;
  SemidirectDecl decl{so2, {rot}, 2};
  LieAlgebra alg = semidirect_product(so2, decl.rep, 2);
  BuiltinEntry e{"e2", alg, {}, std::nullopt, decl};
  e.presets.emplace("identity", identity(3));
  e.presets.emplace("lorentz", diag({-1, 1, 1}));
  return e;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"abelian:n", "aff", "heis3", "n4", "so3", "sl2", "e2"};
}

BuiltinEntry load_builtin(const std::string& name) {
  if (name == "aff") return make_aff();
  if (name == "heis3") return make_heis3();
  if (name == "n4") return make_n4();
  if (name == "so3") return make_so3();
  if (name == "sl2") return make_sl2();
  if (name == "e2") return make_e2();
  const std::string prefix = "abelian:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string rest = name.substr(prefix.size());
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == rest.size() && !rest.empty() && n >= 1 && n <= 64) return make_abelian(n);
    throw ValidationError("bad abelian dimension in '" + name + "' (expected abelian:n with 1 <= n <= 64)");
  }
  throw ValidationError("unknown builtin algebra '" + name + "'; available: " + available());
}

AdjointChart aff_chart() {
  auto check = [](const Vec& p) {
    if (p.size() != 2) throw ValidationError("aff chart: point must have two coordinates");
    if (!(p[0] > 0.0)) throw DomainError("aff chart: x must be positive");
  };
  AdjointChart chart;
  chart.adjoint_inverse = [check](const Vec& p) {
    check(p);
    Mat a(2, 2);
    a << 1, 0, p[1] / p[0], 1 / p[0];
    return a;
  };
  chart.frame = [check](const Vec& p) {
    check(p);
    return Mat(p[0] * Mat::Identity(2, 2));
  };
  return chart;
}

AffReference aff_reference(double x, double y, int eps) {
  if (!(x > 0.0)) throw DomainError("aff_reference: x must be positive");
  if (eps != 1 && eps != -1) throw ValidationError("aff_reference: eps must be +1 or -1");
  const double x4 = x * x * x * x;
  AffReference r;
  r.h_coord.resize(2, 2);
  r.h_coord << x * x, eps * x * y, eps * x * y, 1 + y * y;
  r.h_coord /= x4;
  r.det = 1.0 / (x4 * x * x);
  const double s = x * x + 1 + y * y;
  const double root = std::sqrt(std::max(0.0, s * s - 4 * x * x));
  r.evl_plus = (s + root) / (2 * x4);
  // Product of the roots is x^2 / x^8; dividing avoids cancellation in s - root.
  r.evl_minus = (1.0 / (x4 * x * x)) / r.evl_plus;
  return r;
}

std::map<std::string, ParametrizedCurve> aff_witness_curves() {
  std::map<std::string, ParametrizedCurve> out;
  out["g-1-geodesic"] = ParametrizedCurve{
      [](double t) { return Vec(Vec::Constant(2, 1.0 / (1.0 - t))); },
      [](double t) { return Vec(Vec::Constant(2, 1.0 / ((1.0 - t) * (1.0 - t)))); }, 0.0, 0.9};
  out["cosh-sinh"] = ParametrizedCurve{[](double t) { return v({std::cosh(t), std::sinh(t)}); },
                                       [](double t) { return v({std::sinh(t), std::cosh(t)}); }, 0.0, 40.0};
  out["h0-ray"] = ParametrizedCurve{[](double t) { return v({t, 0.0}); },
                                    [](double) { return v({1.0, 0.0}); }, 1.0, 1e6};
  out["g0-geodesic"] = ParametrizedCurve{[](double t) { return v({1.0 / (1.0 - t), 0.0}); },
                                         [](double t) { return v({1.0 / ((1.0 - t) * (1.0 - t)), 0.0}); },
                                         0.0, 0.9};
  return out;
}

}  // namespace liegeo
