// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "liegeo/algebra.hpp"
#include "liegeo/catalog.hpp"
#include "liegeo/clairaut.hpp"
#include "liegeo/flow.hpp"
#include "liegeo/growth.hpp"
#include "liegeo/metric.hpp"
#include "random_forms.hpp"

using namespace liegeo;
using liegeo::testing::Rng;

namespace {

const std::vector<std::string> kCatalog{"abelian:3", "aff", "heis3", "n4", "so3", "sl2", "e2"};

// Collects failed checks for one criterion together with the worst measured values.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& key, double value) {
    std::ostringstream os;
    os.precision(3);
    os << key << "=" << value;
    notes_.push_back(os.str());
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string s;
    for (const auto& n : notes_) s += (s.empty() ? "" : ", ") + n;
    if (failed_) {
      s += (s.empty() ? "" : "; ") + std::to_string(failed_) + " failed check(s):";
      for (const auto& f : failures_) s += " [" + f + "]";
    }
    return s;
  }

 private:
  int failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Mat m2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

// Exponential coordinates p -> exp(p) with Ad_{exp(p)^{-1}} = exp(-ad_p), body frame.
AdjointChart exp_chart(const LieAlgebra& alg) {
  const int n = alg.dim();
  return {[alg](const Vec& p) -> Mat { return Mat(-ad_matrix(alg, p)).exp(); },
          [n](const Vec&) -> Mat { return Mat::Identity(n, n); }};
}

void incomplete_geodesics(Check& c) {
  const auto aff = load_builtin("aff");
  struct Case {
    std::string preset;
    Vec x0;
  };
  double worst_rel = 0.0, worst_width = 0.0, worst_gap = 0.0;
  for (const Case& k : {Case{"g-1", Vec::Ones(2)}, Case{"g0", Vec::Unit(2, 0)}}) {
    const auto traj = integrate_geodesic(aff.algebra, aff.presets.at(k.preset), k.x0, 2.0);
    const auto& st = traj.status;
    c.expect(st.kind == FlowStatus::Kind::Blowup, k.preset + " status " + to_string(st.kind));
    // The bracket is [last accepted t, last attempted t], so both ends precede t* = 1; t* must lie
    // within the bracket tolerance of it.
    const double gap = std::max({0.0, st.t_low - 1.0, 1.0 - st.t_high});
    worst_gap = std::max(worst_gap, gap);
    c.expect(gap <= 1e-3, k.preset + " bracket [" + fmt(st.t_low) + ", " + fmt(st.t_high) + "] is " + fmt(gap) +
                              " away from 1");
    c.expect(st.t_high - st.t_low <= 1e-3, k.preset + " bracket width " + fmt(st.t_high - st.t_low));
    worst_width = std::max(worst_width, st.t_high - st.t_low);
    int checked = 0;
    for (const auto& s : traj.samples) {
      if (s.t > 0.9) break;
      const Vec exact = k.x0 / (1 - s.t);
      const double rel = (s.x - exact).norm() / exact.norm();
      worst_rel = std::max(worst_rel, rel);
      c.expect(rel <= 1e-6, k.preset + " t=" + fmt(s.t) + " rel err " + fmt(rel));
      ++checked;
    }
    c.expect(checked >= 10, k.preset + " too few samples on [0, 0.9]");
  }
  c.note("maxRelErr", worst_rel);
  c.note("maxBracketWidth", worst_width);
  c.note("maxDistanceToTStar", worst_gap);
}

void clairaut_closed_forms(Check& c) {
  Rng rng(1001);
  const auto aff = load_builtin("aff");
  double worst_h = 0.0, worst_det = 0.0, worst_ev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(0.1, 10), y = rng.uniform(-10, 10);
    const int eps = rng.coin() ? 1 : -1;
    const auto field = make_clairaut_field(aff_chart(), aff.presets.at(eps == 1 ? "g1" : "g-1"));
    const SymForm h = field(v2(x, y));
    const auto ref = aff_reference(x, y, eps);
    // Entries scale like y^2/x^4, so agreement is measured relative to the largest entry.
    const double scale = std::max(1.0, ref.h_coord.cwiseAbs().maxCoeff());
    const double dh = (h - ref.h_coord).cwiseAbs().maxCoeff() / scale;
    const double exact_det = 1.0 / std::pow(x, 6);
    const double ddet = std::abs(h.determinant() - exact_det) / std::max(1.0, exact_det);
    const auto sp = clairaut_spectrum(h, Mat::Identity(2, 2));
    const double dev = std::max(std::abs(sp.lam_min_sq - ref.evl_minus) / std::max(1.0, ref.evl_minus),
                                std::abs(sp.lam_max_sq - ref.evl_plus) / std::max(1.0, ref.evl_plus));
    worst_h = std::max(worst_h, dh);
    worst_det = std::max(worst_det, ddet);
    worst_ev = std::max(worst_ev, dev);
    const std::string at = "(" + fmt(x) + "," + fmt(y) + "," + std::to_string(eps) + ")";
    c.expect(dh <= 1e-12, "h at " + at + " off by " + fmt(dh));
    c.expect(ddet <= 1e-12, "det at " + at + " off by " + fmt(ddet));
    c.expect(dev <= 1e-10, "spectrum at " + at + " off by " + fmt(dev));
  }
  c.note("maxHErr", worst_h);
  c.note("maxDetErr", worst_det);
  c.note("maxSpectrumErr", worst_ev);
}

void length_bounds(Check& c) {
  const auto aff = load_builtin("aff");
  const auto curves = aff_witness_curves();
  auto coframe = [&](const std::string& preset) { return make_clairaut_coframe(aff_chart(), aff.presets.at(preset)); };

  const auto l_cs = curve_length(coframe("g-1"), curves.at("cosh-sinh")).length;
  c.note("coshSinh", l_cs);
  c.expect(std::abs(l_cs - std::numbers::pi / 2) <= 1e-6, "cosh-sinh length " + fmt(l_cs));
  c.expect(l_cs <= 2.0, "cosh-sinh length above 2");

  auto ray = curves.at("h0-ray");
  ray.t0 = 1.0;
  ray.t1 = 1e6;
  const auto l0 = curve_length(coframe("g0"), ray).length;
  c.note("h0Ray", l0);
  c.expect(std::abs(l0 - 1.0) <= 1e-5, "h0 ray length " + fmt(l0));

  for (double big : {1e2, 1e4}) {
    auto r = curves.at("h0-ray");
    r.t0 = 1.0;
    r.t1 = big;
    const auto l1 = curve_length(coframe("g1"), r).length;
    c.expect(std::abs(l1 - std::log(big)) <= 1e-6, "h1 ray to " + fmt(big) + " length " + fmt(l1));
    c.note("h1RayErr(T=" + fmt(big) + ")", std::abs(l1 - std::log(big)));
  }
}

void exponential_growth(Check& c) {
  const auto chart = aff_chart();
  double worst = 0.0;
  for (double x : {0.5, 1.0, 2.0, std::exp(10.0)}) {
    const Mat ad_p = chart.adjoint_inverse(v2(x, 0)).inverse();
    const double got = ad_operator_norm(ad_p, Mat::Identity(2, 2));
    const double expected = std::sqrt(1 + x * x + std::abs(1 - x * x)) / std::sqrt(2.0);
    worst = std::max(worst, std::abs(got - expected));
    c.expect(std::abs(got - expected) <= 1e-9, "norm at x=" + fmt(x) + ": " + fmt(got) + " vs " + fmt(expected));
  }
  const auto aff = load_builtin("aff");
  auto rep = one_param_growth_scan(aff.algebra, Vec::Unit(2, 0), Mat::Identity(2, 2), log_grid(0.1, 1e4, 64));
  rep.fit = growth_classify(rep.samples);
  c.expect(rep.fit.cls == GrowthClass::Exponential, std::string("aff/e1 class ") + to_string(rep.fit.cls));
  c.expect(std::abs(rep.fit.rate - 1.0) <= 0.01, "aff/e1 rate " + fmt(rep.fit.rate));
  c.note("maxNormErr", worst);
  c.note("rate", rep.fit.rate);
}

GrowthFit fit_for(const LieAlgebra& alg, const Vec& a, const SymForm& gt) {
  return growth_classify(one_param_growth_scan(alg, a / tilde_norm(a, gt), gt, log_grid(0.1, 1e4, 64)).samples);
}

void growth_taxonomy(Check& c) {
  Rng rng(1005);
  const auto heis = load_builtin("heis3");
  int linear = 0;
  for (int i = 0; i < 50; ++i) {
    const auto f = fit_for(heis.algebra, rng.unit(3), Mat::Identity(3, 3));
    c.expect(f.cls == GrowthClass::Linear, std::string("heis3 direction ") + std::to_string(i) + " " + to_string(f.cls));
    linear += f.cls == GrowthClass::Linear;
  }
  c.note("heis3Linear/50", linear);

  const auto n4 = load_builtin("n4");
  const auto f4 = fit_for(n4.algebra, Vec::Unit(4, 0), Mat::Identity(4, 4));
  c.expect(f4.cls == GrowthClass::Polynomial && f4.degree == 2,
           std::string("n4/e1 ") + to_string(f4.cls) + " degree " + std::to_string(f4.degree));

  const auto so3 = load_builtin("so3");
  SymForm gt = -killing_form(so3.algebra);
  gt *= 3.0 / gt.trace();
  for (int i = 0; i < 10; ++i) {
    const auto f = fit_for(so3.algebra, rng.gaussian(3), gt);
    c.expect(f.cls == GrowthClass::Bounded, std::string("so3 ") + to_string(f.cls));
  }
  const auto f0 = fit_for(load_builtin("abelian:3").algebra, rng.gaussian(3), Mat::Identity(3, 3));
  c.expect(f0.cls == GrowthClass::Bounded, std::string("abelian ") + to_string(f0.cls));
}

void conservation(Check& c) {
  Rng rng(1006);
  double worst_e = 0.0, worst_c = 0.0;
  int blowups = 0;
  for (int t = 0; t < 100; ++t) {
    const auto entry = load_builtin(kCatalog[t % kCatalog.size()]);
    const int n = entry.algebra.dim();
    const MetricForm g(rng.any_metric(n));
    FlowOptions o;
    o.rel_tol = 1e-10;
    const auto traj = integrate_geodesic(entry.algebra, g, rng.unit(n), 10.0, o);
    c.expect(traj.status.kind != FlowStatus::Kind::ToleranceFailure,
             entry.name + " run " + std::to_string(t) + " " + traj.status.reason);
    GeodesicTrajectory head = traj;
    if (traj.status.kind == FlowStatus::Kind::Blowup) {
      // Runs that leave every bounded set are measured before the state exceeds 1e3.
      ++blowups;
      head.samples.clear();
      for (const auto& s : traj.samples) {
        if (s.x.norm() > 1e3) break;
        head.samples.push_back(s);
      }
    }
    const auto d = charge_drift(head);
    worst_e = std::max(worst_e, d.energy);
    worst_c = std::max(worst_c, d.max_charge());
    c.expect(d.energy <= 1e-6, entry.name + " run " + std::to_string(t) + " energy drift " + fmt(d.energy));
    c.expect(d.max_charge() <= 1e-6, entry.name + " run " + std::to_string(t) + " charge drift " + fmt(d.max_charge()));
  }
  c.note("maxEnergyDrift", worst_e);
  c.note("maxChargeDrift", worst_c);
  c.note("blowupRuns", blowups);
}

bool contains(const std::vector<Vec>& xs, const Vec& target, double tol) {
  for (const auto& x : xs) {
    if ((x - target).norm() <= tol) return true;
  }
  return false;
}

void idempotents(Check& c) {
  const auto aff = load_builtin("aff");
  double worst_null = 0.0;
  auto check_null = [&](const LieAlgebra& alg, const MetricForm& g, const std::vector<Vec>& found, const std::string& what) {
    for (const auto& x : found) {
      const double q = std::abs(g(x, x));
      worst_null = std::max(worst_null, q);
      c.expect(q <= 1e-5, what + " g1(x0,x0) = " + fmt(q));
      c.expect(idempotent_residual(alg, g, x) <= 1e-10, what + " residual " + fmt(idempotent_residual(alg, g, x)));
    }
  };

  const MetricForm lor = aff.presets.at("g-1");
  const auto f1 = idempotent_search(aff.algebra, lor);
  c.expect(contains(f1, v2(1, 1), 1e-8), "aff g-1 misses e1+e2");
  c.expect(idempotent_residual(aff.algebra, lor, v2(1, 1)) <= 1e-10, "aff g-1 residual at e1+e2");
  check_null(aff.algebra, lor, f1, "aff g-1");

  const MetricForm null = aff.presets.at("g0");
  const auto f0 = idempotent_search(aff.algebra, null);
  c.expect(contains(f0, v2(1, 0), 1e-8), "aff g0 misses e1");
  check_null(aff.algebra, null, f0, "aff g0");

  Rng rng(1007);
  int definite_runs = 0, indefinite_found = 0;
  for (std::string name : builtin_names()) {
    if (name == "abelian:n") name = "abelian:3";
    const auto entry = load_builtin(name);
    const int n = entry.algebra.dim();
    std::vector<MetricForm> definite;
    for (const auto& [preset, g] : entry.presets) {
      if (g.is_definite()) definite.push_back(g);
    }
    for (int i = 0; i < 5; ++i) definite.emplace_back(rng.metric(n, i % 2 == 0 ? 0 : n));
    for (const auto& g : definite) {
      c.expect(idempotent_search(entry.algebra, g).empty(), name + " definite metric has an idempotent");
      ++definite_runs;
    }
    for (int i = 0; i < 3 && n > 1; ++i) {
      const MetricForm g(rng.metric(n, rng.integer(1, n - 1)));
      const auto found = idempotent_search(entry.algebra, g);
      indefinite_found += static_cast<int>(found.size());
      check_null(entry.algebra, g, found, name + " indefinite");
    }
  }
  c.note("definiteMetricsSearched", definite_runs);
  c.note("indefiniteIdempotents", indefinite_found);
  c.note("max|g1(x0,x0)|", worst_null);
}

VerdictOptions verdict_options() {
  VerdictOptions o;
  o.probes = 4;
  return o;
}

void verdict_table(Check& c) {
  Rng rng(1008);
  auto expect_cert = [&](const CompletenessVerdict& v, const std::string& cert, const std::string& what) {
    c.expect(v.verdict == Verdict::CompleteCertified, what + " verdict " + to_string(v.verdict));
    if (!cert.empty()) c.expect(v.certificate == cert, what + " certificate '" + v.certificate + "'");
  };

  const auto ab = load_builtin("abelian:3");
  for (int i = 0; i < 20; ++i) {
    expect_cert(completeness_verdict(ab.algebra, MetricForm(rng.any_metric(3)), verdict_options()), "", "abelian");
  }
  const auto heis = load_builtin("heis3");
  for (int i = 0; i < 20; ++i) {
    expect_cert(completeness_verdict(heis.algebra, MetricForm(rng.metric(3, 1)), verdict_options()),
                "2-step-nilpotent", "heis3");
  }
  const auto so3 = load_builtin("so3");
  expect_cert(completeness_verdict(so3.algebra, so3.presets.at("neg-killing"), verdict_options()), "bi-invariant",
              "so3");

  const auto e2 = load_builtin("e2");
  auto o = verdict_options();
  o.semidirect = e2.semidirect;
  for (int i = 0; i < 5; ++i) {
    expect_cert(completeness_verdict(e2.algebra, MetricForm(rng.metric(3, rng.integer(1, 2))), o),
                "pseudo-compact-semidirect", "e2");
  }

  const auto aff = load_builtin("aff");
  int isotropic = 0;
  for (int i = 0; i < 40; ++i) {
    const bool definite = i % 2 == 1;
    double c1, c2, c3;
    if (definite) {
      c1 = rng.uniform(0.2, 3) * (rng.coin() ? 1 : -1);
      c3 = std::copysign(rng.uniform(0.2, 3), c1);
      c2 = rng.uniform(-0.9, 0.9) * std::sqrt(c1 * c3);
    } else {
      c1 = rng.uniform(-3, 3);
      c2 = rng.uniform(0.2, 3) * (rng.coin() ? 1 : -1);
      // Every fourth indefinite sample lies on the c3 = 0 orbit.
      c3 = i % 4 == 0 ? 0.0 : -std::copysign(rng.uniform(0.2, 3), c1);
    }
    const double det = c1 * c3 - c2 * c2;
    const MetricForm g(m2(c1, c2, c2, c3));
    const auto v = completeness_verdict(aff.algebra, g, verdict_options());
    const std::string what = "aff (" + fmt(c1) + "," + fmt(c2) + "," + fmt(c3) + ")";
    if (det > 0) {
      expect_cert(v, "definite", what);
    } else {
      c.expect(v.verdict == Verdict::IncompleteCertified, what + " verdict " + to_string(v.verdict));
    }
    const AffOrbit expected = det > 0 ? AffOrbit::Definite
                              : c3 == 0.0 ? AffOrbit::LorentzE2Isotropic
                                          : AffOrbit::LorentzE2NonIsotropic;
    isotropic += expected == AffOrbit::LorentzE2Isotropic;
    c.expect(aff_orbit_classify(c1, c2, c3) == expected, what + " orbit " + to_string(aff_orbit_classify(c1, c2, c3)));
  }
  c.note("isotropicSamples", isotropic);
}

void bi_lipschitz(Check& c) {
  Rng rng(1009);
  int samples = 0, violations = 0;
  for (const std::string name : {"aff", "heis3", "sl2"}) {
    const auto entry = load_builtin(name);
    const int n = entry.algebra.dim();
    const AdjointChart chart = name == "aff" ? aff_chart() : exp_chart(entry.algebra);
    for (int b = 0; b < 20; ++b) {
      const MetricForm g(rng.any_metric(n));
      const Mat basis = signature_decompose(g).basis;
      const Mat m = rng.invertible(n);
      const auto fa = make_clairaut_field_from_basis(chart, g, basis * m);
      const auto fb = make_clairaut_field_from_basis(chart, g, basis);
      std::vector<ProbeSample> s;
      for (int i = 0; i < 17; ++i) {
        Vec p = rng.gaussian(n);
        if (name == "aff") p[0] = rng.uniform(0.1, 10);
        s.push_back({p, rng.gaussian(n)});
      }
      const auto probe = bi_lipschitz_probe(fa, fb, s);
      const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(m.transpose() * m).eigenvalues();
      for (double r : probe.ratios) {
        // Rounding allowance only.
        const bool inside = r >= ev[0] * (1 - 1e-10) && r <= ev[n - 1] * (1 + 1e-10);
        violations += !inside;
        ++samples;
      }
    }
  }
  c.expect(samples >= 1000, "only " + std::to_string(samples) + " samples");
  c.expect(violations == 0, std::to_string(violations) + " ratios outside the eigenvalue bounds");
  c.note("samples", samples);
  c.note("violations", violations);

  const auto aff = load_builtin("aff");
  std::vector<ProbeSample> ray;
  for (double t : log_grid(10, 1e4, 31)) ray.push_back({v2(t, 0), v2(1, 0)});
  const auto p = bi_lipschitz_probe(make_clairaut_field(aff_chart(), aff.presets.at("g0")),
                                    make_clairaut_field(aff_chart(), aff.presets.at("g-1")), ray, true);
  c.expect(p.divergent, "h0 vs h-1 probe not flagged divergent");
  c.note("h0/h-1 ratioMin", p.ratio_min);
}

void sharp_bound(Check& c) {
  Rng rng(1010);
  double worst_gap = 0.0, worst_eq = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto entry = load_builtin(kCatalog[t % kCatalog.size()]);
    const int n = entry.algebra.dim();
    const MetricForm g(rng.any_metric(n));
    const auto w = signature_decompose(g);
    const Mat ainv = Mat(-ad_matrix(entry.algebra, rng.gaussian(n))).exp();
    const double bound = 1.0 / std::pow(ad_operator_norm(ainv.inverse(), w.g_tilde), 2);
    const SymForm h = clairaut_form_at(ainv, g, w);
    const auto re = relative_eigen(h, w.g_tilde);
    worst_gap = std::max(worst_gap, bound - re.values[0]);
    c.expect(re.values[0] >= bound - 1e-10, entry.name + " lambda_min " + fmt(re.values[0]) + " < " + fmt(bound));
    const Vec u = re.vectors.col(0);
    const double eq = std::abs(u.dot(h * u) / u.dot(w.g_tilde * u) - bound) / std::max(1.0, bound);
    worst_eq = std::max(worst_eq, eq);
    c.expect(eq <= 1e-8, entry.name + " extremal quotient off by " + fmt(eq));
  }
  c.note("maxBoundExcess", worst_gap);
  c.note("maxEqualityErr", worst_eq);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"incomplete geodesics on aff (g-1 and g0)", incomplete_geodesics},
      {"Clairaut closed forms on aff", clairaut_closed_forms},
      {"curve length bounds on aff", length_bounds},
      {"exponential adjoint growth on aff", exponential_growth},
      {"growth taxonomy", growth_taxonomy},
      {"energy and charge conservation", conservation},
      {"idempotent search", idempotents},
      {"completeness verdict table and aff orbits", verdict_table},
      {"bi-Lipschitz basis change and divergence", bi_lipschitz},
      {"sharp lower bound on the Clairaut spectrum", sharp_bound},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !c.ok();
    std::printf("%s criterion %zu: %s (%.1fs) %s\n", c.ok() ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                c.summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
