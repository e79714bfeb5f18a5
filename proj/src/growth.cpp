#include "liegeo/growth.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

namespace liegeo {

SingularRange singular_range(const Mat& a, const SymForm& g_tilde) {
  if (a.rows() != a.cols() || a.rows() != g_tilde.rows()) {
    throw ValidationError("singular_range: dimension mismatch");
  }
  Eigen::LLT<Mat> llt(g_tilde);
  if (llt.info() != Eigen::Success) throw ValidationError("reference form is not positive definite");
  // With gTilde = L L^T, the gTilde-operator norm of A is the spectral norm of L^T A L^{-T}.
  const Mat lt = llt.matrixU();
  const Mat m = lt * a * lt.inverse();
  Eigen::JacobiSVD<Mat> svd(m);
  const Vec& s = svd.singularValues();
  return {s.minCoeff(), s.maxCoeff()};
}

double ad_operator_norm(const Mat& a, const SymForm& g_tilde) {
  return singular_range(a, g_tilde).lam_plus;
}

double tilde_norm(const Vec& v, const SymForm& g_tilde) { return std::sqrt(v.dot(g_tilde * v)); }

const char* to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::Bounded:
      return "Bounded";
    case GrowthClass::Linear:
      return "Linear";
    case GrowthClass::Polynomial:
      return "Polynomial";
    case GrowthClass::Exponential:
      return "Exponential";
    case GrowthClass::Undetermined:
      return "Undetermined";
  }
  return "?";
}

std::vector<double> log_grid(double t0, double t1, int count) {
  if (!(t0 > 0.0) || !(t1 > t0) || count < 2) {
    throw ValidationError("log_grid: need 0 < t0 < t1 and at least two points");
  }
  std::vector<double> out(count);
  const double l0 = std::log(t0), l1 = std::log(t1);
  for (int i = 0; i < count; ++i) out[i] = std::exp(l0 + (l1 - l0) * i / (count - 1));
  out.front() = t0;
  out.back() = t1;
  return out;
}

GrowthReport one_param_growth_scan(const LieAlgebra& alg, const Vec& a, const SymForm& g_tilde,
                                   const std::vector<double>& t_grid) {
  if (a.size() != alg.dim()) throw ValidationError("growth scan: direction length mismatch");
  if (std::abs(tilde_norm(a, g_tilde) - 1.0) > 1e-9) {
    throw ValidationError("growth scan: direction must have unit norm for the Riemannian companion");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw ValidationError("growth scan: t grid must be positive and strictly increasing");
    }
  }
  GrowthReport rep;
  rep.direction = a;
  const Mat ad = ad_matrix(alg, a);
  // For nilpotent ad_a the exponential is a finite sum, evaluated exactly in Horner form;
  // scaling and squaring would lose digits at large t.
  std::vector<Mat> powers{Mat::Identity(alg.dim(), alg.dim())};
  const double ad_scale = std::max(1.0, max_abs(ad));
  while (static_cast<int>(powers.size()) <= alg.dim() && max_abs(powers.back()) > 0.0) {
    Mat next = powers.back() * ad;
    if (max_abs(next) <= 1e-14 * std::pow(ad_scale, static_cast<double>(powers.size()))) next.setZero();
    powers.push_back(std::move(next));
  }
  const bool nilpotent = max_abs(powers.back()) == 0.0;
  for (double t : t_grid) {
    Mat e;
    if (nilpotent) {
      e = Mat::Zero(alg.dim(), alg.dim());
      for (std::size_t k = powers.size(); k-- > 0;) e = e * (t / static_cast<double>(k + 1)) + powers[k];
    } else {
      e = (t * ad).exp();
    }
    double norm = e.allFinite() ? ad_operator_norm(e, g_tilde) : INFINITY;
    if (!std::isfinite(norm) || norm > 1e300) {
      rep.truncated = true;
      break;
    }
    rep.samples.push_back({t, norm});
  }
  return rep;
}

namespace {

struct LineFit {
  double slope = 0.0;
  double r_squared = 1.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  // Constant data is fitted perfectly by any horizontal line.
  f.r_squared = (syy <= 1e-300 || sxx <= 0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace

GrowthFit growth_classify(const std::vector<GrowthSample>& samples) {
  GrowthFit fit;
  if (samples.size() < 20) {
    fit.note = "fewer than 20 samples";
    return fit;
  }
  if (samples.back().t < 100.0 * samples.front().t) {
    fit.note = "t grid spans less than two decades";
    return fit;
  }
  const std::size_t start = samples.size() / 2;
  std::vector<double> t, logt, logn;
  double n_min = INFINITY, n_max = 0.0;
  for (std::size_t i = start; i < samples.size(); ++i) {
    t.push_back(samples[i].t);
    logt.push_back(std::log(samples[i].t));
    logn.push_back(std::log(samples[i].norm_ad));
    n_min = std::min(n_min, samples[i].norm_ad);
    n_max = std::max(n_max, samples[i].norm_ad);
  }
  const LineFit ex = fit_line(t, logn);
  const LineFit pw = fit_line(logt, logn);
  fit.exp_slope = ex.slope;
  fit.loglog_slope = pw.slope;

  if (ex.slope >= 0.1 && ex.r_squared >= 0.999) {
    fit.cls = GrowthClass::Exponential;
    fit.rate = ex.slope;
    fit.r_squared = ex.r_squared;
    return fit;
  }
  fit.r_squared = pw.r_squared;
  if (pw.slope < 0.1 && n_max < 1.5 * n_min) {
    fit.cls = GrowthClass::Bounded;
    return fit;
  }
  const int d = static_cast<int>(std::lround(pw.slope));
  if (d >= 2) {
    fit.cls = GrowthClass::Polynomial;
    fit.degree = d;
  } else if (d == 1) {
    fit.cls = GrowthClass::Linear;
    fit.degree = 1;
  } else {
    std::ostringstream os;
    os << "log-log slope " << pw.slope << " with range ratio " << n_max / n_min
       << " fits no growth class";
    fit.note = os.str();
  }
  return fit;
}

double idempotent_residual(const LieAlgebra& alg, const MetricForm& g, const Vec& x) {
  return (euler_arnold_rhs(alg, g, x) - x).norm();
}

std::vector<Vec> idempotent_search(const LieAlgebra& alg, const MetricForm& g,
                                   const IdempotentOptions& opts) {
  std::vector<Vec> found;
  // g1(x0, x0) = g1(x0, [x0, x0]) = 0 for any idempotent, impossible for definite g1.
  if (g.is_definite()) return found;

  const int n = alg.dim();
  const Mat& gm = g.matrix();
  const Eigen::PartialPivLU<Mat> g_lu(gm);
  std::vector<Mat> ads;
  for (int i = 0; i < n; ++i) ads.push_back(ad_matrix(alg, alg.basis(i)));

  // B(x, y) = ad_x^dagger y = G^{-1} ad_x^T G y.
  auto residual = [&](const Vec& x) -> Vec {
    return g_lu.solve(ad_matrix(alg, x).transpose() * (gm * x)) - x;
  };
  auto jacobian = [&](const Vec& x) -> Mat {
    const Vec gx = gm * x;
    Mat j(n, n);
    for (int k = 0; k < n; ++k) j.col(k) = ads[k].transpose() * gx;  // d/dδ of B(δ, x)
    j += ad_matrix(alg, x).transpose() * gm;                         // B(x, δ)
    return g_lu.solve(j) - Mat::Identity(n, n);
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  for (int r = 0; r < opts.restarts; ++r) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = normal(rng);
    x.normalize();

    Vec f = residual(x);
    double fn = f.norm();
    for (int it = 0; it < opts.max_iterations && fn > 1e-3 * opts.tol; ++it) {
      const Vec step = jacobian(x).colPivHouseholderQr().solve(f);
      if (!step.allFinite()) break;
      double alpha = 1.0;
      Vec trial = x - step;
      Vec ft = residual(trial);
      while (ft.norm() >= fn && alpha > 1e-6) {
        alpha *= 0.5;
        trial = x - alpha * step;
        ft = residual(trial);
      }
      if (ft.norm() >= fn) break;
      x = trial;
      f = ft;
      fn = f.norm();
    }
    if (!(fn <= opts.tol) || x.norm() < 1e-6) continue;
    const bool dup = std::any_of(found.begin(), found.end(), [&](const Vec& y) {
      return (y - x).norm() < opts.dedup_distance;
    });
    if (!dup) found.push_back(x);
  }
  std::sort(found.begin(), found.end(), [](const Vec& a, const Vec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  });
  return found;
}

namespace {

// Frobenius-orthonormal basis of symmetric matrices.
std::vector<Mat> symmetric_basis(int m) {
  std::vector<Mat> out;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      Mat e = Mat::Zero(m, m);
      if (i == j) {
        e(i, i) = 1.0;
      } else {
        e(i, j) = e(j, i) = 1.0 / std::sqrt(2.0);
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace

std::optional<SymForm> invariant_pd_form(int dim, const std::vector<Mat>& reps,
                                         const InvariantFormOptions& opts) {
  if (dim < 1) throw ValidationError("invariant_pd_form: dimension must be >= 1");
  for (const auto& r : reps) {
    if (r.rows() != dim || r.cols() != dim) throw ValidationError("invariant_pd_form: matrix size mismatch");
  }
  const auto sym = symmetric_basis(dim);
  const int p = static_cast<int>(sym.size());

  // Null space of S -> (R^T S + S R) over all R.
  std::vector<Mat> space;
  if (reps.empty()) {
    space = sym;
  } else {
    Mat op(static_cast<Eigen::Index>(reps.size()) * dim * dim, p);
    for (int k = 0; k < p; ++k) {
      for (std::size_t r = 0; r < reps.size(); ++r) {
        const Mat img = reps[r].transpose() * sym[k] + sym[k] * reps[r];
        op.block(static_cast<Eigen::Index>(r) * dim * dim, k, dim * dim, 1) =
            Eigen::Map<const Vec>(img.data(), dim * dim);
      }
    }
    Eigen::JacobiSVD<Mat> svd(op, Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    const double thr = 1e-10 * std::max(1.0, s.size() ? s[0] : 0.0);
    for (int k = 0; k < p; ++k) {
      const double sv = k < s.size() ? s[k] : 0.0;
      if (sv > thr) continue;
      Mat m = Mat::Zero(dim, dim);
      for (int q = 0; q < p; ++q) m += svd.matrixV()(q, k) * sym[q];
      space.push_back(std::move(m));
    }
  }
  if (space.empty()) return std::nullopt;

  const int q = static_cast<int>(space.size());
  auto assemble = [&](const Vec& c) {
    Mat s = Mat::Zero(dim, dim);
    for (int k = 0; k < q; ++k) s += c[k] * space[k];
    return s;
  };
  auto min_eig = [&](const Mat& s, Vec* vec) {
    Eigen::SelfAdjointEigenSolver<Mat> es(s);
    if (vec) *vec = es.eigenvectors().col(0);
    return es.eigenvalues()[0];
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Vec best_c;
  double best = -INFINITY;
  for (int r = 0; r < opts.restarts; ++r) {
    Vec c(q);
    if (r == 0) {
      // Projection of the identity onto the invariant subspace.
      for (int k = 0; k < q; ++k) c[k] = space[k].trace();
      if (c.norm() < 1e-12) continue;
    } else {
      for (int k = 0; k < q; ++k) c[k] = normal(rng);
    }
    c.normalize();
    for (int it = 0; it < opts.iterations; ++it) {
      Vec v;
      const double lam = min_eig(assemble(c), &v);
      if (lam > best) {
        best = lam;
        best_c = c;
      }
      Vec grad(q);
      for (int k = 0; k < q; ++k) grad[k] = v.dot(space[k] * v);
      grad -= grad.dot(c) * c;  // tangent to the sphere
      if (grad.norm() < 1e-14) break;
      c += (0.5 / std::sqrt(1.0 + it)) * grad;
      c.normalize();
    }
  }
  if (!(best > opts.tol)) return std::nullopt;
  SymForm s = assemble(best_c);
  s = 0.5 * (s + s.transpose());
  return SymForm(s * (dim / s.trace()));
}

BoundFamily parse_bound_family(const std::string& name) {
  if (name == "affine") return BoundFamily::Affine;
  if (name == "rlogr") return BoundFamily::RLogR;
  if (name == "power") return BoundFamily::Power;
  throw ValidationError("unknown bounding family '" + name + "' (expected affine, rlogr, power)");
}

const char* to_string(PrimaryBound b) {
  return b == PrimaryBound::PrimarilyComplete ? "PrimarilyComplete" : "NotPrimarilyComplete";
}

PrimaryBound primary_bound_check(BoundFamily family, const std::vector<double>& params) {
  switch (family) {
    case BoundFamily::Affine:
      if (params.size() != 2 || !(params[0] > 0.0) || !(params[1] >= 0.0)) {
        throw ValidationError("affine bound needs parameters a > 0, b >= 0");
      }
      // dr / (a + b r) integrates to a logarithm (or a linear function when b = 0).
      return PrimaryBound::PrimarilyComplete;
    case BoundFamily::RLogR:
      if (!params.empty()) throw ValidationError("r log r bound takes no parameters");
      // The integral is log log r.
      return PrimaryBound::PrimarilyComplete;
    case BoundFamily::Power:
      if (params.size() != 1 || !std::isfinite(params[0])) {
        throw ValidationError("power bound needs one exponent q");
      }
      return params[0] <= 1.0 ? PrimaryBound::PrimarilyComplete : PrimaryBound::NotPrimarilyComplete;
  }
  throw ValidationError("unknown bounding family");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::CompleteCertified:
      return "CompleteCertified";
    case Verdict::IncompleteCertified:
      return "IncompleteCertified";
    case Verdict::NumericallyIncomplete:
      return "NumericallyIncomplete";
    case Verdict::Undetermined:
      return "Undetermined";
  }
  return "?";
}

bool is_bi_invariant(const LieAlgebra& alg, const MetricForm& g) {
  const Mat& gm = g.matrix();
  const double scale = std::max(1.0, alg.scale()) * std::max(1.0, max_abs(gm));
  for (int i = 0; i < alg.dim(); ++i) {
    const Mat ad = ad_matrix(alg, alg.basis(i));
    if (max_abs(gm * ad + ad.transpose() * gm) > 1e-10 * scale) return false;
  }
  return true;
}

namespace {

bool killing_negative_definite(const LieAlgebra& alg) {
  const SymForm k = killing_form(alg);
  Eigen::SelfAdjointEigenSolver<Mat> es(k, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  return es.eigenvalues().maxCoeff() < -1e-10 * scale;
}

bool semidirect_certified(const LieAlgebra& alg, const SemidirectDecl& decl) {
  LieAlgebra built = semidirect_product(decl.k, decl.rep, decl.m);
  if (built.dim() != alg.dim()) return false;
  for (std::size_t i = 0; i < built.constants().size(); ++i) {
    if (std::abs(built.constants()[i] - alg.constants()[i]) > 1e-12 * std::max(1.0, alg.scale())) {
      return false;
    }
  }
  // Pseudo-compact K: an ad(k)-invariant inner product exists. rho(K) pre-compact: a
  // rho_*-invariant inner product exists.
  std::vector<Mat> k_ads;
  for (int i = 0; i < decl.k.dim(); ++i) k_ads.push_back(ad_matrix(decl.k, decl.k.basis(i)));
  return invariant_pd_form(decl.k.dim(), k_ads).has_value() &&
         invariant_pd_form(decl.m, decl.rep).has_value();
}

}  // namespace

std::optional<std::string> linear_growth_certificate(const LieAlgebra& alg,
                                                     const std::optional<SemidirectDecl>& semidirect) {
  if (alg.is_abelian()) return "abelian";
  const auto nil = nilpotency_step(alg);
  if (nil.step && *nil.step <= 2) return "2-step-nilpotent";
  if (killing_negative_definite(alg)) return "compact-type";
  if (semidirect && semidirect_certified(alg, *semidirect)) return "pseudo-compact-semidirect";
  return std::nullopt;
}

CompletenessVerdict completeness_verdict(const LieAlgebra& alg, const MetricForm& g,
                                         const VerdictOptions& opts) {
  if (g.dim() != alg.dim()) throw ValidationError("completeness_verdict: metric dimension mismatch");
  CompletenessVerdict out;
  auto certify = [&](std::string tag) {
    out.verdict = Verdict::CompleteCertified;
    out.certificate = std::move(tag);
    return out;
  };

  if (alg.is_abelian()) return certify("abelian");
  if (is_bi_invariant(alg, g)) return certify("bi-invariant");
  if (g.is_definite()) return certify("definite");
  const auto nil = nilpotency_step(alg);
  if (nil.step && *nil.step <= 2) return certify("2-step-nilpotent");
  if (killing_negative_definite(alg)) return certify("compact-type");
  if (opts.semidirect && semidirect_certified(alg, *opts.semidirect)) {
    return certify("pseudo-compact-semidirect");
  }

  IdempotentOptions iopts;
  iopts.restarts = opts.restarts;
  iopts.tol = opts.newton_tol;
  iopts.seed = opts.seed;
  const auto idem = idempotent_search(alg, g, iopts);
  if (!idem.empty()) {
    out.verdict = Verdict::IncompleteCertified;
    out.witness = idem.front();
    return out;
  }

  const int n = alg.dim();
  const WickFrame wick = signature_decompose(g);

  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::vector<Vec> starts;
  for (int p = 0; p < opts.probes; ++p) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = normal(rng);
    starts.push_back(x / tilde_norm(x, wick.g_tilde));
  }
  auto run_probe = [&](const Vec& x0) {
    const auto traj = integrate_geodesic(alg, g, x0, opts.probe_t_max, opts.flow);
    return ProbeRecord{x0, traj.status, traj.samples.back().x.norm()};
  };
  if (opts.parallel_probes) {
    std::vector<std::future<ProbeRecord>> jobs;
    for (const auto& x0 : starts) jobs.push_back(std::async(std::launch::async, run_probe, x0));
    for (auto& j : jobs) out.probes.push_back(j.get());
  } else {
    for (const auto& x0 : starts) out.probes.push_back(run_probe(x0));
  }

  const auto grid = opts.t_grid.empty() ? log_grid(0.1, 1e4, 64) : opts.t_grid;
  for (int i = 0; i < n; ++i) {
    const Vec a = alg.basis(i) / tilde_norm(alg.basis(i), wick.g_tilde);
    auto rep = one_param_growth_scan(alg, a, wick.g_tilde, grid);
    rep.fit = growth_classify(rep.samples);
    out.growth_reports.push_back(std::move(rep));
  }

  for (const auto& p : out.probes) {
    if (p.status.kind == FlowStatus::Kind::Blowup) {
      out.verdict = Verdict::NumericallyIncomplete;
      out.blowup = p;
      return out;
    }
  }
  out.verdict = Verdict::Undetermined;
  return out;
}

}  // namespace liegeo
