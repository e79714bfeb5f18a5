#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liegeo/algebra.hpp"
#include "liegeo/flow.hpp"
#include "liegeo/metric.hpp"

namespace liegeo {

struct SingularRange {
  double lam_minus;
  double lam_plus;
};

/// Extreme singular values of A with respect to the Euclidean product gTilde, i.e. square roots
/// of the extreme eigenvalues of A* A with A* = gTilde^{-1} A^T gTilde.
SingularRange singular_range(const Mat& a, const SymForm& g_tilde);

/// Operator norm of A for gTilde (lambda_+).
double ad_operator_norm(const Mat& a, const SymForm& g_tilde);

/// Norm of a vector under gTilde.
double tilde_norm(const Vec& v, const SymForm& g_tilde);

enum class GrowthClass { Bounded, Linear, Polynomial, Exponential, Undetermined };
const char* to_string(GrowthClass c);

struct GrowthFit {
  GrowthClass cls = GrowthClass::Undetermined;
  int degree = 0;        // Polynomial(d); 1 for Linear, 0 for Bounded
  double rate = 0.0;     // Exponential(rate)
  double r_squared = 0;  // R^2 of the winning regression
  double loglog_slope = 0.0;
  double exp_slope = 0.0;
  std::string note;
};

struct GrowthSample {
  double t;
  double norm_ad;
};

struct GrowthReport {
  Vec direction;
  std::vector<GrowthSample> samples;
  bool truncated = false;  // grid cut short by overflow of exp(t ad_a)
  GrowthFit fit;
};

/// `count` points log-spaced on [t0, t1].
std::vector<double> log_grid(double t0, double t1, int count);

/// Records ||exp(t ad_a)|| (scaling-and-squaring exponential) for each t in the grid.
/// `a` must have unit gTilde-norm (within 1e-9); the grid must be positive and increasing.
GrowthReport one_param_growth_scan(const LieAlgebra& alg, const Vec& a, const SymForm& g_tilde,
                                   const std::vector<double>& t_grid);

/// Regresses the trailing half of the samples: log N against t and log N against log t.
/// Needs >= 20 samples spanning >= 2 decades in t, otherwise Undetermined.
GrowthFit growth_classify(const std::vector<GrowthSample>& samples);

struct IdempotentOptions {
  int restarts = 64;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  int max_iterations = 100;
  double dedup_distance = 1e-6;
};

/// Nonzero solutions of ad_x^dagger x = x found by damped Newton from random unit starts.
/// Empty for definite metrics. Results are deduplicated and sorted.
std::vector<Vec> idempotent_search(const LieAlgebra& alg, const MetricForm& g,
                                   const IdempotentOptions& opts = {});

/// Residual ||ad_x^dagger x - x||.
double idempotent_residual(const LieAlgebra& alg, const MetricForm& g, const Vec& x);

struct InvariantFormOptions {
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int restarts = 32;
  int iterations = 400;
};

/// Positive-definite S with R^T S + S R = 0 for every R, normalized to trace = dim; nullopt when
/// the best minimum eigenvalue found on the unit Frobenius sphere does not exceed tol.
std::optional<SymForm> invariant_pd_form(int dim, const std::vector<Mat>& reps,
                                         const InvariantFormOptions& opts = {});

enum class BoundFamily { Affine, RLogR, Power };
enum class PrimaryBound { PrimarilyComplete, NotPrimarilyComplete };

/// "affine", "rlogr", "power"; throws ValidationError otherwise.
BoundFamily parse_bound_family(const std::string& name);
const char* to_string(PrimaryBound b);

/// Whether the integral of dr / phi(r) diverges. Affine takes {a, b} (a > 0, b >= 0);
/// RLogR takes no parameters; Power takes {q}.
PrimaryBound primary_bound_check(BoundFamily family, const std::vector<double>& params);

struct SemidirectDecl {
  LieAlgebra k;
  std::vector<Mat> rep;
  int m = 0;
  bool operator==(const SemidirectDecl& o) const { return k == o.k && rep == o.rep && m == o.m; }
};

enum class Verdict { CompleteCertified, IncompleteCertified, NumericallyIncomplete, Undetermined };
const char* to_string(Verdict v);

struct VerdictOptions {
  std::optional<SemidirectDecl> semidirect;
  int probes = 8;
  double probe_t_max = 10.0;
  std::uint64_t seed = 0;
  int restarts = 64;
  double newton_tol = 1e-10;
  FlowOptions flow;
  std::vector<double> t_grid;  // empty: log_grid(0.1, 1e4, 64)
  bool parallel_probes = true;
};

struct ProbeRecord {
  Vec x0;
  FlowStatus status;
  double final_norm = 0.0;
};

struct CompletenessVerdict {
  Verdict verdict = Verdict::Undetermined;
  std::string certificate;               // set for CompleteCertified
  std::optional<Vec> witness;            // idempotent for IncompleteCertified
  std::optional<ProbeRecord> blowup;     // trajectory reference for NumericallyIncomplete
  std::vector<GrowthReport> growth_reports;
  std::vector<ProbeRecord> probes;
};

/// Decision ladder, first match wins: abelian, bi-invariant, definite, 2-step nilpotent,
/// compact type (Killing negative definite), declared pseudo-compact semidirect product,
/// idempotent witness, blowup among random probes, otherwise Undetermined.
CompletenessVerdict completeness_verdict(const LieAlgebra& alg, const MetricForm& g,
                                         const VerdictOptions& opts = {});

/// True when every ad_{e_i} is g1-skew within 1e-10 relative.
bool is_bi_invariant(const LieAlgebra& alg, const MetricForm& g);

/// Structural linear-growth certificate (abelian, 2-step, compact type, pseudo-compact
/// semidirect) if one applies, independent of the metric.
std::optional<std::string> linear_growth_certificate(const LieAlgebra& alg,
                                                     const std::optional<SemidirectDecl>& semidirect);

}  // namespace liegeo
