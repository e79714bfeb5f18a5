#pragma once

#include "liegeo/types.hpp"

namespace liegeo {

/// Nondegenerate symmetric bilinear form g1 on the algebra, any signature.
class MetricForm {
 public:
  /// Throws ValidationError if G is not square, not symmetric, or degenerate
  /// (|det G| <= 1e-12 * max|G|^n).
  explicit MetricForm(SymForm g);

  const SymForm& matrix() const { return g_; }
  int dim() const { return static_cast<int>(g_.rows()); }

  double operator()(const Vec& u, const Vec& v) const { return u.dot(g_ * v); }

  /// Number of negative eigenvalues.
  int negative_index() const;
  bool is_definite() const;

  bool operator==(const MetricForm& other) const { return g_ == other.g_; }

 private:
  SymForm g_;
};

/// A G-orthonormal basis (columns of `basis`) with its signs, sorted negatives first, plus the
/// involution psi (psi b_i = eps_i b_i) and the Riemannian companion gTilde that makes the same
/// basis orthonormal. G = gTilde * psi.
struct WickFrame {
  Mat basis;
  Eigen::VectorXi eps;
  Mat psi;
  SymForm g_tilde;

  int negative_count() const { return static_cast<int>((eps.array() < 0).count()); }
};

/// Orthonormal frame from the symmetric eigendecomposition, columns scaled by 1/sqrt|lambda|.
/// Eigenvector signs are fixed so the largest-magnitude entry of each column is positive.
/// Throws NumericalError if some |lambda| < tol * max|lambda|.
WickFrame signature_decompose(const MetricForm& g, double tol = 1e-12);

/// G^{-1} M^T G, the g1-adjoint of M.
Mat metric_adjoint(const Mat& m, const MetricForm& g);

/// M^T B M. Throws ValidationError if M is singular.
SymForm transform_form(const Mat& m, const SymForm& b);

/// Aut(aff) orbit type of c1 dx^2 + c2 (dx dy + dy dx) + c3 dy^2 (scaled by 1/x^2).
enum class AffOrbit { Definite, LorentzE2NonIsotropic, LorentzE2Isotropic };

/// Throws DomainError when c1*c3 - c2^2 == 0 (relative 1e-14 cutoff).
AffOrbit aff_orbit_classify(double c1, double c2, double c3);

const char* to_string(AffOrbit orbit);

}  // namespace liegeo
