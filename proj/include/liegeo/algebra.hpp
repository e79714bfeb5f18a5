#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liegeo/types.hpp"

namespace liegeo {

/// Finite-dimensional real Lie algebra given by structure constants
/// [e_i, e_j] = sum_k C(i,j,k) e_k, stored dense. Indices are 0-based.
class LieAlgebra {
 public:
  /// Zero bracket on R^n.
  explicit LieAlgebra(int dim);

  /// `constants` is the row-major n*n*n tensor C[i][j][k]. Throws ValidationError on size mismatch.
  LieAlgebra(int dim, std::vector<double> constants, std::vector<std::string> labels = {});

  /// Bracket table from i<j pairs; the antisymmetric half is filled in automatically.
  struct BracketEntry {
    int i;
    int j;
    Vec coeffs;
  };
  static LieAlgebra from_brackets(int dim, const std::vector<BracketEntry>& entries,
                                  std::vector<std::string> labels = {});

  int dim() const { return dim_; }
  double c(int i, int j, int k) const { return constants_[index(i, j, k)]; }
  const std::vector<double>& constants() const { return constants_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// max |C(i,j,k)|; zero exactly for abelian algebras.
  double scale() const;
  bool is_abelian() const { return scale() == 0.0; }

  Vec basis(int i) const;

  bool operator==(const LieAlgebra& other) const = default;

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
  }

  int dim_;
  std::vector<double> constants_;
  std::vector<std::string> labels_;
};

struct AlgebraViolation {
  enum class Kind { Antisymmetry, Jacobi };
  Kind kind;
  // Antisymmetry: (i, j, k). Jacobi: triple (i, j, k) and output component l.
  int i, j, k, l;
  double magnitude;
};

struct AlgebraCheck {
  std::vector<AlgebraViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks antisymmetry and the Jacobi identity. Thresholds are tol * s for antisymmetry and
/// tol * s^2 for Jacobi (quadratic in C), with s = max(1, max|C|).
AlgebraCheck validate_algebra(const LieAlgebra& alg, double tol = 1e-12);

Vec bracket(const LieAlgebra& alg, const Vec& a, const Vec& b);

/// Column j is [a, e_j].
Mat ad_matrix(const LieAlgebra& alg, const Vec& a);

struct NilpotencyResult {
  std::optional<int> step;  // empty when the lower central series stalls at a nonzero space
  bool rank_ambiguous = false;
  std::vector<int> series_dims;  // dim g, dim [g,g], ...
};

/// Lower central series with singular-value rank decisions relative to max|C|.
NilpotencyResult nilpotency_step(const LieAlgebra& alg, double rel_tol = 1e-9);

/// K(i,j) = trace(ad_{e_i} ad_{e_j}).
SymForm killing_form(const LieAlgebra& alg);

/// k-algebra extended by an m-dimensional module V through rep[i] = rho_*(u_i):
/// [(u1,w1),(u2,w2)] = ([u1,u2], rho(u1) w2 - rho(u2) w1). The k basis comes first.
/// Throws ValidationError when rep is not a homomorphism into gl(m).
LieAlgebra semidirect_product(const LieAlgebra& k_alg, const std::vector<Mat>& rep, int m,
                              double tol = 1e-10);

/// Frobenius residual of rho([u_i,u_j]) - [rho(u_i), rho(u_j)], maximized over pairs.
double homomorphism_residual(const LieAlgebra& k_alg, const std::vector<Mat>& rep);

}  // namespace liegeo
