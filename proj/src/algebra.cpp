#include "liegeo/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace liegeo {

namespace {

std::vector<std::string> default_labels(int dim, std::vector<std::string> labels) {
  if (labels.empty()) {
    for (int i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i + 1));
  }
  if (static_cast<int>(labels.size()) != dim) {
    throw ValidationError("label count " + std::to_string(labels.size()) +
                          " does not match dimension " + std::to_string(dim));
  }
  return labels;
}

}  // namespace

LieAlgebra::LieAlgebra(int dim)
    : LieAlgebra(dim, std::vector<double>(static_cast<std::size_t>(std::max(dim, 0)) *
                                          std::max(dim, 0) * std::max(dim, 0))) {}

LieAlgebra::LieAlgebra(int dim, std::vector<double> constants, std::vector<std::string> labels)
    : dim_(dim), constants_(std::move(constants)) {
  if (dim < 1) throw ValidationError("algebra dimension must be >= 1, got " + std::to_string(dim));
  const auto expected = static_cast<std::size_t>(dim) * dim * dim;
  if (constants_.size() != expected) {
    std::ostringstream os;
    os << "structure-constant tensor has " << constants_.size() << " entries, expected " << expected
       << " for dim " << dim;
    throw ValidationError(os.str());
  }
  labels_ = default_labels(dim, std::move(labels));
}

LieAlgebra LieAlgebra::from_brackets(int dim, const std::vector<BracketEntry>& entries,
                                     std::vector<std::string> labels) {
  if (dim < 1) throw ValidationError("algebra dimension must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  auto at = [&](int i, int j, int k) -> double& {
    return c[(static_cast<std::size_t>(i) * dim + j) * dim + k];
  };
  std::vector<bool> seen(static_cast<std::size_t>(dim) * dim, false);
  for (const auto& e : entries) {
    if (e.i < 0 || e.j >= dim || e.i >= e.j) {
      throw ValidationError("bracket entry (" + std::to_string(e.i + 1) + "," +
                            std::to_string(e.j + 1) + ") must satisfy 1 <= i < j <= dim");
    }
    if (e.coeffs.size() != dim) {
      throw ValidationError("bracket entry coefficient length " + std::to_string(e.coeffs.size()) +
                            " does not match dimension " + std::to_string(dim));
    }
    auto flag = seen[static_cast<std::size_t>(e.i) * dim + e.j];
    if (flag) {
      throw ValidationError("duplicate bracket entry (" + std::to_string(e.i + 1) + "," +
                            std::to_string(e.j + 1) + ")");
    }
    flag = true;
    for (int k = 0; k < dim; ++k) {
      at(e.i, e.j, k) = e.coeffs[k];
      at(e.j, e.i, k) = -e.coeffs[k];
    }
  }
  return LieAlgebra(dim, std::move(c), std::move(labels));
}

double LieAlgebra::scale() const {
  double s = 0.0;
  for (double v : constants_) s = std::max(s, std::abs(v));
  return s;
}

Vec LieAlgebra::basis(int i) const { return Vec::Unit(dim_, i); }

AlgebraCheck validate_algebra(const LieAlgebra& alg, double tol) {
  AlgebraCheck out;
  const int n = alg.dim();
  const double s = std::max(1.0, alg.scale());
  const double anti_thr = tol * s;
  const double jac_thr = tol * s * s;

  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double r = alg.c(i, j, k) + alg.c(j, i, k);
        // i == j gives 2*C(i,i,k), which must vanish too.
        if (std::abs(r) > anti_thr) {
          out.violations.push_back({AlgebraViolation::Kind::Antisymmetry, i, j, k, -1, std::abs(r)});
        }
      }
    }
  }

  // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j], component m.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        for (int m = 0; m < n; ++m) {
          double sum = 0.0;
          for (int l = 0; l < n; ++l) {
            sum += alg.c(i, j, l) * alg.c(l, k, m) + alg.c(j, k, l) * alg.c(l, i, m) +
                   alg.c(k, i, l) * alg.c(l, j, m);
          }
          if (std::abs(sum) > jac_thr) {
            out.violations.push_back({AlgebraViolation::Kind::Jacobi, i, j, k, m, std::abs(sum)});
          }
        }
      }
    }
  }
  return out;
}

Vec bracket(const LieAlgebra& alg, const Vec& a, const Vec& b) {
  const int n = alg.dim();
  if (a.size() != n || b.size() != n) throw ValidationError("bracket: vector length mismatch");
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double w = a[i] * b[j];
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) out[k] += alg.c(i, j, k) * w;
    }
  }
  return out;
}

Mat ad_matrix(const LieAlgebra& alg, const Vec& a) {
  const int n = alg.dim();
  if (a.size() != n) throw ValidationError("ad_matrix: vector length mismatch");
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) out(k, j) += a[i] * alg.c(i, j, k);
    }
  }
  return out;
}

NilpotencyResult nilpotency_step(const LieAlgebra& alg, double rel_tol) {
  const int n = alg.dim();
  NilpotencyResult res;
  res.series_dims.push_back(n);
  if (alg.is_abelian()) {
    res.series_dims.push_back(0);
    res.step = 1;
    return res;
  }

  std::vector<Mat> ads;
  ads.reserve(n);
  for (int i = 0; i < n; ++i) ads.push_back(ad_matrix(alg, alg.basis(i)));

  const double thr = rel_tol * alg.scale();
  Mat span = Mat::Identity(n, n);  // orthonormal columns spanning the current term
  for (int term = 1; term <= n + 1; ++term) {
    Mat gens(n, n * span.cols());
    for (int i = 0; i < n; ++i) gens.middleCols(i * span.cols(), span.cols()) = ads[i] * span;
    Eigen::JacobiSVD<Mat> svd(gens, Eigen::ComputeThinU);
    const Vec& sv = svd.singularValues();
    int rank = 0;
    for (int r = 0; r < sv.size(); ++r) {
      if (sv[r] > thr) ++rank;
      if (sv[r] > 0.01 * thr && sv[r] < 100.0 * thr) res.rank_ambiguous = true;
    }
    res.series_dims.push_back(rank);
    if (rank == 0) {
      res.step = term;
      return res;
    }
    if (rank == span.cols()) return res;  // stalled at a nonzero ideal
    span = svd.matrixU().leftCols(rank);
  }
  return res;
}

SymForm killing_form(const LieAlgebra& alg) {
  const int n = alg.dim();
  std::vector<Mat> ads;
  for (int i = 0; i < n; ++i) ads.push_back(ad_matrix(alg, alg.basis(i)));
  SymForm k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      k(i, j) = (ads[i] * ads[j]).trace();
      k(j, i) = k(i, j);
    }
  }
  return k;
}

double homomorphism_residual(const LieAlgebra& k_alg, const std::vector<Mat>& rep) {
  const int nk = k_alg.dim();
  double worst = 0.0;
  for (int a = 0; a < nk; ++a) {
    for (int b = a + 1; b < nk; ++b) {
      Mat lhs = Mat::Zero(rep[a].rows(), rep[a].cols());
      for (int c = 0; c < nk; ++c) lhs += k_alg.c(a, b, c) * rep[c];
      const Mat rhs = rep[a] * rep[b] - rep[b] * rep[a];
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  return worst;
}

LieAlgebra semidirect_product(const LieAlgebra& k_alg, const std::vector<Mat>& rep, int m,
                              double tol) {
  const int nk = k_alg.dim();
  if (static_cast<int>(rep.size()) != nk) {
    throw ValidationError("semidirect_product: need one representation matrix per k basis vector (" +
                          std::to_string(nk) + "), got " + std::to_string(rep.size()));
  }
  if (m < 1) throw ValidationError("semidirect_product: module dimension must be >= 1");
  double rep_scale = 1.0;
  for (const auto& r : rep) {
    if (r.rows() != m || r.cols() != m) {
      throw ValidationError("semidirect_product: representation matrices must be " +
                            std::to_string(m) + "x" + std::to_string(m));
    }
    rep_scale = std::max(rep_scale, r.norm());
  }
  const double residual = homomorphism_residual(k_alg, rep);
  if (residual > tol * rep_scale * rep_scale * std::max(1.0, k_alg.scale())) {
    std::ostringstream os;
    os << "semidirect_product: representation is not a Lie algebra homomorphism (residual "
       << residual << ")";
    throw ValidationError(os.str());
  }

  const int n = nk + m;
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  auto at = [&](int i, int j, int k) -> double& {
    return c[(static_cast<std::size_t>(i) * n + j) * n + k];
  };
  for (int a = 0; a < nk; ++a) {
    for (int b = 0; b < nk; ++b) {
      for (int d = 0; d < nk; ++d) at(a, b, d) = k_alg.c(a, b, d);
    }
    // [u_a, w_j] = rho(u_a) w_j
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        at(a, nk + j, nk + i) = rep[a](i, j);
        at(nk + j, a, nk + i) = -rep[a](i, j);
      }
    }
  }

  std::vector<std::string> labels = k_alg.labels();
  for (int j = 0; j < m; ++j) labels.push_back("w" + std::to_string(j + 1));
  return LieAlgebra(n, std::move(c), std::move(labels));
}

}  // namespace liegeo
