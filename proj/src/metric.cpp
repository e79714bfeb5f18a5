#include "liegeo/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace liegeo {

MetricForm::MetricForm(SymForm g) : g_(std::move(g)) {
  if (g_.rows() == 0 || g_.rows() != g_.cols()) {
    throw ValidationError("metric matrix must be square and non-empty");
  }
  const double scale = max_abs(g_);
  if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale)) {
    throw ValidationError("metric matrix is not symmetric");
  }
  g_ = 0.5 * (g_ + g_.transpose());
  const double det = g_.determinant();
  if (!(std::abs(det) > 1e-12 * std::pow(scale, static_cast<double>(g_.rows())))) {
    std::ostringstream os;
    os << "metric matrix is degenerate (det = " << det << ")";
    throw ValidationError(os.str());
  }
}

int MetricForm::negative_index() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(g_, Eigen::EigenvaluesOnly);
  return static_cast<int>((es.eigenvalues().array() < 0.0).count());
}

bool MetricForm::is_definite() const {
  const int s = negative_index();
  return s == 0 || s == dim();
}

WickFrame signature_decompose(const MetricForm& g, double tol) {
  const int n = g.dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(g.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("signature_decompose: eigensolver failed");
  // Eigen sorts ascending, so negative eigenvalues already come first.
  const Vec& lam = es.eigenvalues();
  Mat v = es.eigenvectors();
  const double lam_scale = lam.cwiseAbs().maxCoeff();

  WickFrame w;
  w.basis.resize(n, n);
  w.eps.resize(n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(lam[i]) < tol * lam_scale) {
      std::ostringstream os;
      os << "signature_decompose: eigenvalue " << lam[i] << " is below the degeneracy cutoff";
      throw NumericalError(os.str());
    }
    Eigen::Index pivot = 0;
    v.col(i).cwiseAbs().maxCoeff(&pivot);
    if (v(pivot, i) < 0) v.col(i) = -v.col(i);
    w.basis.col(i) = v.col(i) / std::sqrt(std::abs(lam[i]));
    w.eps[i] = lam[i] < 0 ? -1 : 1;
  }
  const Vec signs = w.eps.cast<double>();
  w.psi = v * signs.asDiagonal() * v.transpose();
  w.g_tilde = v * lam.cwiseAbs().asDiagonal() * v.transpose();
  w.g_tilde = 0.5 * (w.g_tilde + w.g_tilde.transpose());
  return w;
}

Mat metric_adjoint(const Mat& m, const MetricForm& g) {
  if (m.rows() != g.dim() || m.cols() != g.dim()) {
    throw ValidationError("metric_adjoint: dimension mismatch");
  }
  return g.matrix().partialPivLu().solve(m.transpose() * g.matrix());
}

SymForm transform_form(const Mat& m, const SymForm& b) {
  if (m.rows() != m.cols() || m.rows() != b.rows() || b.rows() != b.cols()) {
    throw ValidationError("transform_form: dimension mismatch");
  }
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible()) throw ValidationError("transform_form: matrix is singular");
  SymForm out = m.transpose() * b * m;
  return 0.5 * (out + out.transpose());
}

AffOrbit aff_orbit_classify(double c1, double c2, double c3) {
  const double det = c1 * c3 - c2 * c2;
  const double scale = std::max({std::abs(c1), std::abs(c2), std::abs(c3)});
  if (scale == 0.0 || std::abs(det) <= 1e-14 * scale * scale) {
    throw DomainError("aff_orbit_classify: c1*c3 - c2^2 must be nonzero");
  }
  if (det > 0) return AffOrbit::Definite;
  return std::abs(c3) <= 1e-12 ? AffOrbit::LorentzE2Isotropic : AffOrbit::LorentzE2NonIsotropic;
}

const char* to_string(AffOrbit orbit) {
  switch (orbit) {
    case AffOrbit::Definite:
      return "Definite";
    case AffOrbit::LorentzE2NonIsotropic:
      return "LorentzE2NonIsotropic";
    case AffOrbit::LorentzE2Isotropic:
      return "LorentzE2Isotropic";
  }
  return "?";
}

}  // namespace liegeo
