#include <gtest/gtest.h>

#include <cmath>

#include "liegeo/algebra.hpp"
#include "liegeo/catalog.hpp"
#include "liegeo/metric.hpp"
#include "random_forms.hpp"

using namespace liegeo;
using liegeo::testing::Rng;

namespace {

Mat m2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(MetricForm, RejectsBadInput) {
  EXPECT_THROW(MetricForm(Mat(2, 3)), ValidationError);
  EXPECT_THROW(MetricForm(m2(1, 2, 0, 1)), ValidationError);
  EXPECT_THROW(MetricForm(m2(1, 1, 1, 1)), ValidationError);
  EXPECT_THROW(MetricForm(Mat::Zero(3, 3)), ValidationError);
  EXPECT_NO_THROW(MetricForm(m2(0, 1, 1, 0)));
}

TEST(MetricForm, SignatureQueries) {
  EXPECT_EQ(MetricForm(m2(1, 0, 0, -1)).negative_index(), 1);
  EXPECT_FALSE(MetricForm(m2(1, 0, 0, -1)).is_definite());
  EXPECT_TRUE(MetricForm(m2(-1, 0, 0, -3)).is_definite());
  EXPECT_TRUE(MetricForm(Mat::Identity(3, 3)).is_definite());
}

TEST(SignatureDecompose, DiagonalLorentzian) {
  const auto w = signature_decompose(MetricForm(m2(1, 0, 0, -1)));
  EXPECT_EQ(w.eps, Eigen::Vector2i(-1, 1));
  EXPECT_LE(max_abs(w.basis - m2(0, 1, 1, 0)), 1e-15);
  EXPECT_LE(max_abs(w.psi - m2(1, 0, 0, -1)), 1e-15);
  EXPECT_LE(max_abs(w.g_tilde - Mat::Identity(2, 2)), 1e-15);
  EXPECT_EQ(w.negative_count(), 1);
}

TEST(SignatureDecompose, OffDiagonalForm) {
  const MetricForm g(m2(0, 1, 1, 0));
  const auto w = signature_decompose(g);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_EQ(w.eps, Eigen::Vector2i(-1, 1));
  EXPECT_LE(max_abs(w.basis - m2(r, r, -r, r)), 1e-15);
  EXPECT_LE(max_abs(w.g_tilde - Mat::Identity(2, 2)), 1e-15);
  EXPECT_LE(max_abs(w.psi - m2(0, 1, 1, 0)), 1e-15);
  EXPECT_LE(max_abs(w.psi * w.psi - Mat::Identity(2, 2)), 1e-15);
  EXPECT_LE(max_abs(w.g_tilde * w.psi - g.matrix()), 1e-15);
}

TEST(SignatureDecompose, DefiniteFormIsItsOwnCompanion) {
  Rng rng(10);
  const MetricForm g(rng.metric(4, 0));
  const auto w = signature_decompose(g);
  EXPECT_TRUE((w.eps.array() == 1).all());
  EXPECT_LE(max_abs(w.psi - Mat::Identity(4, 4)), 1e-12);
  EXPECT_LE(max_abs(w.g_tilde - g.matrix()), 1e-12);
}

TEST(SignatureDecompose, ReconstructionOnRandomForms) {
  Rng rng(11);
  for (int n = 1; n <= 6; ++n) {
    for (int s = 0; s <= n; ++s) {
      for (int t = 0; t < 100; ++t) {
        const MetricForm g(rng.metric(n, s));
        const auto w = signature_decompose(g);
        const Mat diag = w.eps.cast<double>().asDiagonal();
        ASSERT_LE(max_abs(w.basis.transpose() * g.matrix() * w.basis - diag), 1e-10);
        ASSERT_EQ(w.negative_count(), s);
        for (int i = 1; i < n; ++i) ASSERT_LE(w.eps[i - 1], w.eps[i]);
        ASSERT_LE(max_abs(w.psi * w.psi - Mat::Identity(n, n)), 1e-12);
        ASSERT_LE(max_abs(w.basis.transpose() * w.g_tilde * w.basis - Mat::Identity(n, n)), 1e-10);
        ASSERT_LE(max_abs(w.g_tilde * w.psi - g.matrix()), 1e-12);
        ASSERT_GT(Eigen::SelfAdjointEigenSolver<Mat>(w.g_tilde).eigenvalues().minCoeff(), 0.0);
      }
    }
  }
}

TEST(SignatureDecompose, PsiIsTildeIsometry) {
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.integer(2, 5);
    const auto w = signature_decompose(MetricForm(rng.any_metric(n)));
    const Vec u = rng.gaussian(n), v = rng.gaussian(n);
    EXPECT_NEAR((w.psi * u).dot(w.g_tilde * (w.psi * v)), u.dot(w.g_tilde * v), 1e-12 * (1 + u.norm() * v.norm()));
  }
}

TEST(SignatureDecompose, NearDegenerateThrows) {
  const MetricForm g(m2(1, 0, 0, 1e-11));
  EXPECT_NO_THROW(signature_decompose(g));
  EXPECT_THROW(signature_decompose(g, 1e-10), NumericalError);
}

TEST(MetricAdjoint, IdentityGivesTranspose) {
  Rng rng(13);
  const Mat m = rng.gaussian(3, 3);
  EXPECT_LE(max_abs(metric_adjoint(m, MetricForm(Mat::Identity(3, 3))) - m.transpose()), 1e-15);
}

TEST(MetricAdjoint, AffIdempotentByHand) {
  // g1(x0, [x0, v]) with x0 = e1 + e2, G = diag(1,-1): [x0, e1] = -e2 and [x0, e2] = e2, so
  // the pairings are 1 and -1, which equal g1(x0, e1) and g1(x0, e2).
  const auto alg = load_builtin("aff").algebra;
  const MetricForm g(m2(1, 0, 0, -1));
  const Vec x0 = Vec::Ones(2);
  const Mat adj = metric_adjoint(ad_matrix(alg, x0), g);
  EXPECT_LE((adj * x0 - x0).norm(), 1e-15);
}

TEST(MetricAdjoint, KillingMakesAdSkew) {
  Rng rng(14);
  const auto alg = load_builtin("so3").algebra;
  const MetricForm g(-killing_form(alg));
  for (int t = 0; t < 20; ++t) {
    const Mat ad = ad_matrix(alg, rng.gaussian(3));
    EXPECT_LE(max_abs(metric_adjoint(ad, g) + ad), 1e-14 * (1 + max_abs(ad)));
  }
}

TEST(MetricAdjoint, Duality) {
  Rng rng(15);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 6);
    const MetricForm g(rng.any_metric(n));
    const Mat m = rng.gaussian(n, n);
    const Vec u = rng.gaussian(n), v = rng.gaussian(n);
    const double scale = (1 + max_abs(m)) * u.norm() * v.norm() * (1 + max_abs(g.matrix()));
    EXPECT_NEAR(g(m * u, v), g(u, metric_adjoint(m, g) * v), 1e-10 * scale);
  }
}

TEST(TransformForm, Examples) {
  EXPECT_EQ(transform_form(Mat::Identity(2, 2), m2(1, 2, 2, 5)), m2(1, 2, 2, 5));
  const double a = 0.7, b = -1.3;
  EXPECT_LE(max_abs(transform_form(m2(1, 0, a, b), Mat::Identity(2, 2)) - m2(1 + a * a, a * b, a * b, b * b)), 1e-15);
  EXPECT_LE(max_abs(transform_form(m2(1, 0, a, b), m2(0, 1, 1, 0)) - m2(2 * a, b, b, 0)), 1e-15);
  EXPECT_THROW(transform_form(m2(1, 2, 2, 4), Mat::Identity(2, 2)), ValidationError);
}

TEST(TransformForm, GroupAction) {
  Rng rng(16);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.integer(1, 5);
    const Mat b = rng.any_metric(n);
    const Mat m1 = rng.invertible(n), m2 = rng.invertible(n);
    EXPECT_LE(max_abs(transform_form(m2, transform_form(m1, b)) - transform_form(m1 * m2, b)), 1e-12);
  }
}

TEST(TransformForm, PreservesSignature) {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.integer(1, 5);
    const int s = rng.integer(0, n);
    const MetricForm g(rng.metric(n, s));
    EXPECT_EQ(MetricForm(transform_form(rng.invertible(n), g.matrix())).negative_index(), s);
  }
}

TEST(AffOrbit, Examples) {
  EXPECT_EQ(aff_orbit_classify(1, 0, 1), AffOrbit::Definite);
  EXPECT_EQ(aff_orbit_classify(-1, 0, -2), AffOrbit::Definite);
  EXPECT_EQ(aff_orbit_classify(1, 0, -1), AffOrbit::LorentzE2NonIsotropic);
  EXPECT_EQ(aff_orbit_classify(0, 1, 0), AffOrbit::LorentzE2Isotropic);
  EXPECT_THROW(aff_orbit_classify(1, 1, 1), DomainError);
  EXPECT_THROW(aff_orbit_classify(0, 0, 0), DomainError);
  EXPECT_STREQ(to_string(AffOrbit::LorentzE2Isotropic), "LorentzE2Isotropic");
}

TEST(AffOrbit, ConstantAlongAutomorphismOrbits) {
  // Automorphisms of aff fix e2 up to scale: M = [[1,0],[a,b]], b != 0.
  Rng rng(18);
  const std::vector<Mat> seeds{m2(1, 0, 0, 1), m2(1, 0, 0, -1), m2(0, 1, 1, 0), m2(-2, 0.5, 0.5, 3)};
  for (const auto& g : seeds) {
    const auto base = aff_orbit_classify(g(0, 0), g(0, 1), g(1, 1));
    for (int t = 0; t < 50; ++t) {
      double b = rng.uniform(0.2, 3.0) * (rng.coin() ? 1 : -1);
      const Mat h = transform_form(m2(1, 0, rng.normal(), b), g);
      EXPECT_EQ(aff_orbit_classify(h(0, 0), h(0, 1), h(1, 1)), base);
    }
  }
}
