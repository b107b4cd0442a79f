#include <cmath>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "boxgauge/errors.hpp"
#include "boxgauge/numeric.hpp"

using namespace boxgauge::numeric;

namespace {

CMatrix random_hermitian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CMatrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (A + A.adjoint());
}

double apply(const QuadratureRule& r, const std::function<double(double)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

}  // namespace

TEST(GaussLegendre, ExactForPolynomials) {
  for (std::size_t n : {5u, 20u, 33u, 300u}) {
    const auto r = gauss_legendre(n, -0.5, 2.0);
    EXPECT_GE(r.nodes.size(), n);
    // degree 2n-1 monomial
    const int d = static_cast<int>(2 * std::min<std::size_t>(n, 20) - 1);
    const double exact = (std::pow(2.0, d + 1) - std::pow(-0.5, d + 1)) / (d + 1);
    EXPECT_NEAR(apply(r, [&](double x) { return std::pow(x, d); }) / exact, 1.0, 1e-13) << n;
  }
}

TEST(GaussLegendre, OscillatoryAgainstTanhSinh) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [](double x) { return std::sin(37.0 * x) * std::exp(-x); };
  const double ref = ts.integrate(f, 0.0, 3.0);
  EXPECT_NEAR(apply(gauss_legendre(96, 0.0, 3.0), f), ref, 1e-14);
  EXPECT_NEAR(apply(gauss_legendre(3000, 0.0, 3.0), f), ref, 1e-14);
}

TEST(GaussLegendre, WeightsSumToLength) {
  for (std::size_t n : {7u, 50u, 150u, 2100u}) {
    const auto r = gauss_legendre(n, 1.0, 4.5);
    double s = 0.0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s, 3.5, 1e-13) << n;
  }
}

TEST(IntegrateAdaptive, EndpointSingularity) {
  EXPECT_NEAR(integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0), 2.0, 1e-11);
  EXPECT_NEAR(integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0), -1.0, 1e-11);
}

TEST(Expm, EigenAndChebyshevAgree) {
  const CMatrix H = random_hermitian(24, 3) * 10.0;
  const CMatrix U = hermitian_expm(H, 0.37);
  const CMatrix ref = (Complex(0.0, -0.37) * H).exp();
  EXPECT_LT((U - ref).cwiseAbs().maxCoeff(), 1e-11);
  CVector v = CVector::Random(24);
  const CVector w = chebyshev_expm_action(H, 0.37, v);
  EXPECT_LT((w - U * v).norm(), 1e-11 * v.norm());
}

TEST(Expm, ZeroScaleIsIdentity) {
  const CMatrix H = random_hermitian(6, 9);
  EXPECT_LT((hermitian_expm(H, 0.0) - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-15);
  CVector v = CVector::Random(6);
  EXPECT_LT((chebyshev_expm_action(H, 0.0, v) - v).norm(), 1e-14);
}

TEST(OperatorNorm, MatchesSingularValue) {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  CMatrix M(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) M(i, j) = Complex(g(rng), g(rng));
  Eigen::JacobiSVD<CMatrix> svd(M);
  EXPECT_NEAR(operator_norm(M, 500), svd.singularValues()(0), 1e-8 * svd.singularValues()(0));
  EXPECT_EQ(operator_norm(CMatrix::Zero(3, 3)), 0.0);
}

TEST(Hermiticity, Residual) {
  CMatrix M = random_hermitian(5, 1);
  EXPECT_LT(hermiticity_residual(M), 1e-15);
  M(0, 1) += Complex(0.0, 0.25);
  EXPECT_NEAR(hermiticity_residual(M), 0.25, 1e-15);
}
