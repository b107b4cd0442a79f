#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "boxgauge/errors.hpp"
#include "boxgauge/model.hpp"

using namespace boxgauge;
using model::DrivingField;
using model::PhysicalConstants;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Composite 61-point Gauss-Kronrod on fixed panels.
double gk(const std::function<double(double)>& f, double a, double b) {
  constexpr int kPanels = 32;
  const double h = (b - a) / kPanels;
  double s = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a + i * h, a + (i + 1) * h, 0);
  }
  return s;
}

}  // namespace

TEST(PhysicalConstants, RejectsNonPositive) {
  PhysicalConstants c;
  EXPECT_NO_THROW(c.validate());
  c.mass = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.hbar = -1.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.box_length = std::nan("");
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(DrivingField, PointValues) {
  EXPECT_DOUBLE_EQ(model::eval_f(DrivingField::constant(1.0), 5.0), 1.0);
  EXPECT_DOUBLE_EQ(model::eval_f(DrivingField::cosine(1.0, 2 * kPi), 0.0), 1.0);
  EXPECT_NEAR(model::eval_f(DrivingField::cosine(2.0, kPi), 0.5), 0.0, 1e-15);
}

TEST(DrivingField, PrimitiveConstant) {
  const auto f = DrivingField::constant(1.7, 0.4);
  EXPECT_NEAR(f.F(2.4), 1.7 * 2.0, 1e-14);
  EXPECT_EQ(f.F(0.4), 0.0);
}

TEST(DrivingField, PrimitiveCosineAgainstQuadrature) {
  const double f0 = 1.3, w = 2.7;
  const auto field = DrivingField::cosine(f0, w);
  for (double t : {0.1, 0.77, 3.2, 11.0}) {
    EXPECT_NEAR(field.F(t), f0 / w * std::sin(w * t), 1e-14);
    const double q = gk([&](double s) { return f0 * std::cos(w * s); }, 0.0, t);
    EXPECT_NEAR(field.F(t), q, 1e-12);
  }
}

TEST(DrivingField, AnchoredAtT0) {
  for (const auto& field : {DrivingField::constant(2.0, 1.5), DrivingField::cosine(1.0, 3.0, 1.5),
                            DrivingField::tabulated({{0.0, 1.0}, {1.0, -1.0}, {2.0, 0.5}}, 1.5)}) {
    EXPECT_EQ(field.F(1.5), 0.0);
    EXPECT_EQ(field.double_integral(1.5), 0.0);
    EXPECT_EQ(model::eval_xi(field, 1.5, {}), 0.0);
  }
}

TEST(DrivingField, XiConstant) {
  PhysicalConstants c;
  c.alpha = 0.8;
  c.mass = 1.9;
  const auto field = DrivingField::constant(1.4);
  const double t = 2.3;
  EXPECT_NEAR(model::eval_xi(field, t, c), -(c.alpha * 1.4 / c.mass) * t * t / 2, 1e-13);
}

TEST(DrivingField, XiCosineAgainstNestedQuadrature) {
  PhysicalConstants c;
  c.alpha = 1.2;
  c.mass = 0.7;
  const double f0 = 0.9, w = 4.1;
  const auto field = DrivingField::cosine(f0, w);
  for (double t : {0.3, 1.0, 2.6}) {
    const double closed = -(c.alpha * f0 / (c.mass * w * w)) * (1 - std::cos(w * t));
    const double nested = gk([&](double s) { return gk([&](double u) { return f0 * std::cos(w * u); }, 0.0, s); },
                             0.0, t);
    EXPECT_NEAR(model::eval_xi(field, t, c), closed, 1e-13);
    EXPECT_NEAR(model::eval_xi(field, t, c), -c.alpha / c.mass * nested, 1e-12);
  }
}

TEST(DrivingField, FiniteDifferenceConsistency) {
  PhysicalConstants c;
  c.alpha = 1.1;
  const std::vector<DrivingField> fields{DrivingField::constant(0.6, 0.2), DrivingField::cosine(2.0, 3.3, 0.1)};
  for (const auto& field : fields) {
    for (double t : {0.5, 1.7, 4.0}) {
      // fourth-order five-point stencils
      const double h = 1e-3;
      const double dF = (-field.F(t + 2 * h) + 8 * field.F(t + h) - 8 * field.F(t - h) + field.F(t - 2 * h)) / (12 * h);
      EXPECT_NEAR(dF, field.f(t), 1e-8 * std::max(1.0, std::abs(field.f(t))));
      const double h2 = 1e-2;
      auto xi = [&](double s) { return model::eval_xi(field, s, c); };
      const double d2xi = (-xi(t + 2 * h2) + 16 * xi(t + h2) - 30 * xi(t) + 16 * xi(t - h2) - xi(t - 2 * h2)) /
                          (12 * h2 * h2);
      EXPECT_NEAR(d2xi, -c.alpha / c.mass * field.f(t), 1e-6);
    }
  }
}

TEST(DrivingField, IncrementsMatchDifferences) {
  const auto field = DrivingField::cosine(1.5, 2.2, 0.3);
  const double ts = 1.1, t = 2.9;
  EXPECT_NEAR(field.F_increment(ts, t), field.F(t) - field.F(ts), 1e-13);
  const double kernel = gk([&](double s) { return field.F(s) - field.F(ts); }, ts, t);
  EXPECT_NEAR(field.flight_integral(ts, t), kernel, 1e-12);
}

TEST(DrivingField, TabulatedIsPiecewiseLinear) {
  const auto field = DrivingField::tabulated({{0.0, 1.0}, {1.0, -1.0}, {3.0, 2.0}}, 0.0);
  EXPECT_DOUBLE_EQ(field.f(0.5), 0.0);
  EXPECT_DOUBLE_EQ(field.f(2.0), 0.5);
  auto piecewise = [](double s) { return s <= 1.0 ? 1.0 - 2.0 * s : -1.0 + 1.5 * (s - 1.0); };
  // split at the kink so the oracle only sees smooth pieces
  auto prim = [&](double t) { return t <= 1.0 ? gk(piecewise, 0.0, t) : gk(piecewise, 0.0, 1.0) + gk(piecewise, 1.0, t); };
  for (double t : {0.4, 1.0, 2.2, 3.0}) {
    EXPECT_NEAR(field.F(t), prim(t), 1e-13);
    const double dbl = t <= 1.0 ? gk(prim, 0.0, t) : gk(prim, 0.0, 1.0) + gk(prim, 1.0, t);
    EXPECT_NEAR(field.double_integral(t), dbl, 1e-12);
  }
  EXPECT_NEAR(field.next_sign_change(0.0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(field.max_abs_f(), 2.0);
  EXPECT_EQ(field.domain(), std::make_pair(0.0, 3.0));
}

TEST(DrivingField, TabulatedErrors) {
  EXPECT_THROW(DrivingField::tabulated({{0.0, 1.0}}, 0.0), InvalidArgument);
  EXPECT_THROW(DrivingField::tabulated({{0.0, 1.0}, {0.0, 2.0}}, 0.0), InvalidArgument);
  EXPECT_THROW(DrivingField::tabulated({{0.0, 1.0}, {1.0, 2.0}}, 2.0), RangeError);
  const auto field = DrivingField::tabulated({{0.0, 1.0}, {1.0, 2.0}}, 0.0);
  EXPECT_THROW(field.f(1.5), RangeError);
  EXPECT_THROW(field.F(-0.1), RangeError);
}

TEST(DrivingField, CosineNeedsPositiveOmega) {
  EXPECT_THROW(DrivingField::cosine(1.0, 0.0), InvalidArgument);
  EXPECT_THROW(DrivingField::cosine(1.0, -2.0), InvalidArgument);
}

TEST(DrivingField, CosineSignChanges) {
  const double w = 3.0;
  const auto field = DrivingField::cosine(1.0, w);
  EXPECT_NEAR(field.next_sign_change(0.0), kPi / (2 * w), 1e-15);
  const double t1 = field.next_sign_change(kPi / (2 * w));
  EXPECT_NEAR(t1, 3 * kPi / (2 * w), 1e-14);
  EXPECT_TRUE(std::isinf(DrivingField::constant(1.0).next_sign_change(0.0)));
}

TEST(DrivingField, IsNull) {
  EXPECT_TRUE(DrivingField::none().is_null());
  EXPECT_TRUE(DrivingField::cosine(0.0, 1.0).is_null());
  EXPECT_FALSE(DrivingField::constant(1e-300).is_null());
}

TEST(Json, RoundTrip) {
  const auto field = DrivingField::cosine(2.5, 1.25, 0.5);
  nlohmann::json j = field;
  const auto back = j.get<DrivingField>();
  EXPECT_TRUE(back.is_cosine());
  EXPECT_EQ(back.t0(), 0.5);
  EXPECT_DOUBLE_EQ(back.f(0.9), field.f(0.9));

  PhysicalConstants c{2.0, 3.0, 4.0, 5.0};
  nlohmann::json jc = c;
  const auto cb = jc.get<PhysicalConstants>();
  EXPECT_EQ(cb.hbar, 2.0);
  EXPECT_EQ(cb.alpha, 5.0);
}

TEST(Json, StrictKeys) {
  EXPECT_THROW((nlohmann::json{{"kind", "constant"}, {"f0", 1}, {"bogus", 2}}.get<DrivingField>()),
               ConfigurationError);
  EXPECT_THROW((nlohmann::json{{"kind", "cosine"}, {"f0", 1}}.get<DrivingField>()), ConfigurationError);
  EXPECT_THROW((nlohmann::json{{"kind", "constant"}, {"omega", 1}}.get<DrivingField>()), ConfigurationError);
  EXPECT_THROW((nlohmann::json{{"kind", "square"}}.get<DrivingField>()), ConfigurationError);
  EXPECT_THROW((nlohmann::json{{"kind", "tabulated"}, {"samples", {{0, 1}, {1}}}}.get<DrivingField>()),
               ConfigurationError);
  EXPECT_THROW((nlohmann::json{{"hbar", 1}, {"charge", 1}}.get<PhysicalConstants>()), ConfigurationError);
}
