#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include "boxgauge/classical.hpp"
#include "boxgauge/errors.hpp"

using namespace boxgauge;
using namespace boxgauge::classical;

namespace {

constexpr double kPi = 3.14159265358979323846;
using Phase = std::array<double, 2>;

// Reference billiard: dopri5 dense output, crossings located by bisection.
struct OdeBilliard {
  const DrivingField& field;
  PhysicalConstants consts;

  std::vector<double> hits(double x0, double v0, double t0, double t_end) const {
    namespace ode = boost::numeric::odeint;
    auto rhs = [&](const Phase& y, Phase& dy, double t) {
      dy[0] = y[1];
      dy[1] = -consts.alpha / consts.mass * field.f(t);
    };
    std::vector<double> out;
    const double L = consts.box_length;
    Phase y{x0, v0};
    double t = t0;
    auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<Phase>());
    stepper.initialize(y, t, 1e-4);
    while (t < t_end) {
      stepper.do_step(rhs);
      const double ta = stepper.previous_time(), tb = std::min(stepper.current_time(), t_end);
      Phase yb;
      stepper.calc_state(tb, yb);
      if (yb[0] < 0.0 || yb[0] > L) {
        const double wall = yb[0] < 0.0 ? 0.0 : L;
        double lo = ta, hi = tb;
        for (int i = 0; i < 80; ++i) {
          const double mid = 0.5 * (lo + hi);
          Phase ym;
          stepper.calc_state(mid, ym);
          ((ym[0] < 0.0 || ym[0] > L) ? hi : lo) = mid;
        }
        Phase yh;
        stepper.calc_state(lo, yh);
        out.push_back(lo);
        t = lo;
        y = {wall, -yh[1]};
        stepper.initialize(y, t, 1e-4);
        continue;
      }
      t = tb;
    }
    return out;
  }
};

}  // namespace

TEST(LineSolution, MatchesOdeIntegration) {
  namespace ode = boost::numeric::odeint;
  PhysicalConstants c;
  c.alpha = 1.3;
  c.mass = 0.8;
  const auto field = DrivingField::cosine(2.0, 5.0, 0.2);
  Phase y{0.4, -0.7};
  auto rhs = [&](const Phase& s, Phase& d, double t) {
    d[0] = s[1];
    d[1] = -c.alpha / c.mass * field.f(t);
  };
  ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<Phase>()), rhs, y, 0.5, 3.0,
                          1e-3);
  const auto p = line_solution(0.4, -0.7, 0.5, 3.0, field, c);
  EXPECT_NEAR(p.x, y[0], 1e-10);
  EXPECT_NEAR(p.v, y[1], 1e-10);
}

TEST(LineSolution, NewtonResidualByFiniteDifferences) {
  PhysicalConstants c;
  c.alpha = 0.9;
  const auto field = DrivingField::cosine(3.0, 7.0);
  const double h = 5e-3;
  for (double t : {0.3, 1.1, 2.5}) {
    auto x = [&](double s) { return line_solution(0.2, 1.0, 0.0, s, field, c).x; };
    const double acc = (-x(t + 2 * h) + 16 * x(t + h) - 30 * x(t) + 16 * x(t - h) - x(t - 2 * h)) / (12 * h * h);
    EXPECT_LE(std::abs(c.mass * acc + c.alpha * field.f(t)), 1e-6);
  }
}

TEST(BoundedOrbit, SpecialCases) {
  PhysicalConstants c;
  c.alpha = 2.0;
  c.mass = 0.5;
  const double f0 = 1.5, w = 3.0;
  const auto field = DrivingField::cosine(f0, w);
  EXPECT_EQ(bounded_orbit_velocity(field, 0.0, c), 0.0);
  // With m x'' = -alpha f the drift-free velocity carries the opposite sign.
  EXPECT_NEAR(bounded_orbit_velocity(field, kPi / (2 * w), c), -c.alpha * f0 / (c.mass * w), 1e-14);
  EXPECT_THROW(bounded_orbit_velocity(DrivingField::constant(1.0), 0.0, c), InvalidArgument);
}

TEST(BoundedOrbit, StaysWithinAmplitudeBound) {
  PhysicalConstants c;
  c.alpha = 1.2;
  const double f0 = 4.0, w = 2.5, t0 = 0.37;
  const auto field = DrivingField::cosine(f0, w);
  const double v0 = bounded_orbit_velocity(field, t0, c);
  const double bound = 2 * std::abs(c.alpha * f0) / (c.mass * w * w);
  double worst = 0.0;
  const double period = 2 * kPi / w;
  for (int k = 0; k <= 100 * 200; ++k) {
    const double t = t0 + k * period / 200;
    worst = std::max(worst, std::abs(line_solution(0.0, v0, t0, t, field, c).x));
  }
  EXPECT_LE(worst, bound * (1 + 1e-12));
  EXPECT_GT(worst, 0.5 * bound);
}

TEST(WallHit, UniformMotion) {
  PhysicalConstants c;
  c.box_length = 2.0;
  const auto ev = wall_hit_time({1.0, 0.5, 0.3}, DrivingField::none(), c, 100.0);
  ASSERT_TRUE(ev);
  EXPECT_NEAR(ev->t_hit, 0.3 + 1.0 / 0.5, 1e-12);
  EXPECT_EQ(ev->wall, Wall::Right);
  EXPECT_EQ(ev->v_out, -ev->v_in);
}

TEST(WallHit, AtRestNeverHits) {
  EXPECT_FALSE(wall_hit_time({0.5, 0.0, 0.0}, DrivingField::none(), {}, 1e6));
}

TEST(WallHit, ConstantPushToLeftWall) {
  PhysicalConstants c;
  c.alpha = 1.5;
  c.box_length = 1.0;
  const double f0 = 2.0;
  const auto ev = wall_hit_time({0.5, 0.0, 0.0}, DrivingField::constant(f0), c, 10.0);
  ASSERT_TRUE(ev);
  EXPECT_EQ(ev->wall, Wall::Left);
  EXPECT_NEAR(ev->t_hit, std::sqrt(c.mass * c.box_length / (c.alpha * f0)), 1e-12);
}

TEST(WallHit, IndependentOfSearchHorizon) {
  const auto field = DrivingField::cosine(20.0, 2 * kPi);
  const ClassicalState s{0.3, 1.0, 0.0};
  const auto ref = wall_hit_time(s, field, {}, 100.0);
  ASSERT_TRUE(ref);
  for (double t_max : {ref->t_hit + 1e-9, ref->t_hit + 0.1, 1.0, 7.3}) {
    const auto ev = wall_hit_time(s, field, {}, t_max);
    ASSERT_TRUE(ev);
    EXPECT_NEAR(ev->t_hit, ref->t_hit, 1e-12);
  }
  EXPECT_FALSE(wall_hit_time(s, field, {}, ref->t_hit - 1e-6));
}

TEST(WallHit, Preconditions) {
  EXPECT_THROW(wall_hit_time({1.5, 0.0, 0.0}, DrivingField::none(), {}, 1.0), RangeError);
  EXPECT_THROW(wall_hit_time({0.0, -1.0, 0.0}, DrivingField::none(), {}, 1.0), InvalidArgument);
  EXPECT_THROW(wall_hit_time({1.0, 1.0, 0.0}, DrivingField::none(), {}, 1.0), InvalidArgument);
}

TEST(Box, EventsMatchOdeReference) {
  PhysicalConstants c;
  c.alpha = 1.0;
  const auto field = DrivingField::cosine(3.0, 4.0);
  const auto run = simulate_box({0.3, 1.1, 0.0}, field, c, 6.0, {});
  const auto ref = OdeBilliard{field, c}.hits(0.3, 1.1, 0.0, 6.0);
  ASSERT_EQ(run.events.size(), ref.size());
  ASSERT_GE(ref.size(), 3u);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(run.events[i].t_hit, ref[i], 1e-8) << i;
}

TEST(Box, StaysInsideAndReflectsElastically) {
  PhysicalConstants c;
  c.box_length = 1.5;
  const auto field = DrivingField::cosine(20.0, 2 * kPi);
  std::vector<double> ts;
  for (int i = 0; i <= 2000; ++i) ts.push_back(i * 0.005);
  const auto run = simulate_box({0.3, 1.0, 0.0}, field, c, 10.0, ts);
  ASSERT_EQ(run.trajectory.size(), ts.size());
  for (const auto& s : run.trajectory) {
    EXPECT_GE(s.x, 0.0);
    EXPECT_LE(s.x, c.box_length);
  }
  EXPECT_FALSE(run.events.empty());
  for (std::size_t i = 0; i < run.events.size(); ++i) {
    EXPECT_EQ(run.events[i].v_out, -run.events[i].v_in);
    if (i > 0) {
      EXPECT_GT(run.events[i].t_hit, run.events[i - 1].t_hit);
    }
  }
}

TEST(Box, AdvanceAgreesWithSimulate) {
  const auto field = DrivingField::cosine(5.0, 3.0);
  const ClassicalState s0{0.6, -0.4, 0.0};
  const auto run = simulate_box(s0, field, {}, 4.0, {4.0});
  std::size_t n = 0;
  const auto s = advance_box(s0, field, {}, 4.0, &n);
  EXPECT_EQ(n, run.events.size());
  EXPECT_NEAR(s.x, run.trajectory.back().x, 1e-12);
  EXPECT_NEAR(s.v, run.trajectory.back().v, 1e-12);
}

TEST(Box, SampleValidation) {
  EXPECT_THROW(simulate_box({0.5, 0.0, 0.0}, DrivingField::none(), {}, 1.0, {0.5, 0.2}), InvalidArgument);
  EXPECT_THROW(simulate_box({0.5, 0.0, 0.0}, DrivingField::none(), {}, 1.0, {2.0}), InvalidArgument);
  EXPECT_THROW(simulate_box({-0.5, 0.0, 0.0}, DrivingField::none(), {}, 1.0, {}), RangeError);
}

TEST(Momentum, GaugeDependence) {
  PhysicalConstants c;
  c.alpha = 0.7;
  const auto field = DrivingField::constant(2.0, 0.5);
  EXPECT_EQ(canonical_momentum({0.5, 1.0, 3.0, Gauge::Zero}, field, c), 1.0);
  EXPECT_EQ(canonical_momentum({0.5, 1.0, 0.5, Gauge::Chi}, field, c), 1.0);
  EXPECT_NEAR(canonical_momentum({0.5, 1.0, 3.0, Gauge::Chi}, field, c), 1.0 + 0.7 * 2.0 * 2.5, 1e-14);
}

TEST(Momentum, ChiReflectionIsVelocityFlip) {
  PhysicalConstants c;
  c.alpha = 1.3;
  c.mass = 2.0;
  const auto field = DrivingField::cosine(1.0, 2.0);
  const double t = 0.8, v = 0.9;
  const double before = canonical_momentum({0.0, v, t, Gauge::Chi}, field, c);
  const double after = canonical_momentum({0.0, -v, t, Gauge::Chi}, field, c);
  EXPECT_NEAR(reflect_chi_momentum(before, t, field, c), after, 1e-14);
  EXPECT_NEAR(reflect_chi_momentum(before, t, field, c), -before + 2 * c.alpha * field.F(t), 0.0);
}

TEST(Lyapunov, UndrivenIsNearZero) {
  const double lambda = lyapunov_estimate({0.3, 1.0, 0.0}, DrivingField::none(), {}, 500.0, 0.5);
  EXPECT_LT(std::abs(lambda), 1e-3);
}

TEST(Lyapunov, DrivenIsPositive) {
  const double lambda = lyapunov_estimate({0.3, 1.0, 0.0}, DrivingField::cosine(20.0, 2 * kPi), {}, 500.0, 0.5);
  EXPECT_GT(lambda, 0.5);
}

TEST(Lyapunov, Preconditions) {
  EXPECT_THROW(lyapunov_estimate({0.3, 1.0, 0.0}, DrivingField::none(), {}, 10.0, 0.0), InvalidArgument);
  EXPECT_THROW(lyapunov_estimate({0.3, 1.0, 0.0}, DrivingField::none(), {}, 10.0, 1.0), InvalidArgument);
  EXPECT_THROW(lyapunov_estimate({0.3, 1.0, 0.0}, DrivingField::none(), {}, 100.0, 1.0, {0.0}),
               InvalidArgument);
}
