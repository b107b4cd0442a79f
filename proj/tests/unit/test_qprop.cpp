#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include "boxgauge/errors.hpp"
#include "boxgauge/qprop.hpp"

using namespace boxgauge;
using namespace boxgauge::qprop;
using numeric::Complex;
using numeric::CVector;

namespace {

constexpr double kPi = 3.14159265358979323846;

// i hbar c' = H(t) c integrated as 2N real ODEs with a tight dopri5 tolerance.
CVector ode_reference(const CVector& c0, const HamiltonianBuilder& H, double t0, double t1, double hbar) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<double>;
  const auto n = c0.size();
  State y(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[2 * i] = c0(i).real();
    y[2 * i + 1] = c0(i).imag();
  }
  auto rhs = [&](const State& s, State& ds, double t) {
    CVector c(n);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = Complex(s[2 * i], s[2 * i + 1]);
    const CVector d = Complex(0.0, -1.0 / hbar) * (H(t).entries() * c);
    for (Eigen::Index i = 0; i < n; ++i) {
      ds[2 * i] = d(i).real();
      ds[2 * i + 1] = d(i).imag();
    }
  };
  ode::integrate_adaptive(ode::make_controlled(1e-12, 1e-12, ode::runge_kutta_dopri5<State>()), rhs, y, t0, t1,
                          1e-5);
  CVector c(n);
  for (Eigen::Index i = 0; i < n; ++i) c(i) = Complex(y[2 * i], y[2 * i + 1]);
  return c;
}

}  // namespace

TEST(Scheme, Names) {
  EXPECT_EQ(scheme_from_string("magnus-midpoint"), Scheme::MagnusMidpoint);
  EXPECT_EQ(scheme_from_string("cn"), Scheme::CrankNicolson);
  EXPECT_EQ(scheme_from_string(to_string(Scheme::CrankNicolson)), Scheme::CrankNicolson);
  EXPECT_THROW(scheme_from_string("euler"), InvalidArgument);
}

TEST(Config, Validate) {
  PropagationConfig c;
  c.N = 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(StepCount, ExactMultiples) {
  EXPECT_EQ(step_count(0.0, 1.0, 0.1), 10u);
  EXPECT_EQ(step_count(0.0, 1.05, 0.1), 11u);
  EXPECT_EQ(step_count(2.0, 2.0, 0.1), 0u);
}

TEST(Hamiltonians, UndrivenLimits) {
  const auto T = qbasis::matrix_T(8, {}).entries();
  EXPECT_EQ(hamiltonian_H0(0.3, 8, DrivingField::none(), {}).entries(), T);
  EXPECT_EQ(hamiltonian_Hchi(0.0, 8, DrivingField::cosine(3.0, 2.0), {}, true).entries(), T);
}

TEST(Hamiltonians, HermitianAndBuildersAgree) {
  PhysicalConstants c;
  c.alpha = 1.4;
  c.mass = 0.8;
  const auto field = DrivingField::cosine(5.0, 7.0);
  const auto b0 = h0_builder(12, field, c);
  const auto bchi = hchi_builder(12, field, c, true);
  for (double t : {0.1, 0.55, 1.3}) {
    const auto H0 = hamiltonian_H0(t, 12, field, c);
    const auto Hchi = hamiltonian_Hchi(t, 12, field, c, true);
    EXPECT_LE(numeric::hermiticity_residual(H0.entries()), 1e-12);
    EXPECT_LE(numeric::hermiticity_residual(Hchi.entries()), 1e-12);
    EXPECT_LT((b0(t).entries() - H0.entries()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((bchi(t).entries() - Hchi.entries()).cwiseAbs().maxCoeff(), 1e-13);
  }
  const double t = 0.4, F = field.F(t);
  const auto no_phase = hamiltonian_Hchi(t, 12, field, c, false).entries();
  const auto with_phase = hamiltonian_Hchi(t, 12, field, c, true).entries();
  EXPECT_NEAR((with_phase - no_phase)(3, 3).real(), c.alpha * c.alpha * F * F / (2 * c.mass), 1e-13);
}

TEST(Propagate, StationaryPhase) {
  PhysicalConstants c;
  c.hbar = 0.9;
  PropagationConfig cfg;
  cfg.N = 6;
  cfg.dt = 0.01;
  const double tau = 0.73;
  for (auto scheme : {Scheme::MagnusMidpoint, Scheme::CrankNicolson}) {
    cfg.scheme = scheme;
    const auto out = propagate(qbasis::SpectralState::basis_state(6, 1, c), h0_builder(6, DrivingField::none(), c), 0.0,
                               tau, cfg);
    const double e = qbasis::energy(1, c) / c.hbar;
    const auto steps = static_cast<double>(step_count(0.0, tau, cfg.dt));
    const double h = tau / steps;
    // The Cayley factor has unit modulus and a phase that lags the exact one.
    const Complex expected = scheme == Scheme::MagnusMidpoint
                                 ? std::polar(1.0, -e * tau)
                                 : std::pow((1.0 - Complex(0.0, 0.5 * e * h)) / (1.0 + Complex(0.0, 0.5 * e * h)), steps);
    EXPECT_NEAR(std::abs(out.coeffs(0) - expected), 0.0, 1e-12);
    EXPECT_NEAR(out.coeffs.tail(5).norm(), 0.0, 1e-15);
  }
}

TEST(Propagate, NormDriftOverManySteps) {
  PropagationConfig cfg;
  cfg.N = 16;
  cfg.dt = 1e-4;
  const auto field = DrivingField::cosine(20.0, 10.0);
  for (auto scheme : {Scheme::MagnusMidpoint, Scheme::CrankNicolson}) {
    cfg.scheme = scheme;
    const auto out = propagate(qbasis::SpectralState::basis_state(16, 1, {}), h0_builder(16, field, {}), 0.0, 1.0, cfg);
    EXPECT_LE(std::abs(out.norm_sq() - 1.0), 1e-10);
  }
}

TEST(Propagate, MatchesOdeReferenceAndIsSecondOrder) {
  PhysicalConstants c;
  c.alpha = 1.1;
  const int N = 8;
  const auto field = DrivingField::cosine(10.0, 9.0);
  const auto H = h0_builder(N, field, c);
  const auto psi0 = qbasis::SpectralState::basis_state(N, 1, c);
  const CVector ref = ode_reference(psi0.coeffs, H, 0.0, 0.5, c.hbar);
  for (auto scheme : {Scheme::MagnusMidpoint, Scheme::CrankNicolson}) {
    PropagationConfig cfg;
    cfg.N = N;
    cfg.scheme = scheme;
    cfg.dt = 5e-4;
    const double e1 = (propagate(psi0, H, 0.0, 0.5, cfg).coeffs - ref).norm();
    cfg.dt = 2.5e-4;
    const double e2 = (propagate(psi0, H, 0.0, 0.5, cfg).coeffs - ref).norm();
    EXPECT_LT(e2, 1e-3);
    EXPECT_NEAR(e1 / e2, 4.0, 0.2) << to_string(scheme);
  }
}

TEST(PropagatorMatrix, ConsistentWithStatePropagation) {
  const auto field = DrivingField::cosine(4.0, 6.0);
  PropagationConfig cfg;
  cfg.N = 10;
  cfg.dt = 1e-3;
  const auto H = hchi_builder(10, field, {}, true);
  CVector v = CVector::Random(10);
  v.normalize();
  qbasis::SpectralState s{v, {}};
  const auto U = propagator_matrix(H, 0.0, 0.3, cfg, {});
  EXPECT_LT((U * v - propagate(s, H, 0.0, 0.3, cfg).coeffs).norm(), 1e-11);
  EXPECT_LT(unitarity_defect(U), 1e-12);
}

TEST(NaivePropagator, UndrivenEqualsExactExponential) {
  PropagationConfig cfg;
  cfg.N = 8;
  cfg.dt = 0.05;
  const auto naive = naive_propagator_chi(0.0, 0.8, 8, DrivingField::none(), {});
  const auto exact = propagator_matrix(hchi_builder(8, DrivingField::none(), {}, true), 0.0, 0.8, cfg, {});
  EXPECT_LT(operator_distance(naive.entries(), exact), 1e-12);
}

TEST(NaivePropagator, ConstantFieldStillDisagrees) {
  PropagationConfig cfg;
  cfg.N = 12;
  cfg.dt = 1e-3;
  const auto field = DrivingField::constant(15.0);
  const auto naive = naive_propagator_chi(0.0, 0.5, 12, field, {});
  const auto exact = propagator_matrix(hchi_builder(12, field, {}, true), 0.0, 0.5, cfg, {});
  EXPECT_LT(unitarity_defect(naive.entries()), 1e-10);
  EXPECT_GT(operator_distance(naive.entries(), exact), 1e-2);
}

TEST(GaugeMap, IdentityAtAnchorAndRoundTrip) {
  const auto field = DrivingField::cosine(3.0, 2.0, 0.25);
  auto s = qbasis::SpectralState::basis_state(20, 2, {});
  const auto same = gauge_map(s, 0.25, field, {}, GaugeDirection::ToZero);
  EXPECT_LT((same.coeffs - s.coeffs).norm(), 1e-14);
  const auto there = gauge_map(s, 1.0, field, {}, GaugeDirection::ToChi);
  const auto back = gauge_map(there, 1.0, field, {}, GaugeDirection::ToZero);
  EXPECT_LT((back.coeffs - s.coeffs).norm(), 1e-3);
}

TEST(GaugeMap, NormChangeSmallAtLargeN) {
  PhysicalConstants c;
  const auto s = qbasis::SpectralState::basis_state(128, 1, c);
  for (double theta : {-4.0, 1.5, 4.0}) {
    // constant field with alpha F(t) / hbar = theta at t = 1
    const auto field = DrivingField::constant(theta);
    const auto out = gauge_map(s, 1.0, field, c, GaugeDirection::ToZero);
    EXPECT_LE(std::abs(out.norm_sq() - 1.0), 1e-8) << theta;
  }
}

TEST(GaugeEquivalence, UndrivenIsExact) {
  PropagationConfig cfg;
  cfg.N = 16;
  cfg.dt = 1e-3;
  const auto r = gauge_equivalence(qbasis::SpectralState::basis_state(16, 1, {}), DrivingField::none(), {}, 0.2, cfg);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_EQ(r.steps, 200u);
}

TEST(GaugeEquivalence, DrivenResidualShrinksWithN) {
  PropagationConfig cfg;
  cfg.dt = 1e-3;
  const auto field = DrivingField::cosine(5.0, 1.5 * kPi * kPi);
  double prev = 1.0;
  for (int N : {8, 16, 32}) {
    cfg.N = N;
    const auto r = gauge_equivalence(qbasis::SpectralState::basis_state(N, 1, {}), field, {}, 0.1, cfg);
    EXPECT_LT(r.residual, prev) << N;
    EXPECT_LE(r.norm_drift_zero, 1e-12);
    prev = r.residual;
  }
}

TEST(GaugeEquivalence, RequiresNormalizedState) {
  PropagationConfig cfg;
  cfg.N = 4;
  qbasis::SpectralState s{CVector::Constant(4, Complex(1.0, 0.0)), {}};
  EXPECT_THROW(gauge_equivalence(s, DrivingField::none(), {}, 0.1, cfg), InvalidArgument);
}

TEST(Distances, Basics) {
  const numeric::CMatrix I = numeric::CMatrix::Identity(3, 3);
  EXPECT_EQ(unitarity_defect(I), 0.0);
  EXPECT_NEAR(operator_distance(I, 2.0 * I), 1.0, 1e-12);
}
