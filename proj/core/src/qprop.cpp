#include "boxgauge/qprop.hpp"

#include <cmath>

#include "boxgauge/errors.hpp"

namespace boxgauge::qprop {

using numeric::Complex;
using numeric::CVector;

std::string to_string(Scheme scheme) {
  return scheme == Scheme::MagnusMidpoint ? "magnus-midpoint" : "crank-nicolson";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "magnus-midpoint" || name == "MagnusMidpoint" || name == "magnus") {
    return Scheme::MagnusMidpoint;
  }
  if (name == "crank-nicolson" || name == "CrankNicolson" || name == "cn") {
    return Scheme::CrankNicolson;
  }
  throw InvalidArgument("unknown propagation scheme '" + name + "'");
}

void PropagationConfig::validate() const {
  if (N < 2) throw InvalidArgument("propagation needs N >= 2");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
}

OperatorMatrix hamiltonian_H0(double t, int N, const DrivingField& field,
                              const PhysicalConstants& consts) {
  CMatrix H = qbasis::matrix_T(N, consts).entries();
  const double g = consts.alpha * field.f(t);
  if (g != 0.0) H += g * qbasis::matrix_x(N, consts).entries();
  return OperatorMatrix(std::move(H), true);
}

OperatorMatrix hamiltonian_Hchi(double t, int N, const DrivingField& field,
                                const PhysicalConstants& consts, bool include_F2_phase) {
  CMatrix H = qbasis::matrix_T(N, consts).entries();
  const double F = field.F(t);
  if (F != 0.0) H -= (consts.alpha / consts.mass * F) * qbasis::matrix_P(N, consts).entries();
  if (include_F2_phase) {
    H.diagonal().array() += consts.alpha * consts.alpha * F * F / (2.0 * consts.mass);
  }
  return OperatorMatrix(std::move(H), true);
}

HamiltonianBuilder h0_builder(int N, const DrivingField& field, const PhysicalConstants& consts) {
  // The matrices are time independent; only the scalar prefactor changes.
  auto T = std::make_shared<CMatrix>(qbasis::matrix_T(N, consts).entries());
  auto X = std::make_shared<CMatrix>(qbasis::matrix_x(N, consts).entries());
  return [T, X, field, consts](double t) {
    return OperatorMatrix(*T + (consts.alpha * field.f(t)) * *X, true);
  };
}

HamiltonianBuilder hchi_builder(int N, const DrivingField& field, const PhysicalConstants& consts,
                                bool include_F2_phase) {
  auto T = std::make_shared<CMatrix>(qbasis::matrix_T(N, consts).entries());
  auto P = std::make_shared<CMatrix>(qbasis::matrix_P(N, consts).entries());
  return [T, P, field, consts, include_F2_phase](double t) {
    const double F = field.F(t);
    CMatrix H = *T - (consts.alpha / consts.mass * F) * *P;
    if (include_F2_phase) {
      H.diagonal().array() += consts.alpha * consts.alpha * F * F / (2.0 * consts.mass);
    }
    return OperatorMatrix(std::move(H), true);
  };
}

std::size_t step_count(double t0, double t1, double dt) {
  const double span = std::abs(t1 - t0);
  if (span == 0.0) return 0;
  // Absorb floating-point noise so that span = k dt yields exactly k steps.
  return static_cast<std::size_t>(std::ceil(span / dt * (1.0 - 1e-12)));
}

namespace {

CMatrix cayley_step_lhs(const CMatrix& H, double h_over_hbar) {
  CMatrix A = (Complex(0.0, 0.5 * h_over_hbar)) * H;
  A.diagonal().array() += 1.0;
  return A;
}

}  // namespace

SpectralState propagate(const SpectralState& state, const HamiltonianBuilder& hamiltonian, double t0,
                        double t1, const PropagationConfig& config) {
  config.validate();
  if (state.size() != config.N) throw InvalidArgument("state dimension differs from config.N");
  const std::size_t steps = step_count(t0, t1, config.dt);
  SpectralState out = state;
  if (steps == 0) return out;
  const double h = (t1 - t0) / static_cast<double>(steps);
  const double hbar = state.consts.hbar;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t_mid = t0 + (static_cast<double>(k) + 0.5) * h;
    const OperatorMatrix H = hamiltonian(t_mid);
    if (H.size() != config.N) throw InvalidArgument("Hamiltonian dimension differs from config.N");
    if (config.scheme == Scheme::MagnusMidpoint) {
      out.coeffs = numeric::chebyshev_expm_action(H.entries(), h / hbar, out.coeffs);
    } else {
      const CMatrix A = cayley_step_lhs(H.entries(), h / hbar);
      const CVector rhs = out.coeffs - Complex(0.0, 0.5 * h / hbar) * (H.entries() * out.coeffs);
      Eigen::PartialPivLU<CMatrix> lu(A);
      const double rcond = lu.rcond();
      if (!(rcond > 1e-14)) {
        throw NumericalFailure("Crank-Nicolson system singular within tolerance",
                               std::make_pair(t_mid - 0.5 * h, t_mid + 0.5 * h));
      }
      out.coeffs = lu.solve(rhs);
    }
  }
  return out;
}

CMatrix propagator_matrix(const HamiltonianBuilder& hamiltonian, double t0, double t1,
                          const PropagationConfig& config, const PhysicalConstants& consts) {
  config.validate();
  const std::size_t steps = step_count(t0, t1, config.dt);
  CMatrix U = CMatrix::Identity(config.N, config.N);
  if (steps == 0) return U;
  const double h = (t1 - t0) / static_cast<double>(steps);
  const double hs = h / consts.hbar;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t_mid = t0 + (static_cast<double>(k) + 0.5) * h;
    const OperatorMatrix H = hamiltonian(t_mid);
    if (config.scheme == Scheme::MagnusMidpoint) {
      U = numeric::hermitian_expm(H.entries(), hs) * U;
    } else {
      const CMatrix A = cayley_step_lhs(H.entries(), hs);
      CMatrix B = (Complex(0.0, -0.5 * hs)) * H.entries();
      B.diagonal().array() += 1.0;
      U = A.partialPivLu().solve(B * U);
    }
  }
  return U;
}

OperatorMatrix naive_propagator_chi(double t0, double t1, int N, const DrivingField& field,
                                    const PhysicalConstants& consts) {
  const double tau = t1 - t0;
  const double int_F = field.flight_integral(t0, t1) + field.F(t0) * tau;
  const double int_F2 = numeric::integrate_adaptive(
      [&](double s) {
        const double F = field.F(s);
        return F * F;
      },
      std::min(t0, t1), std::max(t0, t1)) * (tau < 0.0 ? -1.0 : 1.0);
  CMatrix K = tau * qbasis::matrix_T(N, consts).entries() -
              (consts.alpha / consts.mass * int_F) * qbasis::matrix_P(N, consts).entries();
  K.diagonal().array() += consts.alpha * consts.alpha / (2.0 * consts.mass) * int_F2;
  return OperatorMatrix(numeric::hermitian_expm(K, 1.0 / consts.hbar), false);
}

SpectralState gauge_map(const SpectralState& state, double t, const DrivingField& field,
                        const PhysicalConstants& consts, GaugeDirection direction) {
  const double theta = consts.alpha * field.F(t) / consts.hbar;
  const auto G = qbasis::matrix_gauge_phase(state.size(), theta, consts);
  SpectralState out = state;
  if (direction == GaugeDirection::ToZero) {
    out.coeffs = G.entries() * state.coeffs;
  } else {
    out.coeffs = G.entries().adjoint() * state.coeffs;
  }
  return out;
}

GaugeResidual gauge_equivalence(const SpectralState& initial, const DrivingField& field,
                                const PhysicalConstants& consts, double t,
                                const PropagationConfig& config) {
  config.validate();
  if (initial.size() != config.N) throw InvalidArgument("state dimension differs from config.N");
  const double n0 = initial.norm_sq();
  if (std::abs(n0 - 1.0) > 1e-12) throw InvalidArgument("initial state must be normalized");
  const double t0 = field.t0();

  const auto phi0 = propagate(initial, h0_builder(config.N, field, consts), t0, t, config);
  const auto chi0 = gauge_map(initial, t0, field, consts, GaugeDirection::ToChi);
  // The F^2 term is kept so the comparison is a plain vector norm, not modulo phase.
  const auto phichi = propagate(chi0, hchi_builder(config.N, field, consts, true), t0, t, config);
  const auto back = gauge_map(phichi, t, field, consts, GaugeDirection::ToZero);

  GaugeResidual r;
  r.residual = (phi0.coeffs - back.coeffs).norm();
  r.norm_drift_zero = std::abs(phi0.norm_sq() - n0);
  r.norm_drift_chi = std::abs(phichi.norm_sq() - chi0.norm_sq());
  r.steps = step_count(t0, t, config.dt);
  return r;
}

double gauge_equivalence_residual(const SpectralState& initial, const DrivingField& field,
                                  const PhysicalConstants& consts, double t,
                                  const PropagationConfig& config) {
  return gauge_equivalence(initial, field, consts, t, config).residual;
}

double operator_distance(const CMatrix& A, const CMatrix& B) { return numeric::operator_norm(A - B); }

double unitarity_defect(const CMatrix& U) {
  CMatrix D = U.adjoint() * U;
  D.diagonal().array() -= 1.0;
  return D.cwiseAbs().maxCoeff();
}

}  // namespace boxgauge::qprop
