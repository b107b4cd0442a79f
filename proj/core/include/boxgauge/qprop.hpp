#pragma once

#include <functional>
#include <string>

#include "boxgauge/model.hpp"
#include "boxgauge/qbasis.hpp"

namespace boxgauge::qprop {

using model::DrivingField;
using model::PhysicalConstants;
using qbasis::OperatorMatrix;
using qbasis::SpectralState;
using numeric::CMatrix;

enum class Scheme { MagnusMidpoint, CrankNicolson };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

struct PropagationConfig {
  int N = 32;
  double dt = 1e-3;
  Scheme scheme = Scheme::MagnusMidpoint;
  bool include_F2_phase = true;

  void validate() const;
};

/// Truncated Hamiltonian at time t.
using HamiltonianBuilder = std::function<OperatorMatrix(double t)>;

/// T + alpha f(t) x.
OperatorMatrix hamiltonian_H0(double t, int N, const DrivingField& field, const PhysicalConstants& consts);

/// T - (alpha/m) F(t) P, plus alpha^2 F(t)^2 / 2m times the identity when requested.
OperatorMatrix hamiltonian_Hchi(double t, int N, const DrivingField& field,
                                const PhysicalConstants& consts, bool include_F2_phase);

HamiltonianBuilder h0_builder(int N, const DrivingField& field, const PhysicalConstants& consts);
HamiltonianBuilder hchi_builder(int N, const DrivingField& field, const PhysicalConstants& consts,
                                bool include_F2_phase);

/// Number of uniform steps used to cover [t0, t1] with steps no longer than dt.
std::size_t step_count(double t0, double t1, double dt);

/// Time-ordered evolution from t0 to t1. MagnusMidpoint applies
/// exp(-(i/hbar) dt H(t_mid)) each step; CrankNicolson solves the Cayley form.
SpectralState propagate(const SpectralState& state, const HamiltonianBuilder& hamiltonian, double t0,
                        double t1, const PropagationConfig& config);

/// The full time-ordered propagator matrix, stepped the same way as propagate().
CMatrix propagator_matrix(const HamiltonianBuilder& hamiltonian, double t0, double t1,
                          const PropagationConfig& config, const PhysicalConstants& consts);

/// The commuting-Hamiltonian propagator exp[-(i/hbar)(T (t1-t0) - (alpha/m) P int F
/// + (alpha^2/2m) int F^2)]. INCORRECT in the box: kept as a falsifiable baseline.
OperatorMatrix naive_propagator_chi(double t0, double t1, int N, const DrivingField& field,
                                    const PhysicalConstants& consts);

enum class GaugeDirection {
  ToZero,  ///< apply U(t) = exp(-(i/hbar) alpha x F(t)): chi-gauge state -> gauge-0 state
  ToChi,   ///< apply U(t)^dagger: gauge-0 state -> chi-gauge state
};

SpectralState gauge_map(const SpectralState& state, double t, const DrivingField& field,
                        const PhysicalConstants& consts, GaugeDirection direction);

struct GaugeResidual {
  double residual = 0.0;  ///< || Phi_0(t) - U(t) Phi_chi(t) ||
  double norm_drift_zero = 0.0;
  double norm_drift_chi = 0.0;
  std::size_t steps = 0;
};

/// Propagates `initial` (given at field.t0() in gauge 0) with H0, and its gauge image
/// with Hchi (F^2 phase always included), then compares in gauge 0 at time t.
GaugeResidual gauge_equivalence(const SpectralState& initial, const DrivingField& field,
                                const PhysicalConstants& consts, double t, const PropagationConfig& config);

double gauge_equivalence_residual(const SpectralState& initial, const DrivingField& field,
                                  const PhysicalConstants& consts, double t,
                                  const PropagationConfig& config);

/// Largest singular value of A - B (power iteration, 100 steps).
double operator_distance(const CMatrix& A, const CMatrix& B);

/// max |U^dagger U - I|.
double unitarity_defect(const CMatrix& U);

}  // namespace boxgauge::qprop
