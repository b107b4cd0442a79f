#pragma once

#include <complex>

#include "boxgauge/model.hpp"
#include "boxgauge/numeric.hpp"

namespace boxgauge::qbasis {

using model::PhysicalConstants;
using numeric::CMatrix;
using numeric::Complex;
using numeric::CVector;

/// Coefficients c_n = <phi_n|phi> over the first N box eigenstates (index n-1).
struct SpectralState {
  CVector coeffs;
  PhysicalConstants consts;

  static SpectralState basis_state(int N, int n, const PhysicalConstants& consts);

  int size() const noexcept { return static_cast<int>(coeffs.size()); }
  double norm_sq() const { return coeffs.squaredNorm(); }
  /// |c_n|^2, n = 1..N.
  Eigen::VectorXd populations() const { return coeffs.cwiseAbs2(); }
};

/// Truncated operator in the box eigenbasis. A Hermitian flag is checked on
/// construction (max |M - M^dagger| <= 1e-12).
class OperatorMatrix {
 public:
  OperatorMatrix(CMatrix entries, bool hermitian);

  const CMatrix& entries() const noexcept { return entries_; }
  bool hermitian() const noexcept { return hermitian_; }
  int size() const noexcept { return static_cast<int>(entries_.rows()); }
  Complex operator()(int row, int col) const { return entries_(row, col); }

 private:
  CMatrix entries_;
  bool hermitian_;
};

inline constexpr double kHermitianTolerance = 1e-12;

/// sqrt(2/L) sin(n pi x / L). Throws RangeError for x outside [0, L].
double eigenfunction(int n, double x, const PhysicalConstants& consts);
/// d/dx of eigenfunction(n, x).
double eigenfunction_derivative(int n, double x, const PhysicalConstants& consts);

/// E_n = hbar^2 pi^2 n^2 / (2 m L^2).
double energy(int n, const PhysicalConstants& consts);

OperatorMatrix matrix_T(int N, const PhysicalConstants& consts);

/// <phi_n'|(hbar/i) d/dx|phi_n>. Hermitian as a finite matrix even though the
/// operator on the box is only symmetric: truncation cannot see the boundary.
OperatorMatrix matrix_P(int N, const PhysicalConstants& consts);

/// <phi_n'|x|phi_n>, real symmetric.
OperatorMatrix matrix_x(int N, const PhysicalConstants& consts);

/// <phi_n'|exp(-i theta x)|phi_n> by Gauss-Legendre quadrature. Not Hermitian;
/// unitary only in the limit N -> infinity.
OperatorMatrix matrix_gauge_phase(int N, double theta, const PhysicalConstants& consts);

/// Number of Gauss-Legendre nodes used by matrix_gauge_phase.
std::size_t gauge_phase_nodes(int N, double theta, const PhysicalConstants& consts);

/// (P phi_n)(0) and (P phi_n)(L). Both are nonzero for every n, so P phi_n
/// leaves the domain of the momentum operator.
struct BoundaryValues {
  Complex left;
  Complex right;
};
BoundaryValues boundary_value_P(int n, const PhysicalConstants& consts);

/// <phi_n'|[P, T]|phi_n> regularized as (E_n - E_n') P_{n'n}.
Complex commutator_PT_element(int n_prime, int n, const PhysicalConstants& consts);

}  // namespace boxgauge::qbasis
