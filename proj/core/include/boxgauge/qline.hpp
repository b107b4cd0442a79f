#pragma once

#include <complex>
#include <vector>

#include "boxgauge/model.hpp"

namespace boxgauge::qline {

using model::DrivingField;
using model::PhysicalConstants;
using Complex = std::complex<double>;

/// Periodic grid x_j = x_min + j dx, j = 0..M-1, dx = (x_max - x_min) / M.
struct Grid {
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t M = 1024;

  /// Throws ConfigurationError unless M is a power of two (>= 4) and x_max > x_min.
  void validate() const;
  double dx() const { return (x_max - x_min) / static_cast<double>(M); }
  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }
  /// Angular wavenumber of FFT bin j (negative frequencies in the upper half).
  double k(std::size_t j) const;
  double k_max() const;
};

struct GridWavepacket {
  Grid grid;
  std::vector<Complex> samples;
  double t = 0.0;

  double norm_sq() const;
  double mean_x() const;
  /// <p> from the discrete Fourier transform (spectral differentiation).
  double mean_p(const PhysicalConstants& consts) const;
  double var_x() const;
  /// Probability outside the central half of the window.
  double edge_mass() const;
};

/// Minimum-uncertainty Gaussian with position spread sigma. Throws
/// ConfigurationError when x0 +- 6 sigma leaves the window or the momentum
/// content is not resolved by the grid.
GridWavepacket gaussian_packet(double x0, double p0, double sigma, const Grid& grid, const PhysicalConstants& consts,
                               double t = 0.0);

/// Exact chi-gauge evolution for a constant field: in momentum space the
/// Hamiltonians at different times commute on the line. Requires a Constant field.
GridWavepacket analytic_propagate_chi(const GridWavepacket& packet, double t0, double t1, const DrivingField& field,
                                      const PhysicalConstants& consts);

/// Same for any field, with int F and int F^2 evaluated numerically where needed.
GridWavepacket propagate_chi(const GridWavepacket& packet, double t0, double t1, const DrivingField& field,
                             const PhysicalConstants& consts);

/// Pointwise multiplication by exp(-(i/hbar) alpha F(t) x_j), or by the conjugate.
GridWavepacket gauge_phase_line(const GridWavepacket& packet, double t, const DrivingField& field,
                                const PhysicalConstants& consts, bool inverse = false);

/// Strang splitting of T + alpha f(t) x with the field sampled at step midpoints.
GridWavepacket split_step_H0(const GridWavepacket& packet, double t0, double t1, std::size_t steps,
                             const DrivingField& field, const PhysicalConstants& consts);

/// Grid 2-norm sqrt(sum |a_j - b_j|^2 dx).
double grid_distance(const GridWavepacket& a, const GridWavepacket& b);

/// || U(t1) U_chi(t1, t0) U(t0)^dagger psi - U_0(t1, t0) psi || with t0 = field.t0()
/// and t1 = t0 + tau. Constant fields use the closed form on the left.
double bch_check(const GridWavepacket& packet, double tau, const DrivingField& field,
                 const PhysicalConstants& consts, std::size_t steps);

struct EhrenfestSample {
  double t = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double x_classical = 0.0;
  double deviation = 0.0;
};

/// Split-step evolution through t_grid (starting at packet.t) with steps no longer
/// than dt_max, comparing <x> with the classical line solution from (<x>_0, <p>_0/m).
/// Throws HorizonError if the mass outside the central half exceeds 1e-6.
std::vector<EhrenfestSample> ehrenfest_check(const GridWavepacket& packet, const std::vector<double>& t_grid,
                                             const DrivingField& field, const PhysicalConstants& consts,
                                             double dt_max);

inline constexpr double kEdgeMassLimit = 1e-6;

}  // namespace boxgauge::qline
