#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace boxgauge::numeric {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule mapped onto [a, b] with at least n nodes: n is rounded up
/// to a tabulated order, and beyond 1024 the interval is split into 512-node panels.
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// Adaptive Gauss-Kronrod integration tolerating integrable endpoint
/// singularities. Throws NumericalFailure when the tolerance is not reached.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double epsabs = 1e-13, double epsrel = 1e-12);

/// exp(-i * scale * H) for Hermitian H, via eigendecomposition.
CMatrix hermitian_expm(const CMatrix& H, double scale);

/// exp(-i * scale * H) v via a Chebyshev expansion. H must be Hermitian;
/// spectral bounds come from Gershgorin discs.
CVector chebyshev_expm_action(const CMatrix& H, double scale, const CVector& v);

/// Largest singular value of M, estimated by power iteration on M^dagger M.
double operator_norm(const CMatrix& M, int iterations = 100);

/// max_ij |M - M^dagger|.
double hermiticity_residual(const CMatrix& M);

}  // namespace boxgauge::numeric
