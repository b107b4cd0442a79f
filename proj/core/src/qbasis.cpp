#include "boxgauge/qbasis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "boxgauge/errors.hpp"

namespace boxgauge::qbasis {

using numeric::kPi;

namespace {

void check_index(int n) {
  if (n < 1) throw InvalidArgument("mode index must be >= 1, got " + std::to_string(n));
}

void check_order(int N) {
  if (N < 1) throw InvalidArgument("truncation order must be >= 1");
}

}  // namespace

SpectralState SpectralState::basis_state(int N, int n, const PhysicalConstants& consts) {
  check_order(N);
  if (n < 1 || n > N) throw InvalidArgument("basis state index outside 1..N");
  SpectralState s{CVector::Zero(N), consts};
  s.coeffs(n - 1) = 1.0;
  return s;
}

OperatorMatrix::OperatorMatrix(CMatrix entries, bool hermitian)
    : entries_(std::move(entries)), hermitian_(hermitian) {
  if (entries_.rows() != entries_.cols()) throw InvalidArgument("operator matrix must be square");
  if (hermitian_) {
    const double r = numeric::hermiticity_residual(entries_);
    if (r > kHermitianTolerance) {
      throw NumericalFailure("matrix declared Hermitian has residual " + std::to_string(r));
    }
  }
}

double eigenfunction(int n, double x, const PhysicalConstants& consts) {
  check_index(n);
  const double L = consts.box_length;
  if (!(x >= 0.0 && x <= L)) throw RangeError("position outside the box");
  return std::sqrt(2.0 / L) * std::sin(n * kPi * x / L);
}

double eigenfunction_derivative(int n, double x, const PhysicalConstants& consts) {
  check_index(n);
  const double L = consts.box_length;
  if (!(x >= 0.0 && x <= L)) throw RangeError("position outside the box");
  const double k = n * kPi / L;
  return std::sqrt(2.0 / L) * k * std::cos(k * x);
}

double energy(int n, const PhysicalConstants& consts) {
  check_index(n);
  const double L = consts.box_length;
  return consts.hbar * consts.hbar * kPi * kPi * n * n / (2.0 * consts.mass * L * L);
}

OperatorMatrix matrix_T(int N, const PhysicalConstants& consts) {
  check_order(N);
  CMatrix T = CMatrix::Zero(N, N);
  for (int n = 1; n <= N; ++n) T(n - 1, n - 1) = energy(n, consts);
  return OperatorMatrix(std::move(T), true);
}

OperatorMatrix matrix_P(int N, const PhysicalConstants& consts) {
  check_order(N);
  const double L = consts.box_length;
  CMatrix P = CMatrix::Zero(N, N);
  for (int np = 1; np <= N; ++np) {
    for (int n = 1; n <= N; ++n) {
      if ((n + np) % 2 == 0) continue;
      const double d = static_cast<double>(np) * np - static_cast<double>(n) * n;
      P(np - 1, n - 1) = Complex(0.0, -4.0 * consts.hbar * n * np / (L * d));
    }
  }
  return OperatorMatrix(std::move(P), true);
}

OperatorMatrix matrix_x(int N, const PhysicalConstants& consts) {
  check_order(N);
  const double L = consts.box_length;
  CMatrix X = CMatrix::Zero(N, N);
  for (int np = 1; np <= N; ++np) {
    for (int n = 1; n <= N; ++n) {
      if (n == np) {
        X(np - 1, n - 1) = 0.5 * L;
      } else if ((n + np) % 2 == 1) {
        const double d = static_cast<double>(np) * np - static_cast<double>(n) * n;
        X(np - 1, n - 1) = -8.0 * L * n * np / (kPi * kPi * d * d);
      }
    }
  }
  return OperatorMatrix(std::move(X), true);
}

std::size_t gauge_phase_nodes(int N, double theta, const PhysicalConstants& consts) {
  const double extra = std::abs(theta) * consts.box_length / kPi;
  return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(8.0 * (N + extra))));
}

OperatorMatrix matrix_gauge_phase(int N, double theta, const PhysicalConstants& consts) {
  check_order(N);
  const double L = consts.box_length;
  const auto rule = numeric::gauss_legendre(gauge_phase_nodes(N, theta, consts), 0.0, L);
  const auto Q = static_cast<Eigen::Index>(rule.nodes.size());
  Eigen::MatrixXd S(Q, N);
  CVector weight(Q);
  for (Eigen::Index q = 0; q < Q; ++q) {
    const double x = rule.nodes[q];
    for (int n = 1; n <= N; ++n) S(q, n - 1) = std::sqrt(2.0 / L) * std::sin(n * kPi * x / L);
    weight(q) = rule.weights[q] * std::polar(1.0, -theta * x);
  }
  CMatrix G = S.transpose().cast<Complex>() * (weight.asDiagonal() * S.cast<Complex>());
  return OperatorMatrix(std::move(G), false);
}

BoundaryValues boundary_value_P(int n, const PhysicalConstants& consts) {
  const double L = consts.box_length;
  const Complex minus_i_hbar(0.0, -consts.hbar);
  return {minus_i_hbar * eigenfunction_derivative(n, 0.0, consts),
          minus_i_hbar * eigenfunction_derivative(n, L, consts)};
}

Complex commutator_PT_element(int n_prime, int n, const PhysicalConstants& consts) {
  check_index(n_prime);
  check_index(n);
  if ((n + n_prime) % 2 == 0) return {0.0, 0.0};
  const double L = consts.box_length;
  const double d = static_cast<double>(n_prime) * n_prime - static_cast<double>(n) * n;
  const Complex p(0.0, -4.0 * consts.hbar * n * n_prime / (L * d));
  return (energy(n, consts) - energy(n_prime, consts)) * p;
}

}  // namespace boxgauge::qbasis
