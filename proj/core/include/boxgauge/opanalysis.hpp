#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boxgauge/model.hpp"
#include "boxgauge/numeric.hpp"

namespace boxgauge::opanalysis {

using model::PhysicalConstants;
using numeric::Complex;
using numeric::CVector;

/// Real coefficient A(x) of the generalized dilation operator together with the
/// bounds A0 >= sup|A| and A0_prime >= sup|A'| on [0, L].
struct BoundedCoefficient {
  std::string family;
  double param = 0.0;  ///< value (constant) or slope (linear)
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double A0 = 0.0;
  double A0_prime = 0.0;

  static BoundedCoefficient constant(double c);
  /// (1 + cos(2 pi x / L)) / 2.
  static BoundedCoefficient bump(const PhysicalConstants& consts);
  /// slope * x.
  static BoundedCoefficient linear(double slope, const PhysicalConstants& consts);
  /// {"family": "constant"|"bump"|"linear", "value"?, "slope"?}. Unknown keys are rejected.
  static BoundedCoefficient from_json(const nlohmann::json& j, const PhysicalConstants& consts);

  nlohmann::json descriptor() const;

  /// Checks the stated bounds at Gauss-Legendre nodes; throws InvalidArgument on violation.
  void check_bounds(const PhysicalConstants& consts, std::size_t nodes = 512) const;
};

/// Finite sine series sum_n c_n phi_n. Vanishes at both walls by construction.
struct TrialState {
  CVector coeffs;

  Complex value(double x, const PhysicalConstants& consts) const;
  Complex derivative(double x, const PhysicalConstants& consts) const;
  /// sum |c_n|^2
  double norm_sq() const { return coeffs.squaredNorm(); }
  /// <T> = sum E_n |c_n|^2
  double expect_T(const PhysicalConstants& consts) const;
  /// ||T phi||^2 = sum E_n^2 |c_n|^2
  double norm_sq_T(const PhysicalConstants& consts) const;
};

/// Arbitrary smooth function on [0, L] (not necessarily in the operator domain).
struct TestFunction {
  std::function<Complex(double)> value;
  std::function<Complex(double)> derivative;

  static TestFunction from_trial(const TrialState& phi, const PhysicalConstants& consts);
};

/// (hbar / 2i)(2 A phi' + A' phi) at x. Throws RangeError outside [0, L].
Complex apply_dilation(const BoundedCoefficient& A, const TrialState& phi, double x, const PhysicalConstants& consts);
Complex apply_dilation(const BoundedCoefficient& A, const TestFunction& phi, double x, const PhysicalConstants& consts);

/// Gauss-Legendre node count used for dilation integrals with N modes.
std::size_t dilation_nodes(std::size_t N);

/// || D_A phi ||^2 by Gauss-Legendre quadrature.
double norm_sq_dilation(const BoundedCoefficient& A, const TrialState& phi, const PhysicalConstants& consts);

/// (hbar/i) [psi* A phi] evaluated between 0 and L.
Complex symmetry_boundary_term(const BoundedCoefficient& A, const TestFunction& psi, const TestFunction& phi,
                               const PhysicalConstants& consts);
Complex symmetry_boundary_term(const BoundedCoefficient& A, const TrialState& psi, const TrialState& phi,
                               const PhysicalConstants& consts);

/// <psi|D_A phi> - <D_A psi|phi> by quadrature with `nodes` points.
Complex adjoint_defect(const BoundedCoefficient& A, const TestFunction& psi, const TestFunction& phi,
                       const PhysicalConstants& consts, std::size_t nodes);
Complex adjoint_defect(const BoundedCoefficient& A, const TrialState& psi, const TrialState& phi,
                       const PhysicalConstants& consts);

/// First n sine-series coefficients of D_A phi, projected by quadrature.
CVector project_dilation(const BoundedCoefficient& A, const TrialState& phi, const PhysicalConstants& consts,
                         int n_modes);

struct KatoRellichConstants {
  double a = 0.0;
  double b = 0.0;
  double b0 = 0.0;
  int b0_argmax = 1;  ///< mode index attaining b0
};

/// Upper limit on a0 that keeps the relative bound a below one.
double admissible_a0_bound(const BoundedCoefficient& A, const PhysicalConstants& consts);

/// b0 = max_n (E_n - a0 E_n^2), a = (2A0 + A0') m A0 a0, b = (2A0 + A0')(m A0 b0 + hbar^2 A0' / 4).
/// Throws InvalidArgument (naming the bound) when a0 is not admissible.
KatoRellichConstants kato_rellich_constants(const BoundedCoefficient& A, double a0, const PhysicalConstants& consts);

/// Every link of the estimate chain for one state.
struct RelativeBound {
  double lhs = 0.0;           ///< ||D_A phi||^2
  double intermediate = 0.0;  ///< (2A0 + A0')(m A0 <T> + hbar^2 A0' ||phi||^2 / 4)
  double rhs = 0.0;           ///< a ||T phi||^2 + b ||phi||^2
  double expect_T_sq = 0.0;   ///< <T>^2
  double schwarz_bound = 0.0; ///< ||T phi||^2 ||phi||^2
  double expect_T = 0.0;
  double expect_T_bound = 0.0;  ///< a0 ||T phi||^2 + b0 ||phi||^2
  bool lhs_le_intermediate = false;
  bool intermediate_le_rhs = false;
  bool schwarz = false;
  bool expect_T_link = false;
  bool holds = false;  ///< all links and lhs <= rhs
  double margin = 0.0; ///< (rhs - lhs) / rhs
};

/// Relative slack granted to each inequality for quadrature rounding.
inline constexpr double kBoundSlack = 1e-10;

RelativeBound verify_relative_bound(const BoundedCoefficient& A, const TrialState& phi, double a0,
                                    const PhysicalConstants& consts);

struct AuditReport {
  nlohmann::json coefficient;
  double a0 = 0.0;
  KatoRellichConstants constants;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

/// Seeded Monte Carlo check of the chain on random normalized N-mode states.
/// Each trial draws a number of active modes K in [1, N] and complex Gaussian
/// coefficients on them. a0 <= 0 selects half the admissible bound.
AuditReport bound_audit(const BoundedCoefficient& A, double a0, std::size_t trials, int N, std::uint64_t seed,
                        const PhysicalConstants& consts);

/// Solutions of A psi' = (+-1 - A'/2) psi with hbar = 1, anchored at L/2.
struct DefectSolutions {
  std::function<double(double)> psi_plus;
  std::function<double(double)> psi_minus;
  /// log |psi|^2, usable where psi itself over- or underflows.
  std::function<double(double)> log_abs2_plus;
  std::function<double(double)> log_abs2_minus;
  int n_plus = 0;
  int n_minus = 0;
  /// fitted exponents gamma of |psi|^2 ~ d^gamma at (left, right) for + and -
  std::pair<double, double> gamma_plus;
  std::pair<double, double> gamma_minus;
};

inline constexpr double kExponentMargin = 0.05;

/// Throws AnalysisError if A changes sign or vanishes inside (0, L), or if an
/// endpoint exponent lands within the margin of -1.
DefectSolutions defect_solutions(const BoundedCoefficient& A, const PhysicalConstants& consts);

/// Largest relative plug-back residual |A psi' - (s - A'/2) psi| / (|A psi'| + |(s - A'/2) psi|)
/// over interior Gauss-Legendre nodes, psi' from a five-point stencil; s = +1 or -1.
double defect_residual(const BoundedCoefficient& A, int sign, const PhysicalConstants& consts,
                       std::size_t nodes = 32);

}  // namespace boxgauge::opanalysis
