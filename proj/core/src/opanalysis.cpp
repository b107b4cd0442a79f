#include "boxgauge/opanalysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "boxgauge/errors.hpp"
#include "boxgauge/qbasis.hpp"

namespace boxgauge::opanalysis {

using numeric::kPi;

namespace {

constexpr Complex kI{0.0, 1.0};

void check_x(double x, const PhysicalConstants& consts) {
  if (!(x >= 0.0 && x <= consts.box_length)) {
    throw RangeError("position outside the box [0, L]");
  }
}

Complex dilation_value(double A, double dA, Complex phi, Complex dphi, double hbar) {
  return hbar / (2.0 * kI) * (2.0 * A * dphi + dA * phi);
}

}  // namespace

BoundedCoefficient BoundedCoefficient::constant(double c) {
  BoundedCoefficient A;
  A.family = "constant";
  A.param = c;
  A.value = [c](double) { return c; };
  A.derivative = [](double) { return 0.0; };
  A.A0 = std::abs(c);
  A.A0_prime = 0.0;
  return A;
}

BoundedCoefficient BoundedCoefficient::bump(const PhysicalConstants& consts) {
  const double k = 2.0 * kPi / consts.box_length;
  BoundedCoefficient A;
  A.family = "bump";
  A.value = [k](double x) { return 0.5 * (1.0 + std::cos(k * x)); };
  A.derivative = [k](double x) { return -0.5 * k * std::sin(k * x); };
  A.A0 = 1.0;
  A.A0_prime = 0.5 * k;
  return A;
}

BoundedCoefficient BoundedCoefficient::linear(double slope, const PhysicalConstants& consts) {
  BoundedCoefficient A;
  A.family = "linear";
  A.param = slope;
  A.value = [slope](double x) { return slope * x; };
  A.derivative = [slope](double) { return slope; };
  A.A0 = std::abs(slope) * consts.box_length;
  A.A0_prime = std::abs(slope);
  return A;
}

BoundedCoefficient BoundedCoefficient::from_json(const nlohmann::json& j, const PhysicalConstants& consts) {
  if (!j.is_object() || !j.contains("family")) {
    throw ConfigurationError("coefficient descriptor needs a \"family\" key");
  }
  const auto family = j.at("family").get<std::string>();
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : j.items()) {
      if (key == "family") continue;
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        throw ConfigurationError("unknown key '" + key + "' in " + family + " coefficient");
      }
    }
  };
  if (family == "constant") {
    reject_unknown({"value"});
    return constant(j.value("value", 1.0));
  }
  if (family == "bump") {
    reject_unknown({});
    return bump(consts);
  }
  if (family == "linear") {
    reject_unknown({"slope"});
    return linear(j.value("slope", 1.0), consts);
  }
  throw ConfigurationError("unknown coefficient family '" + family + "'");
}

nlohmann::json BoundedCoefficient::descriptor() const {
  nlohmann::json j{{"family", family}, {"A0", A0}, {"A0_prime", A0_prime}};
  if (family == "constant") j["value"] = param;
  if (family == "linear") j["slope"] = param;
  return j;
}

void BoundedCoefficient::check_bounds(const PhysicalConstants& consts, std::size_t nodes) const {
  const auto rule = numeric::gauss_legendre(nodes, 0.0, consts.box_length);
  const double tol = 1e-12 * std::max(1.0, A0 + A0_prime);
  for (const double x : rule.nodes) {
    if (std::abs(value(x)) > A0 + tol || std::abs(derivative(x)) > A0_prime + tol) {
      std::ostringstream os;
      os << family << " coefficient exceeds its stated bounds at x = " << x;
      throw InvalidArgument(os.str());
    }
  }
}

Complex TrialState::value(double x, const PhysicalConstants& consts) const {
  Complex s = 0.0;
  for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
    s += coeffs[n] * qbasis::eigenfunction(static_cast<int>(n) + 1, x, consts);
  }
  return s;
}

Complex TrialState::derivative(double x, const PhysicalConstants& consts) const {
  Complex s = 0.0;
  for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
    s += coeffs[n] * qbasis::eigenfunction_derivative(static_cast<int>(n) + 1, x, consts);
  }
  return s;
}

double TrialState::expect_T(const PhysicalConstants& consts) const {
  double s = 0.0;
  for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
    s += qbasis::energy(static_cast<int>(n) + 1, consts) * std::norm(coeffs[n]);
  }
  return s;
}

double TrialState::norm_sq_T(const PhysicalConstants& consts) const {
  double s = 0.0;
  for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
    const double E = qbasis::energy(static_cast<int>(n) + 1, consts);
    s += E * E * std::norm(coeffs[n]);
  }
  return s;
}

TestFunction TestFunction::from_trial(const TrialState& phi, const PhysicalConstants& consts) {
  return TestFunction{[phi, consts](double x) { return phi.value(x, consts); },
                      [phi, consts](double x) { return phi.derivative(x, consts); }};
}

Complex apply_dilation(const BoundedCoefficient& A, const TrialState& phi, double x, const PhysicalConstants& consts) {
  check_x(x, consts);
  return dilation_value(A.value(x), A.derivative(x), phi.value(x, consts), phi.derivative(x, consts), consts.hbar);
}

Complex apply_dilation(const BoundedCoefficient& A, const TestFunction& phi, double x,
                       const PhysicalConstants& consts) {
  check_x(x, consts);
  return dilation_value(A.value(x), A.derivative(x), phi.value(x), phi.derivative(x), consts.hbar);
}

std::size_t dilation_nodes(std::size_t N) { return std::max<std::size_t>(64, 8 * (N + 4)); }

double norm_sq_dilation(const BoundedCoefficient& A, const TrialState& phi, const PhysicalConstants& consts) {
  const auto rule = numeric::gauss_legendre(dilation_nodes(phi.coeffs.size()), 0.0, consts.box_length);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    s += rule.weights[i] * std::norm(apply_dilation(A, phi, rule.nodes[i], consts));
  }
  return s;
}

Complex symmetry_boundary_term(const BoundedCoefficient& A, const TestFunction& psi, const TestFunction& phi,
                               const PhysicalConstants& consts) {
  const double L = consts.box_length;
  const Complex right = std::conj(psi.value(L)) * A.value(L) * phi.value(L);
  const Complex left = std::conj(psi.value(0.0)) * A.value(0.0) * phi.value(0.0);
  return consts.hbar / kI * (right - left);
}

Complex symmetry_boundary_term(const BoundedCoefficient& A, const TrialState& psi, const TrialState& phi,
                               const PhysicalConstants& consts) {
  return symmetry_boundary_term(A, TestFunction::from_trial(psi, consts), TestFunction::from_trial(phi, consts),
                                consts);
}

Complex adjoint_defect(const BoundedCoefficient& A, const TestFunction& psi, const TestFunction& phi,
                       const PhysicalConstants& consts, std::size_t nodes) {
  const auto rule = numeric::gauss_legendre(nodes, 0.0, consts.box_length);
  Complex s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const Complex left = std::conj(psi.value(x)) * apply_dilation(A, phi, x, consts);
    const Complex right = std::conj(apply_dilation(A, psi, x, consts)) * phi.value(x);
    s += rule.weights[i] * (left - right);
  }
  return s;
}

Complex adjoint_defect(const BoundedCoefficient& A, const TrialState& psi, const TrialState& phi,
                       const PhysicalConstants& consts) {
  const auto N = static_cast<std::size_t>(std::max(psi.coeffs.size(), phi.coeffs.size()));
  return adjoint_defect(A, TestFunction::from_trial(psi, consts), TestFunction::from_trial(phi, consts), consts,
                        dilation_nodes(N));
}

CVector project_dilation(const BoundedCoefficient& A, const TrialState& phi, const PhysicalConstants& consts,
                         int n_modes) {
  const auto N = static_cast<std::size_t>(std::max<Eigen::Index>(phi.coeffs.size(), n_modes));
  const auto rule = numeric::gauss_legendre(dilation_nodes(N), 0.0, consts.box_length);
  CVector out = CVector::Zero(n_modes);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const Complex d = apply_dilation(A, phi, x, consts);
    for (int n = 1; n <= n_modes; ++n) {
      out[n - 1] += rule.weights[i] * qbasis::eigenfunction(n, x, consts) * d;
    }
  }
  return out;
}

double admissible_a0_bound(const BoundedCoefficient& A, const PhysicalConstants& consts) {
  const double k = (2.0 * A.A0 + A.A0_prime) * consts.mass * A.A0;
  return k > 0.0 ? 1.0 / k : std::numeric_limits<double>::infinity();
}

KatoRellichConstants kato_rellich_constants(const BoundedCoefficient& A, double a0, const PhysicalConstants& consts) {
  const double bound = admissible_a0_bound(A, consts);
  if (!(a0 > 0.0) || !(a0 < bound)) {
    std::ostringstream os;
    os << "a0 = " << a0 << " not admissible: need 0 < a0 < " << bound;
    throw InvalidArgument(os.str());
  }
  // E_n - a0 E_n^2 decreases once a0 E_n > 1/2; E_n >= 2/a0 is well past that.
  KatoRellichConstants k;
  k.b0 = -std::numeric_limits<double>::infinity();
  int past_cap = 0;
  for (int n = 1; past_cap <= 10; ++n) {
    const double E = qbasis::energy(n, consts);
    const double g = E - a0 * E * E;
    if (g > k.b0) {
      k.b0 = g;
      k.b0_argmax = n;
    }
    if (E >= 2.0 / a0) ++past_cap;
  }
  const double c = 2.0 * A.A0 + A.A0_prime;
  k.a = c * consts.mass * A.A0 * a0;
  k.b = c * (consts.mass * A.A0 * k.b0 + consts.hbar * consts.hbar * A.A0_prime / 4.0);
  return k;
}

namespace {

bool le(double lhs, double rhs) { return lhs <= rhs + kBoundSlack * std::max(std::abs(rhs), std::abs(lhs)); }

RelativeBound evaluate_chain(const BoundedCoefficient& A, const TrialState& phi, double a0,
                             const KatoRellichConstants& k, const PhysicalConstants& consts) {
  RelativeBound r;
  const double nrm = phi.norm_sq();
  const double T = phi.expect_T(consts);
  const double T2 = phi.norm_sq_T(consts);
  const double c = 2.0 * A.A0 + A.A0_prime;
  r.lhs = norm_sq_dilation(A, phi, consts);
  r.intermediate = c * (consts.mass * A.A0 * T + consts.hbar * consts.hbar * A.A0_prime / 4.0 * nrm);
  r.rhs = k.a * T2 + k.b * nrm;
  r.expect_T = T;
  r.expect_T_sq = T * T;
  r.schwarz_bound = T2 * nrm;
  r.expect_T_bound = a0 * T2 + k.b0 * nrm;
  r.lhs_le_intermediate = le(r.lhs, r.intermediate);
  r.intermediate_le_rhs = le(r.intermediate, r.rhs);
  r.schwarz = le(r.expect_T_sq, r.schwarz_bound);
  r.expect_T_link = le(r.expect_T, r.expect_T_bound);
  r.holds = r.lhs_le_intermediate && r.intermediate_le_rhs && r.schwarz && r.expect_T_link && le(r.lhs, r.rhs);
  r.margin = r.rhs != 0.0 ? (r.rhs - r.lhs) / r.rhs : 0.0;
  return r;
}

}  // namespace

RelativeBound verify_relative_bound(const BoundedCoefficient& A, const TrialState& phi, double a0,
                                    const PhysicalConstants& consts) {
  return evaluate_chain(A, phi, a0, kato_rellich_constants(A, a0, consts), consts);
}

nlohmann::json AuditReport::to_json() const {
  return nlohmann::json{{"A", coefficient},         {"a0", a0},         {"a", constants.a},
                        {"b", constants.b},         {"b0", constants.b0}, {"trials", trials},
                        {"violations", violations}, {"worst_margin", worst_margin}, {"seed", seed}};
}

AuditReport bound_audit(const BoundedCoefficient& A, double a0, std::size_t trials, int N, std::uint64_t seed,
                        const PhysicalConstants& consts) {
  if (N < 1) throw InvalidArgument("audit needs at least one mode");
  A.check_bounds(consts);
  if (a0 <= 0.0) a0 = 0.5 * admissible_a0_bound(A, consts);
  AuditReport report;
  report.coefficient = A.descriptor();
  report.a0 = a0;
  report.constants = kato_rellich_constants(A, a0, consts);
  report.trials = trials;
  report.seed = seed;
  report.worst_margin = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> active(1, N);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    TrialState phi{CVector::Zero(N)};
    const int K = active(rng);
    for (int n = 0; n < K; ++n) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      phi.coeffs[n] = Complex(re, im);
    }
    const double nrm = phi.coeffs.norm();
    if (nrm == 0.0) phi.coeffs[0] = 1.0;
    else phi.coeffs /= nrm;
    const RelativeBound r = evaluate_chain(A, phi, a0, report.constants, consts);
    if (!r.holds) ++report.violations;
    report.worst_margin = std::min(report.worst_margin, r.margin);
  }
  if (trials == 0) report.worst_margin = 0.0;
  return report;
}

namespace {

/// int_{from}^{to} dx / A(x)
double inverse_integral(const BoundedCoefficient& A, double from, double to) {
  if (from == to) return 0.0;
  const double sign = to > from ? 1.0 : -1.0;
  return sign * numeric::integrate_adaptive([&](double x) { return 1.0 / A.value(x); }, std::min(from, to),
                                            std::max(from, to));
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Exponent gamma in log|psi|^2 ~ gamma log d at the given endpoint, d = distance to it.
double endpoint_exponent(const BoundedCoefficient& A, double sign, bool left, const PhysicalConstants& consts) {
  const double L = consts.box_length;
  std::vector<double> log_d;
  std::vector<double> log_psi2;
  double prev_x = 0.5 * L;
  double I = 0.0;
  for (int k = 2; k <= 30; ++k) {
    const double d = L * std::ldexp(1.0, -k);
    const double x = left ? d : L - d;
    I += inverse_integral(A, prev_x, x);
    prev_x = x;
    if (k < 14) continue;
    log_d.push_back(std::log(d));
    log_psi2.push_back(-std::log(std::abs(A.value(x))) + 2.0 * sign * I);
  }
  return fit_slope(log_d, log_psi2);
}

int classify(double gamma, const char* label, const char* end) {
  if (gamma > -1.0 + kExponentMargin) return 1;
  if (gamma < -1.0 - kExponentMargin) return 0;
  std::ostringstream os;
  os << "cannot decide square integrability of psi" << label << " at the " << end << " wall: exponent " << gamma
     << " within " << kExponentMargin << " of -1";
  throw AnalysisError(os.str());
}

void require_sign_definite(const BoundedCoefficient& A, const PhysicalConstants& consts) {
  const double L = consts.box_length;
  // Gauss nodes never hit the midpoint; the uniform grid does.
  std::vector<double> xs = numeric::gauss_legendre(512, 0.0, L).nodes;
  for (int k = 1; k < 1024; ++k) xs.push_back(L * k / 1024.0);
  const double first = A.value(xs.front());
  for (const double x : xs) {
    const double a = A.value(x);
    if (a == 0.0 || (a > 0.0) != (first > 0.0)) {
      std::ostringstream os;
      os << A.family << " coefficient vanishes or changes sign inside the box near x = " << x
         << "; defect solutions need a sign-definite A";
      throw AnalysisError(os.str());
    }
  }
}

}  // namespace

DefectSolutions defect_solutions(const BoundedCoefficient& A, const PhysicalConstants& consts) {
  require_sign_definite(A, consts);
  const double mid = 0.5 * consts.box_length;
  const double A_mid = std::abs(A.value(mid));
  DefectSolutions out;
  auto log_abs2 = [A, mid, A_mid](double sign) {
    return [A, mid, A_mid, sign](double x) {
      return std::log(A_mid / std::abs(A.value(x))) + 2.0 * sign * inverse_integral(A, mid, x);
    };
  };
  out.log_abs2_plus = log_abs2(1.0);
  out.log_abs2_minus = log_abs2(-1.0);
  out.psi_plus = [f = out.log_abs2_plus](double x) { return std::exp(0.5 * f(x)); };
  out.psi_minus = [f = out.log_abs2_minus](double x) { return std::exp(0.5 * f(x)); };

  try {
    out.gamma_plus = {endpoint_exponent(A, 1.0, true, consts), endpoint_exponent(A, 1.0, false, consts)};
    out.gamma_minus = {endpoint_exponent(A, -1.0, true, consts), endpoint_exponent(A, -1.0, false, consts)};
  } catch (const AnalysisError&) {
    throw;
  } catch (const NumericalFailure& e) {
    throw AnalysisError(std::string("endpoint exponents of the defect solutions failed (1/A not integrable "
                                    "inside the box?): ") + e.what());
  }
  out.n_plus = classify(out.gamma_plus.first, "+", "left") * classify(out.gamma_plus.second, "+", "right");
  out.n_minus = classify(out.gamma_minus.first, "-", "left") * classify(out.gamma_minus.second, "-", "right");
  return out;
}

double defect_residual(const BoundedCoefficient& A, int sign, const PhysicalConstants& consts, std::size_t nodes) {
  if (sign != 1 && sign != -1) throw InvalidArgument("defect sign must be +1 or -1");
  const double L = consts.box_length;
  const double s = static_cast<double>(sign);
  const auto rule = numeric::gauss_legendre(nodes, 0.0, L);
  double worst = 0.0;
  for (const double x : rule.nodes) {
    const double h = 1e-3 * std::min({x, L - x, 0.5 * L});
    // psi(x + j h) / psi(x), built from the solution formula on the short interval.
    auto ratio = [&](double offset) {
      const double y = x + offset;
      return std::sqrt(std::abs(A.value(x) / A.value(y))) * std::exp(s * inverse_integral(A, x, y));
    };
    const double dpsi = (ratio(-2.0 * h) - 8.0 * ratio(-h) + 8.0 * ratio(h) - ratio(2.0 * h)) / (12.0 * h);
    const double a = A.value(x);
    const double lhs = a * dpsi;
    const double rhs = (s - 0.5 * A.derivative(x));
    const double scale = std::abs(lhs) + std::abs(rhs);
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

}  // namespace boxgauge::opanalysis
