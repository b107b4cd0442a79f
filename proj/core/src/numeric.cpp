#include "boxgauge/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "boxgauge/errors.hpp"

namespace boxgauge::numeric {

namespace {

// GSL aborts on error by default; we report through status codes instead.
const bool kGslHandlerOff = [] {
  gsl_set_error_handler_off();
  return true;
}();

struct GlTableDeleter {
  void operator()(gsl_integration_glfixed_table* t) const { gsl_integration_glfixed_table_free(t); }
};

const gsl_integration_glfixed_table* unit_table(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<gsl_integration_glfixed_table, GlTableDeleter>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot.reset(gsl_integration_glfixed_table_alloc(n));
    if (!slot) throw NumericalFailure("failed to build Gauss-Legendre table");
  }
  return slot.get();
}

struct Trampoline {
  const std::function<double(double)>* f;
  std::exception_ptr error;
};

double call_trampoline(double x, void* params) {
  auto* t = static_cast<Trampoline*>(params);
  try {
    return (*t->f)(x);
  } catch (...) {
    t->error = std::current_exception();
    return std::nan("");
  }
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
  (void)kGslHandlerOff;
  // GSL ships precomputed tables for these orders; other orders are generated
  // at run time and only good to about 1e-10.
  static constexpr std::size_t kTabulated[] = {32, 64, 96, 100, 128, 256, 512, 1024};
  std::size_t order = n;
  std::size_t panels = 1;
  if (n > 20) {
    const auto* it = std::find_if(std::begin(kTabulated), std::end(kTabulated), [n](std::size_t t) { return t >= n; });
    if (it != std::end(kTabulated)) {
      order = *it;
    } else {
      order = 512;
      panels = (n + order - 1) / order;
    }
  }
  const auto* table = unit_table(order);
  QuadratureRule rule;
  rule.nodes.resize(order * panels);
  rule.weights.resize(order * panels);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + static_cast<double>(p) * h;
    const double hi = p + 1 == panels ? b : lo + h;
    for (std::size_t i = 0; i < order; ++i) {
      const std::size_t k = p * order + i;
      gsl_integration_glfixed_point(lo, hi, i, &rule.nodes[k], &rule.weights[k], table);
    }
  }
  return rule;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double epsabs, double epsrel) {
  (void)kGslHandlerOff;
  constexpr std::size_t kLimit = 2000;
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
      gsl_integration_workspace_alloc(kLimit), &gsl_integration_workspace_free);
  Trampoline tr{&f, nullptr};
  gsl_function gf{&call_trampoline, &tr};
  double result = 0.0, abserr = 0.0;
  const int status =
      gsl_integration_qags(&gf, a, b, epsabs, epsrel, kLimit, ws.get(), &result, &abserr);
  if (tr.error) std::rethrow_exception(tr.error);
  if (status != GSL_SUCCESS) {
    throw NumericalFailure(std::string("adaptive quadrature failed: ") + gsl_strerror(status),
                           std::make_pair(a, b));
  }
  return result;
}

CMatrix hermitian_expm(const CMatrix& H, double scale) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (es.info() != Eigen::Success) throw NumericalFailure("Hermitian eigendecomposition failed");
  const Eigen::VectorXd& lambda = es.eigenvalues();
  CVector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases(k) = std::polar(1.0, -scale * lambda(k));
  }
  const CMatrix& V = es.eigenvectors();
  return V * phases.asDiagonal() * V.adjoint();
}

CVector chebyshev_expm_action(const CMatrix& H, double scale, const CVector& v) {
  const Eigen::Index n = H.rows();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i) {
    double radius = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) radius += std::abs(H(i, j));
    }
    const double c = H(i, i).real();
    lo = std::min(lo, c - radius);
    hi = std::max(hi, c + radius);
  }
  const double center = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  const Complex global = std::polar(1.0, -scale * center);
  if (half <= 0.0) return global * v;

  const double R = scale * half;
  // Terms beyond k ~ R decay super-exponentially.
  const int kmax = static_cast<int>(std::ceil(R + 10.0 * std::cbrt(R) + 30.0));

  auto apply = [&](const CVector& w) -> CVector { return (H * w - center * w) / half; };

  CVector prev = v;
  CVector cur = apply(v);
  CVector acc = std::cyl_bessel_j(0.0, R) * prev;
  const Complex minus_i(0.0, -1.0);
  Complex phase = minus_i;
  int small_terms = 0;
  for (int k = 1; k <= kmax; ++k) {
    const double jk = std::cyl_bessel_j(static_cast<double>(k), R);
    acc += (2.0 * jk) * phase * cur;
    if (k > R && std::abs(jk) < 1e-18) {
      if (++small_terms >= 2) break;
    } else {
      small_terms = 0;
    }
    CVector next = 2.0 * apply(cur) - prev;
    prev = std::move(cur);
    cur = std::move(next);
    phase *= minus_i;
  }
  return global * acc;
}

double operator_norm(const CMatrix& M, int iterations) {
  const Eigen::Index n = M.cols();
  if (n == 0) return 0.0;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = Complex(1.0 / (1.0 + static_cast<double>(i)), 0.5 / (2.0 + static_cast<double>(i)));
  }
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    CVector w = M.adjoint() * (M * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    estimate = std::sqrt(std::abs(v.dot(w)));
    v = w / nw;
  }
  return std::max(estimate, (M * v).norm());
}

double hermiticity_residual(const CMatrix& M) {
  if (M.rows() != M.cols()) return std::numeric_limits<double>::infinity();
  if (M.size() == 0) return 0.0;
  return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace boxgauge::numeric
