#include "boxgauge/qline.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/FFT>

#include "boxgauge/classical.hpp"
#include "boxgauge/errors.hpp"
#include "boxgauge/numeric.hpp"

namespace boxgauge::qline {

using numeric::kPi;

namespace {

using Samples = std::vector<Complex>;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Samples to_momentum(Eigen::FFT<double>& fft, const Samples& psi) {
  Samples out;
  fft.fwd(out, psi);
  return out;
}

Samples to_position(Eigen::FFT<double>& fft, const Samples& phi) {
  Samples out;
  fft.inv(out, phi);
  return out;
}

void apply_position_phase(Samples& psi, const Grid& grid, double slope) {
  // multiplies by exp(-i slope x_j)
  for (std::size_t j = 0; j < psi.size(); ++j) {
    psi[j] *= std::polar(1.0, -slope * grid.x(j));
  }
}

/// exp[-(i/hbar)(tau p^2/2m - (alpha/m) p IF + (alpha^2/2m) IF2)] in momentum space.
GridWavepacket chi_evolve(const GridWavepacket& packet, double tau, double int_F, double int_F2,
                          const PhysicalConstants& consts, double t1) {
  Eigen::FFT<double> fft;
  Samples phi = to_momentum(fft, packet.samples);
  const double hbar = consts.hbar;
  const double m = consts.mass;
  const double a = consts.alpha;
  const double scalar = a * a / (2.0 * m) * int_F2;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const double p = hbar * packet.grid.k(j);
    const double phase = (tau * p * p / (2.0 * m) - a / m * p * int_F + scalar) / hbar;
    phi[j] *= std::polar(1.0, -phase);
  }
  GridWavepacket out{packet.grid, to_position(fft, phi), t1};
  return out;
}

double integral_F(const DrivingField& field, double t0, double t1) {
  return field.double_integral(t1) - field.double_integral(t0);
}

double integral_F2(const DrivingField& field, double t0, double t1) {
  if (t0 == t1 || field.is_null()) return 0.0;
  if (const auto* c = std::get_if<DrivingField::Constant>(&field.kind())) {
    const double s0 = field.t0();
    const double u1 = t1 - s0;
    const double u0 = t0 - s0;
    return c->f0 * c->f0 * (u1 * u1 * u1 - u0 * u0 * u0) / 3.0;
  }
  const double sign = t1 > t0 ? 1.0 : -1.0;
  return sign * numeric::integrate_adaptive(
                    [&](double s) {
                      const double F = field.F(s);
                      return F * F;
                    },
                    std::min(t0, t1), std::max(t0, t1));
}

}  // namespace

void Grid::validate() const {
  if (!is_power_of_two(M) || M < 4) {
    throw ConfigurationError("grid size must be a power of two >= 4, got " + std::to_string(M));
  }
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw ConfigurationError("grid window must satisfy x_min < x_max");
  }
}

double Grid::k(std::size_t j) const {
  const double dk = 2.0 * kPi / (x_max - x_min);
  const auto half = M / 2;
  const double index = j < half ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(M);
  return dk * index;
}

double Grid::k_max() const { return kPi / dx(); }

double GridWavepacket::norm_sq() const {
  double s = 0.0;
  for (const auto& c : samples) s += std::norm(c);
  return s * grid.dx();
}

double GridWavepacket::mean_x() const {
  double s = 0.0;
  double w = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double rho = std::norm(samples[j]);
    s += grid.x(j) * rho;
    w += rho;
  }
  return s / w;
}

double GridWavepacket::mean_p(const PhysicalConstants& consts) const {
  Eigen::FFT<double> fft;
  const Samples phi = to_momentum(fft, samples);
  double s = 0.0;
  double w = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const double rho = std::norm(phi[j]);
    s += grid.k(j) * rho;
    w += rho;
  }
  return consts.hbar * s / w;
}

double GridWavepacket::var_x() const {
  const double mu = mean_x();
  double s = 0.0;
  double w = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double rho = std::norm(samples[j]);
    const double d = grid.x(j) - mu;
    s += d * d * rho;
    w += rho;
  }
  return s / w;
}

double GridWavepacket::edge_mass() const {
  const double width = grid.x_max - grid.x_min;
  const double lo = grid.x_min + 0.25 * width;
  const double hi = grid.x_max - 0.25 * width;
  double s = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double x = grid.x(j);
    if (x < lo || x > hi) s += std::norm(samples[j]);
  }
  return s * grid.dx();
}

GridWavepacket gaussian_packet(double x0, double p0, double sigma, const Grid& grid, const PhysicalConstants& consts,
                               double t) {
  grid.validate();
  consts.validate();
  if (!(sigma > 0.0)) throw ConfigurationError("packet width must be positive");
  if (x0 - 6.0 * sigma < grid.x_min || x0 + 6.0 * sigma > grid.x_max) {
    throw ConfigurationError("packet does not fit the grid window with a 6 sigma margin");
  }
  const double k0 = p0 / consts.hbar;
  const double sigma_k = 1.0 / (2.0 * sigma);
  if (std::abs(k0) + 6.0 * sigma_k > grid.k_max()) {
    throw ConfigurationError("packet momentum content exceeds the grid Nyquist limit");
  }
  GridWavepacket packet{grid, Samples(grid.M), t};
  const double amp = std::pow(2.0 * kPi * sigma * sigma, -0.25);
  for (std::size_t j = 0; j < grid.M; ++j) {
    const double x = grid.x(j);
    const double d = x - x0;
    packet.samples[j] = amp * std::exp(-d * d / (4.0 * sigma * sigma)) * std::polar(1.0, k0 * x);
  }
  // Discrete renormalization; the correction is below 1e-15 for resolved packets.
  const double n = std::sqrt(packet.norm_sq());
  for (auto& c : packet.samples) c /= n;
  return packet;
}

GridWavepacket analytic_propagate_chi(const GridWavepacket& packet, double t0, double t1, const DrivingField& field,
                                      const PhysicalConstants& consts) {
  if (!field.is_constant()) {
    throw InvalidArgument("analytic chi propagator is defined for constant fields only");
  }
  const double f0 = std::get<DrivingField::Constant>(field.kind()).f0;
  const double tau = t1 - t0;
  if (t0 == field.t0()) {
    return chi_evolve(packet, tau, f0 * tau * tau / 2.0, f0 * f0 * tau * tau * tau / 3.0, consts, t1);
  }
  return chi_evolve(packet, tau, integral_F(field, t0, t1), integral_F2(field, t0, t1), consts, t1);
}

GridWavepacket propagate_chi(const GridWavepacket& packet, double t0, double t1, const DrivingField& field,
                             const PhysicalConstants& consts) {
  return chi_evolve(packet, t1 - t0, integral_F(field, t0, t1), integral_F2(field, t0, t1), consts, t1);
}

GridWavepacket gauge_phase_line(const GridWavepacket& packet, double t, const DrivingField& field,
                                const PhysicalConstants& consts, bool inverse) {
  GridWavepacket out = packet;
  const double slope = consts.alpha * field.F(t) / consts.hbar;
  if (slope != 0.0) apply_position_phase(out.samples, out.grid, inverse ? -slope : slope);
  return out;
}

GridWavepacket split_step_H0(const GridWavepacket& packet, double t0, double t1, std::size_t steps,
                             const DrivingField& field, const PhysicalConstants& consts) {
  if (steps < 1) throw InvalidArgument("split-step needs at least one step");
  const double h = (t1 - t0) / static_cast<double>(steps);
  const double hbar = consts.hbar;
  const std::size_t M = packet.grid.M;

  Samples kinetic(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double p = hbar * packet.grid.k(j);
    kinetic[j] = std::polar(1.0, -h * p * p / (2.0 * consts.mass * hbar));
  }

  Eigen::FFT<double> fft;
  Samples psi = packet.samples;
  Samples phi(M);
  Samples kick(M);
  double kick_slope = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t s = 0; s < steps; ++s) {
    const double t_mid = t0 + (static_cast<double>(s) + 0.5) * h;
    const double slope = consts.alpha * field.f(t_mid) * 0.5 * h / hbar;
    if (slope != kick_slope) {
      for (std::size_t j = 0; j < M; ++j) kick[j] = std::polar(1.0, -slope * packet.grid.x(j));
      kick_slope = slope;
    }
    if (slope != 0.0) {
      for (std::size_t j = 0; j < M; ++j) psi[j] *= kick[j];
    }
    fft.fwd(phi, psi);
    for (std::size_t j = 0; j < M; ++j) phi[j] *= kinetic[j];
    fft.inv(psi, phi);
    if (slope != 0.0) {
      for (std::size_t j = 0; j < M; ++j) psi[j] *= kick[j];
    }
  }
  return GridWavepacket{packet.grid, std::move(psi), t1};
}

double grid_distance(const GridWavepacket& a, const GridWavepacket& b) {
  if (a.samples.size() != b.samples.size()) throw InvalidArgument("packets live on different grids");
  double s = 0.0;
  for (std::size_t j = 0; j < a.samples.size(); ++j) s += std::norm(a.samples[j] - b.samples[j]);
  return std::sqrt(s * a.grid.dx());
}

double bch_check(const GridWavepacket& packet, double tau, const DrivingField& field,
                 const PhysicalConstants& consts, std::size_t steps) {
  const double t0 = field.t0();
  const double t1 = t0 + tau;
  GridWavepacket start = packet;
  start.t = t0;
  const GridWavepacket chi0 = gauge_phase_line(start, t0, field, consts, /*inverse=*/true);
  const GridWavepacket chi1 = field.is_constant() ? analytic_propagate_chi(chi0, t0, t1, field, consts)
                                                  : propagate_chi(chi0, t0, t1, field, consts);
  const GridWavepacket left = gauge_phase_line(chi1, t1, field, consts);
  const GridWavepacket right = split_step_H0(start, t0, t1, steps, field, consts);
  return grid_distance(left, right);
}

std::vector<EhrenfestSample> ehrenfest_check(const GridWavepacket& packet, const std::vector<double>& t_grid,
                                             const DrivingField& field, const PhysicalConstants& consts,
                                             double dt_max) {
  if (!(dt_max > 0.0)) throw InvalidArgument("dt_max must be positive");
  const double x0 = packet.mean_x();
  const double v0 = packet.mean_p(consts) / consts.mass;
  const double t_start = packet.t;

  std::vector<EhrenfestSample> out;
  out.reserve(t_grid.size());
  GridWavepacket psi = packet;
  for (const double t : t_grid) {
    if (t < psi.t) throw InvalidArgument("time grid must be non-decreasing and start at the packet time");
    if (t > psi.t) {
      const auto steps = static_cast<std::size_t>(std::ceil((t - psi.t) / dt_max * (1.0 - 1e-12)));
      psi = split_step_H0(psi, psi.t, t, std::max<std::size_t>(steps, 1), field, consts);
    }
    const double edge = psi.edge_mass();
    if (edge > kEdgeMassLimit) {
      throw HorizonError("wavepacket left the central half of the window at t = " + std::to_string(t) +
                             " (edge mass " + std::to_string(edge) + ")",
                         std::make_pair(t_start, t));
    }
    EhrenfestSample s;
    s.t = t;
    s.mean_x = psi.mean_x();
    s.mean_p = psi.mean_p(consts);
    s.var_x = psi.var_x();
    s.x_classical = classical::line_solution(x0, v0, t_start, t, field, consts).x;
    s.deviation = std::abs(s.mean_x - s.x_classical);
    out.push_back(s);
  }
  return out;
}

}  // namespace boxgauge::qline
