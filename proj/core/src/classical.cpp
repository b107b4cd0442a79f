#include "boxgauge/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <functional>
#include <limits>
#include <string>

#include "boxgauge/errors.hpp"

namespace boxgauge::classical {

namespace {

constexpr double kTimeTol = 1e-12;
constexpr int kMaxRootIterations = 200;
constexpr std::size_t kMaxEvents = 50'000'000;

// Root of g on [lo, hi] with g(lo) > 0 >= g(hi): Newton steps kept inside the
// bracket, bisection otherwise.
double safeguarded_root(const std::function<double(double)>& g,
                        const std::function<double(double)>& dg, double lo, double hi) {
  double glo = g(lo);
  double ghi = g(hi);
  if (ghi == 0.0) {
    // Walk back to the first zero only if the left end is not itself a root.
    if (glo == 0.0) return lo;
  }
  double t = 0.5 * (lo + hi);
  double dx_old = hi - lo;
  double dx = dx_old;
  double gt = g(t);
  double dgt = dg(t);
  for (int it = 0; it < kMaxRootIterations; ++it) {
    const bool newton_out = ((t - hi) * dgt - gt) * ((t - lo) * dgt - gt) > 0.0;
    const bool slow = std::abs(2.0 * gt) > std::abs(dx_old * dgt);
    dx_old = dx;
    if (newton_out || slow || dgt == 0.0) {
      dx = 0.5 * (hi - lo);
      t = lo + dx;
    } else {
      dx = gt / dgt;
      t -= dx;
    }
    gt = g(t);
    dgt = dg(t);
    if (gt > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (gt == 0.0) return t;
    if (std::abs(dx) <= 0.25 * kTimeTol) return t;
    if (hi - lo <= kTimeTol) return hi;
  }
  (void)glo;
  (void)ghi;
  throw NumericalFailure("event root finder did not converge", std::make_pair(lo, hi));
}

struct WallRoot {
  double t;
  Wall wall;
};

// Clamps into [0, L]; a state left on a wall moving outward has a reflection
// hidden below root-finder tolerance and takes it here.
ClassicalState settle(ClassicalState s, double L) {
  s.x = std::clamp(s.x, 0.0, L);
  if ((s.x == 0.0 && s.v < 0.0) || (s.x == L && s.v > 0.0)) s.v = -s.v;
  return s;
}

ClassicalState fold(double y, double u, double t, Gauge gauge, double L) {
  double yy = std::fmod(y, 2.0 * L);
  if (yy < 0.0) yy += 2.0 * L;
  ClassicalState s{yy, u, t, gauge};
  if (yy > L) {
    s.x = 2.0 * L - yy;
    s.v = -u;
  }
  return settle(s, L);
}

}  // namespace

LinePoint line_solution(double x0, double v0, double t0, double t, const DrivingField& field,
                        const PhysicalConstants& consts) {
  const double k = consts.alpha / consts.mass;
  return {x0 + v0 * (t - t0) - k * field.flight_integral(t0, t),
          v0 - k * field.F_increment(t0, t)};
}

double bounded_orbit_velocity(const DrivingField& field, double t0, const PhysicalConstants& consts) {
  const auto* c = std::get_if<DrivingField::Cosine>(&field.kind());
  if (c == nullptr) throw InvalidArgument("bounded orbit velocity needs cosine driving");
  // Cancels the secular term (alpha f0 / m omega) sin(omega t0) (t - t0) of the
  // line solution.
  return -consts.alpha * c->f0 / (consts.mass * c->omega) * std::sin(c->omega * t0);
}

LinePoint flight(const ClassicalState& from, double t, const DrivingField& field,
                 const PhysicalConstants& consts) {
  return line_solution(from.x, from.v, from.t, t, field, consts);
}

std::optional<ReflectionEvent> wall_hit_time(const ClassicalState& state, const DrivingField& field,
                                             const PhysicalConstants& consts, double t_max) {
  const double L = consts.box_length;
  if (!(state.x >= 0.0 && state.x <= L)) throw RangeError("classical state outside the box");
  const bool on_left = state.x == 0.0;
  const bool on_right = state.x == L;
  if ((on_left && state.v < 0.0) || (on_right && state.v > 0.0)) {
    throw InvalidArgument("state on a wall must move into the box");
  }
  if (!(t_max > state.t)) return std::nullopt;

  const double k = consts.alpha / consts.mass;
  auto pos = [&](double t) { return flight(state, t, field, consts); };

  // Per wall: g > 0 inside the box, g' = sign * v.
  struct WallFn {
    Wall wall;
    double sign;
    double offset;
  };
  const WallFn walls[2] = {{Wall::Left, 1.0, 0.0}, {Wall::Right, -1.0, L}};
  auto g_of = [&](const WallFn& w) {
    return [&, w](double t) { return w.sign * (pos(t).x - w.offset); };
  };
  auto dg_of = [&](const WallFn& w) {
    return [&, w](double t) { return w.sign * pos(t).v; };
  };
  auto ddg_of = [&](const WallFn& w) {
    return [&, w](double t) { return -w.sign * k * field.f(t); };
  };

  double ta = state.t;
  bool first = true;
  while (ta < t_max) {
    const double tb = std::min(t_max, field.next_sign_change(ta));
    std::optional<WallRoot> best;
    for (const auto& w : walls) {
      const auto g = g_of(w);
      const auto dg = dg_of(w);
      const double ga = first ? (w.wall == Wall::Left ? state.x : L - state.x) : g(ta);
      const double gb = g(tb);
      const double da = dg(ta);
      const double db = dg(tb);
      std::optional<std::pair<double, double>> bracket;
      // g' is monotone on [ta, tb], so g has at most one interior extremum.
      auto extremum = [&]() {
        return safeguarded_root(da < 0.0 ? std::function<double(double)>([&](double t) { return -dg(t); })
                                         : std::function<double(double)>(dg),
                                da < 0.0 ? std::function<double(double)>([&](double t) { return -ddg_of(w)(t); })
                                         : std::function<double(double)>(ddg_of(w)),
                                ta, tb);
      };
      if (ga > 0.0) {
        if (gb <= 0.0) {
          bracket = std::make_pair(ta, tb);
        } else if (da < 0.0 && db > 0.0) {
          const double tm = extremum();
          if (g(tm) <= 0.0) bracket = std::make_pair(ta, tm);
        }
      } else {
        // Starting on this wall.
        if (da > 0.0) {
          if (db < 0.0 && gb <= 0.0) {
            const double tm = extremum();
            bracket = std::make_pair(tm, tb);
          }
        } else if (db < 0.0) {
          throw NumericalFailure("particle pinned against the wall by the field",
                                 std::make_pair(ta, tb));
        }
      }
      if (bracket) {
        const double t_hit = safeguarded_root(g, dg, bracket->first, bracket->second);
        if (!best || t_hit < best->t) best = WallRoot{t_hit, w.wall};
      }
    }
    if (best) {
      const double v_in = pos(best->t).v;
      return ReflectionEvent{best->t, best->wall, v_in, -v_in};
    }
    ta = tb;
    first = false;
  }
  return std::nullopt;
}

ClassicalState advance_box(const ClassicalState& state, const DrivingField& field,
                           const PhysicalConstants& consts, double t, std::size_t* reflections) {
  ClassicalState cur = state;
  std::size_t count = 0;
  const double L = consts.box_length;
  while (true) {
    const auto ev = wall_hit_time(cur, field, consts, t);
    if (!ev) break;
    cur = settle(ClassicalState{ev->wall == Wall::Left ? 0.0 : L, ev->v_out, ev->t_hit, cur.gauge}, L);
    if (++count > kMaxEvents) throw NumericalFailure("too many reflections");
  }
  if (reflections) *reflections = count;
  if (t == cur.t) return cur;
  const auto p = flight(cur, t, field, consts);
  return settle(ClassicalState{p.x, p.v, t, cur.gauge}, L);
}

BoxRun simulate_box(const ClassicalState& initial, const DrivingField& field,
                    const PhysicalConstants& consts, double t_end,
                    const std::vector<double>& sample_times) {
  consts.validate();
  const double L = consts.box_length;
  if (!(initial.x >= 0.0 && initial.x <= L)) throw RangeError("initial position outside the box");
  if (t_end < initial.t) throw InvalidArgument("t_end precedes the initial time");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double s = sample_times[i];
    if (s < initial.t || s > t_end || (i > 0 && s < sample_times[i - 1])) {
      throw InvalidArgument("sample times must be sorted and lie in [t_initial, t_end]");
    }
  }

  BoxRun run;
  run.trajectory.reserve(sample_times.size());
  ClassicalState cur = initial;
  std::size_t idx = 0;
  while (true) {
    const auto ev = wall_hit_time(cur, field, consts, t_end);
    const double t_next = ev ? ev->t_hit : t_end;
    while (idx < sample_times.size() &&
           (sample_times[idx] < t_next || (!ev && sample_times[idx] <= t_end))) {
      const double s = sample_times[idx++];
      const auto p = flight(cur, s, field, consts);
      run.trajectory.push_back({std::clamp(p.x, 0.0, L), p.v, s, initial.gauge});
    }
    if (!ev) break;
    run.events.push_back(*ev);
    if (run.events.size() > kMaxEvents) throw NumericalFailure("too many reflections");
    cur = settle(ClassicalState{ev->wall == Wall::Left ? 0.0 : L, ev->v_out, ev->t_hit, initial.gauge}, L);
  }
  return run;
}

double canonical_momentum(const ClassicalState& state, const DrivingField& field,
                          const PhysicalConstants& consts) {
  const double p0 = consts.mass * state.v;
  if (state.gauge == Gauge::Zero) return p0;
  return p0 + consts.alpha * field.F(state.t);
}

double reflect_chi_momentum(double p_chi, double t, const DrivingField& field,
                            const PhysicalConstants& consts) {
  return -p_chi + 2.0 * consts.alpha * field.F(t);
}

double lyapunov_estimate(const ClassicalState& initial, const DrivingField& field,
                         const PhysicalConstants& consts, double horizon, double renorm_interval,
                         const LyapunovOptions& options) {
  consts.validate();
  if (!(renorm_interval > 0.0)) throw InvalidArgument("renormalization interval must be positive");
  if (horizon < 50.0 * renorm_interval) {
    throw InvalidArgument("horizon must cover at least 50 renormalization intervals");
  }
  if (!(options.delta0 > 0.0)) throw InvalidArgument("initial separation must be positive");
  const double L = consts.box_length;
  const double d0 = options.delta0;

  ClassicalState ref = initial;
  ClassicalState shadow = initial;
  shadow.x = initial.x + d0 <= L ? initial.x + d0 : initial.x - d0;
  if (shadow.x == 0.0 && shadow.v < 0.0) shadow.v = -shadow.v;
  if (shadow.x == L && shadow.v > 0.0) shadow.v = -shadow.v;

  const auto steps = static_cast<std::size_t>(std::floor(horizon / renorm_interval));
  double log_sum = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = initial.t + static_cast<double>(k) * renorm_interval;
    ref = advance_box(ref, field, consts, t);
    shadow = advance_box(shadow, field, consts, t);

    // Separation to the nearest unfolded image of the shadow.
    const double images[2][2] = {{shadow.x, shadow.v}, {2.0 * L - shadow.x, -shadow.v}};
    double best_dy = 0.0, best_du = 0.0, best = std::numeric_limits<double>::infinity();
    for (const auto& img : images) {
      double dy = std::remainder(img[0] - ref.x, 2.0 * L);
      const double du = img[1] - ref.v;
      const double d = std::hypot(dy, du);
      if (d < best) {
        best = d;
        best_dy = dy;
        best_du = du;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) {
      std::ostringstream os;
      os << "trajectory separation collapsed during renormalization (reference x = " << ref.x
         << ", v = " << ref.v << "; shadow x = " << shadow.x << ", v = " << shadow.v << ")";
      throw NumericalFailure(os.str(), std::make_pair(t - renorm_interval, t));
    }
    log_sum += std::log(best / d0);
    const double s = d0 / best;
    shadow = fold(ref.x + best_dy * s, ref.v + best_du * s, t, shadow.gauge, L);
  }
  return log_sum / (static_cast<double>(steps) * renorm_interval);
}

}  // namespace boxgauge::classical
