#pragma once

#include <optional>
#include <vector>

#include "boxgauge/model.hpp"

namespace boxgauge::classical {

using model::DrivingField;
using model::PhysicalConstants;

/// Velocity gauge (canonical momentum m v) or the gauge where the field enters
/// through the vector potential (canonical momentum m v + alpha F).
enum class Gauge { Zero, Chi };

enum class Wall { Left, Right };

/// Phase-space point. v is the kinematic velocity, identical in both gauges.
struct ClassicalState {
  double x = 0.0;
  double v = 0.0;
  double t = 0.0;
  Gauge gauge = Gauge::Zero;
};

/// Elastic reflection at a wall: v_out == -v_in.
struct ReflectionEvent {
  double t_hit = 0.0;
  Wall wall = Wall::Left;
  double v_in = 0.0;
  double v_out = 0.0;
};

struct LinePoint {
  double x = 0.0;
  double v = 0.0;
};

/// Closed-form solution of m x'' = -alpha f(t) on the line, started from (x0, v0) at t0.
LinePoint line_solution(double x0, double v0, double t0, double t, const DrivingField& field,
                        const PhysicalConstants& consts);

/// Initial velocity at t0 for which the cosine-driven particle on the line has
/// no secular drift. Throws InvalidArgument for non-cosine fields.
double bounded_orbit_velocity(const DrivingField& field, double t0, const PhysicalConstants& consts);

/// Position and velocity along the interior flight that starts at `from`.
LinePoint flight(const ClassicalState& from, double t, const DrivingField& field,
                 const PhysicalConstants& consts);

/// Earliest wall contact in (state.t, t_max] along the interior flight.
/// Throws NumericalFailure (carrying the bracket) if the root finder stalls.
std::optional<ReflectionEvent> wall_hit_time(const ClassicalState& state, const DrivingField& field,
                                             const PhysicalConstants& consts, double t_max);

struct BoxRun {
  std::vector<ClassicalState> trajectory;  ///< one entry per requested sample time
  std::vector<ReflectionEvent> events;
};

/// Event-driven billiard in [0, box_length] up to t_end. Sample times must be
/// non-decreasing and lie in [initial.t, t_end].
BoxRun simulate_box(const ClassicalState& initial, const DrivingField& field,
                    const PhysicalConstants& consts, double t_end,
                    const std::vector<double>& sample_times);

/// Box state at time t (no sampling), returning the number of reflections taken.
ClassicalState advance_box(const ClassicalState& state, const DrivingField& field,
                           const PhysicalConstants& consts, double t, std::size_t* reflections = nullptr);

/// Gauge0: m v. GaugeChi: m v + alpha F(t).
double canonical_momentum(const ClassicalState& state, const DrivingField& field,
                          const PhysicalConstants& consts);

/// Reflection map on the chi-gauge canonical momentum: p -> -p + 2 alpha F(t).
double reflect_chi_momentum(double p_chi, double t, const DrivingField& field,
                            const PhysicalConstants& consts);

struct LyapunovOptions {
  double delta0 = 1e-8;  ///< initial and renormalized phase-space separation
};

/// Two-trajectory (Benettin) estimate of the largest Lyapunov exponent in the box.
/// Separations are measured in the unfolded (period 2 box_length) coordinates so a
/// reflection taken by only one of the pair does not register as a jump.
double lyapunov_estimate(const ClassicalState& initial, const DrivingField& field,
                         const PhysicalConstants& consts, double horizon, double renorm_interval,
                         const LyapunovOptions& options = {});

}  // namespace boxgauge::classical
