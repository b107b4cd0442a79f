#pragma once

#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace boxgauge::model {

/// Physical constants of the driven particle. Natural units (all ones) by default.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
  double box_length = 1.0;  ///< width of the well [0, box_length]
  double alpha = 1.0;       ///< charge times field amplitude

  /// Throws InvalidArgument unless hbar, mass and box_length are positive and finite.
  void validate() const;
};

/// Time modulation f(t) of a spatially homogeneous field, together with its
/// primitive F and the double primitive. Both integrals are anchored so that
/// they vanish at the reference time t0.
class DrivingField {
 public:
  struct Constant {
    double f0 = 0.0;
  };
  struct Cosine {
    double f0 = 0.0;
    double omega = 1.0;
  };
  struct Tabulated {
    std::vector<std::pair<double, double>> samples;  ///< (time, value), strictly increasing times
  };
  using Kind = std::variant<Constant, Cosine, Tabulated>;

  DrivingField() : DrivingField(Constant{0.0}, 0.0) {}

  static DrivingField none(double t0 = 0.0) { return DrivingField(Constant{0.0}, t0); }
  static DrivingField constant(double f0, double t0 = 0.0) { return DrivingField(Constant{f0}, t0); }
  static DrivingField cosine(double f0, double omega, double t0 = 0.0) {
    return DrivingField(Cosine{f0, omega}, t0);
  }
  static DrivingField tabulated(std::vector<std::pair<double, double>> samples, double t0);

  const Kind& kind() const noexcept { return kind_; }
  double t0() const noexcept { return t0_; }
  bool is_constant() const noexcept { return std::holds_alternative<Constant>(kind_); }
  bool is_cosine() const noexcept { return std::holds_alternative<Cosine>(kind_); }
  bool is_tabulated() const noexcept { return std::holds_alternative<Tabulated>(kind_); }

  /// True when f vanishes identically.
  bool is_null() const noexcept;

  /// f(t).
  double f(double t) const;
  /// F(t) = int_{t0}^{t} f.
  double F(double t) const;
  /// int_{t0}^{t} F(s) ds.
  double double_integral(double t) const;

  /// F(t) - F(ts), evaluated without cancellation where a closed form exists.
  double F_increment(double ts, double t) const;
  /// int_{ts}^{t} (F(s) - F(ts)) ds, the free-flight displacement kernel.
  double flight_integral(double ts, double t) const;

  /// Smallest t' > t with f changing sign at t' (infinity if none). Between two
  /// consecutive such times the kinematic velocity is monotone.
  double next_sign_change(double t) const;

  /// Supremum of |f| over the field's domain.
  double max_abs_f() const;

  /// Admissible time range (finite only for tabulated fields).
  std::pair<double, double> domain() const;

 private:
  DrivingField(Kind kind, double t0);
  void check_time(double t) const;

  // Tabulated: cumulative first and second integrals at the sample times,
  // measured from the first sample.
  std::size_t segment(double t) const;
  double tab_G(double t) const;
  double tab_H(double t) const;

  Kind kind_;
  double t0_ = 0.0;
  std::vector<double> cum_G_;
  std::vector<double> cum_H_;
  double G_t0_ = 0.0;
  double H_t0_ = 0.0;
};

/// f(t).
double eval_f(const DrivingField& field, double t);
/// F(t) = int_{t0}^{t} f(s) ds.
double eval_F(const DrivingField& field, double t);
/// xi(t) = -(alpha/m) int_{t0}^{t} int_{t0}^{t'} f(t'') dt'' dt'.
double eval_xi(const DrivingField& field, double t, const PhysicalConstants& consts);

void to_json(nlohmann::json& j, const PhysicalConstants& c);
void from_json(const nlohmann::json& j, PhysicalConstants& c);
void to_json(nlohmann::json& j, const DrivingField& field);
void from_json(const nlohmann::json& j, DrivingField& field);

}  // namespace boxgauge::model
