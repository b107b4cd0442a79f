#include "boxgauge/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "boxgauge/errors.hpp"

namespace boxgauge::model {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// sin(z) - z without cancellation for small |z|.
double sin_minus_arg(double z) {
  if (std::abs(z) > 1e-2) return std::sin(z) - z;
  const double z2 = z * z;
  return -z * z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0 * (1.0 - z2 / 72.0)));
}

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const char* what) {
  if (!j.is_object()) throw ConfigurationError(std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigurationError(std::string("unknown key '") + key + "' in " + what);
    }
  }
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

void PhysicalConstants::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(hbar)) throw InvalidArgument("hbar must be positive");
  if (!positive(mass)) throw InvalidArgument("mass must be positive");
  if (!positive(box_length)) throw InvalidArgument("box_length must be positive");
  if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");
}

DrivingField::DrivingField(Kind kind, double t0) : kind_(std::move(kind)), t0_(t0) {
  if (!std::isfinite(t0_)) throw InvalidArgument("driving field t0 must be finite");
  if (const auto* c = std::get_if<Cosine>(&kind_)) {
    if (!(c->omega > 0.0) || !std::isfinite(c->omega)) {
      throw InvalidArgument("cosine driving needs a positive angular frequency");
    }
  }
  if (const auto* tab = std::get_if<Tabulated>(&kind_)) {
    const auto& s = tab->samples;
    if (s.size() < 2) throw InvalidArgument("tabulated field needs at least two samples");
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (!(s[i].first > s[i - 1].first)) {
        throw InvalidArgument("tabulated sample times must be strictly increasing");
      }
    }
    if (t0_ < s.front().first || t0_ > s.back().first) {
      throw RangeError("tabulated field t0 outside the sampled range");
    }
    // Exact integrals of the piecewise-linear interpolant; at the nodes G is the
    // trapezoid rule.
    cum_G_.assign(s.size(), 0.0);
    cum_H_.assign(s.size(), 0.0);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const double h = s[i + 1].first - s[i].first;
      const double fa = s[i].second, fb = s[i + 1].second;
      cum_G_[i + 1] = cum_G_[i] + 0.5 * h * (fa + fb);
      cum_H_[i + 1] = cum_H_[i] + cum_G_[i] * h + h * h * (fa / 3.0 + fb / 6.0);
    }
    G_t0_ = tab_G(t0_);
    H_t0_ = tab_H(t0_);
  }
}

DrivingField DrivingField::tabulated(std::vector<std::pair<double, double>> samples, double t0) {
  return DrivingField(Tabulated{std::move(samples)}, t0);
}

bool DrivingField::is_null() const noexcept {
  return std::visit(
      [](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Tabulated>) {
          return std::all_of(k.samples.begin(), k.samples.end(),
                             [](const auto& s) { return s.second == 0.0; });
        } else {
          return k.f0 == 0.0;
        }
      },
      kind_);
}

void DrivingField::check_time(double t) const {
  if (!std::isfinite(t)) throw RangeError("non-finite time");
  if (const auto* tab = std::get_if<Tabulated>(&kind_)) {
    if (t < tab->samples.front().first || t > tab->samples.back().first) {
      throw RangeError("time " + std::to_string(t) + " outside tabulated range");
    }
  }
}

std::size_t DrivingField::segment(double t) const {
  const auto& s = std::get<Tabulated>(kind_).samples;
  auto it = std::upper_bound(s.begin(), s.end(), t,
                             [](double v, const auto& p) { return v < p.first; });
  std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
  return std::min(i, s.size() - 2);
}

double DrivingField::tab_G(double t) const {
  const auto& s = std::get<Tabulated>(kind_).samples;
  const std::size_t i = segment(t);
  const double h = s[i + 1].first - s[i].first;
  const double u = t - s[i].first;
  const double slope = (s[i + 1].second - s[i].second) / h;
  return cum_G_[i] + s[i].second * u + 0.5 * slope * u * u;
}

double DrivingField::tab_H(double t) const {
  const auto& s = std::get<Tabulated>(kind_).samples;
  const std::size_t i = segment(t);
  const double h = s[i + 1].first - s[i].first;
  const double u = t - s[i].first;
  const double slope = (s[i + 1].second - s[i].second) / h;
  return cum_H_[i] + cum_G_[i] * u + 0.5 * s[i].second * u * u + slope * u * u * u / 6.0;
}

double DrivingField::f(double t) const {
  check_time(t);
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Constant>) {
          return k.f0;
        } else if constexpr (std::is_same_v<K, Cosine>) {
          return k.f0 * std::cos(k.omega * t);
        } else {
          const std::size_t i = segment(t);
          const auto& a = k.samples[i];
          const auto& b = k.samples[i + 1];
          const double w = (t - a.first) / (b.first - a.first);
          return a.second + w * (b.second - a.second);
        }
      },
      kind_);
}

double DrivingField::F(double t) const { return F_increment(t0_, t); }

double DrivingField::double_integral(double t) const { return flight_integral(t0_, t); }

double DrivingField::F_increment(double ts, double t) const {
  check_time(ts);
  check_time(t);
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Constant>) {
          return k.f0 * (t - ts);
        } else if constexpr (std::is_same_v<K, Cosine>) {
          return 2.0 * k.f0 / k.omega * std::cos(0.5 * k.omega * (t + ts)) *
                 std::sin(0.5 * k.omega * (t - ts));
        } else {
          return tab_G(t) - tab_G(ts);
        }
      },
      kind_);
}

double DrivingField::flight_integral(double ts, double t) const {
  check_time(ts);
  check_time(t);
  const double tau = t - ts;
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Constant>) {
          return 0.5 * k.f0 * tau * tau;
        } else if constexpr (std::is_same_v<K, Cosine>) {
          const double z = k.omega * tau;
          const double a = k.omega * ts;
          const double s = std::sin(0.5 * z);
          return k.f0 / (k.omega * k.omega) *
                 (std::sin(a) * sin_minus_arg(z) + 2.0 * std::cos(a) * s * s);
        } else {
          return tab_H(t) - tab_H(ts) - tab_G(ts) * tau;
        }
      },
      kind_);
}

double DrivingField::next_sign_change(double t) const {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Constant>) {
          return kInf;
        } else if constexpr (std::is_same_v<K, Cosine>) {
          if (k.f0 == 0.0) return kInf;
          // zeros of cos(omega t) at omega t = pi/2 + j pi
          double j = std::floor((k.omega * t - 0.5 * kPi) / kPi) + 1.0;
          double tz = (0.5 * kPi + j * kPi) / k.omega;
          while (tz <= t) tz = (0.5 * kPi + (++j) * kPi) / k.omega;
          return tz;
        } else {
          const auto& s = k.samples;
          if (t >= s.back().first) return kInf;
          for (std::size_t i = segment(t); i + 1 < s.size(); ++i) {
            const double fa = s[i].second, fb = s[i + 1].second;
            if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
              const double tz = s[i].first + fa / (fa - fb) * (s[i + 1].first - s[i].first);
              if (tz > t) return tz;
            }
            // Sample nodes bound the monotone pieces as well.
            if (s[i + 1].first > t) return s[i + 1].first;
          }
          return kInf;
        }
      },
      kind_);
}

double DrivingField::max_abs_f() const {
  return std::visit(
      [](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Tabulated>) {
          double m = 0.0;
          for (const auto& s : k.samples) m = std::max(m, std::abs(s.second));
          return m;
        } else {
          return std::abs(k.f0);
        }
      },
      kind_);
}

std::pair<double, double> DrivingField::domain() const {
  if (const auto* tab = std::get_if<Tabulated>(&kind_)) {
    return {tab->samples.front().first, tab->samples.back().first};
  }
  return {-kInf, kInf};
}

double eval_f(const DrivingField& field, double t) { return field.f(t); }

double eval_F(const DrivingField& field, double t) { return field.F(t); }

double eval_xi(const DrivingField& field, double t, const PhysicalConstants& consts) {
  return -consts.alpha / consts.mass * field.double_integral(t);
}

void to_json(nlohmann::json& j, const PhysicalConstants& c) {
  j = nlohmann::json{{"hbar", c.hbar}, {"mass", c.mass}, {"box_length", c.box_length},
                     {"alpha", c.alpha}};
}

void from_json(const nlohmann::json& j, PhysicalConstants& c) {
  reject_unknown_keys(j, {"hbar", "mass", "box_length", "alpha"}, "constants");
  PhysicalConstants out;
  out.hbar = get_or(j, "hbar", out.hbar);
  out.mass = get_or(j, "mass", out.mass);
  out.box_length = get_or(j, "box_length", out.box_length);
  out.alpha = get_or(j, "alpha", out.alpha);
  out.validate();
  c = out;
}

void to_json(nlohmann::json& j, const DrivingField& field) {
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, DrivingField::Constant>) {
          j = nlohmann::json{{"kind", "constant"}, {"f0", k.f0}};
        } else if constexpr (std::is_same_v<K, DrivingField::Cosine>) {
          j = nlohmann::json{{"kind", "cosine"}, {"f0", k.f0}, {"omega", k.omega}};
        } else {
          nlohmann::json samples = nlohmann::json::array();
          for (const auto& [t, v] : k.samples) samples.push_back({t, v});
          j = nlohmann::json{{"kind", "tabulated"}, {"samples", samples}};
        }
      },
      field.kind());
  j["t0"] = field.t0();
}

void from_json(const nlohmann::json& j, DrivingField& field) {
  reject_unknown_keys(j, {"kind", "f0", "omega", "t0", "samples"}, "field");
  const auto kind = get_or<std::string>(j, "kind", "");
  const double t0 = get_or(j, "t0", 0.0);
  auto forbid = [&](const char* key) {
    if (j.contains(key)) {
      throw ConfigurationError(std::string("key '") + key + "' not valid for " + kind + " field");
    }
  };
  if (kind == "constant") {
    forbid("omega");
    forbid("samples");
    field = DrivingField::constant(get_or(j, "f0", 0.0), t0);
  } else if (kind == "cosine") {
    forbid("samples");
    if (!j.contains("omega")) throw ConfigurationError("cosine field needs 'omega'");
    field = DrivingField::cosine(get_or(j, "f0", 0.0), get_or(j, "omega", 1.0), t0);
  } else if (kind == "tabulated") {
    forbid("f0");
    forbid("omega");
    if (!j.contains("samples") || !j.at("samples").is_array()) {
      throw ConfigurationError("tabulated field needs a 'samples' array");
    }
    std::vector<std::pair<double, double>> samples;
    for (const auto& s : j.at("samples")) {
      if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
        throw ConfigurationError("tabulated samples must be [t, f] number pairs");
      }
      samples.emplace_back(s[0].get<double>(), s[1].get<double>());
    }
    field = DrivingField::tabulated(std::move(samples), t0);
  } else {
    throw ConfigurationError("field 'kind' must be constant, cosine or tabulated");
  }
}

}  // namespace boxgauge::model
