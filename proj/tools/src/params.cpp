#include "params.hpp"

#include <cmath>

#include "boxgauge/errors.hpp"

namespace boxgauge::cli {

Params::Params(std::string command, const std::vector<ParamSpec>& table)
    : command_(std::move(command)), values_(nlohmann::json::object()) {
  for (const auto& p : table) values_[p.key] = p.default_value;
}

void Params::merge(const nlohmann::json& overrides, const std::string& origin) {
  if (!overrides.is_object()) throw ConfigurationError(origin + ": configuration must be a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    if (!values_.contains(key)) {
      throw ConfigurationError(origin + ": unknown key '" + key + "' for " + command_);
    }
    values_[key] = value;
  }
}

void Params::set_from_flag(const std::string& key, const std::string& text) {
  nlohmann::json value = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;
  merge(nlohmann::json{{key, value}}, "--" + key);
}

const nlohmann::json& Params::raw(const std::string& key) const {
  if (!values_.contains(key)) throw ConfigurationError("internal: no parameter '" + key + "'");
  return values_.at(key);
}

double Params::real(const std::string& key) const {
  const auto& v = raw(key);
  if (!v.is_number()) throw ConfigurationError("parameter '" + key + "' must be a number");
  return v.get<double>();
}

long long Params::integer(const std::string& key) const {
  const auto& v = raw(key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d)) return static_cast<long long>(d);
  }
  throw ConfigurationError("parameter '" + key + "' must be an integer");
}

bool Params::flag(const std::string& key) const {
  const auto& v = raw(key);
  if (!v.is_boolean()) throw ConfigurationError("parameter '" + key + "' must be true or false");
  return v.get<bool>();
}

std::string Params::text(const std::string& key) const {
  const auto& v = raw(key);
  if (!v.is_string()) throw ConfigurationError("parameter '" + key + "' must be a string");
  return v.get<std::string>();
}

model::DrivingField Params::field() const {
  nlohmann::json j = raw("field");
  if (!j.is_object()) throw ConfigurationError("parameter 'field' must be a JSON object");
  // Shorthand flags edit the field object in place.
  if (!raw("field_kind").is_null()) j["kind"] = text("field_kind");
  if (!raw("f0").is_null()) j["f0"] = real("f0");
  if (!raw("omega").is_null()) j["omega"] = real("omega");
  if (j.value("kind", "") == "constant") j.erase("omega");
  try {
    return j.get<model::DrivingField>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("field: ") + e.what());
  }
}

model::PhysicalConstants Params::consts() const {
  model::PhysicalConstants c;
  c.hbar = real("hbar");
  c.mass = real("mass");
  c.box_length = real("box_length");
  c.alpha = real("alpha");
  c.validate();
  return c;
}

std::vector<ParamSpec> field_params(const nlohmann::json& default_field) {
  return {
      {"field", default_field, "driving field object {kind, f0, omega, t0, samples}"},
      {"field_kind", nullptr, "override field.kind (constant|cosine|tabulated)"},
      {"f0", nullptr, "override field.f0"},
      {"omega", nullptr, "override field.omega"},
  };
}

std::vector<ParamSpec> consts_params() {
  return {
      {"hbar", 1.0, "reduced Planck constant"},
      {"mass", 1.0, "particle mass"},
      {"box_length", 1.0, "box width L"},
      {"alpha", 1.0, "coupling constant"},
  };
}

}  // namespace boxgauge::cli
