#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boxgauge/model.hpp"

namespace boxgauge::cli {

struct ParamSpec {
  std::string key;
  nlohmann::json default_value;
  std::string help;
};

/// Resolved parameters for one subcommand: defaults, then the JSON config file,
/// then command-line flags. Keys outside the table are rejected at every layer.
class Params {
 public:
  Params(std::string command, const std::vector<ParamSpec>& table);

  /// Merges a JSON object; unknown keys throw ConfigurationError.
  void merge(const nlohmann::json& overrides, const std::string& origin);
  /// Sets one key from flag text (parsed as JSON when possible, else taken as a string).
  void set_from_flag(const std::string& key, const std::string& text);

  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::string text(const std::string& key) const;
  const nlohmann::json& raw(const std::string& key) const;

  model::DrivingField field() const;
  model::PhysicalConstants consts() const;

  const nlohmann::json& all() const noexcept { return values_; }
  const std::string& command() const noexcept { return command_; }

 private:
  std::string command_;
  nlohmann::json values_;
};

/// Keys shared by every command that takes a driving field or physical constants.
std::vector<ParamSpec> field_params(const nlohmann::json& default_field);
std::vector<ParamSpec> consts_params();

}  // namespace boxgauge::cli
