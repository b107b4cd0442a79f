#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "params.hpp"

namespace boxgauge::cli {

enum class Format { Csv, Json };

struct CommonOptions {
  std::optional<std::filesystem::path> out;
  Format format = Format::Csv;
  std::uint64_t seed = 1;
};

struct Artifact {
  std::filesystem::path path;
  std::string content;
};

struct CommandResult {
  std::string summary;  ///< one line, no trailing newline
  std::vector<Artifact> artifacts;
};

struct Command {
  std::string name;
  std::string description;
  std::vector<ParamSpec> table;
  std::function<CommandResult(const Params&, const CommonOptions&)> run;
};

const std::vector<Command>& commands();

}  // namespace boxgauge::cli
