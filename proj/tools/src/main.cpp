// boxgauge: command-line front end for the driven-box toolkit.
//
//   boxgauge <command> [--config run.json] [--<param> value ...]
//            [--seed N] [--out PATH] [--format csv|json]
//
// Exit status: 0 success, 2 invalid input, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "boxgauge/errors.hpp"
#include "boxgauge/export.hpp"
#include "commands.hpp"

namespace {

using boxgauge::cli::CommonOptions;
using boxgauge::cli::Format;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

nlohmann::json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw boxgauge::ConfigurationError("cannot read config file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw boxgauge::ConfigurationError("config " + path + ": " + e.what());
  }
}

void report_numerical(const std::string& command, const boxgauge::NumericalFailure& e) {
  nlohmann::json diag{{"status", "numerical-failure"}, {"command", command}, {"message", e.what()}};
  if (dynamic_cast<const boxgauge::HorizonError*>(&e)) diag["kind"] = "horizon";
  else if (dynamic_cast<const boxgauge::AnalysisError*>(&e)) diag["kind"] = "analysis";
  else diag["kind"] = "numerical";
  if (e.bracket()) diag["bracket"] = {e.bracket()->first, e.bracket()->second};
  std::cerr << diag.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven particle in a box: classical billiard, gauge-covariant quantum propagation, "
               "and operator-bound audits"};
  app.require_subcommand(1);

  struct Bound {
    const boxgauge::cli::Command* command;
    CLI::App* sub;
    std::map<std::string, std::string> flags;
    std::string config;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 1;
  };
  std::vector<std::unique_ptr<Bound>> bound;

  for (const auto& cmd : boxgauge::cli::commands()) {
    auto b = std::make_unique<Bound>();
    b->command = &cmd;
    b->sub = app.add_subcommand(cmd.name, cmd.description);
    b->sub->add_option("--config", b->config, "JSON run descriptor (strict keys)");
    b->sub->add_option("--seed", b->seed, "random seed")->capture_default_str();
    b->sub->add_option("--out", b->out, "artifact path");
    b->sub->add_option("--format", b->format, "artifact format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    for (const auto& p : cmd.table) {
      const std::string def = p.default_value.is_null() ? "" : " [" + p.default_value.dump() + "]";
      b->sub->add_option("--" + p.key, b->flags[p.key], p.help + def);
    }
    bound.push_back(std::move(b));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  for (const auto& b : bound) {
    if (!b->sub->parsed()) continue;
    const auto& cmd = *b->command;
    try {
      boxgauge::cli::Params params(cmd.name, cmd.table);
      if (!b->config.empty()) params.merge(read_config(b->config), b->config);
      for (const auto& p : cmd.table) {
        if (b->sub->count("--" + p.key) > 0) params.set_from_flag(p.key, b->flags.at(p.key));
      }
      CommonOptions common;
      common.format = b->format == "json" ? Format::Json : Format::Csv;
      common.seed = b->seed;
      if (!b->out.empty()) common.out = b->out;

      const auto result = cmd.run(params, common);
      for (const auto& a : result.artifacts) boxgauge::io::write_atomic(a.path, a.content);
      std::cout << result.summary << std::endl;
      return 0;
    } catch (const boxgauge::ValidationError& e) {
      std::cerr << cmd.name << ": " << e.what() << '\n';
      return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << cmd.name << ": invalid parameter value: " << e.what() << '\n';
      return kExitValidation;
    } catch (const boxgauge::NumericalFailure& e) {
      report_numerical(cmd.name, e);
      return kExitNumerical;
    } catch (const std::exception& e) {
      std::cerr << cmd.name << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 0;
}
