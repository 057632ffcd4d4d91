// Command-line experiment runner.
//
//   nsdist run CONFIG [--seeds 1,2,3] [--out DIR] [--print-constants] [--no-bounds]
//   nsdist sweep CONFIG --axis epsilon|dimension|eigengap --values v1,v2,... [--out FILE]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nsdist/experiment.hpp"

namespace {

constexpr int kConfigError = 2;

std::vector<double> parse_values(const std::vector<std::string>& tokens) {
  std::vector<double> values;
  for (const auto& t : tokens) {
    if (t.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) {
      throw nsdist::ConfigError("--values", "'" + t + "' is not a number");
    }
    values.push_back(v);
  }
  return values;
}

void print_constants(const nlohmann::json& constants) {
  for (const auto& [key, value] : constants.items()) {
    std::cout << key << "=" << (value.is_string() ? value.get<std::string>() : value.dump())
              << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized non-smooth optimization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  bool constants_only = false;
  bool no_bounds = false;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config_path, "Experiment JSON")->required();
  run->add_option("--seeds", seeds, "Override the seed list")->delimiter(',');
  run->add_option("--out", out_dir, "Override the output directory");
  run->add_flag("--print-constants", constants_only, "Print derived constants and exit");
  run->add_flag("--no-bounds", no_bounds, "Skip the optimum solve and bound report");

  std::string sweep_config;
  std::string axis_name;
  std::vector<std::string> values;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Closed-form time-to-epsilon table");
  sweep->add_option("config", sweep_config, "Experiment JSON")->required();
  sweep->add_option("--axis", axis_name, "epsilon, dimension or eigengap")->required();
  sweep->add_option("--values", values, "Axis values")->delimiter(',');
  sweep->add_option("--out", sweep_out, "CSV file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = nsdist::load_config(config_path);
      if (!seeds.empty()) cfg.seeds = seeds;
      if (!out_dir.empty()) cfg.output = out_dir;
      if (constants_only) {
        const auto built = nsdist::build_experiment(cfg, false);
        print_constants(nsdist::derived_constants(cfg, built));
        return 0;
      }
      const auto summary = nsdist::run_experiment(cfg, {.bounds = !no_bounds});
      std::cout << summary.dump(2) << "\n";
      return 0;
    }
    const auto cfg = nsdist::load_config(sweep_config);
    const auto axis = nsdist::parse_sweep_axis(axis_name);
    const auto rows = nsdist::sweep(cfg, axis, parse_values(values));
    if (sweep_out.empty()) {
      nsdist::write_sweep_csv(rows, axis, std::cout);
    } else {
      std::ostringstream csv;
      nsdist::write_sweep_csv(rows, axis, csv);
      nsdist::write_file_atomically(sweep_out, csv.str());
    }
    return 0;
  } catch (const nsdist::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
