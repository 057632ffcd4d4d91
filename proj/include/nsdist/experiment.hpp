#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsdist/bounds.hpp"
#include "nsdist/network.hpp"
#include "nsdist/objectives.hpp"
#include "nsdist/trace.hpp"
#include "nsdist/worst_case.hpp"

namespace nsdist {

/// Invalid configuration; `field` is the dotted JSON path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class AlgorithmKind { naive, drs, mspd, cp_exact };

/// A constant that is either derived from epsilon ("auto") or given.
using AutoCount = std::optional<std::size_t>;

struct ExperimentConfig {
  // problem
  std::string problem_kind;
  Index dimension = 1;  // 0 means "auto" for worst-case kinds
  double radius = 1.0;
  std::uint64_t problem_seed = 0;
  std::vector<Vector> centers;  // empty: generated from problem_seed
  double scale = 1.0;           // euclidean_distance scale
  double design_time = 0.0;     // worst-case kinds
  double target_lipschitz = 1.0;
  double target_eigengap = 1.0;  // worst_case_local

  // network
  std::string network_kind;
  std::size_t nodes = 1;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::filesystem::path network_file;
  double network_eigengap = 1.0;
  double tau = 1.0;
  std::vector<double> rho;  // empty: all ones

  // algorithm
  AlgorithmKind algorithm = AlgorithmKind::mspd;
  AutoCount iterations;  // T
  AutoCount samples;     // K for drs
  AutoCount inner;       // M for mspd
  std::optional<std::size_t> max_iterations;  // naive cap
  bool heterogeneous = false;
  double inner_tol = 1e-8;

  double epsilon = 0.1;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output;
};

std::string to_string(AlgorithmKind kind);

/// Throws ConfigError naming the offending field. Relative paths resolve
/// against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

struct BuiltExperiment {
  Network network;
  GossipMatrix gossip;
  ProblemInstance problem;
  std::optional<LowerBoundEnvelope> envelope;
};

/// Builds network, gossip matrix and problem. With `with_optimum` the
/// closed-form or certified optimum is attached.
BuiltExperiment build_experiment(const ExperimentConfig& cfg, bool with_optimum);

/// Derived constants and the closed-form simulated time, as JSON.
nlohmann::json derived_constants(const ExperimentConfig& cfg, const BuiltExperiment& built);

struct SeedRun {
  RunTrace trace;
  Vector output;
  double closed_form_time = 0.0;
};

SeedRun run_seed(const ExperimentConfig& cfg, const BuiltExperiment& built, std::uint64_t seed,
                 Execution exec);

struct RunOptions {
  bool bounds = true;
};

/// Runs every seed (in parallel), writes trace_<seed>.csv, bounds.json and
/// summary.json into cfg.output. Returns the summary document.
nlohmann::json run_experiment(const ExperimentConfig& cfg, const RunOptions& options);

enum class SweepAxis { epsilon, dimension, eigengap };

SweepAxis parse_sweep_axis(const std::string& name);

struct SweepRow {
  double value = 0.0;
  double naive_time = 0.0;
  double drs_time = 0.0;
  double drs_communication = 0.0;
  double mspd_time = 0.0;
  double mspd_communication = 0.0;
  // T * tau / sqrt(gamma(W)), the communication term of the MSPD rate
  double mspd_comm_bound = 0.0;
};

/// Time-to-epsilon of each algorithm from the closed-form accounting
/// (auto constants), one row per axis value.
std::vector<SweepRow> sweep(const ExperimentConfig& cfg, SweepAxis axis,
                            std::span<const double> values);
void write_sweep_csv(std::span<const SweepRow> rows, SweepAxis axis, std::ostream& out);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace nsdist
