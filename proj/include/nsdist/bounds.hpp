#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsdist/drs.hpp"
#include "nsdist/mspd.hpp"
#include "nsdist/objectives.hpp"
#include "nsdist/trace.hpp"
#include "nsdist/worst_case.hpp"

namespace nsdist {

/// What a run is compared against. `upper` takes the iteration index.
struct BoundSpec {
  std::string theorem;
  std::function<double(std::size_t)> upper;
  std::optional<LowerBoundEnvelope> envelope;
  bool stochastic = false;
};

BoundSpec drs_bounds(const DrsConfig& cfg);
/// Pass L_ell, or L_c = sqrt((1/n) sum rho_i L_i^2) in heterogeneous mode.
BoundSpec mspd_bounds(const MspdConfig& cfg, double lipschitz);

struct BoundSample {
  std::size_t iteration = 0;
  double time = 0.0;
  double mean_gap = 0.0;     // over seeds, at the reported output
  double standard_error = 0.0;
  double min_node_gap = 0.0;  // over seeds and recorded nodes
  std::optional<double> upper;
  std::optional<double> envelope;
  bool upper_violation = false;
  bool lower_violation = false;
};

struct BoundReport {
  std::string theorem;
  std::size_t seeds = 0;
  bool stochastic = false;
  double optimum = 0.0;
  std::vector<BoundSample> samples;
  std::size_t upper_violations = 0;
  std::size_t lower_violations = 0;
  double final_mean_gap = 0.0;
  double final_standard_error = 0.0;
  // minimum over samples of the mean gap; non-increasing by construction
  std::vector<double> best_gap;
};

/// Compares seed-aligned traces with the bounds. Upper violation: mean gap >
/// bound (+ 2 stderr when stochastic). Lower violation: any recorded node gap
/// below the envelope's guaranteed value inside its validity horizon.
/// Throws std::logic_error when the problem carries no optimum value.
BoundReport compare_bounds(std::span<const RunTrace> traces, const ProblemInstance& problem,
                           const BoundSpec& spec);

nlohmann::json to_json(const BoundReport& report);

}  // namespace nsdist
