#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nsdist/cost_model.hpp"
#include "nsdist/network.hpp"
#include "nsdist/objectives.hpp"
#include "nsdist/parallel.hpp"
#include "nsdist/trace.hpp"

namespace nsdist {

/// Constants of distributed randomized smoothing. The schedules are stored
/// for t = 0..T inclusive since step t reads eta_{t+1}.
struct DrsConfig {
  double epsilon = 0.0;  // 0 when T and K were given explicitly
  double radius = 1.0;
  double lipschitz = 1.0;  // L_g
  Index dimension = 1;
  std::size_t iterations = 1;  // T
  std::size_t samples = 1;     // K
  std::uint64_t seed = 0;
  std::vector<double> alpha;

  double smoothing(std::size_t t) const;  // gamma_t = R d^{-1/4} alpha_t
  double step(std::size_t t) const;       // eta_t
  std::string digest() const;
};

/// alpha_0 = 1, alpha_{t+1} = 2 / (1 + sqrt(1 + 4 / alpha_t^2)); `count` terms.
std::vector<double> accelerated_sequence(std::size_t count);

/// T = ceil(20 R L d^{1/4} / eps), K = ceil(5 R L d^{-1/4} / eps).
DrsConfig drs_config(double epsilon, double radius, double lipschitz, Index dimension,
                     std::uint64_t seed);
DrsConfig drs_config(std::size_t iterations, std::size_t samples, double radius,
                     double lipschitz, Index dimension, std::uint64_t seed);

/// 10 R L d^{1/4} / t + 5 R L / sqrt(t K)
double drs_rate_bound(double radius, double lipschitz, Index dimension, std::size_t t,
                      std::size_t samples);

/// Called after every iteration with (t + 1, x_{t+1}, y_t, z_{t+1}).
using DrsObserver =
    std::function<void(std::size_t, const Vector&, const Vector&, const Vector&)>;

struct DrsOptions {
  Execution execution = Execution::parallel;
  DrsObserver observer;
};

struct DrsResult {
  Vector theta;  // x_T
  RunTrace trace;
  std::size_t tree_depth = 0;
  std::size_t diameter = 0;
};

/// Runs T iterations over a BFS spanning tree. Every node draws the same
/// Gaussian perturbations (shared seed), so only y_t and the g_i travel.
DrsResult run_drs(const ProblemInstance& problem, const Network& net, const DrsConfig& cfg,
                  CostModel& clock, const DrsOptions& options = {});

/// ceil((R L / eps)^2)
std::size_t naive_iteration_budget(double epsilon, double radius, double lipschitz);

struct NaiveResult {
  Vector theta;  // step-weighted average of the iterates
  RunTrace trace;
  std::size_t iterations = 0;
};

/// Projected subgradient on fbar with step R / (L sqrt(t + 1)); each iteration
/// is one broadcast, one subgradient per node and one aggregation.
NaiveResult run_naive_subgradient(const ProblemInstance& problem, const Network& net,
                                  double epsilon, CostModel& clock,
                                  std::optional<std::size_t> iteration_cap = std::nullopt,
                                  Execution exec = Execution::parallel);

}  // namespace nsdist
