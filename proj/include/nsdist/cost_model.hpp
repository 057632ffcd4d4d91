#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nsdist/network.hpp"

namespace nsdist {

/// Simulated clock for black-box procedures: a subgradient on node i costs
/// rho_i, one hop costs tau. Parallel work inside a phase is charged as the
/// maximum over nodes, successive phases add up. Single writer per run.
class CostModel {
 public:
  explicit CostModel(const Network& net);

  double now() const { return time_; }

  /// elapsed = max_i counts_i * rho_i
  double charge_parallel_compute(std::span<const std::size_t> counts);
  /// Root to leaves: depth * tau, one message per tree edge.
  double charge_tree_broadcast(const SpanningTree& tree);
  /// Leaves to root, children of one level in parallel: depth * tau.
  double charge_tree_aggregate(const SpanningTree& tree);
  /// `rounds` gossip steps: rounds * tau, two messages per edge per step.
  double charge_gossip_rounds(std::size_t rounds);

  const std::vector<double>& rho() const { return rho_; }
  double tau() const { return tau_; }
  const std::vector<std::uint64_t>& subgradients() const { return subgradients_; }
  const std::vector<std::uint64_t>& messages() const { return messages_; }
  std::uint64_t total_subgradients() const;
  std::uint64_t total_messages() const;

 private:
  double advance(double elapsed);
  double tree_pass(const SpanningTree& tree);

  double tau_;
  std::vector<double> rho_;
  double time_ = 0.0;
  std::vector<std::uint64_t> subgradients_;
  std::vector<std::uint64_t> messages_;
};

}  // namespace nsdist
