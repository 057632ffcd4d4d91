#include "nsdist/cost_model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace nsdist {

CostModel::CostModel(const Network& net)
    : tau_(net.tau()),
      rho_(net.rho()),
      subgradients_(net.nodes(), 0),
      messages_(net.edges().size(), 0) {}

double CostModel::advance(double elapsed) {
  time_ += elapsed;
  return elapsed;
}

double CostModel::charge_parallel_compute(std::span<const std::size_t> counts) {
  if (counts.size() != rho_.size()) {
    throw std::invalid_argument("CostModel: need one count per node");
  }
  double elapsed = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    elapsed = std::max(elapsed, static_cast<double>(counts[i]) * rho_[i]);
    subgradients_[i] += counts[i];
  }
  return advance(elapsed);
}

double CostModel::tree_pass(const SpanningTree& tree) {
  for (std::size_t v = 0; v < tree.parent.size(); ++v) {
    if (v != tree.root) {
      messages_.at(tree.parent_edge[v]) += 1;
    }
  }
  return advance(static_cast<double>(tree.depth) * tau_);
}

double CostModel::charge_tree_broadcast(const SpanningTree& tree) { return tree_pass(tree); }

double CostModel::charge_tree_aggregate(const SpanningTree& tree) { return tree_pass(tree); }

double CostModel::charge_gossip_rounds(std::size_t rounds) {
  for (auto& m : messages_) {
    m += 2 * rounds;
  }
  return advance(static_cast<double>(rounds) * tau_);
}

std::uint64_t CostModel::total_subgradients() const {
  return std::accumulate(subgradients_.begin(), subgradients_.end(), std::uint64_t{0});
}

std::uint64_t CostModel::total_messages() const {
  return std::accumulate(messages_.begin(), messages_.end(), std::uint64_t{0});
}

}  // namespace nsdist
