#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsdist/numerics.hpp"

namespace nsdist {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

/// Undirected, connected communication graph with a uniform per-edge
/// delay tau and per-node compute times rho_i (time per subgradient).
class Network {
 public:
  Network(std::size_t nodes, std::vector<Edge> edges, double tau = 1.0,
          std::vector<double> rho = {});

  std::size_t nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double tau() const { return tau_; }
  const std::vector<double>& rho() const { return rho_; }

  /// Neighbour lists as (node, edge index) pairs.
  const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adjacency() const {
    return adjacency_;
  }

  Network with_tau(double tau) const;
  Network with_rho(std::vector<double> rho) const;

  /// Hop distances from `source` (BFS).
  std::vector<std::size_t> distances_from(std::size_t source) const;

 private:
  std::size_t nodes_;
  std::vector<Edge> edges_;
  double tau_;
  std::vector<double> rho_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
};

Network path_graph(std::size_t n, double tau = 1.0);
Network cycle_graph(std::size_t n, double tau = 1.0);
Network complete_graph(std::size_t n, double tau = 1.0);
/// Node 0 is the hub.
Network star_graph(std::size_t n, double tau = 1.0);
Network grid_graph(std::size_t rows, std::size_t cols, double tau = 1.0);

/// Edge-list text: "n m" then m lines "u v w", 1-indexed nodes.
Network read_edge_list(std::istream& in, double tau = 1.0);
void write_edge_list(const Network& net, std::ostream& out);

struct SpanningTree {
  std::size_t root = 0;
  // parent[root] == root
  std::vector<std::size_t> parent;
  // index into Network::edges() of the link to the parent; unused for root
  std::vector<std::size_t> parent_edge;
  std::vector<std::size_t> depth_of;
  std::size_t depth = 0;
};

/// BFS tree rooted at a minimum-eccentricity node (lowest id on ties).
SpanningTree spanning_tree(const Network& net);
/// BFS tree from a given root.
SpanningTree spanning_tree(const Network& net, std::size_t root);

std::size_t diameter(const Network& net);

/// min over a in A, b in B of the hop distance.
std::size_t set_distance(const Network& net, const std::vector<std::size_t>& a,
                         const std::vector<std::size_t>& b);

/// A pair of nodes at distance diameter(net), lowest ids first.
std::pair<std::size_t, std::size_t> diametral_pair(const Network& net);

/// Gossip matrix on a network: symmetric PSD, kernel = constants, supported
/// on the edges. Construction verifies all three properties.
class GossipMatrix {
 public:
  /// Throws std::invalid_argument naming the failed property.
  GossipMatrix(SymmetricMatrix w, const Network& support);

  /// Trivial 1x1 gossip matrix (the zero map) with eigengap 1 by convention.
  static GossipMatrix single_node();

  Index order() const { return w_.order(); }
  const SymmetricMatrix& matrix() const { return w_; }
  const SpectralSummary& spectrum() const { return spectrum_; }
  double eigengap() const { return eigengap_; }
  double largest_eigenvalue() const { return spectrum_.largest(); }

  /// Nonzero off-diagonal pattern as neighbour lists (j, W_ij), plus the diagonal.
  const std::vector<std::vector<std::pair<std::size_t, double>>>& rows() const { return rows_; }

 private:
  GossipMatrix() = default;
  void build_rows();

  SymmetricMatrix w_;
  SpectralSummary spectrum_;
  double eigengap_ = 1.0;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
};

/// Weighted Laplacian, using the network's edge weights unless `weights`
/// (one per edge) is given.
GossipMatrix laplacian(const Network& net, const std::vector<double>& weights = {});

struct PrescribedGapGraph {
  Network network;
  GossipMatrix gossip;
  double reweight = 0.0;  // the bisected edge parameter a
  std::size_t size = 0;   // n_gamma
};

/// (1 - cos(pi/n)) / (1 + cos(pi/n)), the eigengap of the unit path P_n.
double path_eigengap(std::size_t n);

/// Graph whose Laplacian has eigengap `target` (within 1e-6): the reweighted
/// triangle when target >= 1/3, otherwise a path of size n_gamma whose
/// first edge has weight 1 - a.
PrescribedGapGraph graph_with_eigengap(double target, double tau = 1.0);

}  // namespace nsdist
