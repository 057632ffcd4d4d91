#include "nsdist/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nsdist {
namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

}  // namespace

Network::Network(std::size_t nodes, std::vector<Edge> edges, double tau, std::vector<double> rho)
    : nodes_(nodes), edges_(std::move(edges)), tau_(tau), rho_(std::move(rho)) {
  if (nodes_ == 0) {
    throw std::invalid_argument("Network: need at least one node");
  }
  if (!(tau_ >= 0.0) || !std::isfinite(tau_)) {
    throw std::invalid_argument("Network: tau must be finite and >= 0");
  }
  if (rho_.empty()) {
    rho_.assign(nodes_, 1.0);
  }
  if (rho_.size() != nodes_) {
    throw std::invalid_argument("Network: rho must have one entry per node");
  }
  for (double r : rho_) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw std::invalid_argument("Network: compute times rho_i must be positive");
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  adjacency_.assign(nodes_, {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto& edge = edges_[e];
    if (edge.u >= nodes_ || edge.v >= nodes_ || edge.u == edge.v) {
      throw std::invalid_argument("Network: edge " + std::to_string(e) + " has invalid endpoints");
    }
    if (!(edge.weight > 0.0) || !std::isfinite(edge.weight)) {
      throw std::invalid_argument("Network: edge " + std::to_string(e) + " has non-positive weight");
    }
    if (!seen.insert({std::min(edge.u, edge.v), std::max(edge.u, edge.v)}).second) {
      throw std::invalid_argument("Network: duplicate edge " + std::to_string(e));
    }
    adjacency_[edge.u].emplace_back(edge.v, e);
    adjacency_[edge.v].emplace_back(edge.u, e);
  }
  const auto dist = distances_from(0);
  if (std::find(dist.begin(), dist.end(), kUnreached) != dist.end()) {
    throw std::invalid_argument("Network: graph is disconnected");
  }
}

Network Network::with_tau(double tau) const { return Network(nodes_, edges_, tau, rho_); }

Network Network::with_rho(std::vector<double> rho) const {
  return Network(nodes_, edges_, tau_, std::move(rho));
}

std::vector<std::size_t> Network::distances_from(std::size_t source) const {
  std::vector<std::size_t> dist(nodes_, kUnreached);
  std::queue<std::size_t> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (auto [v, e] : adjacency_[u]) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

Network path_graph(std::size_t n, double tau) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, 1.0});
  }
  return Network(n, std::move(edges), tau);
}

Network cycle_graph(std::size_t n, double tau) {
  if (n < 3) {
    throw std::invalid_argument("cycle_graph: need n >= 3");
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({i, (i + 1) % n, 1.0});
  }
  return Network(n, std::move(edges), tau);
}

Network complete_graph(std::size_t n, double tau) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      edges.push_back({i, j, 1.0});
    }
  }
  return Network(n, std::move(edges), tau);
}

Network star_graph(std::size_t n, double tau) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    edges.push_back({0, i, 1.0});
  }
  return Network(n, std::move(edges), tau);
}

Network grid_graph(std::size_t rows, std::size_t cols, double tau) {
  std::vector<Edge> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), 1.0});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), 1.0});
    }
  }
  return Network(rows * cols, std::move(edges), tau);
}

Network read_edge_list(std::istream& in, double tau) {
  std::size_t n = 0;
  std::size_t m = 0;
  if (!(in >> n >> m)) {
    throw std::invalid_argument("edge list: missing 'n m' header");
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t e = 0; e < m; ++e) {
    long u = 0;
    long v = 0;
    double w = 0.0;
    if (!(in >> u >> v >> w)) {
      throw std::invalid_argument("edge list: expected " + std::to_string(m) + " edges, read " +
                                  std::to_string(e));
    }
    if (u < 1 || v < 1 || static_cast<std::size_t>(u) > n || static_cast<std::size_t>(v) > n) {
      throw std::invalid_argument("edge list: node id out of range on edge " + std::to_string(e + 1));
    }
    edges.push_back({static_cast<std::size_t>(u - 1), static_cast<std::size_t>(v - 1), w});
  }
  return Network(n, std::move(edges), tau);
}

void write_edge_list(const Network& net, std::ostream& out) {
  std::ostringstream buf;
  buf.precision(17);
  buf << net.nodes() << ' ' << net.edges().size() << '\n';
  for (const auto& e : net.edges()) {
    buf << e.u + 1 << ' ' << e.v + 1 << ' ' << e.weight << '\n';
  }
  out << buf.str();
}

SpanningTree spanning_tree(const Network& net) {
  std::size_t root = 0;
  std::size_t best = kUnreached;
  for (std::size_t s = 0; s < net.nodes(); ++s) {
    const auto dist = net.distances_from(s);
    const auto ecc = *std::max_element(dist.begin(), dist.end());
    if (ecc < best) {
      best = ecc;
      root = s;
    }
  }
  return spanning_tree(net, root);
}

SpanningTree spanning_tree(const Network& net, std::size_t root) {
  const std::size_t n = net.nodes();
  if (root >= n) {
    throw std::invalid_argument("spanning_tree: root out of range");
  }
  SpanningTree tree;
  tree.root = root;
  tree.parent.assign(n, kUnreached);
  tree.parent_edge.assign(n, kUnreached);
  tree.depth_of.assign(n, 0);
  tree.parent[root] = root;
  std::queue<std::size_t> frontier;
  frontier.push(root);
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (auto [v, e] : net.adjacency()[u]) {
      if (tree.parent[v] == kUnreached) {
        tree.parent[v] = u;
        tree.parent_edge[v] = e;
        tree.depth_of[v] = tree.depth_of[u] + 1;
        tree.depth = std::max(tree.depth, tree.depth_of[v]);
        frontier.push(v);
      }
    }
  }
  return tree;
}

std::size_t diameter(const Network& net) {
  std::size_t best = 0;
  for (std::size_t s = 0; s < net.nodes(); ++s) {
    const auto dist = net.distances_from(s);
    best = std::max(best, *std::max_element(dist.begin(), dist.end()));
  }
  return best;
}

std::size_t set_distance(const Network& net, const std::vector<std::size_t>& a,
                         const std::vector<std::size_t>& b) {
  std::size_t best = kUnreached;
  for (auto s : a) {
    const auto dist = net.distances_from(s);
    for (auto t : b) {
      best = std::min(best, dist.at(t));
    }
  }
  return best;
}

std::pair<std::size_t, std::size_t> diametral_pair(const Network& net) {
  std::size_t best = 0;
  std::pair<std::size_t, std::size_t> pair{0, 0};
  for (std::size_t s = 0; s < net.nodes(); ++s) {
    const auto dist = net.distances_from(s);
    for (std::size_t t = s + 1; t < net.nodes(); ++t) {
      if (dist[t] > best) {
        best = dist[t];
        pair = {s, t};
      }
    }
  }
  return pair;
}

GossipMatrix::GossipMatrix(SymmetricMatrix w, const Network& support) : w_(std::move(w)) {
  const Index n = w_.order();
  if (static_cast<std::size_t>(n) != support.nodes()) {
    throw std::invalid_argument("GossipMatrix: order differs from network size");
  }
  // assumption 3: supported on the edges
  Matrix allowed = Matrix::Identity(n, n);
  for (const auto& e : support.edges()) {
    allowed(e.u, e.v) = 1.0;
    allowed(e.v, e.u) = 1.0;
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (w_(i, j) != 0.0 && allowed(i, j) == 0.0) {
        throw std::invalid_argument("GossipMatrix: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") lies off the network edges");
      }
    }
  }
  const double scale = std::max(1.0, w_.dense().cwiseAbs().maxCoeff());
  // assumption 2, part 1: constants are in the kernel
  const double row_sum = (w_.dense() * Vector::Ones(n)).cwiseAbs().maxCoeff();
  if (row_sum > 1e-10 * scale) {
    throw std::invalid_argument("GossipMatrix: W*1 != 0 (kernel does not contain constants)");
  }
  spectrum_ = symmetric_eigendecomposition(w_);
  if (n == 1) {
    eigengap_ = 1.0;
    build_rows();
    return;
  }
  // assumption 1: PSD
  if (spectrum_.smallest() < -kZeroEigenvalueTolerance * std::max(1.0, spectrum_.largest())) {
    throw std::invalid_argument("GossipMatrix: not positive semi-definite");
  }
  try {
    eigengap_ = nsdist::eigengap(spectrum_);
  } catch (const std::domain_error&) {
    throw std::invalid_argument("GossipMatrix: kernel larger than the constant vectors");
  }
  build_rows();
}

GossipMatrix GossipMatrix::single_node() {
  return GossipMatrix(SymmetricMatrix(Matrix::Zero(1, 1)), Network(1, {}));
}

void GossipMatrix::build_rows() {
  const Index n = w_.order();
  rows_.assign(static_cast<std::size_t>(n), {});
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (w_(i, j) != 0.0) {
        rows_[i].emplace_back(static_cast<std::size_t>(j), w_(i, j));
      }
    }
  }
}

GossipMatrix laplacian(const Network& net, const std::vector<double>& weights) {
  if (!weights.empty() && weights.size() != net.edges().size()) {
    throw std::invalid_argument("laplacian: need one weight per edge");
  }
  const auto n = static_cast<Index>(net.nodes());
  Matrix l = Matrix::Zero(n, n);
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    const auto& edge = net.edges()[e];
    const double w = weights.empty() ? edge.weight : weights[e];
    if (!(w > 0.0)) {
      throw std::invalid_argument("laplacian: weights must be positive");
    }
    l(edge.u, edge.u) += w;
    l(edge.v, edge.v) += w;
    l(edge.u, edge.v) -= w;
    l(edge.v, edge.u) -= w;
  }
  return GossipMatrix(SymmetricMatrix(std::move(l)), net);
}

double path_eigengap(std::size_t n) {
  const double c = std::cos(std::numbers::pi / static_cast<double>(n));
  return (1.0 - c) / (1.0 + c);
}

namespace {

Network reweighted_triangle(double a, double tau) {
  std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}};
  if (a > 0.0) {
    edges.push_back({0, 2, a});
  }
  return Network(3, std::move(edges), tau);
}

Network reweighted_path(std::size_t n, double a, double tau) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, i == 0 ? 1.0 - a : 1.0});
  }
  return Network(n, std::move(edges), tau);
}

// Bisection on a in [0, 1] for a monotone gap(a). `increasing` gives the
// direction; the bracket ordering is re-checked every step.
double bisect_reweight(const std::function<double(double)>& gap, double target, double gap_lo,
                       double gap_hi, bool increasing) {
  double lo = 0.0;
  double hi = 1.0;
  auto below = [&](double g) { return increasing ? g <= target : g >= target; };
  if (!(below(gap_lo) && !below(gap_hi))) {
    if (std::abs(gap_lo - target) <= 1e-12) return 0.0;
    throw std::logic_error("graph_with_eigengap: bisection bracket does not contain the target");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = gap(mid);
    if (below(g)) {
      if (increasing ? g < gap_lo - 1e-12 : g > gap_lo + 1e-12) {
        throw std::logic_error("graph_with_eigengap: eigengap not monotone in the reweight");
      }
      lo = mid;
      gap_lo = g;
    } else {
      hi = mid;
      gap_hi = g;
    }
  }
  return std::abs(gap_lo - target) <= std::abs(gap_hi - target) ? lo : hi;
}

}  // namespace

PrescribedGapGraph graph_with_eigengap(double target, double tau) {
  if (!(target > 0.0 && target <= 1.0)) {
    throw std::invalid_argument("graph_with_eigengap: target must lie in (0, 1]");
  }
  if (target >= 1.0 / 3.0) {
    auto gap = [tau](double a) { return laplacian(reweighted_triangle(a, tau)).eigengap(); };
    double a = 1.0;
    if (target < 1.0) {
      a = bisect_reweight(gap, target, gap(0.0), gap(1.0), true);
    }
    auto net = reweighted_triangle(a, tau);
    auto w = laplacian(net);
    return {std::move(net), std::move(w), a, 3};
  }

  std::size_t n = 3;
  while (!(path_eigengap(n) >= target && target > path_eigengap(n + 1))) {
    ++n;
  }
  auto gap = [n, tau](double a) {
    if (a >= 1.0) return 0.0;  // first edge removed: disconnected
    return laplacian(reweighted_path(n, a, tau)).eigengap();
  };
  const double a = bisect_reweight(gap, target, gap(0.0), 0.0, false);
  auto net = reweighted_path(n, a, tau);
  auto w = laplacian(net);
  return {std::move(net), std::move(w), a, n};
}

}  // namespace nsdist
