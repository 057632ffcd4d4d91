#include "nsdist/worst_case.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nsdist {
namespace {

// 1/(1 + t/scale), with scale == 0 meaning instantaneous communication
double communication_term(double t, double scale) {
  if (scale <= 0.0) {
    return t > 0.0 ? 0.0 : 1.0;
  }
  return 1.0 / (1.0 + t / scale);
}

double envelope_shape(double t, double comm_scale) {
  const double c = communication_term(t, comm_scale);
  return std::sqrt(c * c + 1.0 / (1.0 + t));
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

double envelope_global(double t, double radius, double lipschitz, double diameter, double tau) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("envelope_global: t must be >= 0");
  }
  return radius * lipschitz / 36.0 * envelope_shape(t, 2.0 * diameter * tau);
}

double envelope_local(double t, double radius, double lipschitz, double eigengap, double tau) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("envelope_local: t must be >= 0");
  }
  // 2 t sqrt(gamma) / tau == t / (tau / (2 sqrt(gamma)))
  return radius * lipschitz / 108.0 * envelope_shape(t, tau / (2.0 * std::sqrt(eigengap)));
}

double LowerBoundEnvelope::evaluate(double t) const {
  return kind == Kind::global ? envelope_global(t, radius, lipschitz, diameter, tau)
                              : envelope_local(t, radius, lipschitz, eigengap, tau);
}

std::optional<double> LowerBoundEnvelope::guaranteed(double t) const {
  if (!(t < horizon)) {
    return std::nullopt;
  }
  return evaluate(std::max(t, design_time));
}

double WorstCaseParameters::optimum_value() const {
  const double kk = static_cast<double>(k);
  const double ll = static_cast<double>(l);
  const double bracket = (beta - wc_gamma) * (beta - wc_gamma) +
                         wc_gamma * wc_gamma / (2.0 * kk) + delta * delta / ll;
  return -bracket / (2.0 * alpha * static_cast<double>(nodes));
}

Vector WorstCaseParameters::optimum_point() const {
  Vector x = Vector::Zero(dimension);
  x(0) = (beta - wc_gamma) / alpha;
  for (std::size_t j = 1; j <= 2 * k; ++j) {
    x(static_cast<Index>(j)) = wc_gamma / (2.0 * static_cast<double>(k) * alpha);
  }
  for (std::size_t j = 2 * k + 1; j <= 2 * k + l; ++j) {
    x(static_cast<Index>(j)) = -delta / (static_cast<double>(l) * alpha);
  }
  return x;
}

double WorstCaseParameters::formula_lipschitz() const {
  return (beta + 2.0 * std::sqrt(2.0 * static_cast<double>(k) + 1.0) * wc_gamma + delta +
          alpha * radius) /
         static_cast<double>(nodes);
}

WorstCaseParameters worst_case_parameters(double t, double diameter, double tau,
                                          double lipschitz, std::size_t nodes, Index dimension,
                                          double radius) {
  if (!(t >= 0.0) || !(diameter * tau > 0.0) || !(lipschitz > 0.0) || !(radius > 0.0) ||
      nodes < 2) {
    throw std::invalid_argument(
        "worst_case_parameters: need t >= 0, Delta*tau > 0, L > 0, R > 0, n >= 2");
  }
  WorstCaseParameters p;
  p.k = static_cast<std::size_t>(std::floor(t / (2.0 * diameter * tau))) + 1;
  p.l = static_cast<std::size_t>(std::floor(t)) + 1;
  p.nodes = nodes;
  p.dimension = dimension;
  p.radius = radius;
  const std::size_t required = 2 * p.k + p.l + 1;
  if (dimension < static_cast<Index>(required)) {
    throw std::invalid_argument("worst_case_parameters: dimension " + std::to_string(dimension) +
                                " too small, need d >= " + std::to_string(required));
  }
  const double n = static_cast<double>(nodes);
  const double kk = static_cast<double>(p.k);
  p.delta = lipschitz * n / 9.0;
  p.wc_gamma = lipschitz * n / (9.0 * std::sqrt(kk));
  p.beta = p.wc_gamma * (1.0 + 1.0 / std::sqrt(2.0 * kk));
  const double bracket = (p.beta - p.wc_gamma) * (p.beta - p.wc_gamma) +
                         p.wc_gamma * p.wc_gamma / (2.0 * kk) +
                         p.delta * p.delta / static_cast<double>(p.l);
  // ||theta*||_2 = sqrt(bracket) / alpha, so alpha pins the optimum to the sphere of radius R
  p.alpha = std::sqrt(bracket) / radius;
  return p;
}

ObjectiveOracle worst_case_first(const WorstCaseParameters& p) {
  const Index d = p.dimension;
  const auto k = static_cast<Index>(p.k);
  const auto l = static_cast<Index>(p.l);
  const double gamma = p.wc_gamma;
  const double delta = p.delta;
  auto value = [=](const Vector& x) {
    double chain = 0.0;
    for (Index i = 1; i <= k; ++i) {
      chain += std::abs(x(2 * i - 1) - x(2 * i - 2));
    }
    return gamma * chain + delta * x.segment(2 * k + 1, l).maxCoeff();
  };
  auto subgradient = [=](const Vector& x) {
    Vector g = Vector::Zero(d);
    for (Index i = 1; i <= k; ++i) {
      const double s = sign(x(2 * i - 1) - x(2 * i - 2));
      g(2 * i - 1) += gamma * s;
      g(2 * i - 2) -= gamma * s;
    }
    Index arg = 0;
    x.segment(2 * k + 1, l).maxCoeff(&arg);  // first maximiser
    g(2 * k + 1 + arg) += delta;
    return g;
  };
  const double lip = std::sqrt(2.0 * static_cast<double>(k) * gamma * gamma + delta * delta);
  return ObjectiveOracle(d, lip, value, subgradient);
}

ObjectiveOracle worst_case_second(const WorstCaseParameters& p) {
  const Index d = p.dimension;
  const auto k = static_cast<Index>(p.k);
  const double gamma = p.wc_gamma;
  const double beta = p.beta;
  const double alpha = p.alpha;
  auto value = [=](const Vector& x) {
    double chain = 0.0;
    for (Index i = 1; i <= k; ++i) {
      chain += std::abs(x(2 * i) - x(2 * i - 1));
    }
    return gamma * chain - beta * x(0) + 0.5 * alpha * x.squaredNorm();
  };
  auto subgradient = [=](const Vector& x) {
    Vector g = alpha * x;
    g(0) -= beta;
    for (Index i = 1; i <= k; ++i) {
      const double s = sign(x(2 * i) - x(2 * i - 1));
      g(2 * i) += gamma * s;
      g(2 * i - 1) -= gamma * s;
    }
    return g;
  };
  // valid on B_2(R); the quadratic term contributes alpha R
  const double lip =
      std::sqrt(2.0 * static_cast<double>(k) * gamma * gamma + beta * beta) + alpha * p.radius;
  return ObjectiveOracle(d, lip, value, subgradient);
}

namespace {

double combined_lipschitz(const WorstCaseParameters& p, const ObjectiveOracle& first,
                          const ObjectiveOracle& second) {
  const double direct = (first.lipschitz() + second.lipschitz()) / static_cast<double>(p.nodes);
  return std::min(direct, p.formula_lipschitz());
}

}  // namespace

WorstCaseGlobalInstance worst_case_global(double t, std::size_t diameter, double tau,
                                          double lipschitz, std::size_t nodes, Index dimension,
                                          double radius, std::size_t first_node,
                                          std::optional<std::size_t> second_node) {
  const std::size_t second = second_node.value_or(nodes - 1);
  if (first_node >= nodes || second >= nodes || first_node == second) {
    throw std::invalid_argument("worst_case_global: need two distinct nodes in range");
  }
  WorstCaseGlobalInstance inst;
  inst.params = worst_case_parameters(t, static_cast<double>(diameter), tau, lipschitz, nodes,
                                      dimension, radius);
  inst.first_node = first_node;
  inst.second_node = second;
  inst.target_lipschitz = lipschitz;

  const auto f0 = worst_case_first(inst.params);
  const auto f1 = worst_case_second(inst.params);
  std::vector<ObjectiveOracle> locals(nodes, zero_function(dimension));
  locals[first_node] = f0;
  locals[second] = f1;
  inst.problem = make_problem(std::move(locals), radius, combined_lipschitz(inst.params, f0, f1));
  inst.problem.optimum_value = inst.params.optimum_value();
  inst.problem.optimum_point = inst.params.optimum_point();

  auto& env = inst.envelope;
  env.kind = LowerBoundEnvelope::Kind::global;
  env.radius = radius;
  env.lipschitz = lipschitz;
  env.diameter = static_cast<double>(diameter);
  env.tau = tau;
  env.design_time = t;
  env.horizon = std::min(static_cast<double>(inst.params.l),
                         2.0 * static_cast<double>(inst.params.k) * env.diameter * tau);
  return inst;
}

WorstCaseGlobalInstance worst_case_global(double t, const Network& net, double lipschitz,
                                          Index dimension, double radius) {
  const auto [a, b] = diametral_pair(net);
  return worst_case_global(t, diameter(net), net.tau(), lipschitz, net.nodes(), dimension,
                           radius, a, b);
}

WorstCaseLocalInstance worst_case_local(double eigengap, double local_lipschitz, double t,
                                        double tau, Index dimension, double radius) {
  WorstCaseLocalInstance inst{{}, graph_with_eigengap(eigengap, tau), {}, {}, {}, 0, 0.0, {}};
  const std::size_t n = inst.graph.size;
  const std::size_t m = (n + 1) / 3;
  for (std::size_t i = 0; i < m; ++i) {
    inst.first_set.push_back(i);
    inst.second_set.push_back(n - m + i);
  }
  inst.set_distance = set_distance(inst.graph.network, inst.first_set, inst.second_set);
  inst.target_lipschitz = local_lipschitz;

  // L_ell <= 3 L_g for this split, so the global construction uses L_ell / 3
  const double global_lipschitz = local_lipschitz / 3.0;
  inst.params = worst_case_parameters(t, static_cast<double>(inst.set_distance), tau,
                                      global_lipschitz, n, dimension, radius);
  const auto f0 = worst_case_first(inst.params);
  const auto f1 = worst_case_second(inst.params);
  const double share = 1.0 / static_cast<double>(m);
  std::vector<ObjectiveOracle> locals(n, zero_function(dimension));
  for (auto i : inst.first_set) locals[i] = scaled(f0, share);
  for (auto i : inst.second_set) locals[i] = scaled(f1, share);
  inst.problem = make_problem(std::move(locals), radius, combined_lipschitz(inst.params, f0, f1));
  inst.problem.optimum_value = inst.params.optimum_value();
  inst.problem.optimum_point = inst.params.optimum_point();

  auto& env = inst.envelope;
  env.kind = LowerBoundEnvelope::Kind::local;
  env.radius = radius;
  env.lipschitz = local_lipschitz;
  env.eigengap = inst.graph.gossip.eigengap();
  env.diameter = static_cast<double>(inst.set_distance);
  env.tau = tau;
  env.design_time = t;
  env.horizon = std::min(static_cast<double>(inst.params.l),
                         2.0 * static_cast<double>(inst.params.k) * env.diameter * tau);
  return inst;
}

}  // namespace nsdist
