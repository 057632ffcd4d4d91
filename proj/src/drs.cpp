#include "nsdist/drs.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace nsdist {
namespace {

double quarter_root(Index d) { return std::pow(static_cast<double>(d), 0.25); }

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("drs: ") + what + " must be positive and finite");
  }
}

// Sum of per-node columns in node order, so serial and parallel runs agree bitwise.
Vector ordered_sum(const NodeMatrix& columns) {
  Vector s = Vector::Zero(columns.rows());
  for (Index i = 0; i < columns.cols(); ++i) s += columns.col(i);
  return s;
}

void check_problem(const ProblemInstance& problem, const Network& net) {
  if (problem.nodes() != net.nodes()) {
    throw std::invalid_argument("drs: problem has " + std::to_string(problem.nodes()) +
                                " locals but the network has " + std::to_string(net.nodes()) +
                                " nodes");
  }
}

TraceSample sample_at(std::size_t t, const CostModel& clock, double value) {
  TraceSample s;
  s.iteration = t;
  s.time = clock.now();
  s.node_values = {value};
  s.output_value = value;
  s.subgradients = clock.total_subgradients();
  s.messages = clock.total_messages();
  return s;
}

}  // namespace

double DrsConfig::smoothing(std::size_t t) const {
  return radius / quarter_root(dimension) * alpha.at(t);
}

double DrsConfig::step(std::size_t t) const {
  const double drift = std::sqrt(static_cast<double>(t + 1) / static_cast<double>(samples));
  return radius * alpha.at(t) / (2.0 * lipschitz * (quarter_root(dimension) + drift));
}

std::string DrsConfig::digest() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "drs T=%zu K=%zu R=%.17g L=%.17g d=%lld seed=%llu", iterations,
                samples, radius, lipschitz, static_cast<long long>(dimension),
                static_cast<unsigned long long>(seed));
  return digest_of(buf);
}

std::vector<double> accelerated_sequence(std::size_t count) {
  std::vector<double> a;
  a.reserve(count);
  double cur = 1.0;
  for (std::size_t t = 0; t < count; ++t) {
    a.push_back(cur);
    cur = 2.0 / (1.0 + std::sqrt(1.0 + 4.0 / (cur * cur)));
  }
  return a;
}

DrsConfig drs_config(std::size_t iterations, std::size_t samples, double radius,
                     double lipschitz, Index dimension, std::uint64_t seed) {
  check_positive(radius, "R");
  check_positive(lipschitz, "L_g");
  if (iterations < 1 || samples < 1 || dimension < 1) {
    throw std::invalid_argument("drs: need T, K, d >= 1");
  }
  DrsConfig c;
  c.radius = radius;
  c.lipschitz = lipschitz;
  c.dimension = dimension;
  c.iterations = iterations;
  c.samples = samples;
  c.seed = seed;
  c.alpha = accelerated_sequence(iterations + 1);
  return c;
}

DrsConfig drs_config(double epsilon, double radius, double lipschitz, Index dimension,
                     std::uint64_t seed) {
  check_positive(epsilon, "epsilon");
  check_positive(radius, "R");
  check_positive(lipschitz, "L_g");
  if (dimension < 1) {
    throw std::invalid_argument("drs: need d >= 1");
  }
  const double q = quarter_root(dimension);
  const double base = radius * lipschitz / epsilon;
  // the small slack keeps exact products such as 20 * 1 / 0.25 from rounding up
  const auto T = static_cast<std::size_t>(std::ceil(20.0 * base * q * (1.0 - 1e-14)));
  const auto K = static_cast<std::size_t>(std::ceil(5.0 * base / q * (1.0 - 1e-14)));
  DrsConfig c = drs_config(std::max<std::size_t>(T, 1), std::max<std::size_t>(K, 1), radius,
                           lipschitz, dimension, seed);
  c.epsilon = epsilon;
  return c;
}

double drs_rate_bound(double radius, double lipschitz, Index dimension, std::size_t t,
                      std::size_t samples) {
  if (t == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const double tt = static_cast<double>(t);
  return 10.0 * radius * lipschitz * quarter_root(dimension) / tt +
         5.0 * radius * lipschitz / std::sqrt(tt * static_cast<double>(samples));
}

DrsResult run_drs(const ProblemInstance& problem, const Network& net, const DrsConfig& cfg,
                  CostModel& clock, const DrsOptions& options) {
  check_problem(problem, net);
  if (cfg.dimension != problem.dimension || cfg.radius != problem.radius ||
      cfg.lipschitz != problem.global_lipschitz) {
    throw std::invalid_argument("run_drs: config does not match the problem (R, L_g, d)");
  }
  if (cfg.alpha.size() != cfg.iterations + 1) {
    throw std::invalid_argument("run_drs: schedule must cover t = 0..T");
  }
  const std::size_t n = problem.nodes();
  const Index d = problem.dimension;
  const SpanningTree tree = spanning_tree(net);
  const SeededStream stream(cfg.seed);

  DrsResult result;
  result.tree_depth = tree.depth;
  result.diameter = diameter(net);
  auto& trace = result.trace;
  trace.algorithm = "drs";
  trace.seed = cfg.seed;
  trace.config_digest = cfg.digest();
  trace.recorded_nodes = {tree.root};
  trace.optimum = problem.optimum_value;

  Vector x = Vector::Zero(d);
  Vector z = Vector::Zero(d);
  Vector G = Vector::Zero(d);
  NodeMatrix g(d, static_cast<Index>(n));
  const std::vector<std::size_t> counts(n, cfg.samples);
  trace.samples.push_back(sample_at(0, clock, problem.average_value(x)));

  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    const double a = cfg.alpha[t];
    const Vector y = (1.0 - a) * x + a * z;
    clock.charge_tree_broadcast(tree);
    const double gamma = cfg.smoothing(t);
    for_each_index(n, options.execution, [&](std::size_t i) {
      g.col(static_cast<Index>(i)) =
          smoothed_gradient(problem.locals[i], y, gamma, cfg.samples, stream, t);
    });
    clock.charge_parallel_compute(counts);
    clock.charge_tree_aggregate(tree);
    G += ordered_sum(g) / (static_cast<double>(n) * a);
    z = project_ball(-cfg.step(t + 1) * G, problem.radius);
    x = (1.0 - a) * x + a * z;
    if (options.observer) {
      options.observer(t + 1, x, y, z);
    }
    trace.samples.push_back(sample_at(t + 1, clock, problem.average_value(x)));
  }
  result.theta = x;
  return result;
}

std::size_t naive_iteration_budget(double epsilon, double radius, double lipschitz) {
  check_positive(epsilon, "epsilon");
  const double base = radius * lipschitz / epsilon;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(base * base * (1.0 - 1e-14))));
}

NaiveResult run_naive_subgradient(const ProblemInstance& problem, const Network& net,
                                  double epsilon, CostModel& clock,
                                  std::optional<std::size_t> iteration_cap, Execution exec) {
  check_problem(problem, net);
  const double R = problem.radius;
  const double L = problem.global_lipschitz;
  check_positive(L, "L_g");
  std::size_t budget = naive_iteration_budget(epsilon, R, L);
  if (iteration_cap) {
    budget = std::min(budget, *iteration_cap);
  }
  const std::size_t n = problem.nodes();
  const Index d = problem.dimension;
  const SpanningTree tree = spanning_tree(net);

  NaiveResult result;
  result.iterations = budget;
  auto& trace = result.trace;
  trace.algorithm = "naive";
  trace.config_digest = digest_of("naive eps=" + std::to_string(epsilon));
  trace.recorded_nodes = {tree.root};
  trace.optimum = problem.optimum_value;

  Vector theta = Vector::Zero(d);
  Vector avg = Vector::Zero(d);
  double weight_sum = 0.0;
  NodeMatrix g(d, static_cast<Index>(n));
  const std::vector<std::size_t> counts(n, 1);
  trace.samples.push_back(sample_at(0, clock, problem.average_value(avg)));

  for (std::size_t t = 0; t < budget; ++t) {
    clock.charge_tree_broadcast(tree);
    for_each_index(n, exec, [&](std::size_t i) {
      g.col(static_cast<Index>(i)) = problem.locals[i].subgradient(theta);
    });
    clock.charge_parallel_compute(counts);
    clock.charge_tree_aggregate(tree);
    const double step = R / (L * std::sqrt(static_cast<double>(t + 1)));
    weight_sum += step;
    avg += (step / weight_sum) * (theta - avg);
    theta = project_ball(theta - step * (ordered_sum(g) / static_cast<double>(n)), R);
    trace.samples.push_back(sample_at(t + 1, clock, problem.average_value(avg)));
  }
  result.theta = avg;
  return result;
}

}  // namespace nsdist
