#include "nsdist/mspd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsdist {
namespace {

struct AcceleratedSpectrum {
  double eigengap = 1.0;
  double largest = 0.0;
};

AcceleratedSpectrum accelerated_spectrum(const GossipMatrix& w, unsigned steps) {
  const auto s = symmetric_eigendecomposition(chebyshev_gossip_matrix(w, steps));
  return {eigengap(s), s.largest()};
}

std::vector<std::size_t> inner_counts(const MspdConfig& cfg, const std::vector<double>& rho) {
  std::vector<std::size_t> counts(rho.size(), cfg.inner);
  if (cfg.heterogeneous) {
    for (std::size_t i = 0; i < rho.size(); ++i) {
      counts[i] = static_cast<std::size_t>(
          std::ceil(static_cast<double>(cfg.inner) / rho[i] * (1.0 - 1e-14)));
      counts[i] = std::max<std::size_t>(counts[i], 1);
    }
  }
  return counts;
}

double consensus_residual(const NodeMatrix& theta) {
  const Vector mean = theta.rowwise().mean();
  return (theta.colwise() - mean).colwise().norm().mean();
}

// Strongly convex (mu = 1) projected subgradient with the weighted average.
// Returns the average once 2 G^2 / (m + 1) <= tol.
Vector certified_inner(const ObjectiveOracle& f, const Vector& y, const Vector& theta_t,
                       double eta, double n, double radius, double tol) {
  const double G = eta / n * f.lipschitz() + eta * y.norm() + 2.0 * radius;
  const double needed = std::ceil(2.0 * G * G / tol);
  constexpr double kCap = 5e7;
  if (needed > kCap) {
    throw NumericalError("exact_prox_step: certificate needs too many iterations, attach a prox",
                         needed);
  }
  const auto steps = static_cast<std::size_t>(needed);
  Vector u = theta_t;
  Vector avg = Vector::Zero(u.size());
  double weight_sum = 0.0;
  for (std::size_t m = 0; m < steps; ++m) {
    const double w = static_cast<double>(m + 1);
    weight_sum += w;
    avg += (w / weight_sum) * (u - avg);
    const double a = 2.0 / static_cast<double>(m + 2);
    u = project_ball((1.0 - a) * u - a * (eta / n * f.subgradient(u) - eta * y - theta_t), radius);
  }
  return avg;
}

double golden_section_min(const std::function<double(double)>& phi, double lo, double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = phi(d);
    }
  }
  return std::min({fc, fd, phi(lo), phi(hi), phi(0.5 * (a + b))});
}

MspdConfig build_config(std::size_t outer, std::size_t inner, double radius,
                        double local_lipschitz, const GossipMatrix& w, double tau,
                        std::uint64_t seed) {
  if (!(radius > 0.0) || !(local_lipschitz > 0.0) || !(tau >= 0.0)) {
    throw std::invalid_argument("mspd_config: need R > 0, L_ell > 0, tau >= 0");
  }
  if (outer < 1 || inner < 1) {
    throw std::invalid_argument("mspd_config: need T, M >= 1");
  }
  MspdConfig c;
  c.radius = radius;
  c.local_lipschitz = local_lipschitz;
  c.nodes = static_cast<std::size_t>(w.order());
  c.tau = tau;
  c.outer = outer;
  c.inner = inner;
  c.seed = seed;
  c.steps = chebyshev_steps(w);
  const double root_gap = std::sqrt(w.eigengap());
  c.c1 = (1.0 - root_gap) / (1.0 + root_gap);
  const double ck = std::pow(c.c1, static_cast<double>(c.steps));
  c.eta = static_cast<double>(c.nodes) * radius / local_lipschitz * (1.0 - ck) / (1.0 + ck);
  c.header_sigma = tau > 0.0 ? (1.0 + ck * ck) / (tau * (1.0 - ck) * (1.0 - ck))
                             : std::numeric_limits<double>::infinity();
  const auto spec = accelerated_spectrum(w, c.steps);
  c.accelerated_eigengap = spec.eigengap;
  c.accelerated_largest = spec.largest;
  const double cap = spec.largest > 0.0 ? 1.0 / (c.eta * spec.largest)
                                        : std::numeric_limits<double>::infinity();
  c.sigma = std::min(c.header_sigma, cap);
  if (!std::isfinite(c.sigma)) {
    c.sigma = 0.0;  // single node: the gossip operator is zero
  }
  return c;
}

void check_problem(const ProblemInstance& problem, const GossipMatrix& w, const MspdConfig& cfg) {
  if (static_cast<Index>(problem.nodes()) != w.order() || cfg.nodes != problem.nodes()) {
    throw std::invalid_argument("mspd: problem has " + std::to_string(problem.nodes()) +
                                " locals but the gossip matrix has order " +
                                std::to_string(w.order()));
  }
  if (cfg.sigma * cfg.eta * cfg.accelerated_largest > 1.0 + 1e-12) {
    throw std::invalid_argument("mspd: sigma * eta * lambda_1(P_K(W)) must be <= 1");
  }
}

using PrimalStep = std::function<Vector(std::size_t node, const Vector& y, const Vector& theta)>;

MspdResult outer_loop(const ProblemInstance& problem, const GossipMatrix& w,
                      const MspdConfig& cfg, const PrimalStep& primal, Execution exec,
                      const std::function<void(std::size_t)>& charge, CostModel* clock,
                      const MspdObserver& observer, const std::string& name) {
  const std::size_t n = problem.nodes();
  const Index d = problem.dimension;
  const auto cols = static_cast<Index>(n);
  MspdResult r;
  auto& trace = r.trace;
  trace.algorithm = name;
  trace.seed = cfg.seed;
  trace.config_digest = cfg.digest();
  trace.optimum = problem.optimum_value;
  for (std::size_t i = 0; i < n; ++i) trace.recorded_nodes.push_back(i);

  NodeMatrix theta = NodeMatrix::Zero(d, cols);
  NodeMatrix theta_prev = NodeMatrix::Zero(d, cols);
  NodeMatrix y = NodeMatrix::Zero(d, cols);
  NodeMatrix theta_sum = NodeMatrix::Zero(d, cols);
  NodeMatrix y_sum = NodeMatrix::Zero(d, cols);

  auto record = [&](std::size_t t, const NodeMatrix& averages) {
    TraceSample s;
    s.iteration = t;
    s.time = clock != nullptr ? clock->now() : static_cast<double>(t);
    s.node_values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.node_values[i] = problem.average_value(averages.col(static_cast<Index>(i)));
    }
    s.output_value = problem.average_value(averages.rowwise().mean());
    s.consensus = consensus_residual(theta);
    if (clock != nullptr) {
      s.subgradients = clock->total_subgradients();
      s.messages = clock->total_messages();
    }
    trace.samples.push_back(std::move(s));
  };
  record(0, theta);

  for (std::size_t t = 0; t < cfg.outer; ++t) {
    y -= cfg.sigma * accelerated_gossip(2.0 * theta - theta_prev, w, cfg.steps, exec);
    NodeMatrix next(d, cols);
    for_each_index(n, exec, [&](std::size_t i) {
      const auto c = static_cast<Index>(i);
      next.col(c) = primal(i, y.col(c), theta.col(c));
    });
    charge(t);
    theta_prev = std::move(theta);
    theta = std::move(next);
    theta_sum += theta;
    y_sum += y;
    if (observer) {
      observer(t + 1, theta, y);
    }
    record(t + 1, theta_sum / static_cast<double>(t + 1));
  }
  const double T = static_cast<double>(cfg.outer);
  r.node_averages = theta_sum / T;
  r.theta_bar = r.node_averages.rowwise().mean();
  r.primal = theta;
  r.dual = y;
  r.dual_average = y_sum / T;
  return r;
}

}  // namespace

std::string MspdConfig::digest() const {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "mspd K=%u T=%zu M=%zu eta=%.17g sigma=%.17g R=%.17g L=%.17g n=%zu het=%d seed=%llu",
                steps, outer, inner, eta, sigma, radius, local_lipschitz, nodes,
                heterogeneous ? 1 : 0, static_cast<unsigned long long>(seed));
  return digest_of(buf);
}

MspdConfig mspd_config(double epsilon, double radius, double local_lipschitz,
                       const GossipMatrix& w, double tau, std::uint64_t seed) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("mspd_config: epsilon must be positive");
  }
  const auto count = static_cast<std::size_t>(
      std::ceil(4.0 * radius * local_lipschitz / epsilon * (1.0 - 1e-14)));
  MspdConfig c = build_config(std::max<std::size_t>(count, 1), std::max<std::size_t>(count, 1),
                              radius, local_lipschitz, w, tau, seed);
  c.epsilon = epsilon;
  return c;
}

MspdConfig mspd_config(std::size_t outer, std::size_t inner, double radius,
                       double local_lipschitz, const GossipMatrix& w, double tau,
                       std::uint64_t seed) {
  return build_config(outer, inner, radius, local_lipschitz, w, tau, seed);
}

double mspd_rate_bound(const MspdConfig& cfg, std::size_t outer, double lipschitz) {
  if (outer == 0) {
    return std::numeric_limits<double>::infinity();
  }
  return cfg.radius * lipschitz / std::sqrt(cfg.accelerated_eigengap) *
         (1.0 / static_cast<double>(outer) + 1.0 / static_cast<double>(cfg.inner));
}

Vector inner_prox_subgradient(const ObjectiveOracle& f, const Vector& y, const Vector& theta_t,
                              double eta, std::size_t nodes, std::size_t steps, double radius) {
  if (steps < 1) {
    throw std::invalid_argument("inner_prox_subgradient: need M >= 1");
  }
  const double n = static_cast<double>(nodes);
  Vector u = theta_t;
  for (std::size_t m = 0; m < steps; ++m) {
    const double a = 2.0 / static_cast<double>(m + 2);
    u = project_ball((1.0 - a) * u - a * (eta / n * f.subgradient(u) - eta * y - theta_t), radius);
  }
  return u;
}

Vector exact_prox_step(const ObjectiveOracle& f, const Vector& y, const Vector& theta_t,
                       double eta, std::size_t nodes, double radius, double tol) {
  const double n = static_cast<double>(nodes);
  if (!f.has_prox()) {
    return certified_inner(f, y, theta_t, eta, n, radius, tol);
  }
  // argmin s f(u) + ||u - v||^2 / 2 + lambda ||u||^2 / 2 = prox(v/(1+lambda), s/(1+lambda))
  const Vector v = theta_t + eta * y;
  const double s = eta / n;
  auto at = [&](double lambda) { return f.prox(v / (1.0 + lambda), s / (1.0 + lambda)); };
  Vector u = at(0.0);
  if (u.norm() <= radius) {
    return u;
  }
  double lo = 0.0;
  double hi = 1.0;
  while (at(hi).norm() > radius) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) {
      throw NumericalError("exact_prox_step: ball multiplier diverged", hi);
    }
  }
  for (int it = 0; it < 300 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (at(mid).norm() > radius ? lo : hi) = mid;
  }
  return project_ball(at(hi), radius);
}

MspdResult run_mspd(const ProblemInstance& problem, const GossipMatrix& w, const MspdConfig& cfg,
                    CostModel& clock, const MspdOptions& options) {
  check_problem(problem, w, cfg);
  if (clock.rho().size() != problem.nodes()) {
    throw std::invalid_argument("run_mspd: cost model built for a different network");
  }
  const auto counts = inner_counts(cfg, clock.rho());
  const std::size_t n = problem.nodes();
  PrimalStep primal = [&](std::size_t i, const Vector& y, const Vector& theta) {
    return inner_prox_subgradient(problem.locals[i], y, theta, cfg.eta, n, counts[i],
                                  problem.radius);
  };
  auto charge = [&](std::size_t) {
    clock.charge_gossip_rounds(cfg.steps);
    clock.charge_parallel_compute(counts);
  };
  return outer_loop(problem, w, cfg, primal, options.execution, charge, &clock,
                    options.observer, "mspd");
}

MspdResult run_chambolle_pock_exact(const ProblemInstance& problem, const GossipMatrix& w,
                                    const MspdConfig& cfg, double inner_tol, Execution exec) {
  check_problem(problem, w, cfg);
  if (!(inner_tol > 0.0)) {
    throw std::invalid_argument("run_chambolle_pock_exact: inner_tol must be positive");
  }
  const std::size_t n = problem.nodes();
  PrimalStep primal = [&](std::size_t i, const Vector& y, const Vector& theta) {
    return exact_prox_step(problem.locals[i], y, theta, cfg.eta, n, problem.radius, inner_tol);
  };
  return outer_loop(problem, w, cfg, primal, exec, [](std::size_t) {}, nullptr, {},
                    "cp_exact");
}

double restricted_primal_dual_gap(const ProblemInstance& problem, const SymmetricMatrix& p,
                                  const NodeMatrix& theta, const NodeMatrix& dual) {
  if (problem.dimension != 1) {
    throw std::invalid_argument("restricted_primal_dual_gap: only d == 1 is supported");
  }
  const std::size_t n = problem.nodes();
  const double nn = static_cast<double>(n);
  if (p.order() != static_cast<Index>(n) || theta.cols() != p.order() ||
      dual.cols() != p.order()) {
    throw std::invalid_argument("restricted_primal_dual_gap: shape mismatch");
  }
  double c = 0.0;
  if (n > 1) {
    const auto spectrum = symmetric_eigendecomposition(p);
    const double lambda = spectrum.eigenvalues(1);
    c = std::sqrt(problem.local_lipschitz * problem.local_lipschitz / (nn * lambda));
  }
  double primal = 0.0;
  double dual_value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = problem.locals[i];
    const auto col = static_cast<Index>(i);
    primal += f.value(theta.col(col)) / nn;
    const double yi = dual(0, col);
    dual_value += golden_section_min(
        [&](double u) { return f.value(Vector::Constant(1, u)) / nn - u * yi; },
        -problem.radius, problem.radius);
  }
  const double penalty = (theta * p.dense() * theta.transpose()).trace();
  return primal + c * std::sqrt(std::max(penalty, 0.0)) - dual_value;
}

}  // namespace nsdist
