#include <cmath>
#include <mutex>
#include <vector>

#include "doctest.h"
#include "nsdist/bounds.hpp"
#include "nsdist/drs.hpp"
#include "nsdist/optimum.hpp"

using namespace nsdist;

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

ProblemInstance abs_problem(const std::vector<double>& centers, double radius) {
  std::vector<ObjectiveOracle> locals;
  std::vector<Vector> c;
  for (double a : centers) {
    locals.push_back(abs_deviation(scalar(a)));
    c.push_back(scalar(a));
  }
  auto p = make_problem(std::move(locals), radius);
  attach_optimum(p, median_optimum(c, radius));
  return p;
}

double seed_mean_final_gap(const ProblemInstance& problem, const Network& net, std::size_t T,
                           std::size_t K, int seeds, double* stderr_out = nullptr) {
  std::vector<RunTrace> traces;
  for (int s = 1; s <= seeds; ++s) {
    const auto cfg = drs_config(T, K, problem.radius, problem.global_lipschitz, problem.dimension,
                                static_cast<std::uint64_t>(s));
    CostModel clock(net);
    traces.push_back(run_drs(problem, net, cfg, clock).trace);
  }
  const auto rep = compare_bounds(traces, problem, BoundSpec{});
  if (stderr_out != nullptr) *stderr_out = rep.final_standard_error;
  return rep.final_mean_gap;
}

}  // namespace

TEST_CASE("auto constants") {
  const auto a = drs_config(1.0, 1.0, 1.0, 1, 0);
  CHECK(a.iterations == 20);
  CHECK(a.samples == 5);
  const auto b = drs_config(0.5, 1.0, 1.0, 16, 0);
  CHECK(b.iterations == 80);
  CHECK(b.samples == 5);
  CHECK(a.alpha.size() == 21);
  CHECK(a.alpha[1] == doctest::Approx(0.61803398875).epsilon(1e-10));
}

TEST_CASE("accelerated sequence") {
  const auto alpha = accelerated_sequence(500);
  CHECK(alpha[0] == 1.0);
  for (std::size_t t = 1; t < alpha.size(); ++t) {
    CHECK(alpha[t] < alpha[t - 1]);
    CHECK(alpha[t] > 0.0);
  }
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    CHECK(alpha[t] <= 2.0 / (static_cast<double>(t) + 2.0) + 1e-12);
  }
}

TEST_CASE("schedules") {
  const auto c = drs_config(std::size_t{10}, std::size_t{4}, 2.0, 3.0, 16, 0);
  CHECK(c.smoothing(0) == doctest::Approx(2.0 / 2.0));
  CHECK(c.step(0) == doctest::Approx(2.0 / (2.0 * 3.0 * (2.0 + 0.5))));
  CHECK_NOTHROW(c.step(10));
}

TEST_CASE("linear objective: output reaches the boundary minimizer") {
  Vector a(3);
  a << 1.0, -2.0, 0.5;
  const auto net = cycle_graph(4);
  auto problem = make_problem({linear(a), linear(a), linear(a), linear(a)}, 1.5);
  const auto cfg = drs_config(0.01, 1.5, problem.global_lipschitz, 3, 7);
  CostModel clock(net);
  const auto r = run_drs(problem, net, cfg, clock);
  const Vector target = -1.5 * a / a.norm();
  CHECK((r.theta - target).norm() <= 1e-6);
}

TEST_CASE("time accounting with unit compute") {
  const auto problem = abs_problem({0.1, -0.2, 0.3, 0.0, 0.5, -0.1}, 1.0);
  for (const auto& net : {path_graph(6, 2.0), star_graph(6, 1.0)}) {
    const auto cfg = drs_config(0.4, 1.0, problem.global_lipschitz, 1, 1);
    CostModel clock(net);
    const auto r = run_drs(problem, net, cfg, clock);
    CHECK(clock.now() == static_cast<double>(cfg.iterations) *
                             (2.0 * static_cast<double>(r.tree_depth) * net.tau() +
                              static_cast<double>(cfg.samples)));
    CHECK(r.trace.samples.size() == cfg.iterations + 1);
    CHECK(clock.now() <= static_cast<double>(cfg.iterations) *
                             (2.0 * static_cast<double>(r.diameter) * net.tau() +
                              static_cast<double>(cfg.samples)));
    for (std::size_t i = 1; i < r.trace.samples.size(); ++i) {
      CHECK(r.trace.samples[i].time > r.trace.samples[i - 1].time);
    }
  }
}

TEST_CASE("single machine reduces to randomized smoothing and meets its rate") {
  const auto problem = abs_problem({0.35}, 1.0);
  const auto net = Network(1, {}, 0.0);
  for (std::size_t T : {20, 80}) {
    double se = 0.0;
    const double gap = seed_mean_final_gap(problem, net, T, 5, 10, &se);
    CHECK(gap <= drs_rate_bound(1.0, 1.0, 1, T, 5) + 2.0 * se);
  }
}

TEST_CASE("every node draws the same perturbations") {
  std::mutex mu;
  std::vector<std::vector<std::vector<double>>> seen(3);
  std::vector<ObjectiveOracle> locals;
  for (std::size_t i = 0; i < 3; ++i) {
    auto base = abs_deviation(scalar(0.1 * static_cast<double>(i)));
    locals.emplace_back(
        1, 1.0, [base](const Vector& x) { return base.value(x); },
        [base, i, &mu, &seen](const Vector& x) {
          std::lock_guard<std::mutex> lock(mu);
          seen[i].push_back({x(0)});
          return base.subgradient(x);
        });
  }
  auto problem = make_problem(std::move(locals), 1.0);
  const auto net = path_graph(3);
  const auto cfg = drs_config(std::size_t{6}, std::size_t{4}, 1.0, 1.0, 1, 99);
  CostModel clock(net);
  DrsOptions opt;
  opt.execution = Execution::serial;
  run_drs(problem, net, cfg, clock, opt);
  REQUIRE(seen[0].size() == 24);
  CHECK(seen[0] == seen[1]);
  CHECK(seen[1] == seen[2]);
}

TEST_CASE("iterates stay in the ball") {
  Vector a(2);
  a << 3.0, 1.0;
  auto problem = make_problem({euclidean_distance(a), linear(a)}, 0.8,
                              std::optional<double>(a.norm() * 0.5 + 0.5));
  const auto net = path_graph(2);
  const auto cfg = drs_config(std::size_t{60}, std::size_t{3}, 0.8, problem.global_lipschitz, 2, 4);
  CostModel clock(net);
  DrsOptions opt;
  double worst = 0.0;
  opt.observer = [&](std::size_t, const Vector& x, const Vector& y, const Vector& z) {
    worst = std::max({worst, x.norm(), y.norm(), z.norm()});
  };
  run_drs(problem, net, cfg, clock, opt);
  CHECK(worst <= 0.8 * (1.0 + 1e-12));
}

TEST_CASE("config mismatch is rejected") {
  const auto problem = abs_problem({0.0, 0.2}, 1.0);
  const auto net = path_graph(2);
  CostModel clock(net);
  CHECK_THROWS_AS(run_drs(problem, net, drs_config(1.0, 2.0, 1.0, 1, 0), clock),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_drs(problem, path_graph(3), drs_config(1.0, 1.0, 1.0, 1, 0), clock),
                  std::invalid_argument);
}

TEST_CASE("doubling K does not hurt beyond Monte-Carlo noise") {
  const auto problem = abs_problem({-0.6, 0.2, 0.4, 0.9, -0.3}, 2.0);
  const auto net = star_graph(5);
  double se1 = 0.0, se2 = 0.0;
  const double g1 = seed_mean_final_gap(problem, net, 40, 4, 12, &se1);
  const double g2 = seed_mean_final_gap(problem, net, 40, 8, 12, &se2);
  CHECK(g2 <= g1 + 3.0 * std::hypot(se1, se2));
}

TEST_CASE("serial and parallel runs are bit-identical") {
  const auto problem = abs_problem({-0.6, 0.2, 0.4, 0.9, -0.3}, 2.0);
  const auto net = cycle_graph(5);
  const auto cfg = drs_config(0.3, 2.0, 1.0, 1, 17);
  CostModel c1(net), c2(net);
  DrsOptions serial;
  serial.execution = Execution::serial;
  const auto a = run_drs(problem, net, cfg, c1, serial);
  const auto b = run_drs(problem, net, cfg, c2);
  CHECK(a.theta == b.theta);
  CHECK(a.trace.samples.back().output_value == b.trace.samples.back().output_value);
}

TEST_CASE("naive subgradient") {
  const auto problem = abs_problem({-0.6, 0.2, 0.4, 0.9, -0.3}, 2.0);
  const auto net = path_graph(5, 2.0);
  const double eps = 0.1;
  CostModel clock(net);
  const auto r = run_naive_subgradient(problem, net, eps, clock);
  CHECK(r.iterations == naive_iteration_budget(eps, 2.0, 1.0));
  CHECK(r.iterations == 400);
  CHECK(r.trace.output_gap(r.trace.samples.size() - 1) <= eps);
  const double per_iteration = 2.0 * 2.0 * 2.0 + 1.0;  // depth 2, tau 2
  CHECK(clock.now() == static_cast<double>(r.iterations) * per_iteration);
  CHECK(r.trace.samples[1].time == per_iteration);
}

TEST_CASE("naive subgradient slides along -a on a linear objective") {
  Vector a(2);
  a << 0.6, -0.8;
  auto problem = make_problem({linear(a)}, 1.0);
  const auto net = Network(1, {});
  CostModel clock(net);
  const auto r = run_naive_subgradient(problem, net, 0.05, clock, 3);
  // the first iterate is 0, the next ones move along -a
  const Vector dir = r.theta / r.theta.norm();
  CHECK((dir + a).norm() <= 1e-12);
}
