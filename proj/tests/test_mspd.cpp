#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "nsdist/bounds.hpp"
#include "nsdist/mspd.hpp"
#include "nsdist/optimum.hpp"

using namespace nsdist;

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

ProblemInstance ring_problem() {
  std::vector<ObjectiveOracle> locals;
  std::vector<Vector> c;
  for (double a : {-1.2, 0.3, 0.9, -0.4, 1.5}) {
    locals.push_back(abs_deviation(scalar(a)));
    c.push_back(scalar(a));
  }
  auto p = make_problem(std::move(locals), 2.0);
  attach_optimum(p, median_optimum(c, 2.0));
  return p;
}

double golden_argmin(const std::function<double(double)>& f, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 300; ++i) {
    const double c = hi - r * (hi - lo);
    const double d = lo + r * (hi - lo);
    if (f(c) <= f(d)) hi = d; else lo = c;
  }
  return 0.5 * (lo + hi);
}

// h(u) = (1/n) f(u) - u.y + ||u - theta||^2 / (2 eta)
double prox_objective(const ObjectiveOracle& f, const Vector& y, const Vector& theta, double eta,
                      double n, const Vector& u) {
  return f.value(u) / n - u.dot(y) + (u - theta).squaredNorm() / (2.0 * eta);
}

}  // namespace

TEST_CASE("config on a complete graph") {
  const auto w = laplacian(complete_graph(4));
  const auto c = mspd_config(0.5, 1.0, 2.0, w, 1.0);
  CHECK(c.steps == 1);
  CHECK(c.c1 == 0.0);
  CHECK(c.eta == doctest::Approx(4.0 * 1.0 / 2.0));
  CHECK(c.outer == 16);
  CHECK(c.inner == 16);
}

TEST_CASE("config with eigengap 1/4") {
  // weighted P3: eigenvalues 0, s - r, s + r with 3 s = 5 r gives gamma = 1/4
  const double w2 = (1.72 - std::sqrt(1.72 * 1.72 - 4 * 0.64 * 0.64)) / (2 * 0.64);
  const auto w = laplacian(path_graph(3), {1.0, w2});
  REQUIRE(w.eigengap() == doctest::Approx(0.25).epsilon(1e-12));
  const auto c = mspd_config(1.0, 1.0, 1.0, w, 1.0);
  CHECK(c.steps == 2);
  CHECK(c.c1 == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("Chambolle-Pock condition holds for every config") {
  for (const auto& net : {path_graph(8), cycle_graph(7), grid_graph(3, 4), star_graph(6),
                          complete_graph(5)}) {
    for (double tau : {0.0, 0.1, 1.0, 10.0}) {
      const auto w = laplacian(net);
      const auto c = mspd_config(0.1, 1.0, 1.0, w, tau);
      CHECK(c.sigma * c.eta * c.accelerated_largest <= 1.0 + 1e-12);
      CHECK(c.c1 >= 0.0);
      CHECK(c.c1 < 1.0);
      CHECK(c.eta > 0.0);
    }
  }
}

TEST_CASE("inner loop keeps theta_t for a zero function") {
  const auto f = zero_function(2);
  Vector theta(2);
  theta << 0.3, -0.2;
  for (std::size_t M : {1, 7, 100}) {
    const Vector u = inner_prox_subgradient(f, Vector::Zero(2), theta, 1.0, 3, M, 1.0);
    CHECK((u - theta).norm() <= 1e-15);
  }
}

TEST_CASE("inner loop approaches the exact prox on a cone") {
  Vector a(2), theta(2), y(2);
  a << 0.4, -0.1;
  theta << -0.2, 0.3;
  y << 0.05, 0.1;
  const double L = 2.0, eta = 0.7, n = 3.0;
  const auto f = euclidean_distance(a, L);
  // independent oracle: the minimizer lies on the segment from a towards v = theta + eta y
  const Vector v = theta + eta * y;
  const Vector dir = (v - a) / (v - a).norm();
  const double s = golden_argmin(
      [&](double t) { return prox_objective(f, y, theta, eta, n, a + t * dir); }, 0.0,
      (v - a).norm());
  const Vector exact = a + s * dir;
  CHECK((exact_prox_step(f, y, theta, eta, 3, 1.0, 1e-12) - exact).norm() <= 1e-7);
  const Vector approx = inner_prox_subgradient(f, y, theta, eta, 3, 1000, 1.0);
  CHECK((approx - exact).norm() <= 1e-2);

  auto gap = [&](std::size_t M) {
    return prox_objective(f, y, theta, eta, n, inner_prox_subgradient(f, y, theta, eta, 3, M, 1.0)) -
           prox_objective(f, y, theta, eta, n, exact);
  };
  CHECK(gap(400) <= gap(100) / 2.0 + 1e-9);
}

TEST_CASE("exact prox respects the ball") {
  Vector a(2), theta(2), y(2);
  a << 3.0, 0.0;
  theta << 0.9, 0.0;
  y << 1.0, 1.0;
  const auto f = euclidean_distance(a);
  const Vector u = exact_prox_step(f, y, theta, 0.5, 2, 1.0, 1e-12);
  CHECK(u.norm() == doctest::Approx(1.0));
  // brute force over the unit circle (the constraint is active)
  double best = 1e300;
  Vector arg;
  for (int k = 0; k < 200000; ++k) {
    const double phi = 2.0 * M_PI * k / 200000.0;
    Vector p(2);
    p << std::cos(phi), std::sin(phi);
    const double h = prox_objective(f, y, theta, 0.5, 2.0, p);
    if (h < best) {
      best = h;
      arg = p;
    }
  }
  CHECK((u - arg).norm() <= 1e-4);
  // no prox: certified subgradient loop
  const auto lin = linear(a);
  const auto g = max_affine(Matrix(a.transpose()), Vector::Zero(1));
  const Vector ul = exact_prox_step(lin, y, theta, 0.5, 2, 1.0, 1e-12);
  const Vector ug = exact_prox_step(g, y, theta, 0.5, 2, 1.0, 1e-5);
  CHECK((ug - ul).norm() <= std::sqrt(2.0 * 1e-5) + 1e-9);
}

TEST_CASE("rate bound on the ring") {
  const auto problem = ring_problem();
  const auto net = cycle_graph(5);
  const auto w = laplacian(net);
  for (std::size_t T : {10, 50, 100}) {
    const auto cfg = mspd_config(T, T, 2.0, problem.local_lipschitz, w, 1.0);
    CostModel clock(net);
    const auto r = run_mspd(problem, w, cfg, clock);
    const auto rep =
        compare_bounds(std::vector<RunTrace>{r.trace}, problem, mspd_bounds(cfg, 1.0));
    CHECK(rep.upper_violations == 0);
    CHECK(problem.average_value(r.theta_bar) - *problem.optimum_value <=
          mspd_rate_bound(cfg, T, 1.0));
    CHECK(clock.now() == static_cast<double>(T) * (cfg.steps * 1.0 + static_cast<double>(T)));
  }
}

TEST_CASE("invariants along a run") {
  const auto problem = ring_problem();
  const auto net = cycle_graph(5);
  const auto w = laplacian(net);
  const auto cfg = mspd_config(std::size_t{40}, std::size_t{20}, 2.0, 1.0, w, 1.0);
  CostModel clock(net);
  MspdOptions opt;
  double kernel = 0.0, radius = 0.0;
  opt.observer = [&](std::size_t, const NodeMatrix& theta, const NodeMatrix& y) {
    kernel = std::max(kernel, y.rowwise().sum().norm() / (1.0 + y.norm()));
    radius = std::max(radius, theta.colwise().norm().maxCoeff());
  };
  run_mspd(problem, w, cfg, clock, opt);
  CHECK(kernel <= 1e-8);
  CHECK(radius <= 2.0 * (1.0 + 1e-12));
}

TEST_CASE("single node reduces to the inner subgradient method") {
  auto problem = make_problem({abs_deviation(scalar(0.4))}, 1.0);
  problem.optimum_value = 0.0;
  const auto w = GossipMatrix::single_node();
  const auto net = Network(1, {});
  for (std::size_t T : {10, 40}) {
    const auto cfg = mspd_config(T, T, 1.0, 1.0, w, 1.0);
    CHECK(cfg.steps == 1);
    CostModel clock(net);
    const auto r = run_mspd(problem, w, cfg, clock);
    CHECK(problem.average_value(r.theta_bar) <= 1.0 * (1.0 / T + 1.0 / T));
  }
}

TEST_CASE("identical locals keep consensus and move towards the optimum") {
  std::vector<ObjectiveOracle> locals(6, abs_deviation(scalar(0.7)));
  auto problem = make_problem(locals, 1.0);
  const auto net = path_graph(6);
  const auto w = laplacian(net);
  const auto cfg = mspd_config(std::size_t{30}, std::size_t{30}, 1.0, 1.0, w, 1.0);
  CostModel clock(net);
  const auto r = run_mspd(problem, w, cfg, clock);
  for (const auto& s : r.trace.samples) CHECK(s.consensus <= 1e-12);
  CHECK(problem.average_value(r.theta_bar) < problem.average_value(Vector::Zero(1)));
}

TEST_CASE("consensus residual is non-increasing in T on a symmetric instance") {
  std::vector<ObjectiveOracle> locals(5, abs_deviation(scalar(-0.3)));
  auto problem = make_problem(locals, 1.0);
  const auto net = cycle_graph(5);
  const auto w = laplacian(net);
  double previous = 1e300;
  for (std::size_t T : {5, 10, 20, 40, 80}) {
    const auto cfg = mspd_config(T, T, 1.0, 1.0, w, 1.0);
    CostModel clock(net);
    const double residual = run_mspd(problem, w, cfg, clock).trace.samples.back().consensus;
    CHECK(residual <= previous + 1e-15);
    previous = residual;
  }
}

TEST_CASE("heterogeneous compute speeds") {
  const auto problem = ring_problem();
  const auto net = cycle_graph(5).with_rho({1.0, 2.0, 0.5, 1.0, 4.0});
  const auto w = laplacian(net);
  auto cfg = mspd_config(std::size_t{5}, std::size_t{10}, 2.0, 1.0, w, 1.0);
  cfg.heterogeneous = true;
  CostModel clock(net);
  run_mspd(problem, w, cfg, clock);
  CHECK(clock.subgradients()[1] == 5 * 5);
  CHECK(clock.subgradients()[2] == 5 * 20);
  CHECK(clock.subgradients()[4] == 5 * 3);
  // slowest phase: 3 steps at rho 4 = 12 time units
  CHECK(clock.now() == 5.0 * (cfg.steps * 1.0 + 12.0));
}

TEST_CASE("order mismatch is rejected") {
  const auto problem = ring_problem();
  const auto w = laplacian(cycle_graph(6));
  const auto cfg = mspd_config(std::size_t{5}, std::size_t{5}, 2.0, 1.0, w, 1.0);
  CostModel clock(cycle_graph(6));
  CHECK_THROWS_AS(run_mspd(problem, w, cfg, clock), std::invalid_argument);
}

TEST_CASE("exact Chambolle-Pock reference") {
  const auto problem = ring_problem();
  const auto net = cycle_graph(5);
  const auto w = laplacian(net);
  const auto p = chebyshev_gossip_matrix(w, chebyshev_steps(w));

  SUBCASE("agrees with MSPD for a large inner budget") {
    const auto cfg = mspd_config(std::size_t{30}, std::size_t{20000}, 2.0, 1.0, w, 1.0);
    CostModel clock(net);
    const auto approx = run_mspd(problem, w, cfg, clock);
    const auto exact = run_chambolle_pock_exact(problem, w, cfg, 1e-10);
    CHECK((approx.theta_bar - exact.theta_bar).norm() <= 1e-3);
  }
  SUBCASE("restricted primal-dual gap decays like 1/T") {
    std::vector<double> gaps;
    for (std::size_t T : {25, 50, 100, 200}) {
      const auto cfg = mspd_config(T, std::size_t{1}, 2.0, 1.0, w, 1.0);
      const auto r = run_chambolle_pock_exact(problem, w, cfg, 1e-10);
      gaps.push_back(restricted_primal_dual_gap(problem, p, r.node_averages, r.dual_average));
    }
    for (std::size_t i = 1; i < gaps.size(); ++i) {
      CHECK(gaps[i] <= gaps[i - 1] / 2.0 + 1e-6);
    }
  }
  SUBCASE("dual stays in the range of the gossip matrix") {
    const auto cfg = mspd_config(std::size_t{60}, std::size_t{1}, 2.0, 1.0, w, 1.0);
    const auto r = run_chambolle_pock_exact(problem, w, cfg, 1e-10);
    CHECK(r.dual.rowwise().sum().norm() <= 1e-8 * (1.0 + r.dual.norm()));
  }
}

TEST_CASE("serial and parallel runs are bit-identical") {
  const auto problem = ring_problem();
  const auto net = cycle_graph(5);
  const auto w = laplacian(net);
  const auto cfg = mspd_config(0.3, 2.0, 1.0, w, 1.0);
  CostModel c1(net), c2(net);
  MspdOptions serial;
  serial.execution = Execution::serial;
  const auto a = run_mspd(problem, w, cfg, c1, serial);
  const auto b = run_mspd(problem, w, cfg, c2);
  CHECK(a.theta_bar == b.theta_bar);
  CHECK(a.dual == b.dual);
}
