#include <cmath>
#include <string>

#include "doctest.h"
#include "nsdist/rng.hpp"
#include "nsdist/worst_case.hpp"

using namespace nsdist;

namespace {

Vector random_in_ball(const SeededStream& s, std::uint64_t i, Index d, double radius) {
  const Vector g = s.gaussian_vector(0, i, d);
  const double u = s.uniform(1, i, 0);
  return g / g.norm() * radius * std::pow(u, 1.0 / static_cast<double>(d));
}

}  // namespace

TEST_CASE("parameters follow the construction") {
  const auto p = worst_case_parameters(5.0, 2.0, 1.0, 1.0, 3, 20, 1.0);
  CHECK(p.k == 2);  // floor(5 / 4) + 1
  CHECK(p.l == 6);
  CHECK(p.delta == doctest::Approx(3.0 / 9.0));
  CHECK(p.wc_gamma == doctest::Approx(3.0 / (9.0 * std::sqrt(2.0))));
  CHECK(p.beta == doctest::Approx(p.wc_gamma * (1.0 + 1.0 / 2.0)));
  CHECK(p.optimum_point().norm() == doctest::Approx(1.0));
}

TEST_CASE("dimension too small names the requirement") {
  try {
    worst_case_parameters(5.0, 2.0, 1.0, 1.0, 3, 5, 1.0);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("need d >= 11") != std::string::npos);
  }
}

TEST_CASE("closed-form optimum beats random feasible points") {
  const auto inst = worst_case_global(4.0, 2, 1.0, 1.0, 4, 12, 1.5);
  const Vector star = inst.params.optimum_point();
  const double fstar = inst.problem.average_value(star);
  CHECK(fstar == doctest::Approx(inst.params.optimum_value()).epsilon(1e-12));
  const SeededStream s(21);
  for (std::uint64_t i = 0; i < 2000; ++i) {
    CHECK(inst.problem.average_value(random_in_ball(s, i, 12, 1.5)) >= fstar - 1e-12);
  }
  // first-order check: a subgradient at theta* points into the ball's normal cone
  const Vector g = inst.problem.average_subgradient(star);
  CHECK(g.dot(star) <= 1e-12);
}

TEST_CASE("stated Lipschitz constants bound subgradients on the ball") {
  const auto inst = worst_case_global(6.0, 1, 1.0, 2.0, 3, 16, 1.0);
  const SeededStream s(4);
  const auto& f0 = inst.problem.locals[inst.first_node];
  const auto& f1 = inst.problem.locals[inst.second_node];
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Vector x = random_in_ball(s, i, 16, 1.0);
    CHECK(f0.subgradient(x).norm() <= f0.lipschitz() + 1e-12);
    CHECK(f1.subgradient(x).norm() <= f1.lipschitz() + 1e-12);
    CHECK(inst.problem.average_subgradient(x).norm() <= inst.problem.global_lipschitz + 1e-12);
  }
  CHECK(inst.problem.global_lipschitz <= inst.params.formula_lipschitz() + 1e-12);
}

TEST_CASE("global instance on a network uses a diametral pair") {
  const auto net = path_graph(5, 2.0);
  const auto inst = worst_case_global(3.0, net, 1.0, 12);
  CHECK(inst.first_node == 0);
  CHECK(inst.second_node == 4);
  CHECK(inst.envelope.diameter == 4.0);
  CHECK(inst.envelope.horizon == doctest::Approx(std::min(4.0, 2.0 * 1 * 4.0 * 2.0)));
}

TEST_CASE("envelopes") {
  CHECK(envelope_global(0.0, 1.0, 1.0, 2.0, 1.0) == doctest::Approx(std::sqrt(2.0) / 36.0));
  CHECK(envelope_local(0.0, 1.0, 1.0, 0.1, 1.0) == doctest::Approx(std::sqrt(2.0) / 108.0));
  // decreasing in t
  CHECK(envelope_global(5.0, 1.0, 1.0, 2.0, 1.0) < envelope_global(1.0, 1.0, 1.0, 2.0, 1.0));
  LowerBoundEnvelope env;
  env.radius = env.lipschitz = env.diameter = env.tau = 1.0;
  env.design_time = 3.0;
  env.horizon = 4.0;
  CHECK(env.guaranteed(0.0).value() == doctest::Approx(env.evaluate(3.0)));
  CHECK(env.guaranteed(3.5).value() == doctest::Approx(env.evaluate(3.5)));
  CHECK_FALSE(env.guaranteed(4.0).has_value());
  CHECK_THROWS(envelope_global(-1.0, 1.0, 1.0, 1.0, 1.0));
}

TEST_CASE("design-time gap dominates the envelope") {
  // G = (1/(2 alpha n)) [gamma^2/(2k) + delta^2/l] >= envelope at the design time
  for (double t : {0.0, 2.0, 7.0, 20.0}) {
    const auto inst = worst_case_global(t, 2, 1.0, 1.0, 3, 64, 1.0);
    const auto& p = inst.params;
    const double G = (p.wc_gamma * p.wc_gamma / (2.0 * p.k) + p.delta * p.delta / p.l) /
                     (2.0 * p.alpha * static_cast<double>(p.nodes));
    CHECK(G >= inst.envelope.evaluate(t));
  }
}

TEST_CASE("local instance splits the hard functions over two node sets") {
  const auto inst = worst_case_local(0.05, 1.0, 4.0, 1.0, 40);
  CHECK(inst.graph.size == 7);
  CHECK(inst.first_set.size() == 2);
  CHECK(inst.second_set.size() == 2);
  CHECK(inst.set_distance == 4);
  CHECK(inst.problem.local_lipschitz <= inst.target_lipschitz + 1e-12);
  CHECK(inst.problem.average_value(inst.params.optimum_point()) ==
        doctest::Approx(inst.params.optimum_value()).epsilon(1e-12));
  CHECK(inst.envelope.eigengap == doctest::Approx(0.05).epsilon(1e-5));
}
