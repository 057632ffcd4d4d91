// One line per acceptance criterion: "[PASS]" or "[FAIL]", criterion id, detail.
// Exit status counts failures that are not listed in kKnownRed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nsdist/bounds.hpp"
#include "nsdist/cost_model.hpp"
#include "nsdist/drs.hpp"
#include "nsdist/experiment.hpp"
#include "nsdist/gossip.hpp"
#include "nsdist/mspd.hpp"
#include "nsdist/network.hpp"
#include "nsdist/objectives.hpp"
#include "nsdist/optimum.hpp"
#include "nsdist/worst_case.hpp"

using namespace nsdist;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class... Args>
  void add(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!text_.empty()) text_ += "; ";
    text_ += buf;
  }
  std::string str() const { return text_; }

 private:
  std::string text_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Vector scalar(double v) { return Vector::Constant(1, v); }

std::vector<Vector> ring_centers() {
  return {scalar(-1.2), scalar(0.3), scalar(0.9), scalar(-0.4), scalar(1.5)};
}

ProblemInstance abs_problem(const std::vector<Vector>& centers, double radius) {
  std::vector<ObjectiveOracle> locals;
  for (const auto& c : centers) locals.push_back(abs_deviation(c));
  auto p = make_problem(std::move(locals), radius);
  attach_optimum(p, median_optimum(centers, radius));
  return p;
}

Outcome smoothing_sandwich() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  Detail det;
  for (Index d : {1, 8}) {
    const auto f = euclidean_distance(Vector::Zero(d));
    for (double gamma : {0.1, 0.5, 1.0}) {
      const SeededStream stream(1000 + static_cast<std::uint64_t>(d));
      const auto r = smoothing_sandwich_check(f, Vector::Zero(d), gamma, 1.0, 100000, stream);
      o.pass = o.pass && r.holds;
      if (d == 1) {
        const double expected = gamma * std::sqrt(2.0 / M_PI);
        const bool match = std::abs(r.estimate - expected) <= r.half_width;
        o.pass = o.pass && match;
        det.add("d=1 g=%.1f est=%.5f exact=%.5f", gamma, r.estimate, expected);
      } else {
        det.add("d=%lld g=%.1f est=%.5f in [%.5f, %.5f]", static_cast<long long>(d), gamma,
                r.estimate, r.lower, r.upper);
      }
    }
  }
  const double secs = seconds_since(start);
  o.pass = o.pass && secs < 10.0;
  det.add("%.2fs", secs);
  o.detail = det.str();
  return o;
}

Outcome drs_rate() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  Detail det;
  const auto problem = abs_problem(ring_centers(), 2.0);
  const Network net = star_graph(5, 1.0);
  for (double eps : {0.5, 0.2}) {
    std::vector<RunTrace> traces;
    DrsConfig cfg;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      cfg = drs_config(eps, problem.radius, problem.global_lipschitz, 1, seed);
      CostModel clock(net);
      traces.push_back(run_drs(problem, net, cfg, clock).trace);
    }
    const auto rep = compare_bounds(traces, problem, drs_bounds(cfg));
    const double bound = drs_rate_bound(cfg.radius, cfg.lipschitz, 1, cfg.iterations, cfg.samples);
    const bool ok = rep.final_mean_gap <= bound + 2.0 * rep.final_standard_error;
    o.pass = o.pass && ok;
    det.add("eps=%.1f T=%zu K=%zu gap=%.2e+-%.1e bound=%.3f", eps, cfg.iterations, cfg.samples,
            rep.final_mean_gap, rep.final_standard_error, bound);
  }
  const double secs = seconds_since(start);
  o.pass = o.pass && secs < 60.0;
  det.add("%.2fs", secs);
  o.detail = det.str();
  return o;
}

Outcome drs_time_accounting() {
  Outcome o;
  Detail det;
  struct Fixture {
    const char* name;
    Network net;
  };
  const std::vector<Fixture> fixtures = {
      {"path7", path_graph(7, 1.0)}, {"star6", star_graph(6, 2.0)}, {"grid3x4", grid_graph(3, 4, 3.0)}};
  for (const auto& fx : fixtures) {
    std::vector<Vector> centers;
    for (std::size_t i = 0; i < fx.net.nodes(); ++i) {
      centers.push_back(scalar(0.1 * static_cast<double>(i) - 0.2));
    }
    const auto problem = abs_problem(centers, 1.0);
    const auto cfg = drs_config(0.5, 1.0, problem.global_lipschitz, 1, 3);
    CostModel clock(fx.net);
    const auto r = run_drs(problem, fx.net, cfg, clock);
    const double expected = static_cast<double>(cfg.iterations) *
                            (2.0 * static_cast<double>(r.tree_depth) * fx.net.tau() +
                             static_cast<double>(cfg.samples));
    const bool ok = clock.now() == expected;
    o.pass = o.pass && ok;
    det.add("%s depth=%zu time=%.0f expected=%.0f", fx.name, r.tree_depth, clock.now(), expected);
  }
  o.detail = det.str();
  return o;
}

Outcome chebyshev_acceleration() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  Detail det;
  for (std::size_t n : {10, 20, 50}) {
    const auto w = laplacian(path_graph(n));
    const unsigned K = chebyshev_steps(w);
    const auto spec = symmetric_eigendecomposition(chebyshev_gossip_matrix(w, K));
    const double g = eigengap(spec);
    o.pass = o.pass && g >= 0.25 - 1e-9;
    det.add("P%zu K=%u gamma=%.4f", n, K, g);
  }
  const double secs = seconds_since(start);
  o.pass = o.pass && secs < 5.0;
  det.add("%.2fs", secs);
  o.detail = det.str();
  return o;
}

Outcome mspd_bound() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  Detail det;

  struct Instance {
    const char* name;
    Network net;
    ProblemInstance problem;
  };
  std::vector<Instance> instances;
  instances.push_back({"ring5", cycle_graph(5), abs_problem(ring_centers(), 2.0)});
  {
    std::vector<Vector> centers;
    const double pts[9][2] = {{0.31, -0.42}, {-0.55, 0.12}, {0.08, 0.61}, {0.47, 0.29},
                              {-0.21, -0.67}, {0.66, -0.05}, {-0.38, 0.44}, {0.14, -0.19},
                              {-0.71, -0.23}};
    std::vector<ObjectiveOracle> locals;
    for (const auto& p : pts) {
      Vector c(2);
      c << p[0], p[1];
      centers.push_back(c);
      locals.push_back(euclidean_distance(c));
    }
    auto problem = make_problem(std::move(locals), 1.0);
    const auto cert = geometric_median_optimum(centers, 1.0, 1e-10);
    if (cert.certified_gap > 1e-8) o.pass = false;
    attach_optimum(problem, cert);
    instances.push_back({"grid9-2d", grid_graph(3, 3), std::move(problem)});
  }
  for (auto& inst : instances) {
    const auto w = laplacian(inst.net);
    for (std::size_t T : {10, 50, 100}) {
      const auto cfg = mspd_config(T, T, inst.problem.radius, inst.problem.local_lipschitz, w,
                                   inst.net.tau());
      CostModel clock(inst.net);
      const auto r = run_mspd(inst.problem, w, cfg, clock);
      const double gap = inst.problem.average_value(r.theta_bar) - *inst.problem.optimum_value;
      const double bound = mspd_rate_bound(cfg, T, inst.problem.local_lipschitz);
      o.pass = o.pass && gap <= bound;
      det.add("%s T=M=%zu gap=%.2e bound=%.3f", inst.name, T, gap, bound);
    }
  }
  const double secs = seconds_since(start);
  o.pass = o.pass && secs < 120.0;
  det.add("%.2fs", secs);
  o.detail = det.str();
  return o;
}

Outcome mspd_time_accounting() {
  Outcome o;
  Detail det;
  struct Fixture {
    const char* name;
    Network net;
  };
  const std::vector<Fixture> fixtures = {{"ring5", cycle_graph(5, 1.0)},
                                         {"path8", path_graph(8, 2.0)},
                                         {"grid3x3", grid_graph(3, 3, 1.0)}};
  for (const auto& fx : fixtures) {
    std::vector<Vector> centers;
    for (std::size_t i = 0; i < fx.net.nodes(); ++i) {
      centers.push_back(scalar(0.15 * static_cast<double>(i) - 0.4));
    }
    const auto problem = abs_problem(centers, 1.0);
    const auto w = laplacian(fx.net);
    const double eps = 0.25;
    const auto cfg = mspd_config(eps, 1.0, problem.local_lipschitz, w, fx.net.tau());
    CostModel clock(fx.net);
    run_mspd(problem, w, cfg, clock);
    const double T = static_cast<double>(cfg.outer);
    const double exact = T * (static_cast<double>(cfg.steps) * fx.net.tau() +
                              static_cast<double>(cfg.inner));
    const double count = std::ceil(4.0 * problem.radius * problem.local_lipschitz / eps);
    const double limit = count * fx.net.tau() / std::sqrt(w.eigengap()) + count * count;
    const bool ok = clock.now() == exact && clock.now() <= limit;
    o.pass = o.pass && ok;
    det.add("%s K=%u time=%.0f exact=%.0f limit=%.1f", fx.name, cfg.steps, clock.now(), exact,
            limit);
  }
  o.detail = det.str();
  return o;
}

Outcome prescribed_gap_graphs() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  Detail det;
  for (double target : {1.0, 0.5, 1.0 / 3.0, 0.1, 0.05, 0.01}) {
    const auto g = graph_with_eigengap(target);
    const double gamma = g.gossip.eigengap();
    const double floor_value = 2.0 / std::pow(static_cast<double>(g.size) + 1.0, 2.0);
    const bool ok = std::abs(gamma - target) <= 1e-6 && gamma >= floor_value;
    o.pass = o.pass && ok;
    det.add("target=%.4f n=%zu gamma=%.9f", target, g.size, gamma);
  }
  const double secs = seconds_since(start);
  o.pass = o.pass && secs < 10.0;
  det.add("%.2fs", secs);
  o.detail = det.str();
  return o;
}

Outcome worst_case_instance() {
  Outcome o;
  Detail det;
  struct Setting {
    double t;
    std::size_t diameter;
    double tau;
    double lipschitz;
    std::size_t nodes;
    double radius;
  };
  const std::vector<Setting> settings = {
      {0.0, 1, 1.0, 1.0, 2, 1.0}, {3.0, 2, 1.0, 1.0, 3, 1.0},
      {5.0, 1, 2.0, 2.0, 4, 0.5}, {8.0, 3, 0.5, 0.7, 5, 2.0}};
  for (const auto& s : settings) {
    const auto probe = worst_case_parameters(s.t, static_cast<double>(s.diameter), s.tau,
                                             s.lipschitz, s.nodes, 1 << 20, s.radius);
    const auto d = static_cast<Index>(2 * probe.k + probe.l + 1);
    auto inst = worst_case_global(s.t, s.diameter, s.tau, s.lipschitz, s.nodes, d, s.radius);
    const auto& p = inst.params;
    const double closed = -1.0 / (2.0 * p.alpha * static_cast<double>(p.nodes)) *
                          ((p.beta - p.wc_gamma) * (p.beta - p.wc_gamma) +
                           p.wc_gamma * p.wc_gamma / (2.0 * static_cast<double>(p.k)) +
                           p.delta * p.delta / static_cast<double>(p.l));
    const double at_star = inst.problem.average_value(p.optimum_point());
    // fbar is (alpha/n)-strongly convex through the quadratic on the second node
    const double mu = p.alpha / static_cast<double>(p.nodes);
    const double L = inst.problem.global_lipschitz;
    const auto iterations = static_cast<std::size_t>(std::ceil(2.0 * L * L / (mu * 1e-5)));
    const auto cert = certified_solve(inst.problem, mu, iterations);
    const bool ok = std::abs(at_star - closed) <= 1e-9 && std::abs(cert.value - closed) <= 1e-4 &&
                    cert.certified_gap <= 1e-4;
    o.pass = o.pass && ok;
    det.add("k=%zu l=%zu d=%lld |f(x*)-closed|=%.1e solve diff=%.1e (cert %.1e, N=%zu)", p.k, p.l,
            static_cast<long long>(d), std::abs(at_star - closed), cert.value - closed,
            cert.certified_gap, iterations);
  }
  o.detail = det.str();
  return o;
}

// Count of samples whose gap falls under the guaranteed envelope value.
std::size_t envelope_violations(const std::vector<RunTrace>& traces, const ProblemInstance& problem,
                                const LowerBoundEnvelope& env, std::size_t& checked) {
  BoundSpec spec;
  spec.envelope = env;
  const auto rep = compare_bounds(traces, problem, spec);
  for (const auto& s : rep.samples) checked += s.envelope ? 1 : 0;
  return rep.lower_violations;
}

Outcome lower_envelopes() {
  Outcome o;
  Detail det;
  std::size_t violations = 0;
  std::size_t checked = 0;
  // global instances: naive and DRS
  struct GlobalCase {
    Network net;
    double t;
  };
  const std::vector<GlobalCase> globals = {{path_graph(4, 1.0), 30.0},
                                           {cycle_graph(6, 2.0), 40.0},
                                           {star_graph(5, 3.0), 60.0},
                                           {grid_graph(3, 3, 1.0), 25.0}};
  for (const auto& gc : globals) {
    const auto probe = worst_case_parameters(gc.t, static_cast<double>(diameter(gc.net)),
                                             gc.net.tau(), 1.0, gc.net.nodes(), 1 << 20, 1.0);
    const auto d = static_cast<Index>(2 * probe.k + probe.l + 1);
    const auto inst = worst_case_global(gc.t, gc.net, 1.0, d, 1.0);
    const double eps = 0.05;
    {
      CostModel clock(gc.net);
      auto r = run_naive_subgradient(inst.problem, gc.net, eps, clock, 2000);
      violations += envelope_violations({r.trace}, inst.problem, inst.envelope, checked);
    }
    std::vector<RunTrace> drs;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto cfg = drs_config(std::size_t{200}, std::size_t{2}, inst.problem.radius,
                                  inst.problem.global_lipschitz, d, seed);
      CostModel clock(gc.net);
      drs.push_back(run_drs(inst.problem, gc.net, cfg, clock).trace);
    }
    violations += envelope_violations(drs, inst.problem, inst.envelope, checked);
    {
      const auto w = laplacian(gc.net);
      const auto cfg = mspd_config(std::size_t{100}, std::size_t{3}, inst.problem.radius,
                                   inst.problem.local_lipschitz, w, gc.net.tau());
      CostModel clock(gc.net);
      auto r = run_mspd(inst.problem, w, cfg, clock);
      violations += envelope_violations({r.trace}, inst.problem, inst.envelope, checked);
    }
  }
  // local instances: MSPD and naive on the prescribed-eigengap graphs
  for (double gamma : {0.5, 0.1, 0.05}) {
    const double t = 30.0;
    auto probe_graph = graph_with_eigengap(gamma, 1.0);
    const std::size_t n = probe_graph.size;
    const std::size_t m = (n + 1) / 3;
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < m; ++i) {
      a.push_back(i);
      b.push_back(n - m + i);
    }
    const auto probe = worst_case_parameters(
        t, static_cast<double>(set_distance(probe_graph.network, a, b)), 1.0, 1.0 / 3.0, n,
        1 << 20, 1.0);
    const auto d = static_cast<Index>(2 * probe.k + probe.l + 1);
    const auto inst = worst_case_local(gamma, 1.0, t, 1.0, d, 1.0);
    const auto& net = inst.graph.network;
    const auto cfg = mspd_config(std::size_t{60}, std::size_t{2}, inst.problem.radius,
                                 inst.problem.local_lipschitz, inst.graph.gossip, net.tau());
    CostModel clock(net);
    auto r = run_mspd(inst.problem, inst.graph.gossip, cfg, clock);
    violations += envelope_violations({r.trace}, inst.problem, inst.envelope, checked);
    CostModel clock2(net);
    auto nv = run_naive_subgradient(inst.problem, net, 0.05, clock2, 500);
    violations += envelope_violations({nv.trace}, inst.problem, inst.envelope, checked);
  }
  o.pass = violations == 0 && checked > 0;
  det.add("violations=%zu over %zu in-horizon samples", violations, checked);
  o.detail = det.str();
  return o;
}

Outcome gossip_averaging() {
  Outcome o;
  Detail det;
  for (double target : {1.0, 0.5, 1.0 / 3.0, 0.1, 0.05, 0.01}) {
    const auto g = graph_with_eigengap(target);
    const unsigned K = chebyshev_steps(g.gossip);
    const auto wp = averaging_matrix(g.gossip, K);
    const auto spec = symmetric_eigendecomposition(wp);
    const double second = g.size > 1 ? spec.eigenvalues(spec.eigenvalues.size() - 2) : 0.0;
    NodeMatrix x(1, static_cast<Index>(g.size));
    for (Index i = 0; i < x.cols(); ++i) x(0, i) = std::sin(1.0 + 3.0 * static_cast<double>(i));
    const auto avg = gossip_average(x, g.gossip, K, 1e-10);
    double ratio = 0.0;
    if (avg.rounds > 0) {
      ratio = std::pow(avg.deviation.back() / avg.deviation.front(),
                       1.0 / static_cast<double>(avg.rounds));
    }
    const bool ok = second <= 0.75 + 1e-9 && ratio <= 0.75 + 1e-6;
    o.pass = o.pass && ok;
    det.add("target=%.3f lambda2=%.4f ratio=%.4f rounds=%zu", target, second, ratio, avg.rounds);
  }
  o.detail = det.str();
  return o;
}

Outcome exact_cp_crosscheck() {
  Outcome o;
  Detail det;
  const auto problem = abs_problem(ring_centers(), 2.0);
  const Network net = cycle_graph(5);
  const auto w = laplacian(net);
  const auto cfg = mspd_config(std::size_t{50}, std::size_t{10000}, problem.radius,
                               problem.local_lipschitz, w, net.tau());
  CostModel clock(net);
  const auto approx = run_mspd(problem, w, cfg, clock);
  const auto exact = run_chambolle_pock_exact(problem, w, cfg, 1e-8);
  const double diff = (approx.theta_bar - exact.theta_bar).norm();
  o.pass = diff <= 1e-3 * problem.radius;
  det.add("T=50 M=1e4 |diff|=%.2e limit=%.1e", diff, 1e-3 * problem.radius);
  o.detail = det.str();
  return o;
}

Outcome crossover_grid() {
  Outcome o;
  Detail det;
  std::size_t eligible = 0;
  std::size_t drs_wins = 0;
  std::string losses;
  ExperimentConfig cfg;
  cfg.problem_kind = "abs_deviation";
  cfg.radius = 1.0;
  cfg.network_kind = "path";
  cfg.nodes = 16;
  cfg.tau = 10.0;
  cfg.seeds = {1};
  for (Index d : {1, 16, 256, 4096}) {
    for (double eps : {1.0, 0.1, 0.01}) {
      cfg.dimension = d;
      cfg.epsilon = eps;
      const auto b = build_experiment(cfg, false);
      const double ratio = b.problem.radius * b.problem.global_lipschitz / eps;
      if (static_cast<double>(d) > std::pow(ratio, 4.0)) {
        continue;
      }
      ++eligible;
      const double values[] = {eps};
      const auto row = sweep(cfg, SweepAxis::epsilon, values).front();
      if (row.drs_time < row.naive_time) {
        ++drs_wins;
      } else if (losses.size() < 160) {
        char buf[96];
        std::snprintf(buf, sizeof buf, " (d=%lld eps=%g drs/naive=%.1f)",
                      static_cast<long long>(d), eps, row.drs_time / row.naive_time);
        losses += buf;
      }
    }
  }
  o.pass = eligible > 0 && drs_wins == eligible;
  det.add("DRS faster on %zu of %zu grid points with d <= (RL/eps)^4%s", drs_wins, eligible,
          losses.c_str());
  o.detail = det.str();
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "smoothing sandwich", smoothing_sandwich},
      {2, "DRS rate", drs_rate},
      {3, "DRS time accounting", drs_time_accounting},
      {4, "Chebyshev acceleration", chebyshev_acceleration},
      {5, "MSPD bound", mspd_bound},
      {6, "MSPD time accounting", mspd_time_accounting},
      {7, "prescribed-eigengap graphs", prescribed_gap_graphs},
      {8, "worst-case instance", worst_case_instance},
      {9, "lower-envelope consistency", lower_envelopes},
      {10, "gossip averaging", gossip_averaging},
      {11, "exact-prox cross-check", exact_cp_crosscheck},
      {12, "crossover grid", crossover_grid},
  };
  // Criteria that fail for documented reasons (see README, "Known results").
  const std::set<int> kKnownRed = {12};

  int unexpected = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const bool known = kKnownRed.count(c.id) > 0;
    std::printf("[%s] AC%-2d %-28s %s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), !o.pass && known ? " (known)" : "");
    std::fflush(stdout);
    if (!o.pass && !known) ++unexpected;
  }
  return unexpected;
}
