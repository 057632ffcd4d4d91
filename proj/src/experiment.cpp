#include "nsdist/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>

#include "nsdist/cost_model.hpp"
#include "nsdist/drs.hpp"
#include "nsdist/gossip.hpp"
#include "nsdist/mspd.hpp"
#include "nsdist/optimum.hpp"
#include "nsdist/parallel.hpp"

namespace nsdist {
namespace {

using nlohmann::json;

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) {
    throw ConfigError(path, "expected an object");
  }
  const json* v = find(obj, key);
  if (v == nullptr) {
    throw ConfigError(path + "." + key, "missing required field");
  }
  return *v;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) {
    throw ConfigError(path, "expected a number");
  }
  return v.get<double>();
}

double positive(const json& v, const std::string& path) {
  const double x = as_number(v, path);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ConfigError(path, "must be positive");
  }
  return x;
}

bool is_unsigned(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::size_t count(const json& v, const std::string& path) {
  if (!is_unsigned(v) || v.get<std::uint64_t>() == 0) {
    throw ConfigError(path, "expected a positive integer");
  }
  return v.get<std::size_t>();
}

// "auto" (or absent) -> nullopt, otherwise a positive integer
AutoCount auto_count(const json& obj, const char* key, const std::string& path) {
  const json* v = find(obj, key);
  if (v == nullptr || (v->is_string() && v->get<std::string>() == "auto")) {
    return std::nullopt;
  }
  return count(*v, path + "." + key);
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) {
    throw ConfigError(path, "expected a string");
  }
  return v.get<std::string>();
}

AlgorithmKind parse_algorithm(const std::string& name, const std::string& path) {
  if (name == "naive") return AlgorithmKind::naive;
  if (name == "drs") return AlgorithmKind::drs;
  if (name == "mspd") return AlgorithmKind::mspd;
  if (name == "cp_exact") return AlgorithmKind::cp_exact;
  throw ConfigError(path, "unknown algorithm '" + name + "' (expected naive, drs, mspd or cp_exact)");
}

bool is_worst_case(const std::string& kind) {
  return kind == "worst_case_global" || kind == "worst_case_local";
}

std::vector<Vector> generated_centers(const ExperimentConfig& cfg, std::size_t n) {
  const SeededStream stream(cfg.problem_seed);
  const double half = cfg.radius / (2.0 * std::sqrt(static_cast<double>(cfg.dimension)));
  std::vector<Vector> out(n, Vector(cfg.dimension));
  for (std::size_t i = 0; i < n; ++i) {
    for (Index j = 0; j < cfg.dimension; ++j) {
      out[i](j) = half * (2.0 * stream.uniform(0, i, static_cast<std::uint64_t>(j)) - 1.0);
    }
  }
  return out;
}

Network build_network(const ExperimentConfig& cfg) {
  const std::string& k = cfg.network_kind;
  Network net = [&]() -> Network {
    if (k == "path") return path_graph(cfg.nodes, cfg.tau);
    if (k == "cycle" || k == "ring") return cycle_graph(cfg.nodes, cfg.tau);
    if (k == "complete") return complete_graph(cfg.nodes, cfg.tau);
    if (k == "star") return star_graph(cfg.nodes, cfg.tau);
    if (k == "grid") return grid_graph(cfg.rows, cfg.cols, cfg.tau);
    if (k == "single") return Network(1, {}, cfg.tau);
    if (k == "eigengap") return graph_with_eigengap(cfg.network_eigengap, cfg.tau).network;
    if (k == "file") {
      std::ifstream in(cfg.network_file);
      if (!in) {
        throw ConfigError("network.file", "cannot open " + cfg.network_file.string());
      }
      return read_edge_list(in, cfg.tau);
    }
    throw ConfigError("network.kind", "unknown graph kind '" + k + "'");
  }();
  if (cfg.rho.size() == 1) {
    net = net.with_rho(std::vector<double>(net.nodes(), cfg.rho.front()));
  } else if (!cfg.rho.empty()) {
    if (cfg.rho.size() != net.nodes()) {
      throw ConfigError("network.rho", "need one entry per node (" +
                                           std::to_string(net.nodes()) + ")");
    }
    net = net.with_rho(cfg.rho);
  }
  return net;
}

GossipMatrix build_gossip(const ExperimentConfig& cfg, const Network& net) {
  if (net.nodes() == 1) {
    return GossipMatrix::single_node();
  }
  if (cfg.network_kind == "eigengap") {
    return graph_with_eigengap(cfg.network_eigengap, cfg.tau).gossip;
  }
  return laplacian(net);
}

double max_rho(const Network& net) { return *std::max_element(net.rho().begin(), net.rho().end()); }

DrsConfig make_drs(const ExperimentConfig& cfg, const ProblemInstance& p, std::uint64_t seed) {
  const DrsConfig automatic =
      drs_config(cfg.epsilon, p.radius, p.global_lipschitz, p.dimension, seed);
  if (!cfg.iterations && !cfg.samples) {
    return automatic;
  }
  return drs_config(cfg.iterations.value_or(automatic.iterations),
                    cfg.samples.value_or(automatic.samples), p.radius, p.global_lipschitz,
                    p.dimension, seed);
}

MspdConfig make_mspd(const ExperimentConfig& cfg, const BuiltExperiment& b, std::uint64_t seed) {
  const auto& p = b.problem;
  MspdConfig c = mspd_config(cfg.epsilon, p.radius, p.local_lipschitz, b.gossip, cfg.tau, seed);
  if (cfg.iterations || cfg.inner) {
    c = mspd_config(cfg.iterations.value_or(c.outer), cfg.inner.value_or(c.inner), p.radius,
                    p.local_lipschitz, b.gossip, cfg.tau, seed);
  }
  c.heterogeneous = cfg.heterogeneous;
  return c;
}

std::vector<std::size_t> inner_steps(const MspdConfig& c, const Network& net) {
  std::vector<std::size_t> counts(net.nodes(), c.inner);
  if (c.heterogeneous) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      counts[i] = std::max<std::size_t>(
          1, static_cast<std::size_t>(
                 std::ceil(static_cast<double>(c.inner) / net.rho()[i] * (1.0 - 1e-14))));
    }
  }
  return counts;
}

double mspd_time(const MspdConfig& c, const Network& net) {
  const auto counts = inner_steps(c, net);
  double compute = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    compute = std::max(compute, static_cast<double>(counts[i]) * net.rho()[i]);
  }
  return static_cast<double>(c.outer) *
         (static_cast<double>(c.steps) * net.tau() + compute);
}

// sqrt((1/n) sum rho_i L_i^2)
double heterogeneous_lipschitz(const ProblemInstance& p, const Network& net) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    s += net.rho()[i] * p.locals[i].lipschitz() * p.locals[i].lipschitz();
  }
  return std::sqrt(s / static_cast<double>(p.nodes()));
}

double closed_form_time(const ExperimentConfig& cfg, const BuiltExperiment& b) {
  const double tree_pass = static_cast<double>(spanning_tree(b.network).depth) * b.network.tau();
  switch (cfg.algorithm) {
    case AlgorithmKind::naive: {
      std::size_t budget =
          naive_iteration_budget(cfg.epsilon, b.problem.radius, b.problem.global_lipschitz);
      if (cfg.max_iterations) budget = std::min(budget, *cfg.max_iterations);
      return static_cast<double>(budget) * (2.0 * tree_pass + max_rho(b.network));
    }
    case AlgorithmKind::drs: {
      const auto c = make_drs(cfg, b.problem, 0);
      return static_cast<double>(c.iterations) *
             (2.0 * tree_pass + static_cast<double>(c.samples) * max_rho(b.network));
    }
    case AlgorithmKind::mspd:
      return mspd_time(make_mspd(cfg, b, 0), b.network);
    case AlgorithmKind::cp_exact:
      return static_cast<double>(make_mspd(cfg, b, 0).outer);
  }
  return 0.0;
}

std::string format_seed_file(std::uint64_t seed) {
  return "trace_" + std::to_string(seed) + ".csv";
}

}  // namespace

std::string to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::naive: return "naive";
    case AlgorithmKind::drs: return "drs";
    case AlgorithmKind::mspd: return "mspd";
    case AlgorithmKind::cp_exact: return "cp_exact";
  }
  return "unknown";
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  if (!doc.is_object()) {
    throw ConfigError("<root>", "expected a JSON object");
  }

  const json& problem = require(doc, "problem", "<root>");
  cfg.problem_kind = as_string(require(problem, "kind", "problem"), "problem.kind");
  const std::string& kind = cfg.problem_kind;
  if (kind != "abs_deviation" && kind != "euclidean_distance" && kind != "linear" &&
      !is_worst_case(kind)) {
    throw ConfigError("problem.kind", "unknown problem kind '" + kind + "'");
  }
  if (const json* d = find(problem, "dimension")) {
    if (d->is_string() && d->get<std::string>() == "auto" && is_worst_case(kind)) {
      cfg.dimension = 0;
    } else {
      cfg.dimension = static_cast<Index>(count(*d, "problem.dimension"));
    }
  } else if (is_worst_case(kind)) {
    cfg.dimension = 0;
  }
  if (const json* r = find(problem, "radius")) cfg.radius = positive(*r, "problem.radius");
  if (const json* s = find(problem, "seed")) {
    if (!is_unsigned(*s)) throw ConfigError("problem.seed", "expected an unsigned integer");
    cfg.problem_seed = s->get<std::uint64_t>();
  }
  if (const json* s = find(problem, "scale")) cfg.scale = positive(*s, "problem.scale");
  if (const json* c = find(problem, "centers")) {
    if (!c->is_array() || c->empty()) {
      throw ConfigError("problem.centers", "expected a non-empty array of vectors");
    }
    for (std::size_t i = 0; i < c->size(); ++i) {
      const std::string path = "problem.centers[" + std::to_string(i) + "]";
      const json& row = (*c)[i];
      if (!row.is_array() || static_cast<Index>(row.size()) != cfg.dimension) {
        throw ConfigError(path, "expected " + std::to_string(cfg.dimension) + " numbers");
      }
      Vector v(cfg.dimension);
      for (Index j = 0; j < cfg.dimension; ++j) {
        v(j) = as_number(row[static_cast<std::size_t>(j)], path);
      }
      cfg.centers.push_back(std::move(v));
    }
  }
  if (is_worst_case(kind)) {
    const json* t = find(problem, "time");
    cfg.design_time = t == nullptr ? 0.0 : as_number(*t, "problem.time");
    if (cfg.design_time < 0.0) throw ConfigError("problem.time", "must be >= 0");
    cfg.target_lipschitz = positive(require(problem, "lipschitz", "problem"), "problem.lipschitz");
    if (kind == "worst_case_local") {
      cfg.target_eigengap = positive(require(problem, "eigengap", "problem"), "problem.eigengap");
    }
  }

  const json& network = require(doc, "network", "<root>");
  cfg.network_kind = as_string(require(network, "kind", "network"), "network.kind");
  if (const json* t = find(network, "tau")) {
    cfg.tau = as_number(*t, "network.tau");
    if (cfg.tau < 0.0) throw ConfigError("network.tau", "must be >= 0");
  }
  if (cfg.network_kind == "grid") {
    cfg.rows = count(require(network, "rows", "network"), "network.rows");
    cfg.cols = count(require(network, "cols", "network"), "network.cols");
  } else if (cfg.network_kind == "file") {
    cfg.network_file = base_dir / as_string(require(network, "file", "network"), "network.file");
    if (!std::filesystem::exists(cfg.network_file)) {
      throw ConfigError("network.file", "file not found: " + cfg.network_file.string());
    }
  } else if (cfg.network_kind == "eigengap") {
    cfg.network_eigengap = positive(require(network, "eigengap", "network"), "network.eigengap");
  } else if (cfg.network_kind != "single") {
    cfg.nodes = count(require(network, "nodes", "network"), "network.nodes");
  }
  if (const json* rho = find(network, "rho")) {
    if (rho->is_number()) {
      cfg.rho.assign(1, positive(*rho, "network.rho"));
    } else if (rho->is_array()) {
      for (std::size_t i = 0; i < rho->size(); ++i) {
        cfg.rho.push_back(positive((*rho)[i], "network.rho[" + std::to_string(i) + "]"));
      }
    } else {
      throw ConfigError("network.rho", "expected a number or an array");
    }
  }

  const json& algorithm = require(doc, "algorithm", "<root>");
  const json& name = algorithm.is_string() ? algorithm : require(algorithm, "name", "algorithm");
  const std::string name_path = algorithm.is_string() ? "algorithm" : "algorithm.name";
  cfg.algorithm = parse_algorithm(as_string(name, name_path), name_path);
  if (algorithm.is_object()) {
    cfg.iterations = auto_count(algorithm, "T", "algorithm");
    cfg.samples = auto_count(algorithm, "K", "algorithm");
    cfg.inner = auto_count(algorithm, "M", "algorithm");
    if (const json* m = find(algorithm, "max_iterations")) {
      cfg.max_iterations = count(*m, "algorithm.max_iterations");
    }
    if (const json* h = find(algorithm, "heterogeneous")) {
      if (!h->is_boolean()) throw ConfigError("algorithm.heterogeneous", "expected a boolean");
      cfg.heterogeneous = h->get<bool>();
    }
    if (const json* tol = find(algorithm, "inner_tol")) {
      cfg.inner_tol = positive(*tol, "algorithm.inner_tol");
    }
  }

  cfg.epsilon = positive(require(doc, "epsilon", "<root>"), "epsilon");
  const json& seeds = require(doc, "seeds", "<root>");
  if (!seeds.is_array() || seeds.empty()) {
    throw ConfigError("seeds", "expected a non-empty array of unsigned integers");
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!is_unsigned(seeds[i])) {
      throw ConfigError("seeds[" + std::to_string(i) + "]", "expected an unsigned integer");
    }
    cfg.seeds.push_back(seeds[i].get<std::uint64_t>());
  }
  const json* out = find(doc, "output");
  cfg.output = base_dir / (out == nullptr ? std::string("out") : as_string(*out, "output"));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("<file>", "cannot open " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc, path.parent_path());
}

BuiltExperiment build_experiment(const ExperimentConfig& cfg, bool with_optimum) {
  BuiltExperiment b{Network(1, {}), GossipMatrix::single_node(), {}, std::nullopt};
  const std::string& kind = cfg.problem_kind;

  if (kind == "worst_case_local") {
    auto probe = graph_with_eigengap(cfg.target_eigengap, cfg.tau);
    Index d = cfg.dimension;
    if (d == 0) {
      const std::size_t m = (probe.size + 1) / 3;
      std::vector<std::size_t> a, c;
      for (std::size_t i = 0; i < m; ++i) {
        a.push_back(i);
        c.push_back(probe.size - m + i);
      }
      const auto p = worst_case_parameters(cfg.design_time,
                                           static_cast<double>(set_distance(probe.network, a, c)),
                                           cfg.tau, cfg.target_lipschitz / 3.0, probe.size,
                                           1 << 30, cfg.radius);
      d = static_cast<Index>(2 * p.k + p.l + 1);
    }
    auto inst = worst_case_local(cfg.target_eigengap, cfg.target_lipschitz, cfg.design_time,
                                 cfg.tau, d, cfg.radius);
    b.network = inst.graph.network;
    if (!cfg.rho.empty()) {
      b.network = b.network.with_rho(cfg.rho.size() == 1
                                         ? std::vector<double>(b.network.nodes(), cfg.rho[0])
                                         : cfg.rho);
    }
    b.gossip = inst.graph.gossip;
    b.problem = std::move(inst.problem);
    b.envelope = inst.envelope;
    return b;
  }

  b.network = build_network(cfg);
  b.gossip = build_gossip(cfg, b.network);
  const std::size_t n = b.network.nodes();

  if (kind == "worst_case_global") {
    if (n < 2) throw ConfigError("network", "worst_case_global needs at least two nodes");
    Index d = cfg.dimension;
    if (d == 0) {
      const auto p = worst_case_parameters(cfg.design_time, static_cast<double>(diameter(b.network)),
                                           cfg.tau, cfg.target_lipschitz, n, 1 << 30, cfg.radius);
      d = static_cast<Index>(2 * p.k + p.l + 1);
    }
    try {
      auto inst = worst_case_global(cfg.design_time, b.network, cfg.target_lipschitz, d, cfg.radius);
      b.problem = std::move(inst.problem);
      b.envelope = inst.envelope;
    } catch (const std::invalid_argument& e) {
      throw ConfigError("problem.dimension", e.what());
    }
    return b;
  }

  std::vector<Vector> centers = cfg.centers;
  if (centers.empty()) {
    centers = generated_centers(cfg, n);
  } else if (centers.size() != n) {
    throw ConfigError("problem.centers", "need one center per node (" + std::to_string(n) + ")");
  }
  std::vector<ObjectiveOracle> locals;
  for (const auto& c : centers) {
    if (kind == "abs_deviation") locals.push_back(abs_deviation(c));
    else if (kind == "euclidean_distance") locals.push_back(euclidean_distance(c, cfg.scale));
    else locals.push_back(linear(c));
  }
  b.problem = make_problem(std::move(locals), cfg.radius);
  if (!with_optimum) {
    return b;
  }
  if (kind == "abs_deviation") {
    try {
      attach_optimum(b.problem, median_optimum(centers, cfg.radius));
    } catch (const std::domain_error&) {
      const std::size_t budget =
          naive_iteration_budget(cfg.epsilon, cfg.radius, b.problem.global_lipschitz);
      attach_optimum(b.problem, certified_solve(b.problem, 0.0, 10 * budget));
    }
  } else if (kind == "euclidean_distance") {
    auto cert = geometric_median_optimum(centers, cfg.radius);
    cert.value *= cfg.scale;
    attach_optimum(b.problem, cert);
  } else {
    Vector mean = Vector::Zero(cfg.dimension);
    for (const auto& c : centers) mean += c;
    attach_optimum(b.problem, linear_optimum(mean / static_cast<double>(n), cfg.radius));
  }
  return b;
}

json derived_constants(const ExperimentConfig& cfg, const BuiltExperiment& b) {
  const auto& p = b.problem;
  json out = {{"algorithm", to_string(cfg.algorithm)},
              {"n", p.nodes()},
              {"d", p.dimension},
              {"R", p.radius},
              {"L_g", p.global_lipschitz},
              {"L_ell", p.local_lipschitz},
              {"epsilon", cfg.epsilon},
              {"tau", b.network.tau()}};
  const auto tree = spanning_tree(b.network);
  switch (cfg.algorithm) {
    case AlgorithmKind::naive: {
      std::size_t budget = naive_iteration_budget(cfg.epsilon, p.radius, p.global_lipschitz);
      if (cfg.max_iterations) budget = std::min(budget, *cfg.max_iterations);
      out["T"] = budget;
      out["depth"] = tree.depth;
      break;
    }
    case AlgorithmKind::drs: {
      const auto c = make_drs(cfg, p, 0);
      out["T"] = c.iterations;
      out["K"] = c.samples;
      out["gamma_0"] = c.smoothing(0);
      out["eta_1"] = c.step(1);
      out["depth"] = tree.depth;
      out["diameter"] = diameter(b.network);
      break;
    }
    case AlgorithmKind::mspd:
    case AlgorithmKind::cp_exact: {
      const auto c = make_mspd(cfg, b, 0);
      out["T"] = c.outer;
      if (cfg.algorithm == AlgorithmKind::mspd) out["M"] = c.inner;
      out["K"] = c.steps;
      out["c1"] = c.c1;
      out["eta"] = c.eta;
      out["sigma"] = c.sigma;
      out["sigma_header"] = std::isfinite(c.header_sigma) ? json(c.header_sigma) : json(nullptr);
      out["gamma_W"] = b.gossip.eigengap();
      out["gamma_PK"] = c.accelerated_eigengap;
      out["lambda1_PK"] = c.accelerated_largest;
      break;
    }
  }
  out["closed_form_time"] = closed_form_time(cfg, b);
  return out;
}

SeedRun run_seed(const ExperimentConfig& cfg, const BuiltExperiment& b, std::uint64_t seed,
                 Execution exec) {
  SeedRun r;
  r.closed_form_time = closed_form_time(cfg, b);
  CostModel clock(b.network);
  switch (cfg.algorithm) {
    case AlgorithmKind::naive: {
      auto res = run_naive_subgradient(b.problem, b.network, cfg.epsilon, clock,
                                       cfg.max_iterations, exec);
      r.trace = std::move(res.trace);
      r.output = std::move(res.theta);
      break;
    }
    case AlgorithmKind::drs: {
      DrsOptions opt;
      opt.execution = exec;
      auto res = run_drs(b.problem, b.network, make_drs(cfg, b.problem, seed), clock, opt);
      r.trace = std::move(res.trace);
      r.output = std::move(res.theta);
      break;
    }
    case AlgorithmKind::mspd: {
      MspdOptions opt;
      opt.execution = exec;
      auto res = run_mspd(b.problem, b.gossip, make_mspd(cfg, b, seed), clock, opt);
      r.trace = std::move(res.trace);
      r.output = std::move(res.theta_bar);
      break;
    }
    case AlgorithmKind::cp_exact: {
      auto res = run_chambolle_pock_exact(b.problem, b.gossip, make_mspd(cfg, b, seed),
                                          cfg.inner_tol, exec);
      r.trace = std::move(res.trace);
      r.output = std::move(res.theta_bar);
      break;
    }
  }
  r.trace.seed = seed;
  return r;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << contents;
    if (!out) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

json run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  const BuiltExperiment built = build_experiment(cfg, options.bounds);
  std::filesystem::create_directories(cfg.output);

  const std::size_t count = cfg.seeds.size();
  std::vector<SeedRun> runs(count);
  std::vector<std::exception_ptr> errors(count);
  for_each_index(count, Execution::parallel, [&](std::size_t s) {
    try {
      runs[s] = run_seed(cfg, built, cfg.seeds[s], Execution::serial);
      std::ostringstream csv;
      write_trace_csv(runs[s].trace, csv);
      write_file_atomically(cfg.output / format_seed_file(cfg.seeds[s]), csv.str());
    } catch (...) {
      errors[s] = std::current_exception();
    }
  });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  json summary = {{"algorithm", to_string(cfg.algorithm)},
                  {"config_digest", runs.front().trace.config_digest},
                  {"seeds", cfg.seeds},
                  {"constants", derived_constants(cfg, built)}};
  json times = json::array();
  json finals = json::array();
  bool exact = true;
  for (const auto& r : runs) {
    times.push_back(r.trace.total_time());
    finals.push_back(r.trace.samples.back().output_value);
    exact = exact && r.trace.total_time() == r.closed_form_time;
  }
  summary["total_time"] = times;
  summary["closed_form_time"] = runs.front().closed_form_time;
  summary["time_matches_closed_form"] = exact;
  summary["final_value"] = finals;

  if (options.bounds) {
    std::vector<RunTrace> traces;
    for (const auto& r : runs) traces.push_back(r.trace);
    BoundSpec spec;
    if (cfg.algorithm == AlgorithmKind::drs) {
      spec = drs_bounds(make_drs(cfg, built.problem, 0));
    } else if (cfg.algorithm == AlgorithmKind::mspd) {
      const auto c = make_mspd(cfg, built, 0);
      spec = mspd_bounds(c, c.heterogeneous ? heterogeneous_lipschitz(built.problem, built.network)
                                            : built.problem.local_lipschitz);
    } else {
      spec.theorem = "none";
    }
    spec.envelope = built.envelope;
    const auto report = compare_bounds(traces, built.problem, spec);
    write_file_atomically(cfg.output / "bounds.json", to_json(report).dump(2) + "\n");
    summary["optimum"] = report.optimum;
    summary["final_mean_gap"] = report.final_mean_gap;
    summary["final_stderr"] = report.final_standard_error;
    summary["upper_violations"] = report.upper_violations;
    summary["lower_violations"] = report.lower_violations;
  }
  write_file_atomically(cfg.output / "summary.json", summary.dump(2) + "\n");
  return summary;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "epsilon") return SweepAxis::epsilon;
  if (name == "dimension") return SweepAxis::dimension;
  if (name == "eigengap") return SweepAxis::eigengap;
  throw ConfigError("--axis", "unknown sweep axis '" + name + "'");
}

std::vector<SweepRow> sweep(const ExperimentConfig& cfg, SweepAxis axis,
                            std::span<const double> values) {
  std::vector<SweepRow> rows;
  for (double v : values) {
    if (!(v > 0.0)) {
      throw ConfigError("--values", "sweep values must be positive");
    }
    ExperimentConfig c = cfg;
    switch (axis) {
      case SweepAxis::epsilon: c.epsilon = v; break;
      case SweepAxis::dimension:
        c.dimension = static_cast<Index>(std::llround(v));
        c.centers.clear();
        break;
      case SweepAxis::eigengap:
        c.network_kind = "eigengap";
        c.network_eigengap = v;
        c.rho.clear();
        break;
    }
    const BuiltExperiment b = build_experiment(c, false);
    SweepRow row;
    row.value = v;
    c.algorithm = AlgorithmKind::naive;
    row.naive_time = closed_form_time(c, b);
    c.algorithm = AlgorithmKind::drs;
    row.drs_time = closed_form_time(c, b);
    const auto drs = make_drs(c, b.problem, 0);
    row.drs_communication = static_cast<double>(drs.iterations) * 2.0 *
                            static_cast<double>(spanning_tree(b.network).depth) * b.network.tau();
    c.algorithm = AlgorithmKind::mspd;
    row.mspd_time = closed_form_time(c, b);
    const auto mspd = make_mspd(c, b, 0);
    row.mspd_communication =
        static_cast<double>(mspd.outer) * static_cast<double>(mspd.steps) * b.network.tau();
    row.mspd_comm_bound = static_cast<double>(mspd.outer) * b.network.tau() /
                          std::sqrt(b.gossip.eigengap());
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows, SweepAxis axis, std::ostream& out) {
  const char* name = axis == SweepAxis::epsilon     ? "epsilon"
                     : axis == SweepAxis::dimension ? "dimension"
                                                    : "eigengap";
  out << name << ",naive_time,drs_time,drs_communication,mspd_time,mspd_communication,mspd_comm_bound\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.value,
                  r.naive_time, r.drs_time, r.drs_communication, r.mspd_time,
                  r.mspd_communication, r.mspd_comm_bound);
    out << line;
  }
}

}  // namespace nsdist
