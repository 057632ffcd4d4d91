#include "nsdist/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsdist {

BoundSpec drs_bounds(const DrsConfig& cfg) {
  BoundSpec s;
  s.theorem = "drs_rate";
  s.stochastic = true;
  s.upper = [cfg](std::size_t t) {
    return drs_rate_bound(cfg.radius, cfg.lipschitz, cfg.dimension, t, cfg.samples);
  };
  return s;
}

BoundSpec mspd_bounds(const MspdConfig& cfg, double lipschitz) {
  BoundSpec s;
  s.theorem = "mspd_rate";
  s.upper = [cfg, lipschitz](std::size_t t) { return mspd_rate_bound(cfg, t, lipschitz); };
  return s;
}

BoundReport compare_bounds(std::span<const RunTrace> traces, const ProblemInstance& problem,
                           const BoundSpec& spec) {
  if (!problem.optimum_value) {
    throw std::logic_error(
        "compare_bounds: the problem has no optimum value; attach one with attach_optimum "
        "(closed form or certified_solve) first");
  }
  if (traces.empty()) {
    throw std::invalid_argument("compare_bounds: no traces");
  }
  const std::size_t count = traces.front().samples.size();
  for (const auto& tr : traces) {
    if (tr.samples.size() != count) {
      throw std::invalid_argument("compare_bounds: traces have different lengths");
    }
  }
  const double fstar = *problem.optimum_value;
  BoundReport rep;
  rep.theorem = spec.theorem;
  rep.seeds = traces.size();
  rep.stochastic = spec.stochastic;
  rep.optimum = fstar;
  const double S = static_cast<double>(traces.size());
  double best = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < count; ++k) {
    BoundSample b;
    b.iteration = traces.front().samples[k].iteration;
    b.time = traces.front().samples[k].time;
    double mean = 0.0;
    double m2 = 0.0;
    b.min_node_gap = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < traces.size(); ++s) {
      const auto& sample = traces[s].samples[k];
      const double gap = sample.output_value - fstar;
      const double delta = gap - mean;
      mean += delta / static_cast<double>(s + 1);
      m2 += delta * (gap - mean);
      for (double v : sample.node_values) {
        b.min_node_gap = std::min(b.min_node_gap, v - fstar);
      }
    }
    b.mean_gap = mean;
    b.standard_error = traces.size() > 1 ? std::sqrt(m2 / (S - 1.0) / S) : 0.0;
    if (spec.upper && b.iteration > 0) {
      b.upper = spec.upper(b.iteration);
      const double slack = spec.stochastic ? 2.0 * b.standard_error : 0.0;
      b.upper_violation = b.mean_gap > *b.upper + slack;
    }
    if (spec.envelope) {
      b.envelope = spec.envelope->guaranteed(b.time);
      if (b.envelope) {
        for (const auto& tr : traces) {
          const auto& sample = tr.samples[k];
          for (double v : sample.node_values) {
            b.lower_violation = b.lower_violation || (v - fstar < *b.envelope);
          }
        }
      }
    }
    rep.upper_violations += b.upper_violation ? 1 : 0;
    rep.lower_violations += b.lower_violation ? 1 : 0;
    best = std::min(best, b.mean_gap);
    rep.best_gap.push_back(best);
    rep.samples.push_back(std::move(b));
  }
  rep.final_mean_gap = rep.samples.back().mean_gap;
  rep.final_standard_error = rep.samples.back().standard_error;
  return rep;
}

nlohmann::json to_json(const BoundReport& report) {
  using nlohmann::json;
  json samples = json::array();
  for (const auto& b : report.samples) {
    json row = {{"iteration", b.iteration},
                {"time", b.time},
                {"mean_gap", b.mean_gap},
                {"stderr", b.standard_error},
                {"min_node_gap", b.min_node_gap},
                {"upper_violation", b.upper_violation},
                {"lower_violation", b.lower_violation}};
    row["upper_bound"] = b.upper ? json(*b.upper) : json(nullptr);
    row["lower_envelope"] = b.envelope ? json(*b.envelope) : json(nullptr);
    samples.push_back(std::move(row));
  }
  return {{"theorem", report.theorem},
          {"seeds", report.seeds},
          {"stochastic", report.stochastic},
          {"optimum", report.optimum},
          {"upper_violations", report.upper_violations},
          {"lower_violations", report.lower_violations},
          {"final_mean_gap", report.final_mean_gap},
          {"final_stderr", report.final_standard_error},
          {"samples", std::move(samples)}};
}

}  // namespace nsdist
