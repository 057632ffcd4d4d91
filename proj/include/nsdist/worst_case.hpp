#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nsdist/network.hpp"
#include "nsdist/objectives.hpp"

namespace nsdist {

/// Lower-bound envelopes for the time-to-precision of any black-box procedure.
///   global: (R L_g / 36)  sqrt(1/(1 + t/(2 Delta tau))^2 + 1/(1 + t))
///   local:  (R L_ell/108) sqrt(1/(1 + 2 t sqrt(gamma)/tau)^2 + 1/(1 + t))
double envelope_global(double t, double radius, double lipschitz, double diameter, double tau);
double envelope_local(double t, double radius, double lipschitz, double eigengap, double tau);

struct LowerBoundEnvelope {
  enum class Kind { global, local };

  Kind kind = Kind::global;
  double radius = 0.0;
  double lipschitz = 0.0;   // target L_g (global) or L_ell (local)
  double diameter = 0.0;    // Delta, global only
  double eigengap = 1.0;    // gamma, local only
  double tau = 0.0;
  double design_time = 0.0; // the t the instance was built for
  double horizon = 0.0;     // min{l, 2 k Delta tau}

  double evaluate(double t) const;

  /// Bound that the instance guarantees at simulated time t: the gap stays
  /// above envelope(design_time) on [0, horizon), and above envelope(t)
  /// once t passes design_time. Empty outside the horizon.
  std::optional<double> guaranteed(double t) const;
};

/// Parameters of the two-node hard function. `wc_gamma` is the chain
/// coefficient, not a smoothing radius or an eigengap.
struct WorstCaseParameters {
  double wc_gamma = 0.0;
  double delta = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  std::size_t k = 0;
  std::size_t l = 0;
  std::size_t nodes = 0;
  Index dimension = 0;
  double radius = 1.0;

  /// -(1/(2 alpha n)) [(beta - gamma)^2 + gamma^2/(2k) + delta^2/l]
  double optimum_value() const;
  Vector optimum_point() const;
  /// Lipschitz constant of fbar from the closed-form sum of term constants.
  double formula_lipschitz() const;
};

/// Sets k, l, gamma, delta, beta, alpha for a target time t. Throws
/// std::invalid_argument naming the required dimension if d <= 2k + l.
WorstCaseParameters worst_case_parameters(double t, double diameter, double tau,
                                          double lipschitz, std::size_t nodes, Index dimension,
                                          double radius = 1.0);

/// The first local function (chain pairs (2i-1, 2i) plus the max block) and
/// the second one (chain pairs (2i, 2i+1), linear and quadratic terms).
ObjectiveOracle worst_case_first(const WorstCaseParameters& p);
ObjectiveOracle worst_case_second(const WorstCaseParameters& p);

struct WorstCaseGlobalInstance {
  ProblemInstance problem;
  WorstCaseParameters params;
  std::size_t first_node = 0;
  std::size_t second_node = 0;
  double target_lipschitz = 0.0;
  LowerBoundEnvelope envelope;
};

WorstCaseGlobalInstance worst_case_global(double t, std::size_t diameter, double tau,
                                          double lipschitz, std::size_t nodes, Index dimension,
                                          double radius = 1.0, std::size_t first_node = 0,
                                          std::optional<std::size_t> second_node = std::nullopt);

/// Places the hard functions on a diametral pair of `net`.
WorstCaseGlobalInstance worst_case_global(double t, const Network& net, double lipschitz,
                                          Index dimension, double radius = 1.0);

struct WorstCaseLocalInstance {
  ProblemInstance problem;
  PrescribedGapGraph graph;
  WorstCaseParameters params;
  std::vector<std::size_t> first_set;   // I_0
  std::vector<std::size_t> second_set;  // I_1
  std::size_t set_distance = 0;         // d(I_0, I_1)
  double target_lipschitz = 0.0;        // L_ell
  LowerBoundEnvelope envelope;
};

/// Hard functions split with weight 1/m over I_0 and I_1 of the
/// prescribed-eigengap graph, m = floor((n_gamma + 1) / 3).
WorstCaseLocalInstance worst_case_local(double eigengap, double local_lipschitz, double t,
                                        double tau, Index dimension, double radius = 1.0);

}  // namespace nsdist
