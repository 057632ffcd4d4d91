#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "nsdist/cost_model.hpp"
#include "nsdist/gossip.hpp"
#include "nsdist/network.hpp"
#include "nsdist/objectives.hpp"
#include "nsdist/parallel.hpp"
#include "nsdist/trace.hpp"

namespace nsdist {

struct MspdConfig {
  double epsilon = 0.0;  // 0 when T and M were given explicitly
  double radius = 1.0;
  double local_lipschitz = 1.0;  // L_ell
  std::size_t nodes = 1;
  double tau = 1.0;
  unsigned steps = 1;       // K, gossip rounds per outer iteration
  std::size_t outer = 1;    // T
  std::size_t inner = 1;    // M
  double c1 = 0.0;
  double eta = 0.0;
  double sigma = 0.0;
  double header_sigma = 0.0;  // (1 + c1^{2K}) / (tau (1 - c1^K)^2), inf when tau == 0
  double accelerated_eigengap = 1.0;  // gamma(P_K(W))
  double accelerated_largest = 1.0;   // lambda_1(P_K(W))
  bool heterogeneous = false;         // node i runs ceil(M / rho_i) inner steps
  std::uint64_t seed = 0;

  std::string digest() const;
};

/// K = max(1, floor(1/sqrt(gamma))), T = M = ceil(4 R L_ell / eps),
/// c1 = (1 - sqrt(gamma)) / (1 + sqrt(gamma)), eta = (n R / L_ell)(1 - c1^K) / (1 + c1^K),
/// sigma = min((1 + c1^2K) / (tau (1 - c1^K)^2), 1 / (eta lambda_1(P_K(W)))).
MspdConfig mspd_config(double epsilon, double radius, double local_lipschitz,
                       const GossipMatrix& w, double tau, std::uint64_t seed = 0);
/// Same constants with explicit T and M.
MspdConfig mspd_config(std::size_t outer, std::size_t inner, double radius,
                       double local_lipschitz, const GossipMatrix& w, double tau,
                       std::uint64_t seed = 0);

/// (R L / sqrt(gamma(P_K(W)))) (1/T + 1/M); L is L_ell, or L_c in heterogeneous mode.
double mspd_rate_bound(const MspdConfig& cfg, std::size_t outer, double lipschitz);

/// M projected steps of
///   u <- m/(m+2) u - 2/(m+2) [ (eta/n) g(u) - eta y - theta_t ]
/// from u = theta_t, approximating
///   argmin_{||u|| <= R} (1/n) f(u) - u.y + ||u - theta_t||^2 / (2 eta).
Vector inner_prox_subgradient(const ObjectiveOracle& f, const Vector& y, const Vector& theta_t,
                              double eta, std::size_t nodes, std::size_t steps, double radius);

/// Exact version of the same argmin: closed-form prox plus bisection on the
/// ball multiplier when f has a prox, otherwise the inner loop run until its
/// strongly convex certificate is <= tol.
Vector exact_prox_step(const ObjectiveOracle& f, const Vector& y, const Vector& theta_t,
                       double eta, std::size_t nodes, double radius, double tol);

/// Called after outer iteration t (1-based) with Theta^t and Y^t.
using MspdObserver = std::function<void(std::size_t, const NodeMatrix&, const NodeMatrix&)>;

struct MspdOptions {
  Execution execution = Execution::parallel;
  MspdObserver observer;
};

struct MspdResult {
  Vector theta_bar;          // (1/T)(1/n) sum_t sum_i theta_i^t
  NodeMatrix node_averages;  // (1/T) sum_t theta_i^t, per node
  NodeMatrix primal;         // Theta^T
  NodeMatrix dual;           // Y^T
  NodeMatrix dual_average;   // (1/T) sum_t Y^t
  RunTrace trace;
};

MspdResult run_mspd(const ProblemInstance& problem, const GossipMatrix& w, const MspdConfig& cfg,
                    CostModel& clock, const MspdOptions& options = {});

/// Reference Chambolle-Pock with exact proximal steps (M is ignored). The
/// clock is not used; trace time is the outer iteration index.
MspdResult run_chambolle_pock_exact(const ProblemInstance& problem, const GossipMatrix& w,
                                    const MspdConfig& cfg, double inner_tol,
                                    Execution exec = Execution::parallel);

/// sum_i (1/n) f_i(theta_i) + c sqrt(tr(Theta P Theta^T))
///   - sum_i min_{||u|| <= R} [(1/n) f_i(u) - u.y_i],
/// c = sqrt(L_ell^2 / (n lambda_{n-1}(P))), P = P_K(W). d == 1 only.
double restricted_primal_dual_gap(const ProblemInstance& problem, const SymmetricMatrix& p,
                                  const NodeMatrix& theta, const NodeMatrix& dual);

}  // namespace nsdist
