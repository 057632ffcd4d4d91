#pragma once

#include <cstddef>
#include <vector>

#include "nsdist/network.hpp"
#include "nsdist/numerics.hpp"
#include "nsdist/parallel.hpp"

namespace nsdist {

/// One communication round: column i of the result is sum_j W_ij x_j.
/// Walks the sparse rows of W; one OpenMP task per node.
NodeMatrix gossip_multiply(const NodeMatrix& x, const GossipMatrix& w,
                           Execution exec = Execution::parallel);

/// Dense X * W, kept as the reference for gossip_multiply.
NodeMatrix gossip_multiply_reference(const NodeMatrix& x, const GossipMatrix& w);

/// max(1, floor(1 / sqrt(gamma(W))))
unsigned chebyshev_steps(const GossipMatrix& w);

struct ChebyshevParameters {
  unsigned steps = 1;
  double c2 = 0.0;  // (1 + gamma) / (1 - gamma)
  double c3 = 0.0;  // 2 / ((1 + gamma) lambda_1)
  // gamma(W) == 1 (or a single node): P_1(W~) = W / lambda_1 is used directly
  bool plain = false;
};

ChebyshevParameters chebyshev_parameters(const GossipMatrix& w, unsigned steps);

/// X * P_K(W~) with P_K(x) = 1 - T_K(c2 (1 - x)) / T_K(c2) and W~ = c3 W,
/// evaluated by the three-term recurrence in K communication rounds.
NodeMatrix accelerated_gossip(const NodeMatrix& x, const GossipMatrix& w, unsigned steps,
                              Execution exec = Execution::parallel);

/// P_K(W~) as an explicit matrix (accelerated gossip applied to the identity).
SymmetricMatrix chebyshev_gossip_matrix(const GossipMatrix& w, unsigned steps);

/// W' = I - P_K(W~) / lambda_1(P_K(W~)): symmetric, PSD, rows sum to one.
SymmetricMatrix averaging_matrix(const GossipMatrix& w, unsigned steps);

struct AveragingResult {
  NodeMatrix values;
  std::size_t rounds = 0;
  // ||X_r - mean 1^T||_F before round r+1, starting at the input
  std::vector<double> deviation;
};

/// Repeats X <- X W' until every node is within `tol` (l2) of the true mean,
/// or `max_rounds` is reached.
AveragingResult gossip_average(const NodeMatrix& values, const GossipMatrix& w, unsigned steps,
                               double tol, std::size_t max_rounds = 100000,
                               Execution exec = Execution::parallel);

}  // namespace nsdist
