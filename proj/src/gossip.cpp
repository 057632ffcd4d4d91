#include "nsdist/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsdist {

NodeMatrix gossip_multiply(const NodeMatrix& x, const GossipMatrix& w, Execution exec) {
  if (x.cols() != w.order()) {
    throw std::invalid_argument("gossip_multiply: need one column per node");
  }
  NodeMatrix out(x.rows(), x.cols());
  const auto& rows = w.rows();
  for_each_index(rows.size(), exec, [&](std::size_t i) {
    auto col = out.col(static_cast<Index>(i));
    col.setZero();
    for (auto [j, wij] : rows[i]) {
      col.noalias() += wij * x.col(static_cast<Index>(j));
    }
  });
  return out;
}

NodeMatrix gossip_multiply_reference(const NodeMatrix& x, const GossipMatrix& w) {
  return x * w.matrix().dense();
}

unsigned chebyshev_steps(const GossipMatrix& w) {
  // relative slack so that an eigengap of exactly 1/j^2 up to rounding gives j
  const double k = std::floor(1.0 / std::sqrt(w.eigengap()) * (1.0 + 1e-12));
  return static_cast<unsigned>(std::max(1.0, k));
}

ChebyshevParameters chebyshev_parameters(const GossipMatrix& w, unsigned steps) {
  if (steps < 1) {
    throw std::invalid_argument("chebyshev_parameters: need K >= 1");
  }
  ChebyshevParameters p;
  p.steps = steps;
  const double gamma = w.eigengap();
  const double top = w.largest_eigenvalue();
  if (w.order() == 1 || 1.0 - gamma <= 1e-12) {
    p.plain = true;
    p.steps = 1;
    p.c3 = top > 0.0 ? 1.0 / top : 0.0;
    return p;
  }
  p.c2 = (1.0 + gamma) / (1.0 - gamma);
  p.c3 = 2.0 / ((1.0 + gamma) * top);
  return p;
}

NodeMatrix accelerated_gossip(const NodeMatrix& x, const GossipMatrix& w, unsigned steps,
                              Execution exec) {
  const auto p = chebyshev_parameters(w, steps);
  if (p.plain) {
    return p.c3 * gossip_multiply(x, w, exec);
  }
  // Z (I - W~) = Z - c3 Z W: one communication round each
  auto shifted = [&](const NodeMatrix& z) -> NodeMatrix {
    return z - p.c3 * gossip_multiply(z, w, exec);
  };
  double a_prev = 1.0;
  double a_cur = p.c2;
  NodeMatrix z_prev = x;
  NodeMatrix z_cur = p.c2 * shifted(x);
  for (unsigned k = 1; k < p.steps; ++k) {
    const double a_next = 2.0 * p.c2 * a_cur - a_prev;
    NodeMatrix z_next = 2.0 * p.c2 * shifted(z_cur) - z_prev;
    a_prev = a_cur;
    a_cur = a_next;
    z_prev = std::move(z_cur);
    z_cur = std::move(z_next);
  }
  return x - z_cur / a_cur;
}

SymmetricMatrix chebyshev_gossip_matrix(const GossipMatrix& w, unsigned steps) {
  const Index n = w.order();
  Matrix p = accelerated_gossip(Matrix::Identity(n, n), w, steps, Execution::serial);
  // symmetric in exact arithmetic; remove rounding asymmetry
  p = 0.5 * (p + p.transpose()).eval();
  return SymmetricMatrix(std::move(p));
}

namespace {

double top_eigenvalue(const SymmetricMatrix& m) {
  return symmetric_eigendecomposition(m).largest();
}

}  // namespace

SymmetricMatrix averaging_matrix(const GossipMatrix& w, unsigned steps) {
  const Index n = w.order();
  const auto p = chebyshev_gossip_matrix(w, steps);
  const double top = top_eigenvalue(p);
  if (!(top > 0.0)) {
    return SymmetricMatrix(Matrix::Identity(n, n));
  }
  Matrix wp = Matrix::Identity(n, n) - p.dense() / top;
  wp = 0.5 * (wp + wp.transpose()).eval();
  return SymmetricMatrix(std::move(wp));
}

AveragingResult gossip_average(const NodeMatrix& values, const GossipMatrix& w, unsigned steps,
                               double tol, std::size_t max_rounds, Execution exec) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("gossip_average: tol must be positive");
  }
  if (values.cols() != w.order()) {
    throw std::invalid_argument("gossip_average: need one column per node");
  }
  const Vector mean = values.rowwise().mean();
  double scale = 0.0;
  if (w.order() > 1) {
    scale = 1.0 / top_eigenvalue(chebyshev_gossip_matrix(w, steps));
  }

  AveragingResult r;
  r.values = values;
  auto deviation = [&](const NodeMatrix& x) {
    return (x.colwise() - mean);
  };
  for (;;) {
    const NodeMatrix dev = deviation(r.values);
    r.deviation.push_back(dev.norm());
    if (dev.colwise().norm().maxCoeff() <= tol || r.rounds >= max_rounds) {
      break;
    }
    r.values -= scale * accelerated_gossip(r.values, w, steps, exec);
    ++r.rounds;
  }
  return r;
}

}  // namespace nsdist
