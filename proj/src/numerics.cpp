#include "nsdist/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsdist {

SymmetricMatrix::SymmetricMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("SymmetricMatrix: matrix is not square");
  }
  if (!entries_.allFinite()) {
    throw std::invalid_argument("SymmetricMatrix: non-finite entry");
  }
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  const double asymmetry = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-12 * scale) {
    throw std::invalid_argument("SymmetricMatrix: asymmetry " + std::to_string(asymmetry));
  }
  for (Index i = 0; i < entries_.rows(); ++i) {
    for (Index j = i + 1; j < entries_.cols(); ++j) {
      entries_(j, i) = entries_(i, j);
    }
  }
}

SpectralSummary symmetric_eigendecomposition(const SymmetricMatrix& m) {
  SpectralSummary out;
  if (m.order() == 0) {
    throw std::invalid_argument("symmetric_eigendecomposition: empty matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.dense(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric_eigendecomposition: solver did not converge",
                         std::numeric_limits<double>::infinity());
  }
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();

  double residual = 0.0;
  for (Index k = 0; k < out.eigenvalues.size(); ++k) {
    const Vector v = out.eigenvectors.col(k);
    residual = std::max(residual, (m.dense() * v - out.eigenvalues(k) * v).norm());
  }
  out.residual = residual;
  const double limit = 1e-9 * std::max(1.0, std::abs(out.largest()));
  if (!(residual <= limit)) {
    throw NumericalError("symmetric_eigendecomposition: residual " + std::to_string(residual) +
                             " exceeds " + std::to_string(limit),
                         residual);
  }
  return out;
}

double eigengap(const SpectralSummary& spectrum) {
  const Index n = spectrum.eigenvalues.size();
  if (n == 1) {
    return 1.0;
  }
  const double top = spectrum.largest();
  if (!(top > 0.0)) {
    throw std::domain_error("eigengap: matrix has no positive eigenvalue");
  }
  const double zero = kZeroEigenvalueTolerance * top;
  Index zeros = 0;
  for (Index k = 0; k < n; ++k) {
    if (std::abs(spectrum.eigenvalues(k)) <= zero) {
      ++zeros;
    }
  }
  if (zeros > 1) {
    throw std::domain_error("eigengap: disconnected support (" + std::to_string(zeros) +
                            " zero eigenvalues)");
  }
  return spectrum.eigenvalues(1) / top;
}

double chebyshev_t(unsigned k, double x) {
  if (k == 0) {
    return 1.0;
  }
  double prev = 1.0;
  double cur = x;
  for (unsigned i = 1; i < k; ++i) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Vector project_ball(const Vector& x, const Vector& center, double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("project_ball: radius must be positive");
  }
  const Vector offset = x - center;
  const double dist = offset.norm();
  if (dist <= radius) {
    return x;
  }
  return center + (radius / dist) * offset;
}

}  // namespace nsdist
