#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nsdist {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// One column per node, one row per parameter coordinate.
using NodeMatrix = Eigen::MatrixXd;

/// |lambda| <= kZeroEigenvalueTolerance * lambda_max counts as a kernel direction.
inline constexpr double kZeroEigenvalueTolerance = 1e-9;

class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Dense symmetric matrix. Entry (i,j) and (j,i) are bit-identical after
/// construction; inputs that are not symmetric to rounding are rejected.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(Matrix entries);

  Index order() const { return entries_.rows(); }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  const Matrix& dense() const { return entries_; }

 private:
  Matrix entries_;
};

/// Full spectrum, eigenvalues ascending, eigenvectors as orthonormal columns.
struct SpectralSummary {
  Vector eigenvalues;
  Matrix eigenvectors;
  // max_k ||M v_k - lambda_k v_k||_2 measured after the solve
  double residual = 0.0;

  double largest() const { return eigenvalues(eigenvalues.size() - 1); }
  double smallest() const { return eigenvalues(0); }
};

/// Throws NumericalError if the residual exceeds 1e-9 * max(1, lambda_max).
SpectralSummary symmetric_eigendecomposition(const SymmetricMatrix& m);

/// Normalized eigengap lambda_{n-1} / lambda_1 of a PSD matrix with a
/// one-dimensional kernel. Throws std::domain_error when more than one
/// eigenvalue is numerically zero (disconnected support).
/// A 1x1 zero matrix has eigengap 1 by convention.
double eigengap(const SpectralSummary& spectrum);

/// Chebyshev polynomial of the first kind by the three-term recurrence.
double chebyshev_t(unsigned k, double x);

Vector project_ball(const Vector& x, const Vector& center, double radius);

inline Vector project_ball(const Vector& x, double radius) {
  return project_ball(x, Vector::Zero(x.size()), radius);
}

}  // namespace nsdist
