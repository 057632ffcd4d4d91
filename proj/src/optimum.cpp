#include "nsdist/optimum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsdist {
namespace {

void require_centers(const std::vector<Vector>& centers, double radius) {
  if (centers.empty()) {
    throw std::invalid_argument("optimum: no centers");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("optimum: radius must be positive");
  }
  for (const auto& c : centers) {
    if (c.size() != centers.front().size()) {
      throw std::invalid_argument("optimum: centers of different dimension");
    }
  }
}

double mean_distance(const std::vector<Vector>& centers, const Vector& x) {
  double s = 0.0;
  for (const auto& c : centers) s += (x - c).norm();
  return s / static_cast<double>(centers.size());
}

// Minimum-norm element of the subdifferential of the mean distance at x.
Vector distance_residual(const std::vector<Vector>& centers, const Vector& x) {
  Vector g = Vector::Zero(x.size());
  std::size_t coincident = 0;
  for (const auto& c : centers) {
    const double r = (x - c).norm();
    if (r == 0.0) {
      ++coincident;
    } else {
      g += (x - c) / r;
    }
  }
  // each coincident center contributes any vector of the unit ball
  const double slack = static_cast<double>(coincident);
  const double norm = g.norm();
  g *= norm > slack ? (norm - slack) / norm : 0.0;
  return g / static_cast<double>(centers.size());
}

}  // namespace

OptimumCertificate median_optimum(const std::vector<Vector>& centers, double radius) {
  require_centers(centers, radius);
  const Index d = centers.front().size();
  const std::size_t n = centers.size();
  Vector x(d);
  std::vector<double> coord(n);
  for (Index j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) coord[i] = centers[i](j);
    std::sort(coord.begin(), coord.end());
    x(j) = coord[(n - 1) / 2];
  }
  if (x.norm() > radius * (1.0 + 1e-12)) {
    throw std::domain_error("median_optimum: coordinate-wise median lies outside the ball");
  }
  double value = 0.0;
  for (const auto& c : centers) value += (x - c).lpNorm<1>();
  return {x, value / static_cast<double>(n), 0.0, "median"};
}

OptimumCertificate geometric_median_optimum(const std::vector<Vector>& centers, double radius,
                                            double tol, std::size_t max_iterations) {
  require_centers(centers, radius);
  for (const auto& c : centers) {
    if (c.norm() > radius) {
      throw std::domain_error("geometric_median_optimum: center outside the ball");
    }
  }
  Vector x = Vector::Zero(centers.front().size());
  for (const auto& c : centers) x += c;
  x /= static_cast<double>(centers.size());

  for (std::size_t it = 0; it < max_iterations; ++it) {
    const Vector g = distance_residual(centers, x);
    if (g.norm() * 2.0 * radius <= tol) {
      return {x, mean_distance(centers, x), g.norm() * 2.0 * radius, "weiszfeld"};
    }
    // iterates only approach an optimal center, so test the nearest one directly
    const Vector* nearest = &centers.front();
    for (const auto& c : centers) {
      if ((x - c).norm() < (x - *nearest).norm()) nearest = &c;
    }
    const Vector gc = distance_residual(centers, *nearest);
    if (gc.norm() * 2.0 * radius <= tol) {
      return {*nearest, mean_distance(centers, *nearest), gc.norm() * 2.0 * radius, "weiszfeld"};
    }
    Vector num = Vector::Zero(x.size());
    double den = 0.0;
    const Vector* hit = nullptr;
    for (const auto& c : centers) {
      const double r = (x - c).norm();
      if (r == 0.0) {
        hit = &c;
        continue;
      }
      num += c / r;
      den += 1.0 / r;
    }
    Vector next = num / den;
    if (hit != nullptr) {
      // Vardi-Zhang step away from a center that is not optimal
      const Vector grad = distance_residual(centers, x) * static_cast<double>(centers.size());
      const double shrink = 1.0 / (den * grad.norm() + 1.0);
      next = (1.0 - shrink) * next + shrink * (*hit);
    }
    if ((next - x).norm() == 0.0) {
      break;
    }
    x = next;
  }
  const Vector g = distance_residual(centers, x);
  if (g.norm() * 2.0 * radius > tol) {
    throw NumericalError("geometric_median_optimum: tolerance not reached", g.norm() * 2.0 * radius);
  }
  return {x, mean_distance(centers, x), g.norm() * 2.0 * radius, "weiszfeld"};
}

OptimumCertificate linear_optimum(const Vector& mean_slope, double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("linear_optimum: radius must be positive");
  }
  const double norm = mean_slope.norm();
  if (norm == 0.0) {
    return {Vector::Zero(mean_slope.size()), 0.0, 0.0, "linear"};
  }
  return {-radius * mean_slope / norm, -radius * norm, 0.0, "linear"};
}

OptimumCertificate certified_solve(const ProblemInstance& problem, double strong_convexity,
                                   std::size_t iterations) {
  if (iterations == 0 || strong_convexity < 0.0) {
    throw std::invalid_argument("certified_solve: need iterations >= 1 and mu >= 0");
  }
  const double R = problem.radius;
  const double L = problem.global_lipschitz;
  const double N = static_cast<double>(iterations);
  Vector x = Vector::Zero(problem.dimension);
  Vector avg = Vector::Zero(problem.dimension);
  double weight_sum = 0.0;
  const double constant_step = L > 0.0 ? 2.0 * R / (L * std::sqrt(N)) : 0.0;
  for (std::size_t t = 1; t <= iterations; ++t) {
    const double w = strong_convexity > 0.0 ? static_cast<double>(t) : 1.0;
    weight_sum += w;
    avg += (w / weight_sum) * (x - avg);
    const double step = strong_convexity > 0.0
                            ? 2.0 / (strong_convexity * (static_cast<double>(t) + 1.0))
                            : constant_step;
    x = project_ball(x - step * problem.average_subgradient(x), R);
  }
  OptimumCertificate cert;
  cert.point = avg;
  cert.value = problem.average_value(avg);
  cert.certified_gap = strong_convexity > 0.0 ? 2.0 * L * L / (strong_convexity * (N + 1.0))
                                              : 2.0 * R * L / std::sqrt(N);
  cert.method = strong_convexity > 0.0 ? "strongly-convex-subgradient" : "subgradient";
  return cert;
}

void attach_optimum(ProblemInstance& problem, const OptimumCertificate& cert) {
  problem.optimum_value = cert.value;
  problem.optimum_point = cert.point;
}

}  // namespace nsdist
