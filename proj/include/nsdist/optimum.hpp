#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nsdist/numerics.hpp"
#include "nsdist/objectives.hpp"

namespace nsdist {

/// Centralized solution of min over B_2(R) of fbar, with an upper bound on
/// value - fbar* (0 for closed forms).
struct OptimumCertificate {
  Vector point;
  double value = 0.0;
  double certified_gap = 0.0;
  std::string method;
};

/// fbar = (1/n) sum ||x - c_i||_1. Coordinate-wise median; throws when the
/// median leaves the ball (the constrained problem then has no closed form).
OptimumCertificate median_optimum(const std::vector<Vector>& centers, double radius);

/// fbar = (1/n) sum ||x - c_i||_2 by Weiszfeld iterations, stopped once
/// ||grad|| * 2R <= tol. All centers must lie in the ball.
OptimumCertificate geometric_median_optimum(const std::vector<Vector>& centers, double radius,
                                            double tol = 1e-10, std::size_t max_iterations = 1000000);

/// fbar = a . x with a the mean slope: minimizer -R a / ||a||.
OptimumCertificate linear_optimum(const Vector& mean_slope, double radius);

/// Projected subgradient on fbar. With mu > 0 (fbar mu-strongly convex) uses
/// steps 2/(mu(t+1)) and the weighted average, gap <= 2 L^2 / (mu (N+1));
/// with mu == 0 uses constant steps 2R/(L sqrt N), gap <= 2RL/sqrt(N).
/// The returned value is fbar at the averaged point.
OptimumCertificate certified_solve(const ProblemInstance& problem, double strong_convexity,
                                   std::size_t iterations);

void attach_optimum(ProblemInstance& problem, const OptimumCertificate& cert);

}  // namespace nsdist
