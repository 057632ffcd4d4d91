#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nsdist/numerics.hpp"
#include "nsdist/rng.hpp"

namespace nsdist {

/// Value + subgradient oracle for a convex, Lipschitz function on R^d.
///
/// Oracles are immutable and stateless, so one instance can be evaluated
/// from many threads. An optional proximal map
///   prox(v, s) = argmin_x  s * f(x) + 0.5 * ||x - v||^2
/// is attached where a closed form exists; only the exact-prox reference
/// solver uses it.
class ObjectiveOracle {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using SubgradientFn = std::function<Vector(const Vector&)>;
  using ProxFn = std::function<Vector(const Vector&, double)>;

  ObjectiveOracle(Index dimension, double lipschitz, ValueFn value, SubgradientFn subgradient,
                  ProxFn prox = {});

  Index dimension() const { return dimension_; }
  double lipschitz() const { return lipschitz_; }

  double value(const Vector& x) const { return value_(x); }
  Vector subgradient(const Vector& x) const { return subgradient_(x); }

  bool has_prox() const { return static_cast<bool>(prox_); }
  Vector prox(const Vector& v, double step) const;

 private:
  Index dimension_;
  double lipschitz_;
  ValueFn value_;
  SubgradientFn subgradient_;
  ProxFn prox_;
};

// Test objectives. Subgradient ties are broken deterministically: |t| at 0
// returns 0, max-type terms pick the lowest index attaining the max.

/// ||x - center||_1, Lipschitz constant sqrt(d).
ObjectiveOracle abs_deviation(Vector center);
/// scale * ||x - center||_2, Lipschitz constant scale.
ObjectiveOracle euclidean_distance(Vector center, double scale = 1.0);
/// slope . x, Lipschitz constant ||slope||_2.
ObjectiveOracle linear(Vector slope);
/// max_r (slopes.row(r) . x + offsets(r)), Lipschitz constant max_r ||slopes.row(r)||_2.
ObjectiveOracle max_affine(Matrix slopes, Vector offsets);
ObjectiveOracle zero_function(Index dimension);
/// factor * f for factor >= 0.
ObjectiveOracle scaled(const ObjectiveOracle& f, double factor);

/// Average-of-locals problem over the ball B_2(radius) centred at 0.
struct ProblemInstance {
  Index dimension = 0;
  std::vector<ObjectiveOracle> locals;
  double radius = 1.0;
  double global_lipschitz = 0.0;  // L_g of the average
  double local_lipschitz = 0.0;   // L_ell, l2-average of the local constants
  std::optional<double> optimum_value;
  std::optional<Vector> optimum_point;

  std::size_t nodes() const { return locals.size(); }
  double average_value(const Vector& x) const;
  Vector average_subgradient(const Vector& x) const;
};

/// Builds a problem and fills in L_ell. When global_lipschitz is not given,
/// the average of the local constants is used (always <= L_ell).
ProblemInstance make_problem(std::vector<ObjectiveOracle> locals, double radius,
                             std::optional<double> global_lipschitz = std::nullopt);

/// sqrt((1/n) sum L_i^2)
double local_lipschitz_average(const std::vector<ObjectiveOracle>& locals);

struct SmoothingEstimate {
  double value = 0.0;
  Vector gradient;
  std::size_t samples = 0;
  double smoothing_radius = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;
  // sample standard deviation of the K function values
  double value_stddev = 0.0;

  double value_stderr() const;
};

/// Monte-Carlo estimate of f^gamma(theta) = E f(theta + gamma X) and of its
/// gradient, using the draws X_{iteration,k}, k = 0..samples-1, of `stream`.
SmoothingEstimate smoothed_estimate(const ObjectiveOracle& f, const Vector& theta,
                                    double smoothing_radius, std::size_t samples,
                                    const SeededStream& stream, std::uint64_t iteration = 0);

/// Gradient part of smoothed_estimate only: (1/K) sum_k g(theta + gamma X_k).
Vector smoothed_gradient(const ObjectiveOracle& f, const Vector& theta, double smoothing_radius,
                         std::size_t samples, const SeededStream& stream,
                         std::uint64_t iteration = 0);

struct SandwichReport {
  double estimate = 0.0;
  double half_width = 0.0;  // three standard errors
  double lower = 0.0;       // f(theta)
  double upper = 0.0;       // f(theta) + gamma L_g sqrt(d)
  bool holds = false;
};

/// Checks f(theta) <= f^gamma(theta) <= f(theta) + gamma L_g sqrt(d) up to
/// the Monte-Carlo half-width.
SandwichReport smoothing_sandwich_check(const ObjectiveOracle& f, const Vector& theta,
                                        double smoothing_radius, double global_lipschitz,
                                        std::size_t samples, const SeededStream& stream);

}  // namespace nsdist
