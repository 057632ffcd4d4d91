#include "nsdist/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace nsdist {
namespace {

void require_dimension(const Vector& x, Index d, const char* who) {
  if (x.size() != d) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
}

}  // namespace

ObjectiveOracle::ObjectiveOracle(Index dimension, double lipschitz, ValueFn value,
                                 SubgradientFn subgradient, ProxFn prox)
    : dimension_(dimension),
      lipschitz_(lipschitz),
      value_(std::move(value)),
      subgradient_(std::move(subgradient)),
      prox_(std::move(prox)) {
  if (dimension_ < 1) {
    throw std::invalid_argument("ObjectiveOracle: dimension must be positive");
  }
  if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_)) {
    throw std::invalid_argument("ObjectiveOracle: Lipschitz constant must be finite and >= 0");
  }
}

Vector ObjectiveOracle::prox(const Vector& v, double step) const {
  if (!prox_) {
    throw std::logic_error("ObjectiveOracle: no closed-form prox for this function");
  }
  return prox_(v, step);
}

ObjectiveOracle abs_deviation(Vector center) {
  if (!center.allFinite()) {
    throw std::invalid_argument("abs_deviation: non-finite center");
  }
  const Index d = center.size();
  auto value = [center](const Vector& x) { return (x - center).lpNorm<1>(); };
  auto subgradient = [center](const Vector& x) {
    require_dimension(x, center.size(), "abs_deviation");
    Vector g(x.size());
    for (Index j = 0; j < x.size(); ++j) {
      const double r = x(j) - center(j);
      g(j) = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    }
    return g;
  };
  // coordinatewise soft threshold toward the center
  auto prox = [center](const Vector& v, double s) {
    Vector out(v.size());
    for (Index j = 0; j < v.size(); ++j) {
      const double r = v(j) - center(j);
      const double shrunk = std::max(std::abs(r) - s, 0.0);
      out(j) = center(j) + std::copysign(shrunk, r);
    }
    return out;
  };
  return ObjectiveOracle(d, std::sqrt(static_cast<double>(d)), value, subgradient, prox);
}

ObjectiveOracle euclidean_distance(Vector center, double scale) {
  if (!center.allFinite() || !(scale >= 0.0)) {
    throw std::invalid_argument("euclidean_distance: invalid parameters");
  }
  const Index d = center.size();
  auto value = [center, scale](const Vector& x) { return scale * (x - center).norm(); };
  auto subgradient = [center, scale](const Vector& x) {
    require_dimension(x, center.size(), "euclidean_distance");
    const Vector r = x - center;
    const double norm = r.norm();
    if (norm == 0.0) {
      return Vector(Vector::Zero(x.size()));
    }
    return Vector(scale * r / norm);
  };
  auto prox = [center, scale](const Vector& v, double s) {
    const Vector r = v - center;
    const double norm = r.norm();
    const double t = s * scale;
    if (norm <= t) {
      return Vector(center);
    }
    return Vector(center + (1.0 - t / norm) * r);
  };
  return ObjectiveOracle(d, scale, value, subgradient, prox);
}

ObjectiveOracle linear(Vector slope) {
  if (!slope.allFinite()) {
    throw std::invalid_argument("linear: non-finite slope");
  }
  const Index d = slope.size();
  const double lip = slope.norm();
  auto value = [slope](const Vector& x) { return slope.dot(x); };
  auto subgradient = [slope](const Vector& x) {
    require_dimension(x, slope.size(), "linear");
    return slope;
  };
  auto prox = [slope](const Vector& v, double s) { return Vector(v - s * slope); };
  return ObjectiveOracle(d, lip, value, subgradient, prox);
}

ObjectiveOracle max_affine(Matrix slopes, Vector offsets) {
  if (slopes.rows() == 0 || slopes.rows() != offsets.size() || !slopes.allFinite() ||
      !offsets.allFinite()) {
    throw std::invalid_argument("max_affine: need matching, finite slopes and offsets");
  }
  const Index d = slopes.cols();
  const double lip = slopes.rowwise().norm().maxCoeff();
  auto active = [slopes, offsets](const Vector& x) {
    Index best = 0;
    double best_value = slopes.row(0).dot(x) + offsets(0);
    for (Index r = 1; r < slopes.rows(); ++r) {
      const double v = slopes.row(r).dot(x) + offsets(r);
      if (v > best_value) {
        best = r;
        best_value = v;
      }
    }
    return std::pair{best, best_value};
  };
  auto value = [active](const Vector& x) { return active(x).second; };
  auto subgradient = [active, slopes](const Vector& x) {
    require_dimension(x, slopes.cols(), "max_affine");
    return Vector(slopes.row(active(x).first).transpose());
  };
  return ObjectiveOracle(d, lip, value, subgradient);
}

ObjectiveOracle zero_function(Index dimension) {
  auto value = [](const Vector&) { return 0.0; };
  auto subgradient = [](const Vector& x) { return Vector(Vector::Zero(x.size())); };
  auto prox = [](const Vector& v, double) { return v; };
  return ObjectiveOracle(dimension, 0.0, value, subgradient, prox);
}

ObjectiveOracle scaled(const ObjectiveOracle& f, double factor) {
  if (!(factor >= 0.0)) {
    throw std::invalid_argument("scaled: factor must be >= 0");
  }
  auto value = [f, factor](const Vector& x) { return factor * f.value(x); };
  auto subgradient = [f, factor](const Vector& x) { return Vector(factor * f.subgradient(x)); };
  ObjectiveOracle::ProxFn prox;
  if (f.has_prox()) {
    prox = [f, factor](const Vector& v, double s) { return f.prox(v, factor * s); };
  }
  return ObjectiveOracle(f.dimension(), factor * f.lipschitz(), value, subgradient, prox);
}

double ProblemInstance::average_value(const Vector& x) const {
  double sum = 0.0;
  for (const auto& f : locals) {
    sum += f.value(x);
  }
  return sum / static_cast<double>(locals.size());
}

Vector ProblemInstance::average_subgradient(const Vector& x) const {
  Vector g = Vector::Zero(dimension);
  for (const auto& f : locals) {
    g += f.subgradient(x);
  }
  return g / static_cast<double>(locals.size());
}

double local_lipschitz_average(const std::vector<ObjectiveOracle>& locals) {
  double sum = 0.0;
  for (const auto& f : locals) {
    sum += f.lipschitz() * f.lipschitz();
  }
  return std::sqrt(sum / static_cast<double>(locals.size()));
}

ProblemInstance make_problem(std::vector<ObjectiveOracle> locals, double radius,
                             std::optional<double> global_lipschitz) {
  if (locals.empty()) {
    throw std::invalid_argument("make_problem: need at least one local function");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("make_problem: radius must be positive");
  }
  const Index d = locals.front().dimension();
  for (const auto& f : locals) {
    if (f.dimension() != d) {
      throw std::invalid_argument("make_problem: local functions disagree on dimension");
    }
  }
  ProblemInstance p;
  p.dimension = d;
  p.radius = radius;
  p.local_lipschitz = local_lipschitz_average(locals);
  if (global_lipschitz) {
    p.global_lipschitz = *global_lipschitz;
  } else {
    double sum = 0.0;
    for (const auto& f : locals) {
      sum += f.lipschitz();
    }
    p.global_lipschitz = sum / static_cast<double>(locals.size());
  }
  if (!(p.global_lipschitz >= 0.0) ||
      p.global_lipschitz > p.local_lipschitz * (1.0 + 1e-12) + 1e-15) {
    throw std::invalid_argument("make_problem: global Lipschitz constant exceeds L_ell");
  }
  p.locals = std::move(locals);
  return p;
}

double SmoothingEstimate::value_stderr() const {
  return samples > 1 ? value_stddev / std::sqrt(static_cast<double>(samples)) : 0.0;
}

SmoothingEstimate smoothed_estimate(const ObjectiveOracle& f, const Vector& theta,
                                    double smoothing_radius, std::size_t samples,
                                    const SeededStream& stream, std::uint64_t iteration) {
  if (samples < 1 || !(smoothing_radius >= 0.0)) {
    throw std::invalid_argument("smoothed_estimate: need K >= 1 and gamma >= 0");
  }
  SmoothingEstimate est;
  est.samples = samples;
  est.smoothing_radius = smoothing_radius;
  est.seed = stream.seed();
  est.iteration = iteration;
  est.gradient = Vector::Zero(theta.size());

  // Welford running mean / variance of the sampled values
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const Vector point = theta + smoothing_radius * stream.gaussian_vector(iteration, k, theta.size());
    const double v = f.value(point);
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
    est.gradient += f.subgradient(point);
  }
  est.gradient /= static_cast<double>(samples);
  est.value = mean;
  est.value_stddev = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1)) : 0.0;
  return est;
}

Vector smoothed_gradient(const ObjectiveOracle& f, const Vector& theta, double smoothing_radius,
                         std::size_t samples, const SeededStream& stream,
                         std::uint64_t iteration) {
  if (samples < 1 || !(smoothing_radius >= 0.0)) {
    throw std::invalid_argument("smoothed_gradient: need K >= 1 and gamma >= 0");
  }
  Vector g = Vector::Zero(theta.size());
  for (std::size_t k = 0; k < samples; ++k) {
    g += f.subgradient(theta + smoothing_radius * stream.gaussian_vector(iteration, k, theta.size()));
  }
  return g / static_cast<double>(samples);
}

SandwichReport smoothing_sandwich_check(const ObjectiveOracle& f, const Vector& theta,
                                        double smoothing_radius, double global_lipschitz,
                                        std::size_t samples, const SeededStream& stream) {
  if (!(smoothing_radius > 0.0)) {
    throw std::invalid_argument("smoothing_sandwich_check: gamma must be positive");
  }
  const auto est = smoothed_estimate(f, theta, smoothing_radius, samples, stream);
  SandwichReport r;
  r.estimate = est.value;
  r.half_width = 3.0 * est.value_stderr();
  r.lower = f.value(theta);
  r.upper = r.lower + smoothing_radius * global_lipschitz *
                          std::sqrt(static_cast<double>(theta.size()));
  r.holds = (r.lower - r.half_width <= r.estimate) && (r.estimate <= r.upper + r.half_width);
  return r;
}

}  // namespace nsdist
