#pragma once

#include <Eigen/Core>
#include <random>
#include <vector>

#include "lipfree/metric_space.hpp"

namespace lipfree {

/// Point of the hyperboloid model {x in R^{n+1} : <x,x> = -1, x_{n+1} > 0}
/// with the Lorentzian form <x,y> = sum_{i<=n} x_i y_i - x_{n+1} y_{n+1}.
class HyperboloidPoint {
 public:
  /// Validates the hyperboloid constraint to 1e-12 relative to x_{n+1}^2.
  explicit HyperboloidPoint(Eigen::VectorXd coords);

  /// Lifts v in R^n to (v, sqrt(1 + |v|^2)).
  static HyperboloidPoint lift(const Eigen::VectorXd& v);

  [[nodiscard]] const Eigen::VectorXd& coords() const { return coords_; }
  [[nodiscard]] Index dimension() const { return coords_.size() - 1; }

 private:
  Eigen::VectorXd coords_;
};

double lorentz_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// arccosh(-<x,y>), with the argument clamped to [1, inf).
double hyperbolic_distance(const HyperboloidPoint& x, const HyperboloidPoint& y);

/// Greedy epsilon-net in sample order: a sample is kept iff it lies at distance
/// >= eps from every previously kept point. The first sample is the base point.
FloatSpace greedy_net(const std::vector<HyperboloidPoint>& samples, double eps);

/// Samples lifted from a centred Gaussian in R^n with standard deviation `spread`.
std::vector<HyperboloidPoint> random_hyperboloid_samples(Index n, std::size_t count,
                                                         double spread, std::mt19937_64& rng);

}  // namespace lipfree
