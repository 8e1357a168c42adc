#include "lipfree/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lipfree {

HyperboloidPoint::HyperboloidPoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("hyperboloid point needs n+1 >= 2 coordinates");
  const double last = coords_(coords_.size() - 1);
  if (!(last > 0.0)) throw std::invalid_argument("hyperboloid point must have x_{n+1} > 0");
  const double form = lorentz_form(coords_, coords_);
  if (std::abs(form + 1.0) > 1e-12 * std::max(1.0, last * last)) {
    throw std::invalid_argument("hyperboloid point violates <x,x> = -1 (got " +
                                std::to_string(form) + ")");
  }
}

HyperboloidPoint HyperboloidPoint::lift(const Eigen::VectorXd& v) {
  Eigen::VectorXd x(v.size() + 1);
  x.head(v.size()) = v;
  x(v.size()) = std::sqrt(1.0 + v.squaredNorm());
  return HyperboloidPoint(std::move(x));
}

double lorentz_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dimension mismatch in Lorentz form");
  const Index n = x.size() - 1;
  return x.head(n).dot(y.head(n)) - x(n) * y(n);
}

double hyperbolic_distance(const HyperboloidPoint& x, const HyperboloidPoint& y) {
  const double c = -lorentz_form(x.coords(), y.coords());
  return std::acosh(std::max(1.0, c));
}

FloatSpace greedy_net(const std::vector<HyperboloidPoint>& samples, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("net separation must be positive");
  if (samples.empty()) throw std::invalid_argument("greedy_net needs at least one sample");
  std::vector<std::size_t> kept{0};
  for (std::size_t s = 1; s < samples.size(); ++s) {
    bool covered = false;
    for (std::size_t k : kept) {
      if (hyperbolic_distance(samples[s], samples[k]) < eps) {
        covered = true;
        break;
      }
    }
    if (!covered) kept.push_back(s);
  }
  const auto n = static_cast<Index>(kept.size());
  FloatSpace::Matrix d(n, n);
  std::vector<std::string> names;
  for (Index i = 0; i < n; ++i) {
    names.push_back("s" + std::to_string(kept[static_cast<std::size_t>(i)]));
    d(i, i) = 0.0;
    for (Index j = 0; j < i; ++j) {
      d(i, j) = d(j, i) = hyperbolic_distance(samples[kept[static_cast<std::size_t>(i)]],
                                              samples[kept[static_cast<std::size_t>(j)]]);
    }
  }
  return FloatSpace(std::move(names), 0, std::move(d));
}

std::vector<HyperboloidPoint> random_hyperboloid_samples(Index n, std::size_t count,
                                                         double spread, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, spread);
  std::vector<HyperboloidPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd v(n);
    for (Index j = 0; j < n; ++j) v(j) = normal(rng);
    out.push_back(HyperboloidPoint::lift(v));
  }
  return out;
}

}  // namespace lipfree
