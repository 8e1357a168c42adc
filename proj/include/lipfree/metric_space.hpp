#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lipfree/rational.hpp"

namespace lipfree {

using Index = Eigen::Index;

template <class Scalar>
using DistanceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A finite metric space with a distinguished base point, the setting in which
/// every free-space computation happens. Points are addressed by index; the
/// string identifiers are kept for I/O. Immutable after construction.
template <class Scalar>
class PointedMetricSpace {
 public:
  using scalar_type = Scalar;
  using Matrix = DistanceMatrix<Scalar>;

  PointedMetricSpace() = default;

  PointedMetricSpace(std::vector<std::string> points, Index basepoint, Matrix dist)
      : points_(std::move(points)), basepoint_(basepoint), dist_(std::move(dist)) {
    const auto n = static_cast<Index>(points_.size());
    if (dist_.rows() != n || dist_.cols() != n) {
      throw std::invalid_argument("distance table must be " + std::to_string(n) + "x" +
                                  std::to_string(n));
    }
    if (basepoint_ < 0 || basepoint_ >= n) {
      throw std::invalid_argument("basepoint is not a member of the point set");
    }
    for (Index i = 0; i < dist_.size(); ++i) ScalarTraits<Scalar>::canonicalize(dist_.data()[i]);
    for (Index i = 0; i < n; ++i) {
      if (!index_.emplace(points_[static_cast<std::size_t>(i)], i).second) {
        throw std::invalid_argument("duplicate point identifier '" +
                                    points_[static_cast<std::size_t>(i)] + "'");
      }
    }
  }

  [[nodiscard]] Index size() const { return static_cast<Index>(points_.size()); }
  [[nodiscard]] Index basepoint() const { return basepoint_; }
  [[nodiscard]] const Matrix& distances() const { return dist_; }
  [[nodiscard]] const Scalar& operator()(Index i, Index j) const { return dist_(i, j); }
  [[nodiscard]] const std::vector<std::string>& points() const { return points_; }
  [[nodiscard]] const std::string& name(Index i) const {
    return points_[static_cast<std::size_t>(i)];
  }

  /// Index of the point with identifier `id`; throws std::out_of_range if absent.
  [[nodiscard]] Index index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown point '" + id + "'");
    return it->second;
  }
  [[nodiscard]] bool contains(const std::string& id) const { return index_.count(id) > 0; }

  /// Restriction to `subset` (indices into this space). The base point must be included.
  [[nodiscard]] PointedMetricSpace subspace(const std::vector<Index>& subset) const {
    std::vector<std::string> names;
    names.reserve(subset.size());
    Index base = -1;
    const auto k = static_cast<Index>(subset.size());
    Matrix sub(k, k);
    for (Index a = 0; a < k; ++a) {
      const Index i = subset[static_cast<std::size_t>(a)];
      names.push_back(name(i));
      if (i == basepoint_) base = a;
      for (Index b = 0; b < k; ++b) sub(a, b) = dist_(i, subset[static_cast<std::size_t>(b)]);
    }
    if (base < 0) throw std::invalid_argument("subspace must contain the basepoint");
    return PointedMetricSpace(std::move(names), base, std::move(sub));
  }

 private:
  std::vector<std::string> points_;
  Index basepoint_ = 0;
  Matrix dist_;
  std::unordered_map<std::string, Index> index_;
};

using RationalSpace = PointedMetricSpace<Rational>;
using FloatSpace = PointedMetricSpace<double>;

/// One failed metric axiom. `kind` is one of "nonzero_diagonal", "asymmetric",
/// "nonpositive", "triangle"; `points` names the offending pair or triple
/// (for "triangle", d(p0,p2) > d(p0,p1) + d(p1,p2)).
struct Violation {
  std::string kind;
  std::vector<Index> points;
  std::string description;

  friend bool operator<(const Violation& a, const Violation& b) {
    return std::tie(a.kind, a.points) < std::tie(b.kind, b.points);
  }
};

namespace detail {
inline std::string describe(const std::string& kind, const std::vector<std::string>& names) {
  std::string out = kind + " (";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out + ")";
}

template <class Scalar>
bool exceeds(const Scalar& lhs, const Scalar& rhs, double rel_tol) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    (void)rel_tol;
    return lhs > rhs;
  } else {
    return lhs > rhs + rel_tol * std::max(1.0, std::abs(rhs));
  }
}
}  // namespace detail

/// Checks every metric axiom exhaustively (O(n^3) for the triangle inequality).
/// An empty result means the space is valid. Float spaces are compared with a
/// relative slack `rel_tol`; rational spaces exactly.
template <class Scalar>
std::vector<Violation> validate(const PointedMetricSpace<Scalar>& space, double rel_tol = 1e-12) {
  std::vector<Violation> out;
  const Index n = space.size();
  const auto& d = space.distances();
  auto add = [&](std::string kind, std::vector<Index> pts) {
    std::vector<std::string> names;
    for (Index p : pts) names.push_back(space.name(p));
    auto text = detail::describe(kind, names);
    out.push_back({std::move(kind), std::move(pts), std::move(text)});
  };
  const Scalar zero(0);
  for (Index i = 0; i < n; ++i) {
    if (d(i, i) != zero) add("nonzero_diagonal", {i});
    for (Index j = i + 1; j < n; ++j) {
      if (d(i, j) != d(j, i)) add("asymmetric", {i, j});
      if (!(d(i, j) > zero)) add("nonpositive", {i, j});
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      for (Index k = i + 1; k < n; ++k) {
        if (k == j) continue;
        const Scalar via = d(i, j) + d(j, k);
        if (detail::exceeds<Scalar>(d(i, k), via, rel_tol)) add("triangle", {i, j, k});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Snowflake transform d -> d^alpha for alpha in (0, 1]. Concavity of t^alpha
/// preserves the triangle inequality.
template <class Scalar>
FloatSpace snowflake(const PointedMetricSpace<Scalar>& space, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("snowflake exponent must lie in (0, 1]");
  }
  const Index n = space.size();
  FloatSpace::Matrix d(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double v = to_double(space(i, j));
      d(i, j) = alpha == 1.0 ? v : std::pow(v, alpha);
    }
  }
  return FloatSpace(space.points(), space.basepoint(), std::move(d));
}

/// Same points and distances, stored as binary floats.
template <class Scalar>
FloatSpace to_float_space(const PointedMetricSpace<Scalar>& space) {
  return snowflake(space, 1.0);
}

}  // namespace lipfree
