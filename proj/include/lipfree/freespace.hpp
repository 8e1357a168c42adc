#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lipfree/errors.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/transport.hpp"

namespace lipfree {

/// Finitely supported element sum_x a_x delta(x) of the free space over a
/// pointed metric space. The base point never appears in the support since
/// delta(0) = 0; zero coefficients are dropped. Coefficients share the
/// space's scalar type.
template <class Scalar>
class Molecule {
 public:
  using Space = PointedMetricSpace<Scalar>;
  using Coeffs = std::map<Index, Scalar>;

  Molecule() = default;
  explicit Molecule(std::shared_ptr<const Space> space) : space_(std::move(space)) {}
  Molecule(std::shared_ptr<const Space> space, const Coeffs& coeffs) : space_(std::move(space)) {
    for (const auto& [p, a] : coeffs) add(p, a);
  }

  /// delta(x) (the zero molecule when x is the base point).
  static Molecule delta(std::shared_ptr<const Space> space, Index x) {
    Molecule m(std::move(space));
    m.add(x, Scalar(1));
    return m;
  }

  void add(Index point, const Scalar& coeff) {
    if (!space_) throw std::logic_error("molecule has no space");
    if (point < 0 || point >= space_->size()) throw std::out_of_range("molecule point out of range");
    if (point == space_->basepoint()) return;
    Scalar c = coeff;
    ScalarTraits<Scalar>::canonicalize(c);
    auto [it, inserted] = coeffs_.try_emplace(point, c);
    if (!inserted) it->second += c;
    if (it->second == Scalar(0)) coeffs_.erase(it);
  }

  [[nodiscard]] const Coeffs& coeffs() const { return coeffs_; }
  [[nodiscard]] const std::shared_ptr<const Space>& space() const { return space_; }
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] Scalar coeff(Index point) const {
    auto it = coeffs_.find(point);
    return it == coeffs_.end() ? Scalar(0) : it->second;
  }
  /// sum |a_x|
  [[nodiscard]] Scalar l1_mass() const {
    Scalar s(0);
    for (const auto& [p, a] : coeffs_) s += a < Scalar(0) ? Scalar(-a) : a;
    return s;
  }

  Molecule& operator+=(const Molecule& other) {
    check_same_space(other);
    for (const auto& [p, a] : other.coeffs_) add(p, a);
    return *this;
  }
  Molecule& operator-=(const Molecule& other) {
    check_same_space(other);
    for (const auto& [p, a] : other.coeffs_) add(p, Scalar(-a));
    return *this;
  }
  Molecule& operator*=(Scalar c) {
    ScalarTraits<Scalar>::canonicalize(c);
    if (c == Scalar(0)) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [p, a] : coeffs_) a *= c;
    return *this;
  }
  friend Molecule operator+(Molecule a, const Molecule& b) { return a += b; }
  friend Molecule operator-(Molecule a, const Molecule& b) { return a -= b; }
  friend Molecule operator*(const Scalar& c, Molecule a) { return a *= c; }
  friend bool operator==(const Molecule& a, const Molecule& b) {
    return a.space_ == b.space_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void check_same_space(const Molecule& other) const {
    if (space_ != other.space_) throw std::invalid_argument("molecules live over different spaces");
  }

  std::shared_ptr<const Space> space_;
  Coeffs coeffs_;
};

using RationalMolecule = Molecule<Rational>;
using FloatMolecule = Molecule<double>;

/// Primal/dual proof of a free-space norm value. `flow` moves mass between
/// points of the space (the base point may appear at either end); `witness`
/// is a 1-Lipschitz function vanishing at the base point, defined on the
/// support of the molecule plus the base point.
template <class Scalar>
struct TransportCertificate {
  struct Flow {
    Index source;
    Index sink;
    Scalar mass;
  };
  Scalar value{0};
  Scalar primal{0};  // sum of mass * distance
  Scalar dual{0};    // sum_x a_x * witness(x)
  Scalar gap{0};     // |primal - dual|; exactly zero for rational instances
  std::vector<Flow> flow;
  std::map<Index, Scalar> witness;
  std::size_t pivots = 0;
};

/// Outcome of checking a certificate against its molecule.
struct CertificateCheck {
  bool mass_conserved = true;
  bool witness_lipschitz = true;
  bool witness_vanishes_at_base = true;
  bool values_agree = true;
  [[nodiscard]] bool ok() const {
    return mass_conserved && witness_lipschitz && witness_vanishes_at_base && values_agree;
  }
};

namespace detail {

template <class Scalar>
TransportCertificate<Scalar> solve_free_norm(const Molecule<Scalar>& m) {
  TransportCertificate<Scalar> cert;
  const auto& space = *m.space();
  const Index base = space.basepoint();
  if (m.is_zero()) {
    cert.witness[base] = Scalar(0);
    return cert;
  }
  // Node balances: the molecule's coefficients plus the base point absorbing the
  // total, so that the transport problem is balanced.
  Scalar total(0);
  std::vector<std::pair<Index, Scalar>> nodes;
  for (const auto& [p, a] : m.coeffs()) {
    nodes.emplace_back(p, a);
    total += a;
  }
  nodes.emplace_back(base, Scalar(-total));
  std::vector<Index> sources, sinks;
  std::vector<Scalar> supply, demand;
  for (const auto& [p, b] : nodes) {
    if (b > Scalar(0)) {
      sources.push_back(p);
      supply.push_back(b);
    } else if (b < Scalar(0)) {
      sinks.push_back(p);
      demand.push_back(Scalar(-b));
    }
  }
  const auto ns = static_cast<Index>(sources.size());
  const auto nt = static_cast<Index>(sinks.size());
  DistanceMatrix<Scalar> cost(ns, nt);
  for (Index i = 0; i < ns; ++i) {
    for (Index j = 0; j < nt; ++j) {
      cost(i, j) = space(sources[static_cast<std::size_t>(i)], sinks[static_cast<std::size_t>(j)]);
    }
  }
  auto sol = solve_transport<Scalar>(cost, supply, demand);
  cert.pivots = sol.pivots;
  cert.primal = sol.cost;
  for (const auto& c : sol.basis) {
    if (c.mass == Scalar(0)) continue;
    cert.flow.push_back(
        {sources[static_cast<std::size_t>(c.source)], sinks[static_cast<std::size_t>(c.sink)], c.mass});
  }

  // Dual witness: f(z) = min_j (g_j + d(z, sink_j)) with g_j = -v_j is
  // 1-Lipschitz, dominates u on sources and is dominated by g on sinks, hence
  // optimal; re-centred so that f(base) = 0.
  auto mcshane = [&](Index z) {
    Scalar best = sol.v.empty() ? Scalar(0) : Scalar(-sol.v[0] + space(z, sinks[0]));
    for (std::size_t j = 1; j < sinks.size(); ++j) {
      const Scalar cand = -sol.v[j] + space(z, sinks[j]);
      if (cand < best) best = cand;
    }
    return best;
  };
  const Scalar at_base = mcshane(base);
  cert.witness[base] = Scalar(0);
  for (const auto& [p, a] : m.coeffs()) cert.witness[p] = mcshane(p) - at_base;
  for (const auto& [p, a] : m.coeffs()) cert.dual += a * cert.witness[p];
  return cert;
}

}  // namespace detail

/// Exact free-space (Kantorovich-Rubinstein) norm of a rational molecule, with
/// the optimal flow and an optimal 1-Lipschitz witness attached.
TransportCertificate<Rational> kr_norm(const RationalMolecule& m);

/// Floating-point norm: primal and dual are computed independently and must
/// agree within `tol`; the reported value is their midpoint.
/// Throws ConvergenceError otherwise.
TransportCertificate<double> kr_norm_float(const FloatMolecule& m, double tol = 1e-9);

/// Verifies conservation, the Lipschitz and base-point conditions of the
/// witness, and primal = dual (within `tol` for floats, exactly for rationals).
template <class Scalar>
CertificateCheck check_certificate(const Molecule<Scalar>& m, const TransportCertificate<Scalar>& c,
                                   double tol = 1e-9) {
  CertificateCheck out;
  const auto& space = *m.space();
  auto close = [&](const Scalar& a, const Scalar& b) {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      return a == b;
    } else {
      return std::abs(a - b) <= tol * std::max(1.0, std::abs(a) + std::abs(b));
    }
  };
  std::map<Index, Scalar> net;
  for (const auto& f : c.flow) {
    if (f.mass < Scalar(0)) out.mass_conserved = false;
    net[f.source] += f.mass;
    net[f.sink] -= f.mass;
  }
  for (const auto& [p, a] : m.coeffs()) {
    if (!close(net[p], a)) out.mass_conserved = false;
  }
  for (const auto& [p, b] : net) {
    if (p != space.basepoint() && m.coeffs().count(p) == 0 && !close(b, Scalar(0))) {
      out.mass_conserved = false;
    }
  }
  auto base_it = c.witness.find(space.basepoint());
  out.witness_vanishes_at_base = base_it != c.witness.end() && base_it->second == Scalar(0);
  for (const auto& [p, fp] : c.witness) {
    for (const auto& [q, fq] : c.witness) {
      if (q <= p) continue;
      const Scalar diff = fp > fq ? Scalar(fp - fq) : Scalar(fq - fp);
      if (!(diff <= space(p, q)) && !close(diff, space(p, q))) out.witness_lipschitz = false;
    }
  }
  Scalar primal(0), dual(0);
  for (const auto& f : c.flow) primal += f.mass * space(f.source, f.sink);
  for (const auto& [p, a] : m.coeffs()) {
    auto it = c.witness.find(p);
    if (it == c.witness.end()) {
      out.values_agree = false;
      continue;
    }
    dual += a * it->second;
  }
  out.values_agree = out.values_agree && close(primal, dual) && close(primal, c.value);
  return out;
}

/// Independent oracle: maximises sum a_x f(x) over 1-Lipschitz f with f(0) = 0
/// by enumeration. Every vertex of that polytope has a spanning tree of tight
/// constraints rooted at the base point. Such trees are grown edge by edge
/// from the base point, pruning infeasible partial assignments.
/// Restricted to supports of at most 6 points.
Rational brute_force_norm(const RationalMolecule& m);

/// Smallest L with d(phi x, phi y) <= L d(x, y) for all x != y in `domain`.
/// `map[i]` is the image (an index into `codomain`) of domain point i.
template <class Scalar>
Scalar lip_constant(const std::vector<Index>& map, const PointedMetricSpace<Scalar>& domain,
                    const PointedMetricSpace<Scalar>& codomain) {
  if (static_cast<Index>(map.size()) != domain.size()) {
    throw std::invalid_argument("map must be total on the domain");
  }
  Scalar best(0);
  for (Index x = 0; x < domain.size(); ++x) {
    for (Index y = x + 1; y < domain.size(); ++y) {
      const Scalar ratio = codomain(map[static_cast<std::size_t>(x)], map[static_cast<std::size_t>(y)]) /
                           domain(x, y);
      if (ratio > best) best = ratio;
    }
  }
  return best;
}

/// Push-forward of a molecule along a base-point preserving map of point sets.
template <class Scalar>
Molecule<Scalar> push_forward(const Molecule<Scalar>& m, const std::vector<Index>& map,
                              std::shared_ptr<const PointedMetricSpace<Scalar>> codomain) {
  Molecule<Scalar> out(std::move(codomain));
  for (const auto& [p, a] : m.coeffs()) out.add(map[static_cast<std::size_t>(p)], a);
  return out;
}

}  // namespace lipfree
