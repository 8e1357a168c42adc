#include "lipfree/freespace.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lipfree {

TransportCertificate<Rational> kr_norm(const RationalMolecule& m) {
  auto cert = detail::solve_free_norm(m);
  if (cert.primal != cert.dual) {
    throw std::logic_error("exact transport certificate failed strong duality");
  }
  cert.value = cert.primal;
  cert.gap = 0;
  return cert;
}

TransportCertificate<double> kr_norm_float(const FloatMolecule& m, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  auto cert = detail::solve_free_norm(m);
  // The witness must be 1-Lipschitz for the dual value to be a lower bound;
  // shrink it by its worst Lipschitz ratio if rounding pushed it above 1.
  const auto& space = *m.space();
  double worst = 1.0;
  for (const auto& [p, fp] : cert.witness) {
    for (const auto& [q, fq] : cert.witness) {
      if (q <= p) continue;
      worst = std::max(worst, std::abs(fp - fq) / space(p, q));
    }
  }
  if (worst > 1.0) {
    for (auto& [p, f] : cert.witness) f /= worst;
    cert.dual /= worst;
  }
  cert.gap = std::abs(cert.primal - cert.dual);
  cert.value = 0.5 * (cert.primal + cert.dual);
  if (cert.gap > tol) {
    throw ConvergenceError("free-space norm: primal/dual gap " + std::to_string(cert.gap) +
                           " exceeds tolerance " + std::to_string(tol));
  }
  return cert;
}

namespace {

constexpr std::size_t kBruteForceMaxSupport = 6;

}  // namespace

Rational brute_force_norm(const RationalMolecule& m) {
  const auto& space = *m.space();
  const std::size_t k = m.coeffs().size();
  if (k > kBruteForceMaxSupport) {
    throw ResourceError("brute_force_norm supports at most 6 support points");
  }
  if (k == 0) return 0;
  std::vector<Index> pts;
  std::vector<Rational> coef;
  for (const auto& [p, a] : m.coeffs()) {
    pts.push_back(p);
    coef.push_back(a);
  }
  const Index base = space.basepoint();

  // Vertices of the dual polytope {f : f(0) = 0, |f(x) - f(y)| <= d(x, y)}.
  // A vertex has k linearly independent tight constraints; as edges on the
  // support plus the base point they contain a spanning tree. Grow partial
  // assignments from the base point one tight edge at a time, keeping only
  // feasible ones, and deduplicate per level.
  using State = std::pair<unsigned, std::vector<Rational>>;  // assigned mask, values
  std::set<State> level{{0u, std::vector<Rational>(k)}};
  auto feasible = [&](const State& st, std::size_t i, const Rational& v) {
    if (abs(v) > space(pts[i], base)) return false;
    for (std::size_t t = 0; t < k; ++t) {
      if ((st.first >> t & 1u) && abs(Rational(v - st.second[t])) > space(pts[i], pts[t])) return false;
    }
    return true;
  };
  for (std::size_t depth = 0; depth < k; ++depth) {
    std::set<State> next;
    for (const auto& st : level) {
      for (std::size_t i = 0; i < k; ++i) {
        if (st.first >> i & 1u) continue;
        // tight against the base point, or against an assigned point
        std::vector<Rational> tries{space(pts[i], base), -space(pts[i], base)};
        for (std::size_t j = 0; j < k; ++j) {
          if (!(st.first >> j & 1u)) continue;
          tries.push_back(st.second[j] + space(pts[i], pts[j]));
          tries.push_back(st.second[j] - space(pts[i], pts[j]));
        }
        for (auto& v : tries) {
          v.canonicalize();
          if (!feasible(st, i, v)) continue;
          State grown = st;
          grown.first |= 1u << i;
          grown.second[i] = v;
          next.insert(std::move(grown));
        }
      }
    }
    level = std::move(next);
  }

  Rational best;
  bool found = false;
  for (const auto& st : level) {
    Rational val = 0;
    for (std::size_t t = 0; t < k; ++t) val += coef[t] * st.second[t];
    if (!found || val > best) {
      best = val;
      found = true;
    }
  }
  if (!found) throw std::logic_error("brute_force_norm found no feasible vertex");
  return best;
}

}  // namespace lipfree
