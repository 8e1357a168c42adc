#include "lipfree/quotient.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lipfree {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table) : table_(std::move(table)) {
  const int n = order();
  if (n == 0) throw std::invalid_argument("group table is empty");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("group table is not square");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int x : row) {
      if (x < 0 || x >= n) throw std::invalid_argument("group table entry out of range");
      if (seen[static_cast<std::size_t>(x)]++) {
        throw std::invalid_argument("group table row is not a permutation");
      }
    }
  }
  identity_ = -1;
  for (int e = 0; e < n && identity_ < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw std::invalid_argument("group table has no identity");
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
          throw std::invalid_argument("group table is not associative at (" + std::to_string(a) +
                                      ", " + std::to_string(b) + ", " + std::to_string(c) + ")");
        }
      }
    }
  }
  inverse_.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (mul(a, b) == identity_) inverse_[static_cast<std::size_t>(a)] = b;
    }
  }
}

bool FiniteGroup::is_subgroup(const std::vector<int>& H) const {
  if (H.empty()) return false;
  std::vector<char> in(static_cast<std::size_t>(order()), 0);
  for (int h : H) {
    if (h < 0 || h >= order()) return false;
    in[static_cast<std::size_t>(h)] = 1;
  }
  for (int a : H) {
    if (!in[static_cast<std::size_t>(inv(a))]) return false;
    for (int b : H) {
      if (!in[static_cast<std::size_t>(mul(a, b))]) return false;
    }
  }
  return true;
}

bool FiniteGroup::is_normal(const std::vector<int>& H) const {
  std::vector<char> in(static_cast<std::size_t>(order()), 0);
  for (int h : H) in[static_cast<std::size_t>(h)] = 1;
  for (int g = 0; g < order(); ++g) {
    for (int h : H) {
      if (!in[static_cast<std::size_t>(mul(mul(g, h), inv(g)))]) return false;
    }
  }
  return true;
}

FiniteGroup cyclic_group(int n) {
  if (n < 1) throw std::invalid_argument("cyclic group order must be >= 1");
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
  }
  return FiniteGroup(std::move(t));
}

FiniteGroup dihedral_group(int n) {
  if (n < 1) throw std::invalid_argument("dihedral group needs n >= 1");
  const int N = 2 * n;
  std::vector<std::vector<int>> t(static_cast<std::size_t>(N), std::vector<int>(static_cast<std::size_t>(N)));
  for (int x = 0; x < N; ++x) {
    const int a = x % n, e = x / n;
    for (int y = 0; y < N; ++y) {
      const int b = y % n, f = y / n;
      // r^a s^e r^b s^f = r^(a + (-1)^e b) s^(e + f)
      const int k = ((a + (e ? -b : b)) % n + n) % n;
      t[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = k + n * ((e + f) % 2);
    }
  }
  return FiniteGroup(std::move(t));
}

FiniteGroup symmetric_group(int n) {
  if (n < 1 || n > 6) throw std::invalid_argument("symmetric group supported for 1 <= n <= 6");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> t(perms.size(), std::vector<int>(perms.size()));
  std::vector<int> c(static_cast<std::size_t>(n));
  for (std::size_t a = 0; a < perms.size(); ++a) {
    for (std::size_t b = 0; b < perms.size(); ++b) {
      // (ab)(i) = a(b(i))
      for (int i = 0; i < n; ++i) {
        c[static_cast<std::size_t>(i)] =
            perms[a][static_cast<std::size_t>(perms[b][static_cast<std::size_t>(i)])];
      }
      t[a][b] = index.at(c);
    }
  }
  return FiniteGroup(std::move(t));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int na = a.order(), nb = b.order();
  std::vector<std::vector<int>> t(static_cast<std::size_t>(na * nb),
                                  std::vector<int>(static_cast<std::size_t>(na * nb)));
  for (int x = 0; x < na * nb; ++x) {
    for (int y = 0; y < na * nb; ++y) {
      t[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
    }
  }
  return FiniteGroup(std::move(t));
}

FiniteMetricGroup::FiniteMetricGroup(FiniteGroup group, DistanceMatrix<Rational> dist)
    : group_(std::move(group)), dist_(std::move(dist)) {
  const int n = group_.order();
  std::vector<std::string> names;
  for (int g = 0; g < n; ++g) names.push_back(std::to_string(g));
  space_ = std::make_shared<const RationalSpace>(std::move(names), group_.identity(), dist_);
  auto violations = validate(*space_);
  if (!violations.empty()) {
    throw std::invalid_argument("group distance is not a metric: " + violations.front().description);
  }
  for (int h = 0; h < n; ++h) {
    for (int g = 0; g < n; ++g) {
      for (int f = g + 1; f < n; ++f) {
        if (dist_(group_.mul(h, g), group_.mul(h, f)) != dist_(g, f)) {
          throw std::invalid_argument("metric is not left-invariant: d(" + std::to_string(g) + ", " +
                                      std::to_string(f) + ") changes under left translation by " +
                                      std::to_string(h));
        }
      }
    }
  }
}

FiniteMetricGroup FiniteMetricGroup::word_metric(FiniteGroup group, const std::vector<int>& generators) {
  const int n = group.order();
  for (int s : generators) {
    if (s < 0 || s >= n) throw std::invalid_argument("generator out of range");
    if (s == group.identity()) throw std::invalid_argument("the identity is not a generator");
    if (std::find(generators.begin(), generators.end(), group.inv(s)) == generators.end()) {
      throw std::invalid_argument("generating set is not symmetric");
    }
  }
  // |g| by breadth-first search from the identity, then d(g, f) = |g^-1 f|.
  std::vector<int> len(static_cast<std::size_t>(n), -1);
  std::deque<int> queue{group.identity()};
  len[static_cast<std::size_t>(group.identity())] = 0;
  while (!queue.empty()) {
    const int g = queue.front();
    queue.pop_front();
    for (int s : generators) {
      const int gs = group.mul(g, s);
      if (len[static_cast<std::size_t>(gs)] < 0) {
        len[static_cast<std::size_t>(gs)] = len[static_cast<std::size_t>(g)] + 1;
        queue.push_back(gs);
      }
    }
  }
  if (std::find(len.begin(), len.end(), -1) != len.end()) {
    throw std::invalid_argument("generators do not generate the group");
  }
  DistanceMatrix<Rational> d(n, n);
  for (int g = 0; g < n; ++g) {
    for (int f = 0; f < n; ++f) d(g, f) = len[static_cast<std::size_t>(group.mul(group.inv(g), f))];
  }
  return FiniteMetricGroup(std::move(group), std::move(d));
}

std::vector<int> FiniteMetricGroup::all_elements() const {
  std::vector<int> v(static_cast<std::size_t>(group_.order()));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

bool FiniteMetricGroup::right_invariant_under(const std::vector<int>& H) const {
  const int n = group_.order();
  for (int h : H) {
    for (int g = 0; g < n; ++g) {
      for (int f = g + 1; f < n; ++f) {
        if (dist_(group_.mul(g, h), group_.mul(f, h)) != dist_(g, f)) return false;
      }
    }
  }
  return true;
}

FiniteMetricGroup biinvariant_majorant(const FiniteMetricGroup& G) {
  const auto& grp = G.group();
  const int n = grp.order();
  DistanceMatrix<Rational> D(n, n);
  for (int g = 0; g < n; ++g) {
    for (int f = 0; f < n; ++f) {
      Rational best = 0;
      for (int h = 0; h < n; ++h) {
        const Rational& v = G.d(grp.mul(g, h), grp.mul(f, h));
        if (v > best) best = v;
      }
      D(g, f) = best;
    }
  }
  return FiniteMetricGroup(grp, std::move(D));
}

std::vector<std::string> ProjectionHypotheses::holding() const {
  std::vector<std::string> out;
  if (left_invariant_normal) out.emplace_back("i");
  if (right_invariant_normal) out.emplace_back("ii");
  if (left_and_right_H_invariant) out.emplace_back("iii");
  return out;
}

QuotientStructure build_quotient(const FiniteMetricGroup& G, std::vector<int> H) {
  const auto& grp = G.group();
  H = sorted_unique(std::move(H));
  if (!grp.is_subgroup(H)) throw std::invalid_argument("H is not a subgroup");
  const int n = grp.order();
  QuotientStructure q;
  q.subgroup = H;
  q.normal = grp.is_normal(H);
  // d is left-invariant by construction of FiniteMetricGroup.
  q.hypotheses.left_invariant_normal = q.normal;
  q.hypotheses.right_invariant_normal = q.normal && G.right_invariant();
  q.hypotheses.left_and_right_H_invariant = G.right_invariant_under(H);

  q.coset_of.assign(static_cast<std::size_t>(n), -1);
  for (int g = 0; g < n; ++g) {
    if (q.coset_of[static_cast<std::size_t>(g)] >= 0) continue;
    std::vector<int> coset;
    for (int h : H) coset.push_back(grp.mul(g, h));
    std::sort(coset.begin(), coset.end());
    for (int x : coset) q.coset_of[static_cast<std::size_t>(x)] = static_cast<int>(q.cosets.size());
    q.cosets.push_back(std::move(coset));
  }
  // The coset containing the identity comes first so it can serve as base point.
  const int base = q.coset_of[static_cast<std::size_t>(grp.identity())];
  if (base != 0) {
    std::swap(q.cosets[0], q.cosets[static_cast<std::size_t>(base)]);
    for (std::size_t c = 0; c < q.cosets.size(); ++c) {
      for (int x : q.cosets[c]) q.coset_of[static_cast<std::size_t>(x)] = static_cast<int>(c);
    }
  }
  const auto k = static_cast<Index>(q.cosets.size());
  q.D.resize(k, k);
  std::vector<std::string> names;
  for (Index a = 0; a < k; ++a) {
    names.push_back("[" + std::to_string(q.cosets[static_cast<std::size_t>(a)].front()) + "]");
    for (Index b = 0; b < k; ++b) {
      Rational best;
      bool first = true;
      for (int x : q.cosets[static_cast<std::size_t>(a)]) {
        for (int y : q.cosets[static_cast<std::size_t>(b)]) {
          if (first || G.d(x, y) < best) {
            best = G.d(x, y);
            first = false;
          }
        }
      }
      q.D(a, b) = best;
    }
  }
  q.space = std::make_shared<const RationalSpace>(std::move(names), 0, q.D);
  q.metric_violations = validate(*q.space);
  return q;
}

std::string side_name(TranslationSide side) {
  return side == TranslationSide::right ? "right" : "left";
}

AveragingProjection::AveragingProjection(const FiniteMetricGroup& G, std::vector<int> H,
                                         TranslationSide side)
    : space_(G.space()), side_(side) {
  const auto& grp = G.group();
  H = sorted_unique(std::move(H));
  if (!grp.is_subgroup(H)) throw std::invalid_argument("H is not a subgroup");
  const Rational w(1, static_cast<long>(H.size()));
  images_.reserve(static_cast<std::size_t>(grp.order()));
  for (int g = 0; g < grp.order(); ++g) {
    RationalMolecule m(space_);
    for (int h : H) {
      m.add(side == TranslationSide::right ? grp.mul(g, h) : grp.mul(h, g), w);
      m.add(h, Rational(-w));
    }
    images_.push_back(std::move(m));
  }
}

RationalMolecule AveragingProjection::apply(const RationalMolecule& m) const {
  if (m.space() != space_) throw std::invalid_argument("molecule is not over this group");
  RationalMolecule out(space_);
  for (const auto& [g, a] : m.coeffs()) out += a * images_[static_cast<std::size_t>(g)];
  return out;
}

namespace {

std::string failed_invariances(const FiniteMetricGroup& G, const std::vector<int>& H) {
  std::string msg = "no projection hypothesis holds: H is not normal";
  if (!G.right_invariant_under(H)) msg += ", and d is not right H-invariant";
  return msg;
}

TranslationSide choose_side(const ProjectionHypotheses& hyp) {
  if (hyp.right_invariant_normal || hyp.left_and_right_H_invariant) return TranslationSide::right;
  return TranslationSide::left;
}

FormulaAudit audit_formula(const FiniteMetricGroup& G, const QuotientStructure& q,
                           const AveragingProjection& P) {
  FormulaAudit out;
  out.side = P.side();
  const auto& grp = G.group();
  const int n = grp.order();
  for (int g = 0; g < n; ++g) {
    if (!(P.apply(P.image(g)) == P.image(g))) out.idempotent = false;
    for (int h : q.subgroup) {
      if (!(P.image(grp.mul(g, h)) == P.image(g))) out.coset_constant = false;
    }
  }
  out.lip = 0;
  for (int g = 0; g < n; ++g) {
    for (int f = g + 1; f < n; ++f) {
      const Rational r = kr_norm(P.image(g) - P.image(f)).value / G.d(g, f);
      if (r > out.lip) out.lip = r;
    }
  }
  const bool whole = q.cosets.size() == 1;
  out.lip_ok = whole ? out.lip == 0 : out.lip == 1;
  const auto k = q.cosets.size();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const int ga = q.cosets[a].front(), gb = q.cosets[b].front();
      const Rational v = kr_norm(P.image(ga) - P.image(gb)).value;
      if (v != q.D(static_cast<Index>(a), static_cast<Index>(b))) {
        out.isometry_ok = false;
        ++out.isometry_failures;
      }
    }
  }
  return out;
}

}  // namespace

AveragingProjection averaging_projection(const FiniteMetricGroup& G, const std::vector<int>& H) {
  const auto q = build_quotient(G, H);
  if (!q.hypotheses.any()) throw std::invalid_argument(failed_invariances(G, q.subgroup));
  return AveragingProjection(G, q.subgroup, choose_side(q.hypotheses));
}

ProjectionAudit audit_projection(const FiniteMetricGroup& G, const std::vector<int>& H) {
  const auto q = build_quotient(G, H);
  if (!q.hypotheses.any()) throw std::invalid_argument(failed_invariances(G, q.subgroup));
  ProjectionAudit out;
  out.group_order = static_cast<std::size_t>(G.group().order());
  out.subgroup_order = q.subgroup.size();
  out.coset_count = q.cosets.size();
  out.normal = q.normal;
  out.hypotheses = q.hypotheses;
  out.metric_violations = q.metric_violations;
  out.quotient_is_metric = q.metric_violations.empty();
  const auto side = choose_side(q.hypotheses);
  const AveragingProjection P(G, q.subgroup, side);
  out.primary = audit_formula(G, q, P);
  if (q.hypotheses.right_invariant_normal) {
    const AveragingProjection Q(G, q.subgroup, TranslationSide::left);
    out.alternate = audit_formula(G, q, Q);
    bool same = true;
    for (int g = 0; g < G.group().order() && same; ++g) same = P.image(g) == Q.image(g);
    out.formulas_coincide = same;
  }
  return out;
}

TowerReport tower_convergence(const FiniteMetricGroup& G, const std::vector<std::vector<int>>& chain,
                              const RationalMolecule& m) {
  if (chain.empty()) throw std::invalid_argument("subgroup chain is empty");
  if (m.space() != G.space()) throw std::invalid_argument("molecule is not over this group");
  const auto& grp = G.group();
  std::vector<std::vector<int>> levels;
  for (const auto& H : chain) levels.push_back(sorted_unique(H));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!grp.is_subgroup(levels[i])) {
      throw std::invalid_argument("chain entry " + std::to_string(i) + " is not a subgroup");
    }
    if (i > 0) {
      const bool contained = std::includes(levels[i - 1].begin(), levels[i - 1].end(),
                                           levels[i].begin(), levels[i].end());
      if (!contained || levels[i].size() == levels[i - 1].size()) {
        throw std::invalid_argument("subgroup chain is not strictly decreasing at entry " +
                                    std::to_string(i));
      }
    }
  }
  if (levels.back() != std::vector<int>{grp.identity()}) {
    throw std::invalid_argument("subgroup chain must end at the trivial subgroup");
  }
  const auto D = biinvariant_majorant(G);
  const Rational mass = m.l1_mass();
  TowerReport out;
  for (const auto& H : levels) {
    TowerLevel lvl;
    lvl.subgroup_order = H.size();
    lvl.eps = 0;
    for (int a : H) {
      for (int b : H) {
        if (D.d(a, b) > lvl.eps) lvl.eps = D.d(a, b);
      }
    }
    const auto P = averaging_projection(G, H);
    lvl.error = kr_norm(m - P.apply(m)).value;
    lvl.bound = 2 * mass * lvl.eps;
    lvl.ok = lvl.error <= lvl.bound;
    out.all_ok = out.all_ok && lvl.ok;
    out.levels.push_back(std::move(lvl));
  }
  out.final_error_zero = out.levels.back().error == 0;
  return out;
}

}  // namespace lipfree
