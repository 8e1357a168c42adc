#include "lipfree/groups.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "lipfree/errors.hpp"
#include "lipfree/parallel.hpp"

namespace lipfree {

std::string family_name(GroupFamily family) {
  switch (family) {
    case GroupFamily::free_abelian: return "free_abelian";
    case GroupFamily::free: return "free";
    case GroupFamily::free_product_cyclic: return "free_product_cyclic";
    case GroupFamily::finite_table: return "finite_table";
  }
  return "unknown";
}

ElementRep Group::evaluate(const Word& w) const {
  ElementRep g = identity();
  for (int s : w) g = multiply(g, generator(s));
  return g;
}

std::string Group::render(const Word& w) const {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += generator_name(w[i]);
  }
  return out;
}

void Group::set_generators(std::vector<ElementRep> gens, std::vector<std::string> names,
                           const std::vector<std::string>& order) {
  if (gens.empty()) throw std::invalid_argument("generating set is empty");
  if (!order.empty()) {
    if (order.size() != names.size()) {
      throw std::invalid_argument("generator_order must list all " + std::to_string(names.size()) +
                                  " generators");
    }
    std::vector<ElementRep> g2;
    std::vector<std::string> n2;
    std::set<std::string> seen;
    for (const auto& name : order) {
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw std::invalid_argument("unknown generator '" + name + "'");
      if (!seen.insert(name).second) throw std::invalid_argument("generator '" + name + "' repeated");
      const auto pos = static_cast<std::size_t>(it - names.begin());
      g2.push_back(gens[pos]);
      n2.push_back(names[pos]);
    }
    gens = std::move(g2);
    names = std::move(n2);
  }
  generators_ = std::move(gens);
  names_ = std::move(names);
  inverse_of_.assign(generators_.size(), -1);
  for (std::size_t s = 0; s < generators_.size(); ++s) {
    const auto inv = inverse(generators_[s]);
    for (std::size_t t = 0; t < generators_.size(); ++t) {
      if (generators_[t] == inv) inverse_of_[s] = static_cast<int>(t);
    }
    if (inverse_of_[s] < 0) {
      throw std::invalid_argument("generating set is not symmetric: inverse of '" + names_[s] +
                                  "' missing");
    }
    if (generators_[s] == identity()) throw std::invalid_argument("identity used as a generator");
  }
}

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

/// Z^rank + Z_{t1} + ... with generators e_i, e_i^{-1} and every nonzero
/// element of the torsion part (f1, f2, ... in lexicographic order).
class FreeAbelianGroup final : public Group {
 public:
  FreeAbelianGroup(int rank, std::vector<int> torsion, const std::vector<std::string>& order)
      : rank_(rank), torsion_(std::move(torsion)) {
    if (rank_ < 0) throw std::invalid_argument("rank must be nonnegative");
    for (int t : torsion_) {
      if (t < 2) throw std::invalid_argument("torsion orders must be >= 2");
    }
    std::vector<ElementRep> gens;
    std::vector<std::string> names;
    const std::size_t width = static_cast<std::size_t>(rank_) + torsion_.size();
    for (int i = 0; i < rank_; ++i) {
      ElementRep e(width, 0);
      e[static_cast<std::size_t>(i)] = 1;
      gens.push_back(e);
      names.push_back("e" + std::to_string(i + 1));
      e[static_cast<std::size_t>(i)] = -1;
      gens.push_back(e);
      names.push_back("e" + std::to_string(i + 1) + "inv");
    }
    // Enumerate torsion tuples lexicographically, skipping zero.
    std::vector<int> t(torsion_.size(), 0);
    int count = 0;
    auto advance = [&]() {
      for (std::size_t k = t.size(); k-- > 0;) {
        if (++t[k] < torsion_[k]) return true;
        t[k] = 0;
      }
      return false;
    };
    while (!torsion_.empty() && advance()) {
      ElementRep e(width, 0);
      std::copy(t.begin(), t.end(), e.begin() + rank_);
      gens.push_back(e);
      names.push_back("f" + std::to_string(++count));
    }
    set_generators(std::move(gens), std::move(names), order);
  }

  ElementRep identity() const override {
    return ElementRep(static_cast<std::size_t>(rank_) + torsion_.size(), 0);
  }
  ElementRep multiply(const ElementRep& a, const ElementRep& b) const override {
    ElementRep c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    for (std::size_t k = 0; k < torsion_.size(); ++k) {
      auto& x = c[static_cast<std::size_t>(rank_) + k];
      x = mod(x, torsion_[k]);
    }
    return c;
  }
  ElementRep inverse(const ElementRep& a) const override {
    ElementRep c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = -a[i];
    for (std::size_t k = 0; k < torsion_.size(); ++k) {
      auto& x = c[static_cast<std::size_t>(rank_) + k];
      x = mod(x, torsion_[k]);
    }
    return c;
  }
  int word_length(const ElementRep& a) const override {
    int len = 0;
    for (int i = 0; i < rank_; ++i) len += std::abs(a[static_cast<std::size_t>(i)]);
    bool torsion_part = false;
    for (std::size_t k = 0; k < torsion_.size(); ++k) {
      torsion_part = torsion_part || a[static_cast<std::size_t>(rank_) + k] != 0;
    }
    return len + (torsion_part ? 1 : 0);
  }

 private:
  int rank_;
  std::vector<int> torsion_;
};

/// Free group on a1..an; elements are freely reduced words over letters
/// 2i (a_{i+1}) and 2i+1 (a_{i+1}^{-1}).
class FreeGroup final : public Group {
 public:
  FreeGroup(int rank, const std::vector<std::string>& order) {
    if (rank < 1) throw std::invalid_argument("free group rank must be >= 1");
    std::vector<ElementRep> gens;
    std::vector<std::string> names;
    for (int i = 0; i < rank; ++i) {
      gens.push_back({2 * i});
      names.push_back("a" + std::to_string(i + 1));
      gens.push_back({2 * i + 1});
      names.push_back("a" + std::to_string(i + 1) + "inv");
    }
    set_generators(std::move(gens), std::move(names), order);
  }

  ElementRep identity() const override { return {}; }
  ElementRep multiply(const ElementRep& a, const ElementRep& b) const override {
    ElementRep c = a;
    for (int x : b) {
      if (!c.empty() && c.back() == (x ^ 1)) {
        c.pop_back();
      } else {
        c.push_back(x);
      }
    }
    return c;
  }
  ElementRep inverse(const ElementRep& a) const override {
    ElementRep c(a.rbegin(), a.rend());
    for (int& x : c) x ^= 1;
    return c;
  }
  int word_length(const ElementRep& a) const override { return static_cast<int>(a.size()); }
};

/// Z_{n1} * Z_{n2} * ...; elements are alternating syllables stored as
/// flattened (factor, exponent) pairs with exponent in [1, n-1].
class FreeProductCyclicGroup final : public Group {
 public:
  FreeProductCyclicGroup(std::vector<int> orders, const std::vector<std::string>& order)
      : orders_(std::move(orders)) {
    if (orders_.size() < 2) throw std::invalid_argument("free product needs at least two factors");
    std::vector<ElementRep> gens;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      const int n = orders_[i];
      if (n < 2) throw std::invalid_argument("cyclic factor orders must be >= 2");
      const int f = static_cast<int>(i);
      gens.push_back({f, 1});
      names.push_back("c" + std::to_string(i + 1));
      if (n > 2) {
        gens.push_back({f, n - 1});
        names.push_back("c" + std::to_string(i + 1) + "inv");
      }
    }
    set_generators(std::move(gens), std::move(names), order);
  }

  ElementRep identity() const override { return {}; }
  ElementRep multiply(const ElementRep& a, const ElementRep& b) const override {
    ElementRep c = a;
    for (std::size_t k = 0; k < b.size(); k += 2) {
      const int f = b[k];
      const int e = b[k + 1];
      if (!c.empty() && c[c.size() - 2] == f) {
        const int sum = (c.back() + e) % orders_[static_cast<std::size_t>(f)];
        if (sum == 0) {
          c.resize(c.size() - 2);
        } else {
          c.back() = sum;
        }
      } else {
        c.push_back(f);
        c.push_back(e);
      }
    }
    return c;
  }
  ElementRep inverse(const ElementRep& a) const override {
    ElementRep c;
    c.reserve(a.size());
    for (std::size_t k = a.size(); k >= 2; k -= 2) {
      const int f = a[k - 2];
      c.push_back(f);
      c.push_back(orders_[static_cast<std::size_t>(f)] - a[k - 1]);
    }
    return c;
  }
  int word_length(const ElementRep& a) const override {
    int len = 0;
    for (std::size_t k = 0; k < a.size(); k += 2) {
      const int n = orders_[static_cast<std::size_t>(a[k])];
      len += std::min(a[k + 1], n - a[k + 1]);
    }
    return len;
  }

 private:
  std::vector<int> orders_;
};

/// Finite group given by its multiplication table; word lengths by BFS.
class FiniteTableGroup final : public Group {
 public:
  FiniteTableGroup(std::vector<std::vector<int>> table, const std::vector<int>& generators,
                   const std::vector<std::string>& order)
      : table_(std::move(table)) {
    const int n = static_cast<int>(table_.size());
    if (n == 0) throw std::invalid_argument("empty multiplication table");
    for (const auto& row : table_) {
      if (static_cast<int>(row.size()) != n) throw std::invalid_argument("table is not square");
      for (int x : row) {
        if (x < 0 || x >= n) throw std::invalid_argument("table entry out of range");
      }
    }
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          if (at(at(a, b), c) != at(a, at(b, c))) {
            throw std::invalid_argument("table is not associative");
          }
        }
      }
    }
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
      bool ok = true;
      for (int a = 0; a < n && ok; ++a) ok = at(e, a) == a && at(a, e) == a;
      if (ok) identity_ = e;
    }
    if (identity_ < 0) throw std::invalid_argument("table has no identity");
    inverse_.assign(static_cast<std::size_t>(n), -1);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (at(a, b) == identity_ && at(b, a) == identity_) inverse_[static_cast<std::size_t>(a)] = b;
      }
      if (inverse_[static_cast<std::size_t>(a)] < 0) throw std::invalid_argument("element without inverse");
    }
    std::vector<ElementRep> gens;
    std::vector<std::string> names;
    for (int g : generators) {
      if (g < 0 || g >= n) throw std::invalid_argument("generator index out of range");
      gens.push_back({g});
      names.push_back("x" + std::to_string(g));
    }
    set_generators(std::move(gens), std::move(names), order);
    lengths_.assign(static_cast<std::size_t>(n), -1);
    lengths_[static_cast<std::size_t>(identity_)] = 0;
    std::deque<int> queue{identity_};
    while (!queue.empty()) {
      const int a = queue.front();
      queue.pop_front();
      for (std::size_t s = 0; s < generator_count(); ++s) {
        const int b = at(a, generator(static_cast<int>(s))[0]);
        if (lengths_[static_cast<std::size_t>(b)] < 0) {
          lengths_[static_cast<std::size_t>(b)] = lengths_[static_cast<std::size_t>(a)] + 1;
          queue.push_back(b);
        }
      }
    }
    if (std::find(lengths_.begin(), lengths_.end(), -1) != lengths_.end()) {
      throw std::invalid_argument("generators do not generate the group");
    }
  }

  ElementRep identity() const override { return {identity_}; }
  ElementRep multiply(const ElementRep& a, const ElementRep& b) const override {
    return {at(a[0], b[0])};
  }
  ElementRep inverse(const ElementRep& a) const override {
    return {inverse_[static_cast<std::size_t>(a[0])]};
  }
  int word_length(const ElementRep& a) const override {
    return lengths_[static_cast<std::size_t>(a[0])];
  }

 private:
  int at(int a, int b) const {
    return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }

  std::vector<std::vector<int>> table_;
  int identity_ = 0;
  std::vector<int> inverse_;
  std::vector<int> lengths_;
};

}  // namespace

std::shared_ptr<const Group> make_group(const GroupSpec& spec) {
  switch (spec.family) {
    case GroupFamily::free_abelian:
      if (spec.rank == 0 && spec.torsion.empty()) throw std::invalid_argument("trivial group");
      return std::make_shared<FreeAbelianGroup>(spec.rank, spec.torsion, spec.generator_order);
    case GroupFamily::free:
      return std::make_shared<FreeGroup>(spec.rank, spec.generator_order);
    case GroupFamily::free_product_cyclic:
      return std::make_shared<FreeProductCyclicGroup>(spec.orders, spec.generator_order);
    case GroupFamily::finite_table:
      return std::make_shared<FiniteTableGroup>(spec.table, spec.generators, spec.generator_order);
  }
  throw std::invalid_argument("unknown group family");
}

Index CayleyBall::count_up_to_length(int r) const {
  return static_cast<Index>(std::upper_bound(length.begin(), length.end(), r) - length.begin());
}

CayleyBall build_ball(std::shared_ptr<const Group> group, int radius, std::size_t element_cap) {
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
  CayleyBall ball;
  ball.group = group;
  ball.radius = radius;
  auto push = [&](ElementRep g, Word w, int len, Index parent) {
    if (ball.element.size() >= element_cap) {
      throw ResourceError("Cayley ball exceeds the element cap of " + std::to_string(element_cap));
    }
    ball.lookup.emplace(g, static_cast<Index>(ball.element.size()));
    ball.element.push_back(std::move(g));
    ball.normal_form.push_back(std::move(w));
    ball.length.push_back(len);
    ball.parent.push_back(parent);
  };
  push(group->identity(), {}, 0, -1);
  Index level_begin = 0;
  for (int len = 0; len < radius; ++len) {
    const Index level_end = ball.size();
    for (Index g = level_begin; g < level_end; ++g) {
      for (int s = 0; s < static_cast<int>(group->generator_count()); ++s) {
        auto h = group->multiply(ball.element[static_cast<std::size_t>(g)], group->generator(s));
        if (ball.lookup.count(h)) continue;
        Word w = ball.normal_form[static_cast<std::size_t>(g)];
        w.push_back(s);
        push(std::move(h), std::move(w), len + 1, g);
      }
    }
    level_begin = level_end;
  }

  for (Index g = 0; g < ball.size(); ++g) {
    const auto& w = ball.normal_form[static_cast<std::size_t>(g)];
    const auto& e = ball.element[static_cast<std::size_t>(g)];
    if (group->evaluate(w) != e) throw std::logic_error("normal form does not evaluate to element");
    if (group->word_length(e) != static_cast<int>(w.size())) {
      throw std::logic_error("normal form " + group->render(w) + " is not geodesic");
    }
    for (std::size_t k = 1; k < w.size(); ++k) {
      if (group->inverse_generator(w[k]) == w[k - 1]) {
        throw std::logic_error("normal form " + group->render(w) + " is not reduced");
      }
    }
    const Index p = ball.parent[static_cast<std::size_t>(g)];
    if (p >= 0) {
      const auto& pw = ball.normal_form[static_cast<std::size_t>(p)];
      if (pw.size() + 1 != w.size() || !std::equal(pw.begin(), pw.end(), w.begin())) {
        throw std::logic_error("prefix of normal form is not a normal form");
      }
    }
    for (int s = 0; s < static_cast<int>(group->generator_count()); ++s) {
      auto h = ball.find(group->multiply(e, group->generator(s)));
      if (h && g < *h) ball.edges.emplace_back(g, *h);
    }
  }
  std::sort(ball.edges.begin(), ball.edges.end());
  ball.edges.erase(std::unique(ball.edges.begin(), ball.edges.end()), ball.edges.end());
  return ball;
}

int word_distance(const CayleyBall& ball, Index g, Index h) {
  if (g < 0 || h < 0 || g >= ball.size() || h >= ball.size()) {
    throw std::out_of_range("element not in ball");
  }
  const auto& G = *ball.group;
  auto diff = G.multiply(G.inverse(ball.element[static_cast<std::size_t>(g)]),
                         ball.element[static_cast<std::size_t>(h)]);
  auto idx = ball.find(diff);
  if (!idx) {
    throw std::out_of_range("g^-1 h = " + std::to_string(G.word_length(diff)) +
                            "-letter element lies outside the radius-" + std::to_string(ball.radius) +
                            " ball");
  }
  return ball.length[static_cast<std::size_t>(*idx)];
}

Index prefix_element(const CayleyBall& ball, Index g, int i) {
  if (g < 0 || g >= ball.size()) throw std::out_of_range("element not in ball");
  const int len = ball.length[static_cast<std::size_t>(g)];
  if (i < 0 || i > len) throw std::out_of_range("prefix index out of range");
  for (int k = len; k > i; --k) g = ball.parent[static_cast<std::size_t>(g)];
  return g;
}

Eigen::MatrixXi ball_distance_table(const CayleyBall& ball, Index count) {
  Eigen::MatrixXi d(count, count);
  const auto& G = *ball.group;
  for (Index i = 0; i < count; ++i) {
    d(i, i) = 0;
    const auto inv = G.inverse(ball.element[static_cast<std::size_t>(i)]);
    for (Index j = i + 1; j < count; ++j) {
      d(i, j) = d(j, i) = G.word_length(G.multiply(inv, ball.element[static_cast<std::size_t>(j)]));
    }
  }
  return d;
}

RationalSpace ball_space(const CayleyBall& ball, int max_length) {
  const Index n = ball.count_up_to_length(max_length);
  const Eigen::MatrixXi d = ball_distance_table(ball, n);
  RationalSpace::Matrix q(n, n);
  std::vector<std::string> names;
  for (Index i = 0; i < n; ++i) {
    names.push_back(ball.name(i));
    for (Index j = 0; j < n; ++j) q(i, j) = d(i, j);
  }
  return RationalSpace(std::move(names), 0, std::move(q));
}

CombabilityReport audit_combability(const CayleyBall& ball, unsigned threads) {
  if (ball.radius < 1) throw std::invalid_argument("combability audit needs radius >= 1");
  CombabilityReport report;
  report.radius = ball.radius;
  report.definition.convention = "i<=min";
  report.saturated.convention = "i<max,saturated";
  std::vector<std::pair<Index, Index>> audited;
  for (const auto& [g, h] : ball.edges) {
    if (ball.length[static_cast<std::size_t>(g)] <= ball.radius - 1 &&
        ball.length[static_cast<std::size_t>(h)] <= ball.radius - 1) {
      audited.emplace_back(g, h);
    }
  }
  report.edges_audited = audited.size();

  struct Partial {
    ConventionResult def, sat;
  };
  std::vector<Partial> partial(worker_count(audited.size(), threads));
  // Strictly-greater updates over (g, h, i) in increasing order keep the
  // smallest witness among ties.
  auto update = [](ConventionResult& r, int d, Index g, Index h, int i) {
    if (r.witness.g < 0 || d > r.max_divergence) {
      r.max_divergence = d;
      r.witness = {g, h, i};
    }
  };
  parallel_blocks(audited.size(), threads, [&](std::size_t lo, std::size_t hi, std::size_t w) {
    auto& part = partial[w];
    for (std::size_t e = lo; e < hi; ++e) {
      const auto [g, h] = audited[e];
      const int lg = ball.length[static_cast<std::size_t>(g)];
      const int lh = ball.length[static_cast<std::size_t>(h)];
      const int top = std::max(lg, lh);
      for (int i = 0; i <= top; ++i) {
        const Index gi = prefix_element(ball, g, std::min(i, lg));
        const Index hi_ = prefix_element(ball, h, std::min(i, lh));
        const int d = word_distance(ball, gi, hi_);
        if (i <= std::min(lg, lh)) update(part.def, d, g, h, i);
        if (i < top) update(part.sat, d, g, h, i);
      }
    }
  });
  auto merge = [](ConventionResult& into, const ConventionResult& from) {
    if (from.witness.g < 0) return;
    const auto key = [](const ConventionResult& r) {
      return std::tuple(-r.max_divergence, r.witness.g, r.witness.h, r.witness.i);
    };
    if (into.witness.g < 0 || key(from) < key(into)) {
      into.max_divergence = from.max_divergence;
      into.witness = from.witness;
    }
  };
  for (const auto& p : partial) {
    merge(report.definition, p.def);
    merge(report.saturated, p.sat);
  }
  return report;
}

}  // namespace lipfree
