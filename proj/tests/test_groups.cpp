#include <doctest.h>

#include <map>

#include "lipfree/errors.hpp"
#include "lipfree/groups.hpp"
#include "lipfree/quotient.hpp"

using namespace lipfree;

namespace {

GroupSpec free_abelian(int rank, std::vector<int> torsion = {}) {
  GroupSpec s;
  s.family = GroupFamily::free_abelian;
  s.rank = rank;
  s.torsion = std::move(torsion);
  return s;
}

GroupSpec free_group(int rank) {
  GroupSpec s;
  s.family = GroupFamily::free;
  s.rank = rank;
  return s;
}

GroupSpec free_product(std::vector<int> orders) {
  GroupSpec s;
  s.family = GroupFamily::free_product_cyclic;
  s.orders = std::move(orders);
  return s;
}

/// Shortlex oracle: every word of length <= r in (length, lex) order; the
/// first word reaching an element is its normal form.
std::vector<std::pair<ElementRep, Word>> shortlex_by_words(const Group& G, int r) {
  std::vector<std::pair<ElementRep, Word>> out;
  std::map<ElementRep, bool> seen;
  const int k = static_cast<int>(G.generator_count());
  for (int len = 0; len <= r; ++len) {
    Word w(static_cast<std::size_t>(len), 0);
    while (true) {
      auto g = G.evaluate(w);
      if (!seen.count(g)) {
        seen[g] = true;
        out.emplace_back(g, w);
      }
      int pos = len - 1;
      while (pos >= 0 && w[static_cast<std::size_t>(pos)] == k - 1) w[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
      ++w[static_cast<std::size_t>(pos)];
    }
  }
  return out;
}

/// Divergence maxima computed straight from the word oracle and the
/// closed-form distance: (i <= min, i < max saturated).
std::pair<int, int> combability_oracle(const Group& G, int r) {
  const auto nf = shortlex_by_words(G, r);
  std::map<ElementRep, Word> word;
  for (const auto& [g, w] : nf) word[g] = w;
  auto prefix = [&](const Word& w, int i) {
    return G.evaluate(Word(w.begin(), w.begin() + std::min<long>(i, static_cast<long>(w.size()))));
  };
  int def = 0, sat = 0;
  for (const auto& [g, wg] : nf) {
    if (static_cast<int>(wg.size()) > r - 1) continue;
    for (int s = 0; s < static_cast<int>(G.generator_count()); ++s) {
      const auto h = G.multiply(g, G.generator(s));
      const auto& wh = word.at(h);
      if (static_cast<int>(wh.size()) > r - 1) continue;
      const int lg = static_cast<int>(wg.size()), lh = static_cast<int>(wh.size());
      for (int i = 0; i <= std::max(lg, lh); ++i) {
        const int d = G.distance(prefix(wg, i), prefix(wh, i));
        if (i <= std::min(lg, lh)) def = std::max(def, d);
        if (i < std::max(lg, lh)) sat = std::max(sat, d);
      }
    }
  }
  return {def, sat};
}

}  // namespace

TEST_CASE("Z radius 2 enumeration") {
  const auto ball = build_ball(make_group(free_abelian(1)), 2);
  std::vector<ElementRep> expected{{0}, {1}, {-1}, {2}, {-2}};
  CHECK(ball.element == expected);
  CHECK(ball.name(2) == "e1inv");
}

TEST_CASE("radius 0 and radius 1 balls") {
  for (const auto& spec : {free_abelian(2), free_group(2), free_product({2, 3})}) {
    CHECK(build_ball(make_group(spec), 0).size() == 1);
  }
  const auto ball = build_ball(make_group(free_group(2)), 1);
  CHECK(ball.size() == 5);
  for (Index g = 1; g < 5; ++g) CHECK(ball.parent[static_cast<std::size_t>(g)] == 0);
  CHECK(ball.edges.size() == 4);
}

TEST_CASE("ball enumeration matches the word oracle") {
  std::vector<std::pair<GroupSpec, int>> cases{{free_abelian(2), 4},  {free_group(2), 4},
                                               {free_product({2, 2, 2}), 5}, {free_product({2, 3}), 6},
                                               {free_abelian(1, {3}), 4}, {free_product({3, 4}), 4}};
  for (const auto& [spec, r] : cases) {
    const auto G = make_group(spec);
    const auto ball = build_ball(G, r);
    const auto oracle = shortlex_by_words(*G, r);
    REQUIRE(static_cast<std::size_t>(ball.size()) == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      CHECK(ball.element[i] == oracle[i].first);
      CHECK(ball.normal_form[i] == oracle[i].second);
    }
  }
}

TEST_CASE("shortlex enumeration invariants") {
  const auto ball = build_ball(make_group(free_product({2, 3, 4})), 5);
  for (Index g = 1; g < ball.size(); ++g) {
    const auto& a = ball.normal_form[static_cast<std::size_t>(g - 1)];
    const auto& b = ball.normal_form[static_cast<std::size_t>(g)];
    CHECK((a.size() < b.size() || (a.size() == b.size() && a < b)));
    const Index p = ball.parent[static_cast<std::size_t>(g)];
    CHECK(ball.length[static_cast<std::size_t>(p)] + 1 == ball.length[static_cast<std::size_t>(g)]);
    CHECK(word_distance(ball, g, 0) == ball.length[static_cast<std::size_t>(g)]);
  }
}

TEST_CASE("torsion generators and closed-form lengths") {
  const auto G = make_group(free_abelian(1, {3}));
  REQUIRE(G->generator_count() == 4);
  CHECK(G->generator_name(2) == "f1");
  CHECK(G->generator_name(3) == "f2");
  CHECK(G->word_length({-3, 2}) == 4);
  CHECK(G->word_length({0, 0}) == 0);
}

TEST_CASE("free product lengths") {
  const auto G = make_group(free_product({2, 5}));
  // c2^3 has length min(3, 2) = 2
  CHECK(G->generator_count() == 3);
  const auto c2 = G->generator(1);
  const auto g = G->multiply(G->multiply(c2, c2), c2);
  CHECK(G->word_length(g) == 2);
}

TEST_CASE("word distance") {
  const auto z2 = build_ball(make_group(free_abelian(2)), 3);
  const Index a = *z2.find({2, 0});
  CHECK(word_distance(z2, a, 0) == 2);
  CHECK(word_distance(z2, a, a) == 0);

  const auto f2 = build_ball(make_group(free_group(2)), 4);
  const Index ab = *f2.find({0, 2}), ba = *f2.find({2, 0});
  CHECK(word_distance(f2, ab, ba) == 4);

  const auto small = build_ball(make_group(free_group(2)), 2);
  CHECK_THROWS_AS(word_distance(small, *small.find({0, 2}), *small.find({2, 0})), std::out_of_range);
}

TEST_CASE("prefix elements") {
  const auto ball = build_ball(make_group(free_abelian(2)), 4);
  const Index g = *ball.find({1, 2});
  CHECK(ball.name(g) == "e1.e2.e2");
  CHECK(prefix_element(ball, g, 0) == 0);
  CHECK(prefix_element(ball, g, 1) == *ball.find({1, 0}));
  CHECK(prefix_element(ball, g, 3) == g);
  CHECK(prefix_element(ball, g, 2) == ball.parent[static_cast<std::size_t>(g)]);
  CHECK_THROWS_AS(prefix_element(ball, g, 4), std::out_of_range);
  CHECK_THROWS_AS(prefix_element(ball, g, -1), std::out_of_range);
}

TEST_CASE("combability constants") {
  const auto z = audit_combability(build_ball(make_group(free_abelian(1)), 6));
  CHECK(z.definition.max_divergence == 0);
  CHECK(z.constant() == 1);

  const auto z2ball = build_ball(make_group(free_abelian(2)), 5);
  const auto z2 = audit_combability(z2ball);
  CHECK(z2.definition.max_divergence == 2);
  CHECK(z2ball.element[static_cast<std::size_t>(z2.definition.witness.g)] == ElementRep{0, 1});
  CHECK(z2ball.element[static_cast<std::size_t>(z2.definition.witness.h)] == ElementRep{1, 1});
  CHECK(z2.definition.witness.i == 1);

  const auto f2 = audit_combability(build_ball(make_group(free_group(2)), 5));
  CHECK(f2.definition.max_divergence == 0);
  CHECK(f2.saturated.max_divergence == 0);

  const auto p4 = audit_combability(build_ball(make_group(free_product({2, 2, 2})), 4));
  const auto p5 = audit_combability(build_ball(make_group(free_product({2, 2, 2})), 5));
  CHECK(p4.definition.max_divergence == p5.definition.max_divergence);
  CHECK(p4.saturated.max_divergence == p5.saturated.max_divergence);
}

TEST_CASE("combability matches the word oracle") {
  std::vector<std::pair<GroupSpec, int>> cases{{free_abelian(2), 5}, {free_group(2), 4},
                                               {free_product({2, 2, 2}), 5}, {free_product({2, 3}), 7},
                                               {free_abelian(1, {3}), 4}};
  for (const auto& [spec, r] : cases) {
    const auto G = make_group(spec);
    const auto rep = audit_combability(build_ball(G, r));
    const auto [def, sat] = combability_oracle(*G, r);
    CHECK(rep.definition.max_divergence == def);
    CHECK(rep.saturated.max_divergence == sat);
  }
}

TEST_CASE("threaded audit is identical") {
  const auto ball = build_ball(make_group(free_abelian(2)), 6);
  const auto a = audit_combability(ball, 1), b = audit_combability(ball, 4);
  CHECK(a.definition.max_divergence == b.definition.max_divergence);
  CHECK(a.definition.witness.g == b.definition.witness.g);
  CHECK(a.definition.witness.h == b.definition.witness.h);
  CHECK(a.definition.witness.i == b.definition.witness.i);
  CHECK(a.saturated.witness.g == b.saturated.witness.g);
}

TEST_CASE("generator order is respected and checked") {
  auto spec = free_abelian(1);
  spec.generator_order = {"e1inv", "e1"};
  const auto ball = build_ball(make_group(spec), 1);
  CHECK(ball.element[1] == ElementRep{-1});
  spec.generator_order = {"e1"};
  CHECK_THROWS_AS(make_group(spec), std::invalid_argument);
  spec.generator_order = {"e1", "bogus"};
  CHECK_THROWS_AS(make_group(spec), std::invalid_argument);
}

TEST_CASE("finite tables") {
  const auto s3 = symmetric_group(3);
  GroupSpec spec;
  spec.family = GroupFamily::finite_table;
  spec.table = s3.table();
  spec.generators = {1, 2};
  const auto ball = build_ball(make_group(spec), 3);
  CHECK(ball.size() == 6);
  CHECK(validate(ball_space(ball, 3)).empty());

  spec.table[0][0] = 1;
  CHECK_THROWS_AS(make_group(spec), std::invalid_argument);
  spec.table = s3.table();
  spec.generators = {3};  // a 3-cycle without its inverse
  CHECK_THROWS_AS(make_group(spec), std::invalid_argument);
}

TEST_CASE("element cap") {
  CHECK_THROWS_AS(build_ball(make_group(free_group(3)), 8, 1000), ResourceError);
}
