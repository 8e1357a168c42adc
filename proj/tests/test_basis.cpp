#include <doctest.h>

#include <random>
#include <set>

#include "lipfree/basis.hpp"

using namespace lipfree;

namespace {

std::shared_ptr<const CayleyBall> ball_of(GroupFamily family, int rank, int radius,
                                          std::vector<int> orders = {}) {
  GroupSpec s;
  s.family = family;
  s.rank = rank;
  s.orders = std::move(orders);
  return std::make_shared<const CayleyBall>(build_ball(make_group(s), radius));
}

/// Retraction oracle: evaluate the prefixes of w_g from the longest down and
/// return the first whose ball index is below n.
Index prefix_walk_oracle(const CayleyBall& ball, Index n, Index g) {
  const auto& w = ball.normal_form[static_cast<std::size_t>(g)];
  for (auto len = static_cast<long>(w.size()); len >= 0; --len) {
    const Index idx = *ball.find(ball.group->evaluate(Word(w.begin(), w.begin() + len)));
    if (idx < n) return idx;
  }
  return -1;
}

RationalMolecule random_molecule(const BasisSystem& sys, std::mt19937_64& rng, Index limit = -1) {
  const Index top = limit > 0 ? limit : sys.space()->size();
  std::uniform_int_distribution<Index> pt(1, top - 1);
  std::uniform_int_distribution<long> num(-5, 5), den(1, 3), cnt(1, 6);
  RationalMolecule m(sys.space());
  const long k = cnt(rng);
  for (long i = 0; i < k; ++i) {
    Rational c(num(rng), den(rng));
    c.canonicalize();
    m.add(pt(rng), c);
  }
  return m;
}

}  // namespace

TEST_CASE("retraction agrees with the prefix-walk oracle and the three cases") {
  for (auto ball : {ball_of(GroupFamily::free_abelian, 2, 5), ball_of(GroupFamily::free, 2, 4),
                    ball_of(GroupFamily::free_product_cyclic, 0, 6, {2, 2, 2})}) {
    const BasisSystem sys(ball, 2);
    for (Index n = 1; n <= sys.n_max(); ++n) {
      for (Index g = 0; g < sys.space()->size(); ++g) {
        CHECK(sys.retraction(n, g) == prefix_walk_oracle(*ball, n, g));
        CHECK(sys.retraction_by_cases(n, g) == sys.retraction(n, g));
      }
    }
  }
}

TEST_CASE("retraction examples") {
  auto ball = ball_of(GroupFamily::free, 2, 4);
  const BasisSystem sys(ball, 1);
  const Index a = *ball->find({0}), ab = *ball->find({0, 2});
  REQUIRE(a == 1);
  CHECK(sys.retraction(2, ab) == a);
  for (Index g = 0; g < sys.space()->size(); ++g) {
    CHECK(sys.retraction(1, g) == 0);
    if (g < 7) CHECK(sys.retraction(7, g) == g);
  }
  CHECK_THROWS_AS((void)sys.retraction(0, 1), std::out_of_range);
  CHECK_THROWS_AS((void)sys.retraction(1, sys.space()->size()), std::out_of_range);
  CHECK_THROWS_AS(BasisSystem(ball, 1, 10000), std::out_of_range);
}

TEST_CASE("lifted projections") {
  auto ball = ball_of(GroupFamily::free_abelian, 2, 5);
  const BasisSystem sys(ball, 2);
  std::mt19937_64 rng(4);
  const Index N = sys.n_max();
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = random_molecule(sys, rng);
    CHECK(sys.project(1, m).is_zero());
    CHECK(sys.project(N, m) == m);
    std::uniform_int_distribution<Index> pick(1, N);
    const Index n = pick(rng), k = pick(rng);
    CHECK(sys.project(n, sys.project(k, m)) == sys.project(std::min(n, k), m));
    CHECK(sys.project(k, sys.project(n, m)) == sys.project(std::min(n, k), m));
    const auto pm = sys.project(n, m);
    for (const auto& [g, c] : pm.coeffs()) CHECK(g < n);
  }
  // m supported in G_n is fixed
  const auto d = sys.delta(3) - sys.delta(2);
  CHECK(sys.project(4, d) == d);
  CHECK(sys.project(3, sys.delta(10)) == sys.delta(sys.retraction(3, 10)));
}

TEST_CASE("uniform bound on projection norms") {
  auto ball = ball_of(GroupFamily::free_abelian, 2, 4);
  const BasisSystem sys(ball, 2);
  std::mt19937_64 rng(8);
  for (Index n = 1; n <= sys.n_max(); ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto m = random_molecule(sys, rng);
      CHECK(kr_norm(sys.project(n, m)).value <= 3 * kr_norm(m).value);
    }
    const auto map = sys.retraction_map(n);
    const Rational L = lip_constant(map, *sys.space(), *sys.space());
    CHECK(L <= 3);
    Rational best = 0;
    for (Index g = 0; g < sys.space()->size(); ++g) {
      for (Index h = g + 1; h < sys.space()->size(); ++h) {
        const auto m = sys.delta(g) - sys.delta(h);
        const Rational r = kr_norm(sys.project(n, m)).value / kr_norm(m).value;
        if (r > best) best = r;
      }
    }
    CHECK(best == L);
  }
}

TEST_CASE("basis vectors") {
  auto ball = ball_of(GroupFamily::free, 2, 4);
  const BasisSystem sys(ball, 1);
  for (Index n = 2; n <= sys.n_max(); ++n) {
    const auto b = sys.basis_vector(n);
    CHECK(kr_norm(b).value == 1);
    CHECK(sys.project(n, b) == b);
    CHECK(sys.project(n - 1, b).is_zero());
    const auto e = sys.expand(b);
    REQUIRE(e.size() == 1);
    CHECK(e[0].first == n);
    CHECK(e[0].second == 1);
  }
  CHECK_THROWS_AS((void)sys.basis_vector(1), std::out_of_range);
}

TEST_CASE("expansion along a geodesic") {
  auto ball = ball_of(GroupFamily::free_abelian, 2, 5);
  const BasisSystem sys(ball, 2);
  const Index g = *ball->find({1, 2});
  const auto e = sys.expand(sys.delta(g));
  REQUIRE(e.size() == 3);
  std::set<Index> expected;
  for (int i = 1; i <= 3; ++i) expected.insert(prefix_element(*ball, g, i) + 1);
  std::set<Index> got;
  for (const auto& [n, c] : e) {
    got.insert(n);
    CHECK(c == 1);
  }
  CHECK(got == expected);
  CHECK(sys.expand(RationalMolecule(sys.space())).empty());
}

TEST_CASE("expand then reconstruct, partial sums are the projections") {
  for (auto ball : {ball_of(GroupFamily::free_abelian, 2, 5), ball_of(GroupFamily::free, 2, 5),
                    ball_of(GroupFamily::free_abelian, 1, 8)}) {
    const BasisSystem sys(ball, 2);
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
      const auto m = random_molecule(sys, rng);
      const auto e = sys.expand(m);
      CHECK(sys.reconstruct(e) == m);
      for (Index n = 1; n <= sys.n_max(); ++n) CHECK(sys.reconstruct(e, n) == sys.project(n, m));
    }
  }
}

TEST_CASE("rank of the projections") {
  auto ball = ball_of(GroupFamily::free_abelian, 2, 4);
  const BasisSystem sys(ball, 2);
  for (Index n = 1; n <= sys.n_max(); ++n) {
    std::set<Index> images;
    for (Index g = 0; g < sys.space()->size(); ++g) {
      const auto pm = sys.project(n, sys.delta(g));
      for (const auto& [h, c] : pm.coeffs()) images.insert(h);
    }
    CHECK(static_cast<Index>(images.size()) == n - 1);
  }
}

TEST_CASE("claim audits") {
  {
    auto ball = ball_of(GroupFamily::free_abelian, 2, 6);
    const auto comb = audit_combability(*ball);
    const BasisSystem sys(ball, comb.proof_constant());
    const auto a = audit_claim(sys);
    CHECK(a.passed());
    CHECK(a.K == 2);
    CHECK(a.basis_constant_observed <= 3);
    // exact values cross-checked against the generic Lipschitz routine
    for (Index n : {2, 5, 17, 40}) {
      const auto map = sys.retraction_map(n);
      CHECK(a.records[static_cast<std::size_t>(n - 1)].lip_exact ==
            lip_constant(map, *sys.space(), *sys.space()));
    }
  }
  {
    auto ball = ball_of(GroupFamily::free, 2, 6);
    const auto comb = audit_combability(*ball);
    const auto a = audit_claim(BasisSystem(ball, comb.proof_constant()));
    CHECK(a.passed());
    CHECK(a.basis_constant_observed <= 2);
  }
  {
    auto ball = ball_of(GroupFamily::free_abelian, 1, 8);
    const auto comb = audit_combability(*ball);
    const auto a = audit_claim(BasisSystem(ball, comb.proof_constant()));
    CHECK(a.passed());
    CHECK(a.basis_constant_observed <= 2);
  }
}

TEST_CASE("random sweep stays below the exact constants") {
  auto ball = ball_of(GroupFamily::free_abelian, 2, 5);
  const BasisSystem sys(ball, 2);
  auto a = audit_claim(sys);
  auto b = a;
  sweep_projection_norms(a, sys, 50, 7, 1);
  sweep_projection_norms(b, sys, 50, 7, 3);
  CHECK(a.passed());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].sweep_samples == 50);
    CHECK(a.records[i].sweep_max <= a.records[i].lip_exact);
    CHECK(a.records[i].sweep_max == b.records[i].sweep_max);
  }
  CHECK(a.records[0].sweep_max == 0);  // L_1 = 0
  CHECK(a.records.back().sweep_max == 1);  // L_{n_max} is the identity on the core
}

TEST_CASE("threaded claim audit matches") {
  auto ball = ball_of(GroupFamily::free_product_cyclic, 0, 6, {2, 3});
  const BasisSystem sys(ball, audit_combability(*ball).proof_constant());
  const auto a = audit_claim(sys, 1), b = audit_claim(sys, 3);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].lip_exact == b.records[i].lip_exact);
    CHECK(a.records[i].case1_max == b.records[i].case1_max);
  }
  CHECK(a.passed() == b.passed());
}
