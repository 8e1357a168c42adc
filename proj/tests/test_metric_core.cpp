#include <doctest.h>

#include <cmath>
#include <random>

#include "lipfree/groups.hpp"
#include "lipfree/hyperbolic.hpp"
#include "lipfree/metric_space.hpp"

using namespace lipfree;

namespace {

RationalSpace make_space(std::vector<std::string> names, std::vector<std::vector<long>> d) {
  const auto n = static_cast<Index>(names.size());
  RationalSpace::Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return RationalSpace(std::move(names), 0, std::move(m));
}

}  // namespace

TEST_CASE("two-point space validates") {
  CHECK(validate(make_space({"0", "x"}, {{0, 1}, {1, 0}})).empty());
}

TEST_CASE("triangle violation is named") {
  auto s = make_space({"a", "b", "c"}, {{0, 5, 1}, {5, 0, 1}, {1, 1, 0}});
  auto v = validate(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "triangle");
  CHECK(v[0].points == std::vector<Index>{0, 2, 1});
  CHECK(v[0].description.find("a") != std::string::npos);
}

TEST_CASE("asymmetric, zero and nonpositive entries are reported") {
  auto s = make_space({"a", "b", "c"}, {{1, 2, 2}, {3, 0, 0}, {2, 0, 0}});
  auto v = validate(s);
  std::vector<std::string> kinds;
  for (const auto& x : v) kinds.push_back(x.kind);
  CHECK(std::count(kinds.begin(), kinds.end(), "nonzero_diagonal") == 1);
  CHECK(std::count(kinds.begin(), kinds.end(), "asymmetric") == 1);
  CHECK(std::count(kinds.begin(), kinds.end(), "nonpositive") == 1);
  CHECK(std::is_sorted(v.begin(), v.end()));
}

TEST_CASE("space construction rejects malformed input") {
  RationalSpace::Matrix m(2, 2);
  m << 0, 1, 1, 0;
  CHECK_THROWS_AS(RationalSpace({"a", "a"}, 0, m), std::invalid_argument);
  CHECK_THROWS_AS(RationalSpace({"a", "b"}, 2, m), std::invalid_argument);
  CHECK_THROWS_AS(RationalSpace({"a", "b", "c"}, 0, m), std::invalid_argument);
}

TEST_CASE("Cayley ball spaces validate, also after snowflaking") {
  for (int family = 0; family < 3; ++family) {
    GroupSpec spec;
    spec.family = family == 0 ? GroupFamily::free_abelian : family == 1 ? GroupFamily::free
                                                                        : GroupFamily::free_product_cyclic;
    spec.rank = 2;
    spec.orders = {2, 3};
    const auto ball = build_ball(make_group(spec), 4);
    const auto space = ball_space(ball, 2);
    CHECK(validate(space).empty());
    CHECK(validate(snowflake(space, 0.5)).empty());
    CHECK(validate(snowflake(space, 0.75)).empty());
  }
}

TEST_CASE("snowflake") {
  auto s = make_space({"0", "x", "y"}, {{0, 4, 1}, {4, 0, 4}, {1, 4, 0}});
  CHECK(snowflake(s, 0.5)(0, 1) == doctest::Approx(2.0));
  const auto id = snowflake(s, 1.0);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) CHECK(id(i, j) == to_double(s(i, j)));
  }
  // monotone in alpha on entries >= 1
  const auto a = snowflake(s, 0.3), b = snowflake(s, 0.6);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) CHECK(a(i, j) <= b(i, j));
  }
  CHECK_THROWS_AS(snowflake(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(snowflake(s, 1.5), std::invalid_argument);
}

TEST_CASE("hyperboloid points and distance") {
  Eigen::VectorXd bad(3);
  bad << 0, 0, 2;
  CHECK_THROWS_AS(HyperboloidPoint{bad}, std::invalid_argument);
  Eigen::VectorXd neg(3);
  neg << 0, 0, -1;
  CHECK_THROWS_AS(HyperboloidPoint{neg}, std::invalid_argument);

  Eigen::VectorXd o(3), p(3);
  o << 0, 0, 1;
  p << std::sinh(1.0), 0, std::cosh(1.0);
  const HyperboloidPoint x(o), y(p);
  CHECK(hyperbolic_distance(x, x) == 0.0);
  CHECK(hyperbolic_distance(x, y) == doctest::Approx(1.0).epsilon(1e-12));

  // Distances along a geodesic through the origin are additive.
  Eigen::VectorXd q(3);
  q << std::sinh(-2.5), 0, std::cosh(-2.5);
  CHECK(hyperbolic_distance(y, HyperboloidPoint(q)) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("hyperbolic distance is a metric on random samples") {
  std::mt19937_64 rng(7);
  const auto pts = random_hyperboloid_samples(3, 40, 1.5, rng);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double dij = hyperbolic_distance(pts[i], pts[j]);
      CHECK(dij == doctest::Approx(hyperbolic_distance(pts[j], pts[i])).epsilon(1e-14));
      for (std::size_t k = 0; k < pts.size(); k += 3) {
        CHECK(dij <= hyperbolic_distance(pts[i], pts[k]) + hyperbolic_distance(pts[k], pts[j]) + 1e-9);
      }
    }
  }
}

TEST_CASE("greedy nets") {
  std::mt19937_64 rng(11);
  const auto pts = random_hyperboloid_samples(2, 100, 1.0, rng);
  CHECK(greedy_net({pts[0]}, 0.3).size() == 1);
  CHECK_THROWS_AS(greedy_net(pts, 0.0), std::invalid_argument);

  Eigen::VectorXd o(3), p(3);
  o << 0, 0, 1;
  p << std::sinh(0.5), 0, std::cosh(0.5);
  CHECK(greedy_net({HyperboloidPoint(o), HyperboloidPoint(p)}, 1.0).size() == 1);

  const auto net = greedy_net(pts, 0.3);
  CHECK(net.basepoint() == 0);
  CHECK(net.name(0) == "s0");
  for (Index i = 0; i < net.size(); ++i) {
    for (Index j = i + 1; j < net.size(); ++j) CHECK(net(i, j) >= 0.3);
  }
  for (const auto& s : pts) {
    double best = 1e300;
    for (Index i = 0; i < net.size(); ++i) {
      best = std::min(best, hyperbolic_distance(s, pts[std::stoul(net.name(i).substr(1))]));
    }
    CHECK(best < 0.3);
  }
  CHECK(validate(net, 1e-9).empty());
  // same order, same net
  const auto again = greedy_net(pts, 0.3);
  CHECK(again.points() == net.points());
}
