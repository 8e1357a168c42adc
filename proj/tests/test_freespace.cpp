#include <doctest.h>

#include <functional>
#include <random>

#include "lipfree/freespace.hpp"
#include "lipfree/groups.hpp"
#include "lipfree/hyperbolic.hpp"

using namespace lipfree;

namespace {

std::shared_ptr<const RationalSpace> integer_space(const std::vector<std::vector<long>>& d) {
  const auto n = static_cast<Index>(d.size());
  RationalSpace::Matrix m(n, n);
  std::vector<std::string> names;
  for (Index i = 0; i < n; ++i) {
    names.push_back(i == 0 ? "0" : "p" + std::to_string(i));
    for (Index j = 0; j < n; ++j) m(i, j) = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return std::make_shared<const RationalSpace>(std::move(names), 0, std::move(m));
}

/// Shortest-path closure of random integer weights in [1, wmax]: an integer metric.
std::shared_ptr<const RationalSpace> random_integer_metric(std::size_t n, long wmax, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> w(1, wmax);
  std::vector<std::vector<long>> d(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = w(rng);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return integer_space(d);
}

/// Test-only oracle for integer metrics: optimal witnesses can be taken
/// integer-valued, so scan every integer f on the support with
/// |f(x)| <= d(x, 0) and keep the best feasible pairing.
Rational integer_lattice_norm(const RationalMolecule& m) {
  const auto& s = *m.space();
  std::vector<Index> pts;
  std::vector<Rational> a;
  for (const auto& [p, c] : m.coeffs()) {
    pts.push_back(p);
    a.push_back(c);
  }
  std::vector<long> f(pts.size());
  Rational best = 0;
  bool any = false;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == pts.size()) {
      Rational v = 0;
      for (std::size_t t = 0; t < pts.size(); ++t) v += a[t] * f[t];
      if (!any || v > best) best = v;
      any = true;
      return;
    }
    const long r = s(pts[i], s.basepoint()).get_num().get_si();
    for (long v = -r; v <= r; ++v) {
      bool ok = true;
      for (std::size_t t = 0; t < i && ok; ++t) ok = std::abs(v - f[t]) <= s(pts[i], pts[t]);
      if (!ok) continue;
      f[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

RationalMolecule random_molecule(const std::shared_ptr<const RationalSpace>& s, std::size_t max_support,
                                 std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> pt(1, s->size() - 1);
  std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
  std::uniform_int_distribution<std::size_t> k(1, max_support);
  RationalMolecule m(s);
  const auto count = k(rng);
  for (std::size_t i = 0; i < count; ++i) {
    Rational c(num(rng), den(rng));
    c.canonicalize();
    m.add(pt(rng), c);
  }
  return m;
}

}  // namespace

TEST_CASE("molecule normalisation") {
  auto s = integer_space({{0, 1, 1}, {1, 0, 2}, {1, 2, 0}});
  RationalMolecule m(s);
  m.add(0, 5);
  CHECK(m.is_zero());
  m.add(1, Rational(1, 2));
  m.add(1, Rational(-1, 2));
  CHECK(m.is_zero());
  auto d = RationalMolecule::delta(s, 1) + RationalMolecule::delta(s, 2);
  CHECK(d.coeffs().size() == 2);
  CHECK((d - d).is_zero());
  CHECK((Rational(0) * d).is_zero());
  CHECK(d.l1_mass() == 2);
}

TEST_CASE("unreduced rationals are reduced on entry") {
  auto s = integer_space({{0, 1, 1}, {1, 0, 2}, {1, 2, 0}});
  RationalMolecule m(s);
  m.add(1, Rational(2, 4));
  m.add(1, Rational(3, 6));
  m.add(2, Rational(0, 5));
  CHECK(m.coeffs().size() == 1);
  CHECK(m.coeff(1) == 1);
  CHECK((Rational(4, 8) * m).coeff(1) == Rational(1, 2));
  CHECK((Rational(0, 3) * m).is_zero());
  CHECK(kr_norm(m).value == 1);
}

TEST_CASE("norm of the three-point example") {
  auto s = integer_space({{0, 1, 1}, {1, 0, 2}, {1, 2, 0}});
  const auto m = RationalMolecule::delta(s, 1) + RationalMolecule::delta(s, 2);
  const auto c = kr_norm(m);
  CHECK(c.value == 2);
  CHECK(c.primal == c.dual);
  CHECK(check_certificate(m, c).ok());
  CHECK(brute_force_norm(m) == 2);
  CHECK(c.witness.at(1) == 1);
  CHECK(c.witness.at(2) == 1);
}

TEST_CASE("zero molecule") {
  auto s = integer_space({{0, 1}, {1, 0}});
  const auto c = kr_norm(RationalMolecule(s));
  CHECK(c.value == 0);
  CHECK(c.flow.empty());
  CHECK(brute_force_norm(RationalMolecule(s)) == 0);
}

TEST_CASE("evaluation map is isometric") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_integer_metric(6, 5, rng);
    for (Index x = 0; x < s->size(); ++x) {
      CHECK(kr_norm(RationalMolecule::delta(s, x)).value == (*s)(x, 0));
      for (Index y = 0; y < s->size(); ++y) {
        CHECK(kr_norm(RationalMolecule::delta(s, x) - RationalMolecule::delta(s, y)).value == (*s)(x, y));
      }
    }
  }
}

TEST_CASE("all three-point metrics with entries in {1,2,3}") {
  int instances = 0;
  for (long a = 1; a <= 3; ++a) {
    for (long b = 1; b <= 3; ++b) {
      for (long c = 1; c <= 3; ++c) {
        if (a > b + c || b > a + c || c > a + b) continue;
        const auto s = integer_space({{0, a, b}, {a, 0, c}, {b, c, 0}});
        for (long p = -3; p <= 3; ++p) {
          for (long q = -3; q <= 3; ++q) {
            RationalMolecule m(s);
            m.add(1, Rational(p, 2));
            m.add(2, q);
            const auto cert = kr_norm(m);
            CHECK(cert.value == brute_force_norm(m));
            CHECK(cert.value == integer_lattice_norm(Rational(2) * m) / 2);
            CHECK(check_certificate(m, cert).ok());
            ++instances;
          }
        }
      }
    }
  }
  CHECK(instances > 0);
}

TEST_CASE("transport solver agrees with the lattice oracle on integer metrics") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_integer_metric(6, 4, rng);
    RationalMolecule m(s);
    std::uniform_int_distribution<long> c(-4, 4);
    for (Index x = 1; x < s->size(); ++x) m.add(x, c(rng));
    const auto cert = kr_norm(m);
    CHECK(cert.value == integer_lattice_norm(m));
    CHECK(check_certificate(m, cert).ok());
  }
}

TEST_CASE("norm is subadditive and homogeneous") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_integer_metric(7, 6, rng);
    const auto a = random_molecule(s, 4, rng), b = random_molecule(s, 4, rng);
    const auto na = kr_norm(a).value, nb = kr_norm(b).value;
    CHECK(kr_norm(a + b).value <= na + nb);
    CHECK(kr_norm(Rational(-3, 2) * a).value == Rational(3, 2) * na);
  }
}

TEST_CASE("float norm matches the exact norm") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_integer_metric(6, 5, rng);
    const auto m = random_molecule(s, 5, rng);
    const auto fs = std::make_shared<const FloatSpace>(to_float_space(*s));
    FloatMolecule fm(fs);
    for (const auto& [p, a] : m.coeffs()) fm.add(p, a.get_d());
    const auto c = kr_norm_float(fm, 1e-9);
    CHECK(c.value == doctest::Approx(kr_norm(m).value.get_d()).epsilon(1e-9));
    CHECK(c.gap <= 1e-9);
    CHECK(check_certificate(fm, c, 1e-9).ok());
  }
  CHECK_THROWS_AS(kr_norm_float(FloatMolecule(), 0.0), std::invalid_argument);
}

TEST_CASE("float norm on a hyperbolic net") {
  std::mt19937_64 rng(21);
  const auto net = std::make_shared<const FloatSpace>(greedy_net(random_hyperboloid_samples(2, 60, 1.2, rng), 0.4));
  for (Index x = 1; x < net->size(); ++x) {
    CHECK(kr_norm_float(FloatMolecule::delta(net, x)).value == doctest::Approx((*net)(x, 0)).epsilon(1e-9));
  }
  CHECK(kr_norm_float(FloatMolecule(net)).value == 0.0);
}

TEST_CASE("brute force limits") {
  std::mt19937_64 rng(1);
  auto s = random_integer_metric(9, 3, rng);
  RationalMolecule m(s);
  for (Index x = 1; x < 8; ++x) m.add(x, 1);
  CHECK_THROWS_AS(brute_force_norm(m), ResourceError);
}

TEST_CASE("Lipschitz constants of maps") {
  auto s = integer_space({{0, 1, 1}, {1, 0, 2}, {1, 2, 0}});
  CHECK(lip_constant<Rational>({0, 1, 2}, *s, *s) == 1);
  CHECK(lip_constant<Rational>({0, 0, 0}, *s, *s) == 0);
  CHECK(lip_constant<Rational>({0, 1, 1}, *s, *s) == 1);
  CHECK_THROWS_AS(lip_constant<Rational>({0, 1}, *s, *s), std::invalid_argument);
}

TEST_CASE("linearisation norm equals the Lipschitz constant") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_integer_metric(6, 5, rng);
    std::uniform_int_distribution<Index> pick(0, s->size() - 1);
    std::vector<Index> phi(static_cast<std::size_t>(s->size()));
    phi[0] = 0;
    for (std::size_t i = 1; i < phi.size(); ++i) phi[i] = pick(rng);
    const Rational L = lip_constant(phi, *s, *s);
    for (int k = 0; k < 20; ++k) {
      const auto m = random_molecule(s, 4, rng);
      CHECK(kr_norm(push_forward(m, phi, s)).value <= L * kr_norm(m).value);
    }
    Rational best = 0;
    for (Index x = 0; x < s->size(); ++x) {
      for (Index y = x + 1; y < s->size(); ++y) {
        const auto m = RationalMolecule::delta(s, x) - RationalMolecule::delta(s, y);
        const Rational r = kr_norm(push_forward(m, phi, s)).value / kr_norm(m).value;
        if (r > best) best = r;
      }
    }
    CHECK(best == L);
  }
}

TEST_CASE("isometry on a Cayley ball") {
  GroupSpec spec;
  spec.family = GroupFamily::free;
  spec.rank = 2;
  const auto ball = build_ball(make_group(spec), 4);
  const auto s = std::make_shared<const RationalSpace>(ball_space(ball, 2));
  for (Index x = 0; x < s->size(); ++x) {
    for (Index y = 0; y < s->size(); ++y) {
      CHECK(kr_norm(RationalMolecule::delta(s, x) - RationalMolecule::delta(s, y)).value == (*s)(x, y));
    }
  }
}
