#include <doctest.h>

#include <filesystem>

#include "lipfree/json_io.hpp"

using namespace lipfree;

namespace {

std::string data(const std::string& rel) { return std::string(LIPFREE_DATA_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("rationals") {
  CHECK(rational_from_json(json("3/4")) == Rational(3, 4));
  CHECK(rational_from_json(json("-6/4")) == Rational(-3, 2));
  CHECK(rational_from_json(json(7)) == 7);
  CHECK(rational_from_json(json("5")) == 5);
  CHECK(rational_json(Rational(-3, 2)) == json("-3/2"));
  CHECK(rational_json(Rational(4)) == json("4"));
  CHECK_THROWS_AS(rational_from_json(json("1/0")), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_json(json("x")), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_json(json(0.5)), std::invalid_argument);
}

TEST_CASE("space round trip") {
  RationalSpace::Matrix m(3, 3);
  m << 0, 1, Rational(3, 2), 1, 0, 2, Rational(3, 2), 2, 0;
  const RationalSpace s({"0", "a", "b"}, 0, m);
  const auto j = space_to_json(s);
  CHECK(j.at("scalar") == "rational");
  const auto back = rational_space_from_json(j);
  CHECK(back.points() == s.points());
  CHECK(back.distances() == s.distances());

  const auto f = float_space_from_json(space_to_json(to_float_space(s)));
  CHECK(f(0, 2) == 1.5);

  auto bad = j;
  bad["basepoint"] = "zz";
  CHECK_THROWS_AS(rational_space_from_json(bad), std::invalid_argument);
}

TEST_CASE("molecule file and certificate") {
  const auto m = molecule_from_json(read_json_file(data("molecules/three_point.json")));
  CHECK(m.coeffs().size() == 2);
  const auto c = kr_norm(m);
  CHECK(c.value == 2);
  const auto j = certificate_to_json(m, c);
  CHECK(j.at("value") == "2");
  CHECK(j.at("check").at("values_agree") == true);
  CHECK(j.at("check").at("witness_lipschitz") == true);
  // a round trip rebuilds the space, so compare through the names
  const auto again = molecule_from_json(molecule_to_json(m));
  CHECK(again.space()->points() == m.space()->points());
  CHECK(again.coeffs() == m.coeffs());
  CHECK(kr_norm(again).value == 2);
}

TEST_CASE("group specs") {
  for (const auto* f : {"z.json", "z2.json", "f2.json", "z2z2z2.json", "z_x_z3.json", "z2_z3.json"}) {
    const auto spec = group_spec_from_json(read_json_file(data(std::string("groups/") + f)));
    const auto back = group_spec_from_json(group_spec_to_json(spec));
    CHECK(back.family == spec.family);
    CHECK(build_ball(make_group(back), 3).size() == build_ball(make_group(spec), 3).size());
  }
  CHECK_THROWS_AS(group_spec_from_json(json{{"family", "bogus"}}), std::invalid_argument);

  const auto ball = build_ball(make_group(group_spec_from_json(read_json_file(data("groups/z2.json")))), 2);
  const auto j = ball_to_json(ball);
  CHECK(j.at("elements").size() == 13);
  CHECK(combability_to_json(audit_combability(ball), ball).is_object());
}

TEST_CASE("quotient corpus loads") {
  namespace fs = std::filesystem;
  int files = 0;
  for (const auto& entry : fs::directory_iterator(data("quotient"))) {
    const auto j = read_json_file(entry.path().string());
    const auto G = finite_metric_group_from_json(j.at("metric"));
    if (j.contains("subgroup")) {
      const auto a = audit_projection(G, j.at("subgroup").get<std::vector<int>>());
      CHECK(a.passed());
      CHECK(projection_audit_to_json(a).at("passed") == true);
    }
    ++files;
  }
  CHECK(files >= 5);
}

TEST_CASE("finite groups from json") {
  CHECK(finite_group_from_json(json{{"kind", "dihedral"}, {"n", 4}}).order() == 8);
  CHECK(finite_group_from_json(json::parse(R"({"product": [{"kind": "cyclic", "n": 2}, {"kind": "cyclic", "n": 3}]})")).order() == 6);
  CHECK(finite_group_from_json(json::parse(R"({"table": [[0, 1], [1, 0]]})")).order() == 2);
  CHECK_THROWS_AS(finite_group_from_json(json{{"kind", "mystery"}, {"n", 2}}), std::invalid_argument);
  const auto G = finite_metric_group_from_json(json::parse(R"({"group": {"kind": "cyclic", "n": 3}, "dist": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]})"));
  CHECK(G.d(1, 2) == 1);
}

TEST_CASE("circle inputs") {
  const auto corpus = read_json_file(data("harmonic/circle_corpus.json"));
  const int M = corpus.at("M");
  for (const auto& f : corpus.at("functions")) {
    const auto in = circle_input_from_json(f, M);
    CHECK(in.samples.size() == M);
    CHECK(in.name == f.at("name").get<std::string>());
    CHECK(in.poly.has_value() == (in.name != "abs_t_minus_pi"));
  }
  const auto mixed = circle_input_from_json(corpus.at("functions").at(4), 64);
  CHECK(mixed.poly->coeff(1) == std::complex<double>(0.25, -0.5));
  CHECK(mixed.samples(0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(circle_input_from_json(json{{"name", "x"}}, 64), std::invalid_argument);
  CHECK_THROWS_AS(read_json_file(data("no/such/file.json")), std::invalid_argument);
}
