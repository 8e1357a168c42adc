#include "lipfree/json_io.hpp"

#include <fstream>
#include <numbers>
#include <stdexcept>

namespace lipfree {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + path + "': " + e.what());
  }
}

json rational_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("expected a rational as \"p/q\" or an integer, got " + j.dump());
}

namespace {

std::string point_id(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long>());
  throw std::invalid_argument("point identifiers must be strings or integers");
}

template <class Scalar, class Parse>
PointedMetricSpace<Scalar> space_from(const json& j, const char* kind, Parse parse) {
  const auto scalar = j.value("scalar", std::string(kind));
  if (scalar != kind) {
    throw std::invalid_argument(std::string("expected a ") + kind + " space, got scalar '" + scalar + "'");
  }
  std::vector<std::string> points;
  for (const auto& p : j.at("points")) points.push_back(point_id(p));
  const auto base_id = point_id(j.at("basepoint"));
  auto it = std::find(points.begin(), points.end(), base_id);
  if (it == points.end()) throw std::invalid_argument("basepoint '" + base_id + "' is not a point");
  const auto& rows = j.at("dist");
  const auto n = static_cast<Index>(points.size());
  if (static_cast<Index>(rows.size()) != n) throw std::invalid_argument("dist must have one row per point");
  typename PointedMetricSpace<Scalar>::Matrix d(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != n) throw std::invalid_argument("dist row has the wrong length");
    for (Index k = 0; k < n; ++k) d(i, k) = parse(row.at(static_cast<std::size_t>(k)));
  }
  return PointedMetricSpace<Scalar>(std::move(points), it - points.begin(), std::move(d));
}

template <class Scalar, class Emit>
json space_json(const PointedMetricSpace<Scalar>& s, const char* kind, Emit emit) {
  json dist = json::array();
  for (Index i = 0; i < s.size(); ++i) {
    json row = json::array();
    for (Index k = 0; k < s.size(); ++k) row.push_back(emit(s(i, k)));
    dist.push_back(std::move(row));
  }
  return {{"points", s.points()}, {"basepoint", s.name(s.basepoint())}, {"dist", dist}, {"scalar", kind}};
}

}  // namespace

json space_to_json(const RationalSpace& space) {
  return space_json(space, "rational", [](const Rational& q) { return rational_json(q); });
}

json space_to_json(const FloatSpace& space) {
  return space_json(space, "float", [](double x) { return json(x); });
}

RationalSpace rational_space_from_json(const json& j) {
  return space_from<Rational>(j, "rational", rational_from_json);
}

FloatSpace float_space_from_json(const json& j) {
  return space_from<double>(j, "float", [](const json& v) { return v.get<double>(); });
}

RationalMolecule molecule_from_json(const json& j) {
  auto space = std::make_shared<const RationalSpace>(rational_space_from_json(j.at("space")));
  RationalMolecule m(space);
  for (const auto& [id, a] : j.at("coeffs").items()) m.add(space->index_of(id), rational_from_json(a));
  return m;
}

json molecule_to_json(const RationalMolecule& m) {
  json coeffs = json::object();
  for (const auto& [p, a] : m.coeffs()) coeffs[m.space()->name(p)] = rational_json(a);
  return {{"space", space_to_json(*m.space())}, {"coeffs", coeffs}};
}

namespace {

template <class Scalar, class Emit>
json certificate_json(const Molecule<Scalar>& m, const TransportCertificate<Scalar>& c, Emit emit) {
  const auto& s = *m.space();
  json flow = json::array();
  for (const auto& f : c.flow) flow.push_back({s.name(f.source), s.name(f.sink), emit(f.mass)});
  json witness = json::object();
  for (const auto& [p, v] : c.witness) witness[s.name(p)] = emit(v);
  const auto check = check_certificate(m, c);
  return {{"value", emit(c.value)},
          {"primal", emit(c.primal)},
          {"dual", emit(c.dual)},
          {"gap", emit(c.gap)},
          {"flow", flow},
          {"witness", witness},
          {"pivots", c.pivots},
          {"check",
           {{"mass_conserved", check.mass_conserved},
            {"witness_lipschitz", check.witness_lipschitz},
            {"witness_vanishes_at_base", check.witness_vanishes_at_base},
            {"values_agree", check.values_agree}}}};
}

}  // namespace

json certificate_to_json(const RationalMolecule& m, const TransportCertificate<Rational>& c) {
  return certificate_json(m, c, [](const Rational& q) { return rational_json(q); });
}

json certificate_to_json(const FloatMolecule& m, const TransportCertificate<double>& c) {
  return certificate_json(m, c, [](double x) { return json(x); });
}

GroupSpec group_spec_from_json(const json& j) {
  GroupSpec spec;
  const auto family = j.at("family").get<std::string>();
  if (family == "free_abelian") {
    spec.family = GroupFamily::free_abelian;
    spec.rank = j.value("rank", 0);
    spec.torsion = j.value("torsion", std::vector<int>{});
  } else if (family == "free") {
    spec.family = GroupFamily::free;
    spec.rank = j.at("rank").get<int>();
  } else if (family == "free_product_cyclic") {
    spec.family = GroupFamily::free_product_cyclic;
    spec.orders = j.at("orders").get<std::vector<int>>();
  } else if (family == "finite_table") {
    spec.family = GroupFamily::finite_table;
    spec.table = j.at("table").get<std::vector<std::vector<int>>>();
    spec.generators = j.at("generators").get<std::vector<int>>();
  } else {
    throw std::invalid_argument("unknown group family '" + family + "'");
  }
  spec.generator_order = j.value("generator_order", std::vector<std::string>{});
  return spec;
}

json group_spec_to_json(const GroupSpec& spec) {
  json j = {{"family", family_name(spec.family)}};
  switch (spec.family) {
    case GroupFamily::free_abelian:
      j["rank"] = spec.rank;
      j["torsion"] = spec.torsion;
      break;
    case GroupFamily::free:
      j["rank"] = spec.rank;
      break;
    case GroupFamily::free_product_cyclic:
      j["orders"] = spec.orders;
      break;
    case GroupFamily::finite_table:
      j["table"] = spec.table;
      j["generators"] = spec.generators;
      break;
  }
  if (!spec.generator_order.empty()) j["generator_order"] = spec.generator_order;
  return j;
}

json ball_to_json(const CayleyBall& ball) {
  json gens = json::array();
  for (std::size_t s = 0; s < ball.group->generator_count(); ++s) {
    gens.push_back(ball.group->generator_name(static_cast<int>(s)));
  }
  json elements = json::array();
  for (Index g = 0; g < ball.size(); ++g) {
    const Index p = ball.parent[static_cast<std::size_t>(g)];
    elements.push_back({{"index", g},
                        {"normal_form", ball.name(g)},
                        {"length", ball.length[static_cast<std::size_t>(g)]},
                        {"parent", p < 0 ? json(nullptr) : json(ball.name(p))}});
  }
  return {{"radius", ball.radius},
          {"generator_order", gens},
          {"size", ball.size()},
          {"edge_count", ball.edges.size()},
          {"elements", elements}};
}

json combability_to_json(const CombabilityReport& r, const CayleyBall& ball) {
  auto conv = [&](const ConventionResult& c) {
    json w = nullptr;
    if (c.witness.g >= 0) {
      w = {{"g", ball.name(c.witness.g)}, {"h", ball.name(c.witness.h)}, {"i", c.witness.i}};
    }
    return json{{"convention", c.convention}, {"max_divergence", c.max_divergence}, {"witness", w}};
  };
  return {{"radius", r.radius},
          {"edges_audited", r.edges_audited},
          {"definition", conv(r.definition)},
          {"saturated", conv(r.saturated)},
          {"constant", r.constant()},
          {"proof_constant", r.proof_constant()}};
}

json claim_audit_to_json(const ClaimAudit& a) {
  json records = json::array();
  for (const auto& r : a.records) {
    records.push_back({{"n", r.n},
                       {"lip_exact", rational_json(r.lip_exact)},
                       {"case1_max", r.case1_max},
                       {"commuting", r.commuting},
                       {"idempotent", r.idempotent},
                       {"cases_agree", r.cases_agree}});
    if (r.sweep_samples > 0) {
      records.back()["sweep"] = {{"samples", r.sweep_samples},
                                 {"max_ratio", rational_json(r.sweep_max)},
                                 {"ok", r.sweep_ok}};
    }
  }
  return {{"records", records},
          {"summary",
           {{"K", a.K},
            {"n_max", a.n_max},
            {"all_commuting", a.all_commuting},
            {"all_idempotent", a.all_idempotent},
            {"cases_agree", a.cases_agree},
            {"K_plus_1_bound_ok", a.K_plus_1_bound_ok},
            {"case1_bound_ok", a.case1_bound_ok},
            {"sweep_ok", a.sweep_ok},
            {"basis_constant_observed", rational_json(a.basis_constant_observed)},
            {"passed", a.passed()}}}};
}

FiniteGroup finite_group_from_json(const json& j) {
  if (j.contains("table")) return FiniteGroup(j.at("table").get<std::vector<std::vector<int>>>());
  if (j.contains("product")) {
    const auto& parts = j.at("product");
    if (!parts.is_array() || parts.size() < 2) throw std::invalid_argument("product needs two or more factors");
    FiniteGroup g = finite_group_from_json(parts.at(0));
    for (std::size_t i = 1; i < parts.size(); ++i) g = direct_product(g, finite_group_from_json(parts.at(i)));
    return g;
  }
  const auto kind = j.at("kind").get<std::string>();
  const int n = j.at("n").get<int>();
  if (kind == "cyclic") return cyclic_group(n);
  if (kind == "dihedral") return dihedral_group(n);
  if (kind == "symmetric") return symmetric_group(n);
  throw std::invalid_argument("unknown finite group kind '" + kind + "'");
}

FiniteMetricGroup finite_metric_group_from_json(const json& j) {
  auto group = finite_group_from_json(j.at("group"));
  if (j.contains("dist")) {
    const auto& rows = j.at("dist");
    const int n = group.order();
    if (static_cast<int>(rows.size()) != n) throw std::invalid_argument("dist must be |G| x |G|");
    DistanceMatrix<Rational> d(n, n);
    for (int a = 0; a < n; ++a) {
      if (static_cast<int>(rows.at(static_cast<std::size_t>(a)).size()) != n) {
        throw std::invalid_argument("dist row has the wrong length");
      }
      for (int b = 0; b < n; ++b) {
        d(a, b) = rational_from_json(rows.at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b)));
      }
    }
    return FiniteMetricGroup(std::move(group), std::move(d));
  }
  return FiniteMetricGroup::word_metric(std::move(group), j.at("generators").get<std::vector<int>>());
}

json projection_audit_to_json(const ProjectionAudit& a) {
  auto formula = [](const FormulaAudit& f) {
    return json{{"formula", side_name(f.side)},
                {"idempotent", f.idempotent},
                {"coset_constant", f.coset_constant},
                {"lip", rational_json(f.lip)},
                {"lip_ok", f.lip_ok},
                {"isometry_ok", f.isometry_ok},
                {"isometry_failures", f.isometry_failures},
                {"passed", f.passed()}};
  };
  json violations = json::array();
  for (const auto& v : a.metric_violations) violations.push_back(v.description);
  json j = {{"group_order", a.group_order},
            {"subgroup_order", a.subgroup_order},
            {"coset_count", a.coset_count},
            {"normal", a.normal},
            {"hypotheses", a.hypotheses.holding()},
            {"quotient_is_metric", a.quotient_is_metric},
            {"metric_violations", violations},
            {"primary", formula(a.primary)},
            {"passed", a.passed()}};
  if (a.alternate) j["alternate"] = formula(*a.alternate);
  if (a.formulas_coincide) j["formulas_coincide"] = *a.formulas_coincide;
  return j;
}

json tower_to_json(const TowerReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"subgroup_order", l.subgroup_order},
                      {"eps", rational_json(l.eps)},
                      {"error", rational_json(l.error)},
                      {"bound", rational_json(l.bound)},
                      {"ok", l.ok}});
  }
  return {{"levels", levels}, {"all_ok", r.all_ok}, {"final_error_zero", r.final_error_zero},
          {"passed", r.passed()}};
}

CircleInput circle_input_from_json(const json& j, int M) {
  CircleInput in;
  in.name = j.value("name", std::string("f"));
  if (j.contains("coefficients")) {
    int N = 0;
    for (const auto& e : j.at("coefficients")) N = std::max(N, std::abs(e.at(0).get<int>()));
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * N + 1);
    for (const auto& e : j.at("coefficients")) {
      const int k = e.at(0).get<int>();
      c(k + N) = {e.at(1).get<double>(), e.size() > 2 ? e.at(2).get<double>() : 0.0};
    }
    in.poly = CircleFunction(std::move(c));
  } else if (j.contains("random_trig")) {
    const auto& r = j.at("random_trig");
    in.poly = random_trig_polynomial(r.at("degree").get<int>(), r.at("seed").get<std::uint64_t>());
  } else if (j.contains("builtin")) {
    const auto b = j.at("builtin").get<std::string>();
    if (b == "cos") {
      in.poly = CircleFunction::mode(1, 1.0, 0.0);
    } else if (b == "constant") {
      in.poly = CircleFunction::constant(j.value("value", 1.0));
    } else if (b == "abs_t_minus_pi") {
      in.samples = abs_t_minus_pi(M);
    } else {
      throw std::invalid_argument("unknown builtin circle function '" + b + "'");
    }
  } else if (j.contains("samples")) {
    const auto v = j.at("samples").get<std::vector<double>>();
    if (static_cast<int>(v.size()) != M) {
      throw std::invalid_argument("sample count " + std::to_string(v.size()) + " does not match grid " +
                                  std::to_string(M));
    }
    in.samples = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  } else {
    throw std::invalid_argument("circle function needs coefficients, samples, builtin or random_trig");
  }
  if (in.poly) {
    if (2 * in.poly->degree() >= M) throw std::invalid_argument("grid too coarse for '" + in.name + "'");
    in.samples = in.poly->sample(M);
  }
  return in;
}

json young_to_json(const YoungAudit& a) {
  json metrics = json::array();
  for (const auto& m : a.metrics) {
    metrics.push_back({{"alpha", m.alpha}, {"lip_f", m.lip_f}, {"lip_Tf", m.lip_Tf}, {"ok", m.ok}});
  }
  return {{"n", a.n}, {"M", a.M}, {"eps_grid", a.eps_grid}, {"metrics", metrics}, {"passed", a.passed()}};
}

json convergence_to_json(const ConvergenceAudit& a) {
  json levels = json::array();
  for (const auto& l : a.levels) levels.push_back({{"n", l.n}, {"sup_error", l.sup_error}});
  return {{"M", a.M},
          {"target", a.target},
          {"levels", levels},
          {"monotone", a.monotone},
          {"below_target", a.below_target},
          {"passed", a.passed()}};
}

json kernel_to_json(const KernelReport& r) {
  std::vector<double> A(r.A.data(), r.A.data() + r.A.size());
  std::vector<double> c(r.coefficients.data(), r.coefficients.data() + r.coefficients.size());
  return {{"d", r.spec.d},
          {"delta", r.spec.delta},
          {"n", r.spec.n},
          {"Lambda", r.spec.Lambda()},
          {"A", A},
          {"legendre_coefficients", c},
          {"quadrature_nodes", r.quadrature_nodes},
          {"norm", r.norm},
          {"constant_term", r.constant_term},
          {"min_at_nodes", r.min_at_nodes},
          {"min_on_grid", r.min_on_grid},
          {"grid_points", r.grid_points}};
}

}  // namespace lipfree
