#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lipfree/basis.hpp"
#include "lipfree/freespace.hpp"
#include "lipfree/groups.hpp"
#include "lipfree/harmonic.hpp"
#include "lipfree/quotient.hpp"

namespace lipfree {

using nlohmann::json;

/// Reads a JSON document; throws std::invalid_argument with the path on failure.
json read_json_file(const std::string& path);

json rational_json(const Rational& q);
/// Accepts "p/q" strings and JSON integers.
Rational rational_from_json(const json& j);

json space_to_json(const RationalSpace& space);
json space_to_json(const FloatSpace& space);
/// {"points", "basepoint", "dist", "scalar"}; scalar must be "rational".
RationalSpace rational_space_from_json(const json& j);
FloatSpace float_space_from_json(const json& j);

/// {"space": {...}, "coeffs": {"pt": "3/2", ...}}
RationalMolecule molecule_from_json(const json& j);
json molecule_to_json(const RationalMolecule& m);
json certificate_to_json(const RationalMolecule& m, const TransportCertificate<Rational>& c);
json certificate_to_json(const FloatMolecule& m, const TransportCertificate<double>& c);

GroupSpec group_spec_from_json(const json& j);
json group_spec_to_json(const GroupSpec& spec);
json ball_to_json(const CayleyBall& ball);
json combability_to_json(const CombabilityReport& r, const CayleyBall& ball);
json claim_audit_to_json(const ClaimAudit& a);

/// Either {"table": [[...]]} or a named family {"kind": "cyclic"|"dihedral"|
/// "symmetric", "n": k}, optionally {"product": [g1, g2]}.
FiniteGroup finite_group_from_json(const json& j);
/// {"group": ..., "dist": [[...]]} or {"group": ..., "generators": [...]}.
FiniteMetricGroup finite_metric_group_from_json(const json& j);
json projection_audit_to_json(const ProjectionAudit& a);
json tower_to_json(const TowerReport& r);

/// A circle function in one of the forms {"coefficients": [[k, re, im], ...]},
/// {"samples": [...]}, {"builtin": "cos"|"abs_t_minus_pi"|"constant"} or
/// {"random_trig": {"degree": d, "seed": s}}, sampled on M points.
struct CircleInput {
  std::string name;
  std::optional<CircleFunction> poly;  // absent for non-polynomial inputs
  Eigen::VectorXd samples;
};
CircleInput circle_input_from_json(const json& j, int M);

json young_to_json(const YoungAudit& a);
json convergence_to_json(const ConvergenceAudit& a);
json kernel_to_json(const KernelReport& r);

}  // namespace lipfree
