// lipfree: command-line front end for the audits.
//
// Exit codes: 0 success, 1 an audited bound failed, 2 usage or config error,
// 3 resource limit, 4 any other failure (including non-convergence).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "lipfree/basis.hpp"
#include "lipfree/errors.hpp"
#include "lipfree/freespace.hpp"
#include "lipfree/groups.hpp"
#include "lipfree/harmonic.hpp"
#include "lipfree/hyperbolic.hpp"
#include "lipfree/json_io.hpp"
#include "lipfree/quotient.hpp"

#ifndef LIPFREE_VERSION
#define LIPFREE_VERSION "0.0.0"
#endif

namespace {

using namespace lipfree;

constexpr int kOk = 0;
constexpr int kBoundFailed = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;
constexpr int kOther = 4;

struct Options {
  std::string command;
  std::string config;
  std::string out;
  int radius = -1;
  long nmax = 0;
  double tol = 1e-9;
  int grid = 0;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  bool csv = false;
};

struct Outcome {
  json result;
  std::string scalar;
  bool bound_ok = true;
  std::string csv;  // optional table
  std::string summary;  // one line for stdout when writing to a directory
};

json options_json(const Options& o, const json& config) {
  json j = {{"command", o.command}, {"config_path", o.config}, {"config", config},
            {"threads", o.threads}, {"seed", o.seed}, {"tol", o.tol}};
  if (o.radius >= 0) j["radius"] = o.radius;
  if (o.nmax > 0) j["nmax"] = o.nmax;
  if (o.grid > 0) j["grid"] = o.grid;
  return j;
}

int require_radius(const Options& o, const json& config) {
  if (o.radius >= 0) return o.radius;
  if (config.contains("radius")) return config.at("radius").get<int>();
  throw std::invalid_argument("--radius is required");
}

/// Group spec either at the top level or under "group", radius optional in the config.
json group_part(const json& config) { return config.contains("group") ? config.at("group") : config; }

Outcome run_ball(const Options& o, const json& config) {
  auto ball = build_ball(make_group(group_spec_from_json(group_part(config))), require_radius(o, config));
  Outcome out;
  out.scalar = "rational";
  out.result = ball_to_json(ball);
  out.summary = "ball of radius " + std::to_string(ball.radius) + ": " + std::to_string(ball.size()) + " elements";
  return out;
}

Outcome run_comb_audit(const Options& o, const json& config) {
  auto ball = build_ball(make_group(group_spec_from_json(group_part(config))), require_radius(o, config));
  const auto report = audit_combability(ball, o.threads);
  Outcome out;
  out.scalar = "rational";
  out.result = combability_to_json(report, ball);
  out.summary = "max_divergence " + std::to_string(report.definition.max_divergence) + " (i<=min), " +
                std::to_string(report.saturated.max_divergence) + " (i<max,saturated)";
  return out;
}

Outcome run_norm(const Options&, const json& config) {
  const auto m = molecule_from_json(config);
  const auto cert = kr_norm(m);
  Outcome out;
  out.scalar = "rational";
  out.result = certificate_to_json(m, cert);
  out.bound_ok = check_certificate(m, cert).ok();
  out.summary = to_string(cert.value);
  return out;
}

Outcome run_basis_audit(const Options& o, const json& config) {
  auto ball = std::make_shared<const CayleyBall>(
      build_ball(make_group(group_spec_from_json(group_part(config))), require_radius(o, config)));
  const auto comb = audit_combability(*ball, o.threads);
  const long nmax = o.nmax > 0 ? o.nmax : config.value("nmax", 0L);
  const BasisSystem system(ball, comb.proof_constant(), nmax);
  auto audit = audit_claim(system, o.threads);
  const int samples = config.value("sweep_samples", 200);
  sweep_projection_norms(audit, system, samples, o.seed, o.threads);
  Outcome out;
  out.scalar = "rational";
  out.result = claim_audit_to_json(audit);
  out.result["sweep_samples"] = samples;
  out.result["combability"] = combability_to_json(comb, *ball);
  out.bound_ok = audit.passed();
  out.summary = std::string(audit.passed() ? "claim checks pass" : "claim checks FAIL") +
                ", basis constant observed " + to_string(audit.basis_constant_observed) + ", K = " +
                std::to_string(audit.K);
  return out;
}

Outcome run_quotient_audit(const Options&, const json& config) {
  const auto G = finite_metric_group_from_json(config.at("metric"));
  const auto audit = audit_projection(G, config.at("subgroup").get<std::vector<int>>());
  Outcome out;
  out.scalar = "rational";
  out.result = projection_audit_to_json(audit);
  out.bound_ok = audit.passed();
  out.summary = std::string(audit.passed() ? "projection audit passes" : "projection audit FAILS") +
                " (formula " + side_name(audit.primary.side) + ")";
  return out;
}

Outcome run_tower(const Options&, const json& config) {
  const auto G = finite_metric_group_from_json(config.at("metric"));
  RationalMolecule m(G.space());
  if (config.contains("molecule")) {
    for (const auto& [id, a] : config.at("molecule").items()) m.add(G.space()->index_of(id), rational_from_json(a));
  }
  const auto report = tower_convergence(G, config.at("chain").get<std::vector<std::vector<int>>>(), m);
  Outcome out;
  out.scalar = "rational";
  out.result = tower_to_json(report);
  out.result["molecule"] = molecule_to_json(m)["coeffs"];
  out.bound_ok = report.passed();
  std::ostringstream s;
  s << "errors";
  for (const auto& l : report.levels) s << ' ' << to_string(l.error) << "<=" << to_string(l.bound);
  out.summary = s.str();
  return out;
}

Outcome run_fejer(const Options& o, const json& config) {
  const int M = o.grid > 0 ? o.grid : config.value("M", 4096);
  const auto degrees = config.value("degrees", std::vector<int>{0, 1, 5, 50});
  const auto alphas = config.value("alphas", std::vector<double>{0.5, 0.75});
  Outcome out;
  out.scalar = "float";
  json kernels = json::array();
  for (int n : degrees) {
    const auto vals = fejer_kernel_values(n, M);
    const auto c = fejer_coefficients(n);
    bool symmetric = true;
    for (int k = 1; k <= n; ++k) symmetric = symmetric && c(n + k) == c(n - k);
    const bool ok = vals.minCoeff() >= -1e-12 && c(n) == 1.0 && symmetric;
    out.bound_ok = out.bound_ok && ok;
    kernels.push_back({{"n", n}, {"grid_min", vals.minCoeff()}, {"unit_mass", c(n) == 1.0},
                       {"symmetric", symmetric}, {"ok", ok}});
  }
  json functions = json::array();
  std::ostringstream csv;
  csv << "function,n,sup_error,lip_ratio\n";
  csv.precision(17);
  std::vector<json> fn_specs;
  if (config.contains("functions")) {
    for (const auto& f : config.at("functions")) fn_specs.push_back(f);
  }
  if (config.contains("function")) fn_specs.push_back(config.at("function"));
  for (const auto& spec : fn_specs) {
    const auto in = circle_input_from_json(spec, M);
    json young = json::array();
    for (int n : degrees) {
      const auto a = in.poly ? audit_young(*in.poly, n, M, alphas) : audit_young(in.samples, n, alphas);
      out.bound_ok = out.bound_ok && a.passed();
      young.push_back(young_to_json(a));
    }
    const auto conv = audit_pointwise_convergence(in.samples, degrees, config.value("target", 1e300));
    for (std::size_t i = 0; i < conv.levels.size(); ++i) {
      const auto& lip = young[i]["metrics"][0];
      const double lf = lip["lip_f"].get<double>();
      csv << in.name << ',' << conv.levels[i].n << ',' << conv.levels[i].sup_error << ','
          << (lf > 0 ? lip["lip_Tf"].get<double>() / lf : 0.0) << '\n';
    }
    out.bound_ok = out.bound_ok && conv.passed();
    functions.push_back({{"name", in.name}, {"young", young}, {"convergence", convergence_to_json(conv)}});
  }
  out.result = {{"M", M}, {"kernels", kernels}, {"functions", functions}};
  out.csv = csv.str();
  out.summary = out.bound_ok ? "fejer audits pass" : "fejer audits FAIL";
  return out;
}

Outcome run_sphere_kernel(const Options& o, const json& config) {
  SphereKernelSpec spec;
  spec.d = config.value("d", 3);
  spec.delta = config.value("delta", 2.0);
  const int n_max = o.nmax > 0 ? static_cast<int>(o.nmax) : config.value("n_max", 50);
  const int grid = o.grid > 0 ? o.grid : config.value("grid_points", 2001);
  const double tol = config.value("norm_tol", 1e-8);
  Outcome out;
  out.scalar = "float";
  json reports = json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "n,norm,min_at_nodes,min_on_grid\n";
  for (int n = config.value("n_min", 0); n <= n_max; ++n) {
    spec.n = n;
    const auto r = cesaro_kernel(spec, grid);
    const bool ok = std::abs(r.norm - 1.0) <= tol && r.min_at_nodes >= -1e-10 && r.min_on_grid >= -1e-10;
    out.bound_ok = out.bound_ok && ok;
    auto j = kernel_to_json(r);
    j["ok"] = ok;
    reports.push_back(std::move(j));
    csv << n << ',' << r.norm << ',' << r.min_at_nodes << ',' << r.min_on_grid << '\n';
  }
  out.result = {{"kernels", reports}, {"norm_tol", tol}};
  out.csv = csv.str();
  out.summary = out.bound_ok ? "kernel norms within tolerance" : "kernel audit FAILS";
  return out;
}

Outcome run_net(const Options& o, const json& config) {
  const int dim = config.value("dimension", 2);
  const auto count = config.value("count", std::size_t{100});
  const double spread = config.value("spread", 1.0);
  const double eps = config.value("eps", 0.3);
  std::mt19937_64 rng(config.value("seed", o.seed));
  const auto samples = random_hyperboloid_samples(dim, count, spread, rng);
  const auto net = greedy_net(samples, eps);
  double min_sep = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < net.size(); ++i) {
    for (Index k = i + 1; k < net.size(); ++k) min_sep = std::min(min_sep, net(i, k));
  }
  double cover = 0.0;
  for (const auto& s : samples) {
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < net.size(); ++i) {
      const auto idx = static_cast<std::size_t>(std::stoul(net.name(i).substr(1)));
      best = std::min(best, hyperbolic_distance(s, samples[idx]));
    }
    cover = std::max(cover, best);
  }
  const auto violations = validate(net, 1e-9);
  Outcome out;
  out.scalar = "float";
  json v = json::array();
  for (const auto& x : violations) v.push_back(x.description);
  const bool separated = net.size() < 2 || min_sep >= eps;
  const bool covering = cover < eps;
  out.bound_ok = separated && covering && violations.empty();
  out.result = {{"size", net.size()},
                {"min_separation", net.size() < 2 ? json(nullptr) : json(min_sep)},
                {"covering_radius", cover},
                {"separated", separated},
                {"covering", covering},
                {"violations", v},
                {"space", space_to_json(net)}};
  out.summary = std::to_string(net.size()) + " net points";
  return out;
}

Outcome dispatch(const Options& o, const json& config) {
  if (o.command == "ball") return run_ball(o, config);
  if (o.command == "comb-audit") return run_comb_audit(o, config);
  if (o.command == "norm") return run_norm(o, config);
  if (o.command == "basis-audit") return run_basis_audit(o, config);
  if (o.command == "quotient-audit") return run_quotient_audit(o, config);
  if (o.command == "tower") return run_tower(o, config);
  if (o.command == "fejer") return run_fejer(o, config);
  if (o.command == "sphere-kernel") return run_sphere_kernel(o, config);
  if (o.command == "net") return run_net(o, config);
  throw std::invalid_argument("unknown command '" + o.command + "'");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot write '" + path.string() + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz-free space audits: combings, basis projections, averaging projections, summability kernels"};
  app.set_version_flag("--version", LIPFREE_VERSION);
  Options o;
  app.add_option("command", o.command, "ball | comb-audit | norm | basis-audit | quotient-audit | tower | fejer | sphere-kernel | net")
      ->required()
      ->check(CLI::IsMember({"ball", "comb-audit", "norm", "basis-audit", "quotient-audit", "tower", "fejer",
                             "sphere-kernel", "net"}));
  app.add_option("--config", o.config, "JSON input")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "directory for <command>.json (and .csv); stdout when omitted");
  app.add_option("--radius", o.radius, "ball radius")->check(CLI::NonNegativeNumber);
  app.add_option("--nmax", o.nmax, "largest basis index / kernel degree")->check(CLI::NonNegativeNumber);
  app.add_option("--tol", o.tol, "tolerance for floating-point norms")->check(CLI::PositiveNumber);
  app.add_option("--grid", o.grid, "grid size")->check(CLI::PositiveNumber);
  app.add_option("--threads", o.threads, "worker cap")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "random seed");
  app.add_flag("--csv", o.csv, "also write a CSV table");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const json config = o.config.empty() ? json::object() : read_json_file(o.config);
    const auto outcome = dispatch(o, config);
    const json report = {{"tool", "lipfree"},
                         {"version", LIPFREE_VERSION},
                         {"scalar", outcome.scalar},
                         {"run", options_json(o, config)},
                         {"bound_ok", outcome.bound_ok},
                         {"result", outcome.result}};
    const auto text = report.dump(2) + "\n";
    if (o.out.empty()) {
      std::cout << text;
      if (o.csv && !outcome.csv.empty()) std::cout << outcome.csv;
    } else {
      std::filesystem::create_directories(o.out);
      const std::filesystem::path dir(o.out);
      write_file(dir / (o.command + ".json"), text);
      if (o.csv && !outcome.csv.empty()) write_file(dir / (o.command + ".csv"), outcome.csv);
      std::cout << outcome.summary << "\n";
    }
    return outcome.bound_ok ? kOk : kBoundFailed;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}
