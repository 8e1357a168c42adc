#include "lipfree/basis.hpp"

#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include "lipfree/parallel.hpp"

namespace lipfree {

BasisSystem::BasisSystem(std::shared_ptr<const CayleyBall> ball, int K, Index n_max)
    : ball_(std::move(ball)), K_(K) {
  if (!ball_) throw std::invalid_argument("basis system needs a ball");
  if (ball_->radius < 1) throw std::invalid_argument("basis system needs radius >= 1");
  core_size_ = ball_->count_up_to_length(ball_->radius - 1);
  if (n_max < 0 || n_max > core_size_) {
    throw std::out_of_range("n_max " + std::to_string(n_max) + " exceeds the auditable core (" +
                            std::to_string(core_size_) + " elements)");
  }
  n_max_ = n_max == 0 ? core_size_ : n_max;
  dist_ = ball_distance_table(*ball_, core_size_);
  RationalSpace::Matrix q(core_size_, core_size_);
  std::vector<std::string> names;
  for (Index i = 0; i < core_size_; ++i) {
    names.push_back(ball_->name(i));
    for (Index j = 0; j < core_size_; ++j) q(i, j) = dist_(i, j);
  }
  space_ = std::make_shared<const RationalSpace>(std::move(names), 0, std::move(q));
}

void BasisSystem::check_n(Index n) const {
  if (n < 1 || n > n_max_) {
    throw std::out_of_range("index n = " + std::to_string(n) + " outside [1, " +
                            std::to_string(n_max_) + "]");
  }
}

void BasisSystem::check_core(Index g) const {
  if (g < 0 || g >= core_size_) throw std::out_of_range("element outside the auditable core");
}

Index BasisSystem::retraction(Index n, Index g) const {
  check_n(n);
  check_core(g);
  // Ball indices decrease along the prefix chain, so the first prefix with
  // index < n is the longest prefix inside G_n.
  while (g >= n) g = ball_->parent[static_cast<std::size_t>(g)];
  return g;
}

Index BasisSystem::retraction_by_cases(Index n, Index g) const {
  check_n(n);
  check_core(g);
  if (g < n) return g;
  const int m = ball_->length[static_cast<std::size_t>(n - 1)];
  const int len = ball_->length[static_cast<std::size_t>(g)];
  if (len < m) throw std::logic_error("element shorter than G_n's longest element lies outside G_n");
  const Index p = prefix_element(*ball_, g, m);
  if (p < n) return p;
  return prefix_element(*ball_, g, m - 1);
}

std::vector<Index> BasisSystem::retraction_map(Index n) const {
  std::vector<Index> map(static_cast<std::size_t>(core_size_));
  for (Index g = 0; g < core_size_; ++g) map[static_cast<std::size_t>(g)] = retraction(n, g);
  return map;
}

RationalMolecule BasisSystem::project(Index n, const RationalMolecule& m) const {
  if (m.space() != space_) throw std::invalid_argument("molecule is not over this system's core");
  RationalMolecule out(space_);
  for (const auto& [g, a] : m.coeffs()) out.add(retraction(n, g), a);
  return out;
}

RationalMolecule BasisSystem::basis_vector(Index n) const {
  check_n(n);
  if (n < 2) throw std::out_of_range("basis vectors start at n = 2");
  const Index g = n - 1;
  RationalMolecule out = delta(g);
  out -= delta(ball_->parent[static_cast<std::size_t>(g)]);
  return out;
}

std::vector<std::pair<Index, Rational>> BasisSystem::expand(const RationalMolecule& m) const {
  if (m.space() != space_) throw std::invalid_argument("molecule is not over this system's core");
  std::map<Index, Rational> acc;
  for (const auto& [h, a] : m.coeffs()) {
    check_core(h);
    for (Index x = h; x != 0; x = ball_->parent[static_cast<std::size_t>(x)]) acc[x + 1] += a;
  }
  std::vector<std::pair<Index, Rational>> out;
  for (auto& [n, c] : acc) {
    if (c != 0) out.emplace_back(n, std::move(c));
  }
  return out;
}

RationalMolecule BasisSystem::reconstruct(const std::vector<std::pair<Index, Rational>>& coeffs,
                                          Index up_to) const {
  RationalMolecule out(space_);
  for (const auto& [n, c] : coeffs) {
    if (up_to >= 0 && n > up_to) continue;
    const Index g = n - 1;
    check_core(g);
    if (g == 0) throw std::out_of_range("the identity carries no basis vector");
    out.add(g, c);
    out.add(ball_->parent[static_cast<std::size_t>(g)], Rational(-c));
  }
  return out;
}

ClaimAudit audit_claim(const BasisSystem& system, unsigned threads) {
  const Index nmax = system.n_max();
  if (nmax < 2) throw std::invalid_argument("claim audit needs n_max >= 2");
  const auto& ball = system.ball();
  const auto& d = system.distances();
  const Index core = d.rows();

  std::vector<std::vector<Index>> maps(static_cast<std::size_t>(nmax) + 1);
  for (Index n = 1; n <= nmax; ++n) maps[static_cast<std::size_t>(n)] = system.retraction_map(n);

  std::vector<std::pair<Index, Index>> core_edges;
  for (const auto& e : ball.edges) {
    if (e.first < core && e.second < core) core_edges.push_back(e);
  }

  ClaimAudit audit;
  audit.K = system.K();
  audit.n_max = nmax;
  audit.records.resize(static_cast<std::size_t>(nmax));

  parallel_blocks(static_cast<std::size_t>(nmax), threads,
                  [&](std::size_t lo, std::size_t hi, std::size_t) {
    for (std::size_t k = lo; k < hi; ++k) {
      const Index n = static_cast<Index>(k) + 1;
      const auto& P = maps[static_cast<std::size_t>(n)];
      RetractionRecord rec;
      rec.n = n;
      for (Index g = 0; g < core; ++g) {
        const Index pg = P[static_cast<std::size_t>(g)];
        if (P[static_cast<std::size_t>(pg)] != pg) rec.idempotent = false;
        if (system.retraction_by_cases(n, g) != pg) rec.cases_agree = false;
        for (Index m = 1; m <= nmax && rec.commuting; ++m) {
          const auto& Q = maps[static_cast<std::size_t>(m)];
          if (P[static_cast<std::size_t>(Q[static_cast<std::size_t>(g)])] !=
              Q[static_cast<std::size_t>(pg)]) {
            rec.commuting = false;
          }
        }
      }
      // Exact max of d(Pg, Ph) / d(g, h) by cross-multiplication.
      long num = 0, den = 1;
      for (Index g = 0; g < core; ++g) {
        const Index pg = P[static_cast<std::size_t>(g)];
        for (Index h = g + 1; h < core; ++h) {
          const long a = d(pg, P[static_cast<std::size_t>(h)]);
          const long b = d(g, h);
          if (a * den > num * b) {
            num = a;
            den = b;
          }
        }
      }
      rec.lip_exact = Rational(num, den);
      rec.lip_exact.canonicalize();
      for (const auto& [g, h] : core_edges) {
        if ((g < n) == (h < n)) continue;
        rec.case1_max = std::max(
            rec.case1_max, d(P[static_cast<std::size_t>(g)], P[static_cast<std::size_t>(h)]));
      }
      audit.records[k] = std::move(rec);
    }
  });

  audit.basis_constant_observed = 0;
  for (const auto& rec : audit.records) {
    audit.all_commuting = audit.all_commuting && rec.commuting;
    audit.all_idempotent = audit.all_idempotent && rec.idempotent;
    audit.cases_agree = audit.cases_agree && rec.cases_agree;
    audit.K_plus_1_bound_ok = audit.K_plus_1_bound_ok && rec.lip_exact <= audit.K + 1;
    audit.case1_bound_ok = audit.case1_bound_ok && rec.case1_max <= 2;
    if (rec.lip_exact > audit.basis_constant_observed) audit.basis_constant_observed = rec.lip_exact;
  }
  return audit;
}

void sweep_projection_norms(ClaimAudit& audit, const BasisSystem& system, int samples,
                            std::uint64_t seed, unsigned threads) {
  if (samples < 0) throw std::invalid_argument("sample count must be >= 0");
  if (audit.records.size() != static_cast<std::size_t>(system.n_max())) {
    throw std::invalid_argument("audit does not belong to this system");
  }
  const Index core = system.space()->size();
  if (core < 2) return;
  parallel_blocks(audit.records.size(), threads, [&](std::size_t lo, std::size_t hi, std::size_t) {
    for (std::size_t k = lo; k < hi; ++k) {
      auto& rec = audit.records[k];
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(rec.n)};
      std::mt19937_64 rng(seq);
      std::uniform_int_distribution<Index> pt(1, core - 1);
      std::uniform_int_distribution<long> num(-5, 5), den(1, 4);
      std::uniform_int_distribution<int> size(1, 6);
      rec.sweep_max = 0;
      rec.sweep_samples = samples;
      for (int s = 0; s < samples; ++s) {
        RationalMolecule m(system.space());
        for (int i = size(rng); i > 0; --i) {
          Rational c(num(rng), den(rng));
          m.add(pt(rng), c);
        }
        if (m.is_zero()) continue;
        const Rational r = kr_norm(system.project(rec.n, m)).value / kr_norm(m).value;
        if (r > rec.sweep_max) rec.sweep_max = r;
      }
      rec.sweep_ok = rec.sweep_max <= rec.lip_exact;
    }
  });
  audit.sweep_ok = true;
  for (const auto& rec : audit.records) audit.sweep_ok = audit.sweep_ok && rec.sweep_ok;
}

}  // namespace lipfree
