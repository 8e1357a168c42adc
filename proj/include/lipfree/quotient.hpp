#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lipfree/freespace.hpp"

namespace lipfree {

/// Finite group by multiplication table; group axioms are checked on construction.
class FiniteGroup {
 public:
  explicit FiniteGroup(std::vector<std::vector<int>> table);

  [[nodiscard]] int order() const { return static_cast<int>(table_.size()); }
  [[nodiscard]] int identity() const { return identity_; }
  [[nodiscard]] int mul(int a, int b) const {
    return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  [[nodiscard]] int inv(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
  [[nodiscard]] const std::vector<std::vector<int>>& table() const { return table_; }

  [[nodiscard]] bool is_subgroup(const std::vector<int>& H) const;
  [[nodiscard]] bool is_normal(const std::vector<int>& H) const;

 private:
  std::vector<std::vector<int>> table_;
  int identity_ = 0;
  std::vector<int> inverse_;
};

FiniteGroup cyclic_group(int n);
/// Dihedral group of order 2n: element k + n*e stands for r^k s^e.
FiniteGroup dihedral_group(int n);
/// Symmetric group on n letters, permutations in lexicographic order (identity first).
FiniteGroup symmetric_group(int n);
/// (a, b) is encoded as a * |B| + b.
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

/// Finite group with a left-invariant rational metric. Right- and
/// bi-invariance are computed, not declared.
class FiniteMetricGroup {
 public:
  /// Throws std::invalid_argument unless `dist` is a left-invariant metric.
  FiniteMetricGroup(FiniteGroup group, DistanceMatrix<Rational> dist);

  /// Word metric of the (symmetric) generating set `generators`.
  static FiniteMetricGroup word_metric(FiniteGroup group, const std::vector<int>& generators);

  [[nodiscard]] const FiniteGroup& group() const { return group_; }
  [[nodiscard]] const DistanceMatrix<Rational>& dist() const { return dist_; }
  [[nodiscard]] const Rational& d(int a, int b) const { return dist_(a, b); }
  /// Pointed space on the group elements ("0", "1", ...), base point = identity.
  [[nodiscard]] const std::shared_ptr<const RationalSpace>& space() const { return space_; }

  [[nodiscard]] bool right_invariant() const { return right_invariant_under(all_elements()); }
  [[nodiscard]] bool bi_invariant() const { return right_invariant(); }
  /// d(gh, fh) = d(g, f) for every h in H.
  [[nodiscard]] bool right_invariant_under(const std::vector<int>& H) const;

 private:
  [[nodiscard]] std::vector<int> all_elements() const;

  FiniteGroup group_;
  DistanceMatrix<Rational> dist_;
  std::shared_ptr<const RationalSpace> space_;
};

/// D(g, f) = max_h d(gh, fh): bi-invariant and dominating d.
FiniteMetricGroup biinvariant_majorant(const FiniteMetricGroup& G);

/// Which of the three sufficient conditions for the averaging projection hold.
struct ProjectionHypotheses {
  bool left_invariant_normal = false;       // (i)   d left-invariant, H normal
  bool right_invariant_normal = false;      // (ii)  d right-invariant, H normal
  bool left_and_right_H_invariant = false;  // (iii) d left-invariant and right H-invariant
  [[nodiscard]] bool any() const {
    return left_invariant_normal || right_invariant_normal || left_and_right_H_invariant;
  }
  [[nodiscard]] std::vector<std::string> holding() const;
};

/// Left cosets gH with the quotient metric D(gH, fH) = min d(g h1, f h2).
struct QuotientStructure {
  std::vector<int> subgroup;               // sorted
  std::vector<std::vector<int>> cosets;    // ordered by least element; cosets[0] = H
  std::vector<int> coset_of;               // element -> coset index
  DistanceMatrix<Rational> D;
  bool normal = false;
  ProjectionHypotheses hypotheses;
  std::vector<Violation> metric_violations;  // empty iff D is a metric
  std::shared_ptr<const RationalSpace> space;  // points "[g]" (g = least representative)
};

/// Throws std::invalid_argument if H is not a subgroup.
QuotientStructure build_quotient(const FiniteMetricGroup& G, std::vector<int> H);

enum class TranslationSide {
  right,  // P'(g) = avg_h delta(g h) - delta(h)
  left    // P'(g) = avg_h delta(h g) - delta(h)
};

std::string side_name(TranslationSide side);

/// Haar-averaging projection of the free space over G onto an isometric copy
/// of the free space over G/H. Uniform weights 1/|H|, exact arithmetic.
class AveragingProjection {
 public:
  AveragingProjection(const FiniteMetricGroup& G, std::vector<int> H, TranslationSide side);

  [[nodiscard]] TranslationSide side() const { return side_; }
  /// P'(g) = P(delta(g)).
  [[nodiscard]] const RationalMolecule& image(int g) const {
    return images_[static_cast<std::size_t>(g)];
  }
  [[nodiscard]] RationalMolecule apply(const RationalMolecule& m) const;

 private:
  std::shared_ptr<const RationalSpace> space_;
  TranslationSide side_;
  std::vector<RationalMolecule> images_;
};

/// Picks the formula from the hypotheses that hold: right translation under
/// (ii) or (iii), left translation when only (i) holds. Throws
/// std::invalid_argument naming the failed invariances when none holds.
AveragingProjection averaging_projection(const FiniteMetricGroup& G, const std::vector<int>& H);

struct FormulaAudit {
  TranslationSide side = TranslationSide::right;
  bool idempotent = true;        // P(P'(g)) = P'(g) for all g
  bool coset_constant = true;    // P'(gh) = P'(g) for h in H
  Rational lip;                  // exact Lipschitz constant of g -> P'(g)
  bool lip_ok = true;            // lip = 1 (lip = 0 when H = G)
  bool isometry_ok = true;       // ||P'(g1) - P'(g2)|| = D(g1 H, g2 H) on every coset pair
  int isometry_failures = 0;
  [[nodiscard]] bool passed() const { return idempotent && coset_constant && lip_ok && isometry_ok; }
};

struct ProjectionAudit {
  std::size_t group_order = 0;
  std::size_t subgroup_order = 0;
  std::size_t coset_count = 0;
  bool normal = false;
  ProjectionHypotheses hypotheses;
  bool quotient_is_metric = true;
  std::vector<Violation> metric_violations;
  FormulaAudit primary;
  /// Under hypothesis (ii) both translation sides are audited.
  std::optional<FormulaAudit> alternate;
  std::optional<bool> formulas_coincide;
  [[nodiscard]] bool passed() const {
    return quotient_is_metric && primary.passed() && (!alternate || alternate->passed());
  }
};

ProjectionAudit audit_projection(const FiniteMetricGroup& G, const std::vector<int>& H);

struct TowerLevel {
  std::size_t subgroup_order = 0;
  Rational eps;    // diameter of H_n in the bi-invariant majorant
  Rational error;  // ||m - P_n m||
  Rational bound;  // 2 (sum |a_i|) eps
  bool ok = true;
};

struct TowerReport {
  std::vector<TowerLevel> levels;
  bool all_ok = true;
  bool final_error_zero = true;
  [[nodiscard]] bool passed() const { return all_ok && final_error_zero; }
};

/// Approximation error of the averaging projections along a strictly
/// decreasing chain of subgroups ending at the trivial subgroup.
TowerReport tower_convergence(const FiniteMetricGroup& G,
                              const std::vector<std::vector<int>>& chain,
                              const RationalMolecule& m);

}  // namespace lipfree
