#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lipfree/metric_space.hpp"

namespace lipfree {

/// Word over the ordered generating set: entries are positions in the order.
using Word = std::vector<int>;
/// Family-specific canonical representation of a group element.
using ElementRep = std::vector<int>;

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = v.size();
    for (int x : v) h ^= std::hash<int>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

enum class GroupFamily { free_abelian, free, free_product_cyclic, finite_table };

/// Declarative description of a finitely generated group with an ordered
/// symmetric generating set. `generator_order` lists generator names; when
/// empty the family's canonical order is used (e1 < e1inv < e2 < ...).
struct GroupSpec {
  GroupFamily family = GroupFamily::free_abelian;
  int rank = 0;                           // free_abelian, free
  std::vector<int> torsion;               // free_abelian: orders of the finite cyclic factors
  std::vector<int> orders;                // free_product_cyclic
  std::vector<std::vector<int>> table;    // finite_table: table[a][b] = a*b
  std::vector<int> generators;            // finite_table: element indices
  std::vector<std::string> generator_order;
};

std::string family_name(GroupFamily family);

/// A concrete group: multiplication, inversion and an exact closed-form word
/// length with respect to its ordered symmetric generating set.
class Group {
 public:
  virtual ~Group() = default;

  [[nodiscard]] virtual ElementRep identity() const = 0;
  [[nodiscard]] virtual ElementRep multiply(const ElementRep& a, const ElementRep& b) const = 0;
  [[nodiscard]] virtual ElementRep inverse(const ElementRep& a) const = 0;
  /// |g| = d_S(g, 1), computed from the family's normal form (not from a ball).
  [[nodiscard]] virtual int word_length(const ElementRep& a) const = 0;

  [[nodiscard]] std::size_t generator_count() const { return generators_.size(); }
  [[nodiscard]] const ElementRep& generator(int s) const {
    return generators_[static_cast<std::size_t>(s)];
  }
  [[nodiscard]] const std::string& generator_name(int s) const {
    return names_[static_cast<std::size_t>(s)];
  }
  [[nodiscard]] int inverse_generator(int s) const {
    return inverse_of_[static_cast<std::size_t>(s)];
  }

  [[nodiscard]] ElementRep evaluate(const Word& w) const;
  /// d_S(g, h) = |g^{-1} h| via the closed-form length.
  [[nodiscard]] int distance(const ElementRep& g, const ElementRep& h) const {
    return word_length(multiply(inverse(g), h));
  }
  /// Word rendered as generator names joined by '.', or "1" for the empty word.
  [[nodiscard]] std::string render(const Word& w) const;

 protected:
  /// Installs the canonical generators (with names), then reorders them
  /// according to `order` and checks that the set is symmetric.
  void set_generators(std::vector<ElementRep> gens, std::vector<std::string> names,
                      const std::vector<std::string>& order);

 private:
  std::vector<ElementRep> generators_;
  std::vector<std::string> names_;
  std::vector<int> inverse_of_;
};

/// Builds the group; validates group axioms for finite tables. Throws
/// std::invalid_argument on malformed specs.
std::shared_ptr<const Group> make_group(const GroupSpec& spec);

/// Radius-r ball of the Cayley graph in shortlex enumeration order.
/// Element 0 is the identity. Immutable after build.
struct CayleyBall {
  std::shared_ptr<const Group> group;
  int radius = 0;
  std::vector<Word> normal_form;   // w_g, the shortlex-least geodesic word
  std::vector<ElementRep> element;
  std::vector<int> length;         // |g|
  std::vector<Index> parent;       // (w_g(<= |g|-1))_G; -1 for the identity
  std::vector<std::pair<Index, Index>> edges;  // {g, h} with d_S(g, h) = 1, g < h
  std::unordered_map<ElementRep, Index, VectorHash> lookup;

  [[nodiscard]] Index size() const { return static_cast<Index>(element.size()); }
  [[nodiscard]] std::optional<Index> find(const ElementRep& g) const {
    auto it = lookup.find(g);
    if (it == lookup.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] std::string name(Index g) const {
    return group->render(normal_form[static_cast<std::size_t>(g)]);
  }
  /// Number of elements of length <= r (a prefix of the enumeration).
  [[nodiscard]] Index count_up_to_length(int r) const;
};

inline constexpr std::size_t kDefaultElementCap = 500'000;

/// Breadth-first construction expanding each level in shortlex order and
/// appending generators in generator order; the first word reaching an element
/// is its shortlex normal form. Throws ResourceError past `element_cap`.
/// Verifies at build time that every normal form evaluates to its element, has
/// the closed-form length, and that its prefixes are normal forms.
CayleyBall build_ball(std::shared_ptr<const Group> group, int radius,
                      std::size_t element_cap = kDefaultElementCap);

/// d_S(g, h) = |g^{-1} h| looked up in the ball; throws std::out_of_range when
/// g^{-1} h lies outside it.
int word_distance(const CayleyBall& ball, Index g, Index h);

/// (w_g(<= i))_G for 0 <= i <= |g|; throws std::out_of_range otherwise.
Index prefix_element(const CayleyBall& ball, Index g, int i);

/// Ball elements of length <= max_length as a pointed rational space
/// (base point: identity) with exact word distances.
RationalSpace ball_space(const CayleyBall& ball, int max_length);

/// Pairwise word distances among the first `count` ball elements.
Eigen::MatrixXi ball_distance_table(const CayleyBall& ball, Index count);

struct DivergenceWitness {
  Index g = -1;
  Index h = -1;
  int i = 0;
};

struct ConventionResult {
  std::string convention;  // "i<=min" or "i<max,saturated"
  int max_divergence = 0;
  DivergenceWitness witness;
};

/// Empirical fellow-traveller constant of shortlex normal forms over the edges
/// of the ball whose endpoints both have length <= radius - 1.
struct CombabilityReport {
  int radius = 0;
  std::size_t edges_audited = 0;
  ConventionResult definition;  // i <= min(|g|, |h|)
  ConventionResult saturated;   // i < max(|g|, |h|), shorter prefix saturating
  /// max(1, max divergence under the i <= min convention)
  [[nodiscard]] int constant() const { return std::max(1, definition.max_divergence); }
  /// max(1, both conventions): the constant the retraction bound relies on.
  [[nodiscard]] int proof_constant() const {
    return std::max({1, definition.max_divergence, saturated.max_divergence});
  }
};

CombabilityReport audit_combability(const CayleyBall& ball, unsigned threads = 1);

}  // namespace lipfree
