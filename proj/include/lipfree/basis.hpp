#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "lipfree/freespace.hpp"
#include "lipfree/groups.hpp"

namespace lipfree {

/// Retractions, their linear lifts and the associated basis over the
/// auditable core of a Cayley ball.
///
/// Indexing follows the shortlex enumeration g_1 = 1, g_2, g_3, ...: the
/// element with ball index k is g_{k+1}, and G_n = {g_1, ..., g_n} is the
/// first n ball elements. The auditable core is every element of length at
/// most radius - 1 (all their neighbours are in the ball); n_max is its size.
class BasisSystem {
 public:
  /// `K` is the combability constant the Lipschitz bound K + 1 is checked
  /// against. `n_max` = 0 selects the whole core.
  BasisSystem(std::shared_ptr<const CayleyBall> ball, int K, Index n_max = 0);

  [[nodiscard]] const CayleyBall& ball() const { return *ball_; }
  [[nodiscard]] Index n_max() const { return n_max_; }
  [[nodiscard]] int K() const { return K_; }
  /// Core as a pointed rational space (base point: the identity).
  [[nodiscard]] const std::shared_ptr<const RationalSpace>& space() const { return space_; }
  /// Exact word distances among core elements.
  [[nodiscard]] const Eigen::MatrixXi& distances() const { return dist_; }

  /// Image of core element g under the retraction onto G_n, computed as the
  /// longest prefix of w_g that lies in G_n.
  [[nodiscard]] Index retraction(Index n, Index g) const;
  /// The same map by its three-case definition through m = max{|h| : h in G_n}.
  [[nodiscard]] Index retraction_by_cases(Index n, Index g) const;
  /// retraction(n, .) tabulated over the core.
  [[nodiscard]] std::vector<Index> retraction_map(Index n) const;

  /// Linear lift of the retraction: coefficients pushed forward, those landing
  /// on the identity dropped.
  [[nodiscard]] RationalMolecule project(Index n, const RationalMolecule& m) const;

  /// b_n = delta(g_n) - delta(parent(g_n)) for 2 <= n <= n_max.
  [[nodiscard]] RationalMolecule basis_vector(Index n) const;

  /// Coefficients (n, c_n) with m = sum c_n b_n; c_n is the total coefficient
  /// of the support elements whose normal form has g_n as a prefix.
  [[nodiscard]] std::vector<std::pair<Index, Rational>> expand(const RationalMolecule& m) const;
  /// sum over entries with index <= up_to (all of them by default) of c_n b_n.
  [[nodiscard]] RationalMolecule reconstruct(const std::vector<std::pair<Index, Rational>>& coeffs,
                                             Index up_to = -1) const;

  [[nodiscard]] RationalMolecule delta(Index g) const { return RationalMolecule::delta(space_, g); }

 private:
  void check_n(Index n) const;
  void check_core(Index g) const;

  std::shared_ptr<const CayleyBall> ball_;
  int K_;
  Index core_size_ = 0;
  Index n_max_ = 0;
  std::shared_ptr<const RationalSpace> space_;
  Eigen::MatrixXi dist_;
};

struct RetractionRecord {
  Index n = 0;
  Rational lip_exact;    // exact Lipschitz constant of the retraction on the core
  int case1_max = 0;     // max d(P g, P h) over core edges with exactly one endpoint in G_n
  bool commuting = true; // P_n P_m = P_m P_n on the core for every m <= n_max
  bool idempotent = true;
  bool cases_agree = true;  // three-case definition == longest-prefix characterisation
  // Filled by sweep_projection_norms: max ||L_n m|| / ||m|| over random m.
  Rational sweep_max;
  int sweep_samples = 0;
  bool sweep_ok = true;  // sweep_max <= lip_exact
};

struct ClaimAudit {
  int K = 0;
  Index n_max = 0;
  std::vector<RetractionRecord> records;
  bool all_commuting = true;
  bool all_idempotent = true;
  bool cases_agree = true;
  bool K_plus_1_bound_ok = true;
  bool case1_bound_ok = true;
  Rational basis_constant_observed;  // max over n of lip_exact

  [[nodiscard]] bool passed() const {
    return all_commuting && all_idempotent && cases_agree && K_plus_1_bound_ok && case1_bound_ok &&
           sweep_ok;
  }
  bool sweep_ok = true;
};

/// Exhaustive audit of the retractions for every n <= n_max.
ClaimAudit audit_claim(const BasisSystem& system, unsigned threads = 1);

/// Supplementary check of the lifted projections on `samples` random
/// molecules per n (support 1..6, small rational coefficients): the norm ratio
/// never exceeds the exact Lipschitz constant. Per-n streams are seeded from
/// (seed, n), so results do not depend on `threads`.
void sweep_projection_norms(ClaimAudit& audit, const BasisSystem& system, int samples,
                            std::uint64_t seed, unsigned threads = 1);

}  // namespace lipfree
