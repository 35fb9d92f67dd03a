#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qf/unitary.hpp"

namespace qf {

/// Jacobson radical { a : 1 - xa is a unit for every x }, sorted.
std::vector<Elem> radical_of(const Ring& R);

/// Quotient of R by an ideal given as a sorted member list, presented by
/// least coset representatives.
std::shared_ptr<const SubquotientRing> quotient_by_ideal(
    const RingPtr& R, const std::vector<Elem>& ideal, const std::string& label);

/// Newton-lifts g, an idempotent modulo the radical, to an idempotent of R
/// congruent to g modulo the radical.
Elem lift_idempotent(const Ring& R, Elem g, const std::vector<char>& in_radical);

/// Lifts seeds (idempotent, pairwise orthogonal and summing to 1 modulo the
/// radical) to exactly orthogonal idempotents summing to 1; the lift is
/// congruent to its seed modulo the radical slotwise.
std::vector<Elem> lift_orthogonal_system(const Ring& R,
                                         const std::vector<Elem>& seeds,
                                         const std::vector<char>& in_radical);

/// For idempotents e, f and c in fRe: the d in eRf with dc = e and cd = f,
/// if one exists.
std::optional<Elem> ef_inverse(const Ring& R, Elem c, Elem e, Elem f);

/// How the unitary structure restricted to a simple factor of the
/// semisimple quotient looks after standardization.
enum class FactorKind { Orthogonal, Unitary, Symplectic, Exchange };

std::string factor_kind_name(FactorKind k);

/// Corner shape of one simple factor under a candidate unitary structure;
/// empty when the structure is not in standard form.
struct CornerAnalysis {
  Elem eps = kNoElem;               // minimal invariant idempotent (local)
  std::vector<Elem> corner_members;  // eps * A_i * eps, factor-local, sorted
  bool is_exchange = false;
  Elem delta = kNoElem;  // exchange: half of eps, factor-local
  bool sigma_id_on_corner = false;
  bool u_corner_is_one = false;  // else u acts as -1 on the corner
};

std::optional<CornerAnalysis> analyze_standard_factor(
    const Ring& factor, const std::vector<Elem>& sigma, Elem u);

/// One sigma-stable simple factor of the standardized semisimple quotient.
struct FactorData {
  /// Central idempotent spanning the factor and its primitive central parts
  /// (one part, or two swapped by sigma), as quotient-ring elements.
  Elem central = kNoElem;
  std::vector<Elem> central_parts;
  /// The factor ring A_i = quotient * central; project() realizes the
  /// projection onto the factor.
  std::shared_ptr<const SubquotientRing> ring;
  /// Standardized unitary structure restricted to the factor.
  UnitaryRing ur;
  FactorKind kind = FactorKind::Orthogonal;
  /// Minimal sigma-invariant idempotent (factor-local) and its corner.
  Elem eps = kNoElem;
  std::shared_ptr<const SubquotientRing> corner;
  UnitaryRing corner_ur;
  /// Matrix size: |A_i| = |corner|^(n^2).
  std::uint32_t n = 0;
  /// Exchange factors: least corner half with delta + sigma(delta) = eps
  /// (factor-local); kNoElem otherwise.
  Elem delta = kNoElem;
  /// Orthogonal idempotents summing to the factor identity, each equivalent
  /// to eps, factor-local; eps_system[0] == eps.
  std::vector<Elem> eps_system;
  /// Idempotents of the original ring lifting eps_system along the radical;
  /// part of one global orthogonal system summing to 1.
  std::vector<Elem> lifts;

  Elem factor_to_quotient(Elem factor_local) const {
    return ring->to_parent(factor_local);
  }
  Elem corner_to_quotient(Elem corner_local) const {
    return ring->to_parent(corner->to_parent(corner_local));
  }
};

/// Everything the extension and classification machinery needs to know
/// about a unitary ring over a finite (hence semiperfect) ring: radical,
/// semisimple quotient, a standardizing conjugator, and the standardized
/// factor decomposition with lifted idempotent systems.
class Structure {
 public:
  explicit Structure(const UnitaryRing& ur);

  const UnitaryRing& user_ur() const { return ur_; }

  const std::vector<Elem>& radical() const { return radical_; }
  bool in_radical(Elem a) const { return in_radical_.at(a) != 0; }

  /// Semisimple quotient by least coset representatives; project() is the
  /// reduction map.
  const std::shared_ptr<const SubquotientRing>& quotient() const {
    return quotient_;
  }
  /// Quotient unitary structure induced by the user's structure.
  const UnitaryRing& quotient_ur() const { return quotient_ur_; }

  /// Standardizing unit of the original ring; conjugating by it puts every
  /// simple factor of the quotient into standard form.
  Elem conjugator() const { return v_; }
  /// The conjugated unitary ring (same underlying ring and modules).
  const UnitaryRing& std_ur() const { return std_ur_; }
  const UnitaryRing& std_quotient_ur() const { return std_quotient_ur_; }

  const std::vector<FactorData>& factors() const { return factors_; }

  /// Reduction of a ring element modulo the radical (quotient-local index).
  Elem reduce(Elem a) const { return quotient_->project(a); }
  /// Projection of a reduced element onto factor i (factor-local index).
  Elem to_factor(std::size_t i, Elem quotient_local) const {
    return factors_.at(i).ring->project(quotient_local);
  }

 private:
  UnitaryRing ur_;
  std::vector<Elem> radical_;
  std::vector<char> in_radical_;
  std::shared_ptr<const SubquotientRing> quotient_;
  UnitaryRing quotient_ur_;
  Elem v_ = 0;
  UnitaryRing std_ur_;
  UnitaryRing std_quotient_ur_;
  std::vector<FactorData> factors_;
};

/// A unit v of the factor ring such that conjugating the factor's unitary
/// structure by v is standard (analyze_standard_factor succeeds).
Elem standard_form_conjugator(const UnitaryRing& factor_ur);

}  // namespace qf
