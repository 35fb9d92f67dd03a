#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qf/forms.hpp"
#include "qf/reflections.hpp"
#include "qf/structure.hpp"

namespace qf {

enum class FactorParity { Odd, Even, NotApplicable };

std::string parity_name(FactorParity p);

/// Shape of the corner ring eps A_i eps, as far as the generation
/// hypotheses care: the two-element field, the four-element exchange ring,
/// or anything else.
enum class CornerId { F2, F2xF2, Other };

std::string corner_id_name(CornerId id);

/// Classification of one factor of the semisimple quotient under the
/// standardized unitary structure.
struct FactorProfile {
  std::size_t index = 0;
  /// Two simple blocks swapped by the anti-automorphism.
  bool exchange_pair = false;
  /// Factor-local members of the center K of A_i (for an exchange pair,
  /// the center of the whole factor, a product of two fields).
  std::vector<Elem> center;
  bool sigma_fixes_center = false;
  /// Simple factor, sigma fixes K pointwise, Lambda_i is a K-subspace of
  /// dimension n(n-1)/2 where n^2 = dim_K A_i.
  bool orthogonal = false;
  /// Orthogonal with commutative corner: A_i is a full matrix ring over K.
  bool split_orthogonal = false;
  /// Matrix size of A_i over its corner division ring.
  std::uint32_t n = 0;
  /// n mod 2 for split-orthogonal factors, not applicable otherwise.
  FactorParity parity = FactorParity::NotApplicable;
  CornerId corner_id = CornerId::Other;
  /// dim_K Lambda_i whenever Lambda_i is closed under K-scaling.
  std::optional<std::size_t> lambda_dim_over_center;
};

FactorProfile classify_factor(const FactorData& fd, std::size_t index = 0);

std::vector<FactorProfile> classify_factors(const UnitaryRing& ur);

/// The image of s over factor i: presentation and Gram conjugated to the
/// standardized side and reduced entrywise into the factor ring.  The
/// result lives over factors()[i].ur.
QuadraticSpace factor_space(const QuadraticSpace& s, std::size_t i);

/// Entrywise reduction of an original-ring matrix into factor i; carries
/// isometries of s to isometries of factor_space(s, i).
Mat factor_matrix(const QuadraticSpace& s, std::size_t i, const Mat& m);

/// deg(e A e) over the center: the exact square root of dim_K(e A e).
/// e = 0 gives 0; e the factor identity gives the degree of A itself.
std::size_t corner_degree(const Ring& factor_ring,
                          const std::vector<Elem>& center, Elem e);

/// Dickson invariant of an isometry psi of a space over one orthogonal
/// factor: dim_K((1 - psi) End) / deg(End) mod 2, computed inside the
/// endomorphism ring End of the module.  The non-split orthogonal branch
/// cannot arise over a finite coefficient ring (finite division rings are
/// commutative) and is pinned to 0.  Throws NotSplitOrthogonal when the
/// profile is not orthogonal, NotUnimodular on degenerate spaces, and
/// PreconditionViolation when psi is not an isometry.
int dickson_invariant(const QuadraticSpace& fs, const FactorProfile& profile,
                      const Mat& psi);

/// Dickson invariants of an isometry over every populated split-orthogonal
/// factor, listed by increasing factor index.
struct DicksonVector {
  std::vector<std::size_t> factors;
  std::vector<int> bits;
};

/// Throws NotUnimodular, or PreconditionViolation when psi is not an
/// isometry of s.
DicksonVector delta_I(const QuadraticSpace& s, const Mat& psi);

struct ReflectionExistence {
  bool exists = false;
  /// Split-orthogonal factors of odd matrix size with zero image; any such
  /// factor rules out reflections.
  std::vector<std::size_t> empty_odd_factors;
  /// A reflection datum with idempotent 1 when one exists.
  std::optional<ReflectionDatum> witness;
};

/// Decides whether s admits a reflection and constructs one when it does:
/// per factor, an eps-reflection is reindexed across the idempotent system
/// and composed up to the factor identity (for even split-orthogonal
/// factors a unit of Lambda_i serves directly, covering the empty-image
/// case), the factor data are composed over the quotient and the result is
/// lifted along the radical.  Throws NotUnimodular.
ReflectionExistence reflection_existence(const QuadraticSpace& s);

/// Factors violating the generation-by-reflections hypotheses: a
/// split-orthogonal factor whose corner field is F_2, or an exchange pair
/// with corner F_2 x F_2 whose module half has simple multiplicity one on
/// both sides.  Throws NotUnimodular.
std::vector<std::size_t> generation_hypothesis_violations(
    const QuadraticSpace& s);

/// Predicted index data of the reflection subgroup.  factors lists the
/// populated split-orthogonal factors I, xi their matrix sizes mod 2, and
/// index = 2^(even + max(odd - 1, 0)) over the populated counts.
struct IndexPrediction {
  std::vector<std::size_t> factors;
  std::vector<int> xi;
  std::size_t odd_count = 0;
  std::size_t even_count = 0;
  unsigned long long index = 1;
};

/// Throws NotUnimodular.
IndexPrediction predict_reflection_index(const QuadraticSpace& s);

enum class SubgroupCase {
  AllOddFactorsPopulated,
  EmptyOddFactor,
  NoReflection,
};

/// "all-odd-factors-populated", "empty-odd-factor" or "no-reflection".
std::string subgroup_case_name(SubgroupCase c);

struct ReflectionSubgroupReport {
  SubgroupCase tag = SubgroupCase::AllOddFactorsPopulated;
  /// Populated split-orthogonal factors and their parities, as in
  /// IndexPrediction.
  std::vector<std::size_t> factors;
  std::vector<int> xi;
  std::size_t odd_count = 0;
  std::size_t even_count = 0;
  /// Index claimed by the classification; present exactly when every odd
  /// split-orthogonal factor is populated.  In the other two cases the
  /// reflection subgroup is trivial and no index is claimed.
  std::optional<unsigned long long> claimed_index;
  /// Brute-force [O : O'] when measurement was requested.
  std::optional<unsigned long long> measured_index;
};

/// Classifies the reflection subgroup O' of the full isometry group O.
/// With measure set, additionally enumerates O and the closure of all
/// reflections and records the observed index.  Throws HypothesisViolation
/// naming the first factor violating the generation hypotheses, and
/// NotUnimodular on degenerate spaces.
ReflectionSubgroupReport reflection_subgroup(const QuadraticSpace& s,
                                             bool measure = false);

}  // namespace qf
