#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qf/forms.hpp"
#include "qf/reflections.hpp"

namespace qf {

/// Exhaustive certification utilities.  Everything here decides questions
/// by enumeration, independently of the constructive machinery, so results
/// can be used as ground truth in tests.  Searches count visited candidate
/// assignments and throw EnumerationBoundExceeded past
/// Bounds::max_candidates.
///
/// All returned matrices are presentation-normalized module maps
/// (M = EM = ME resp. M = E_dst M E_src) sorted by entry list, so two
/// results can be compared with operator== on the vectors.

/// Every isometry from src onto dst (empty if they are not isometric).
/// Columns are searched one generator at a time, pruned by equality of
/// quadratic classes and of pairwise hermitian values.
std::vector<Mat> all_isometries(const QuadraticSpace& src,
                                const QuadraticSpace& dst);

/// The full isometry group of s.
std::vector<Mat> isometry_group(const QuadraticSpace& s);

/// Closure of the given isometries under multiplication (they must be
/// presentation-normalized or are normalized here; the identity is E).
std::vector<Mat> group_closure(const QuadraticSpace& s,
                               const std::vector<Mat>& gens);

/// Every idempotent module endomorphism of the module of s, one per image
/// submodule (the first found projection is kept).
std::vector<Mat> summand_projections(const QuadraticSpace& s);

/// Every reflection datum of s with idempotent 1: module vectors y paired
/// with the unit scalars in the Lambda coset of beta(y, y).
std::vector<ReflectionDatum> all_reflections(const QuadraticSpace& s);

/// Every quasi-reflection datum (y, e, c), over every idempotent e of the
/// ring, every module vector ending in e, and every admissible scalar.
std::vector<ReflectionDatum> all_quasi_reflections(const QuadraticSpace& s);

/// Tallies of an exhaustive extension run: every ordered pair of summands,
/// every isometry between their restrictions, extended with the whole
/// module as displacement space.  Unimodularity makes each case legal, so
/// failures records any throw or any extension disagreeing with its input.
struct ExtensionSweep {
  std::size_t summand_pairs = 0;
  std::size_t isometries_checked = 0;
  std::size_t failures = 0;
  std::vector<std::string> failure_notes;
};

/// Throws NotUnimodular on degenerate spaces.
ExtensionSweep verify_extension(const QuadraticSpace& s);

/// Brute-force comparison of the reflection subgroup with its
/// classification: group orders, measured index against the predicted
/// formula, and the kernel description O' = delta_I^{-1}({0, xi}).
/// Generation hypothesis failures are reported, not thrown, so the
/// exceptional rings can still be measured.
struct IndexMeasurement {
  bool hypotheses_hold = false;
  std::vector<std::size_t> violating_factors;
  std::vector<int> xi;
  unsigned long long formula_index = 1;
  unsigned long long measured_index = 1;
  bool matches_formula = false;
  bool matches_kernel_classes = false;
  std::size_t group_order = 0;
  std::size_t reflection_generated_order = 0;
};

/// Throws NotUnimodular on degenerate spaces.
IndexMeasurement verify_index(const QuadraticSpace& s);

}  // namespace qf
