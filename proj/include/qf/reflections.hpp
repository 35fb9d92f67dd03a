#pragma once

#include <optional>

#include "qf/forms.hpp"

namespace qf {

/// Datum of a quasi-reflection on a quadratic space:
///   x  |->  x - y c^o h(y, x)
/// where y is a module element with y e = y for an idempotent e, and c is
/// an element of sigma(e) A e, congruent to beta(y, y) modulo
/// sigma(e) Lambda e, admitting a two-sided (e, sigma(e))-inverse c^o
/// (c^o c = e, c c^o = sigma(e)).  These maps are isometries; c = beta(y,y)
/// recovers classical reflections along non-degenerate vectors.
struct ReflectionDatum {
  Vec y;
  Elem e = kNoElem;
  Elem c = kNoElem;
};

/// Checks all datum conditions against the space and returns c^o.
/// Throws InvalidReflectionDatum (shape/coset conditions), NotInModule,
/// or NotEFInvertible (c has no (e, sigma(e))-inverse).
Elem validate_reflection(const QuadraticSpace& s, const ReflectionDatum& d);

/// Presentation-normalized matrix E - (y c^o) (sigma(y)^T H).
Mat reflection_matrix(const QuadraticSpace& s, const ReflectionDatum& d);

/// The inverse reflection: datum (y, e, sigma(c) u).
ReflectionDatum reflection_inverse(const QuadraticSpace& s,
                                   const ReflectionDatum& d);

/// Rewrites the datum along an (e, f)-isomorphism a (a in eAf with a
/// two-sided inverse in fAe): the datum (y a, f, sigma(a) c a) defines the
/// same isometry.  Throws NotEFInvertible if a is not such an isomorphism.
ReflectionDatum reflection_reindex(const QuadraticSpace& s,
                                   const ReflectionDatum& d, Elem a, Elem f);

/// For data with orthogonal idempotents (ef = fe = 0), the composite
/// (left's map after right's map) is again a quasi-reflection:
///   (y + z, e + f, c + d + h(y, z)).
/// Throws IdempotentsNotOrthogonal otherwise.
ReflectionDatum compose_orthogonal_reflections(const QuadraticSpace& s,
                                               const ReflectionDatum& left,
                                               const ReflectionDatum& right);

/// A reflection moving `from` to `to`, both module elements ending in e
/// (from*e = from, to*e = to) with equal quadratic classes: the candidate
/// datum is (from - to, e, h(from - to, from)); returns it when that c is
/// (e, sigma(e))-invertible, nullopt otherwise.  Throws
/// PreconditionViolation when the vectors are not e-aligned or their
/// classes differ.
std::optional<ReflectionDatum> transvection_datum(const QuadraticSpace& s,
                                                  const Vec& from,
                                                  const Vec& to, Elem e);

}  // namespace qf
