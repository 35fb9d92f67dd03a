#pragma once

#include <stdexcept>
#include <string>

namespace qf {

/// Base class of all library errors.  Subclasses distinguish between
/// malformed input (user error) and violated mathematical preconditions.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define QF_DEFINE_ERROR(NAME)                                  \
  struct NAME : Error {                                        \
    explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
  }

// input / construction
QF_DEFINE_ERROR(MalformedSpec);
QF_DEFINE_ERROR(OversizeRing);
QF_DEFINE_ERROR(InvalidUnitaryRing);
QF_DEFINE_ERROR(EnumerationBoundExceeded);

// elementwise domain errors
QF_DEFINE_ERROR(DomainViolation);
QF_DEFINE_ERROR(NotAUnit);
QF_DEFINE_ERROR(NotIdempotentModJ);
QF_DEFINE_ERROR(NotSymmetricIdempotent);
QF_DEFINE_ERROR(NotFullIdempotent);
QF_DEFINE_ERROR(NotEFInvertible);
QF_DEFINE_ERROR(IdempotentsNotOrthogonal);

// modules / forms
QF_DEFINE_ERROR(RingMismatch);
QF_DEFINE_ERROR(ModuleMismatch);
QF_DEFINE_ERROR(ShapeMismatch);
QF_DEFINE_ERROR(NotInModule);
QF_DEFINE_ERROR(NotASummand);
QF_DEFINE_ERROR(NotADecomposition);
QF_DEFINE_ERROR(NotUnimodular);
QF_DEFINE_ERROR(NotUnimodularBase);

// reflections
QF_DEFINE_ERROR(InvalidReflectionDatum);
QF_DEFINE_ERROR(NoTransvectionFound);

// extension machinery
QF_DEFINE_ERROR(PreconditionViolation);
QF_DEFINE_ERROR(ConditionViolation);
QF_DEFINE_ERROR(SearchExhausted);

// classification
QF_DEFINE_ERROR(WrongFactorType);
QF_DEFINE_ERROR(NotSplitOrthogonal);

#undef QF_DEFINE_ERROR

/// Thrown when the generation hypotheses of the reflection-subgroup
/// classification fail; carries the offending factor index.
struct HypothesisViolation : Error {
  int factor_index;
  HypothesisViolation(int factor, const std::string& what)
      : Error("HypothesisViolation: " + what), factor_index(factor) {}
};

}  // namespace qf
