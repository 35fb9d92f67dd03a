#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qf/forms.hpp"
#include "qf/reflections.hpp"

namespace qf {

/// One isometry-extension instance.  Inside the ambient space live three
/// summands, each given by an explicit normalized projection witness
/// (idempotent W with EW = WE = W), and an isometry psi carrying the
/// restriction of the form to Q onto the restriction to S.  The summand V
/// confines the correction: extensions are sought among isometries moving
/// every vector by an element of V only.
struct ExtensionProblem {
  QuadraticSpace space;
  Mat Q;    // domain summand of psi
  Mat S;    // codomain summand of psi
  Mat V;    // allowed displacement directions
  Mat psi;  // matrix realizing the isometry Q -> S
};

/// Checks that Q, S, V are summands and that psi maps the restriction of
/// the space to Q isometrically onto the restriction to S.  Throws
/// ShapeMismatch, NotASummand or PreconditionViolation.
void validate_problem(const ExtensionProblem& prob);

/// Outcome of testing the extension hypotheses.  The first three flags are
/// global; the per-factor vectors are indexed like the factor list of the
/// ring's structure and hold true wherever a hypothesis is vacuous.
struct ConditionReport {
  /// Every functional on Q (and on S) arises by pairing against a vector
  /// of V.
  bool functionals_reached = false;
  /// psi x - x lies in V for every x in Q.
  bool displacement_in_v = false;
  /// Q and S are isomorphic to their duals (per exchange factor, the two
  /// half multiplicities agree).
  bool summands_self_dual = false;
  /// Split-orthogonal factors: Q vanishes there or the form restricted to
  /// V is nonzero there.
  std::vector<char> orthogonal_factor_form_nonzero;
  /// Split-orthogonal factors with two-element corner: the form does not
  /// vanish on the radical part of V (V meet its orthogonal complement).
  std::vector<char> binary_factor_radical_form_nonzero;
  /// Exchange factors with four-element corner: no vector z of V has
  /// h(z,z) equal to the corner identity while the form vanishes on the
  /// orthogonal complement of z inside V.
  std::vector<char> exchange_factor_unobstructed;

  /// x in Q with psi x - x outside V, when displacement_in_v fails.
  std::optional<Vec> displacement_witness;
  /// Per factor, the obstructing z (factor-local coordinates) when
  /// exchange_factor_unobstructed fails there.
  std::vector<std::optional<Vec>> obstruction_witness;

  bool all() const;
  std::string describe() const;
};

ConditionReport check_conditions(const ExtensionProblem& prob);

/// Over the four-element exchange ring (with u = 1), decides whether no
/// z' in V satisfies h(x, z') = 1 with the quadratic class of z' trivial.
/// The answer is certified against its equivalent reformulation
/// "h(z,z) = 1 and the form vanishes on the orthogonal complement of z
/// inside V", and when it is true the functional module of V is verified
/// to be free of rank one by enumeration.  v_elems must list a submodule
/// containing z, and h(x,z) must equal 1.  Throws WrongFactorType or
/// PreconditionViolation.
bool f2f2_obstruction(const QuadraticSpace& s, const std::vector<Vec>& v_elems,
                      const Vec& x, const Vec& z);

struct ExtensionResult {
  /// The extension: an isometry of the ambient space restricting to psi.
  Mat phi;
  /// Ordered factorization into quasi-reflections taken with respect to
  /// elements of V, present when the direct route succeeded; the matrix
  /// product in list order equals phi (the last factor acts first).
  std::optional<std::vector<ReflectionDatum>> factors;
  /// "witt-I" for the direct reflection route, "witt-II-augmented" when
  /// the extension was found on an enlarged space and restricted back.
  std::string route;
};

/// Extension when the first summand is cyclic over the given factor:
/// Q must be generated by one element x with x e = x for the factor's
/// lifted idempotent e.  Produces at most two e-reflections along elements
/// of V (four in the exchange corner case) sending x to psi x.  Throws
/// ConditionViolation when the extension hypotheses fail and
/// PreconditionViolation when no aligned generator exists;
/// SearchExhausted signals a defect, since existence is guaranteed.
ExtensionResult extend_cyclic(const ExtensionProblem& prob,
                              std::size_t factor);

/// Full reflection route: requires every hypothesis of check_conditions,
/// and returns phi as an ordered product of quasi-reflections taken with
/// respect to elements of V, with phi x - x in V for all x.  Throws
/// ConditionViolation otherwise.
ExtensionResult extend_with_reflections(const ExtensionProblem& prob);

/// General extension: requires only that functionals are reached and
/// displacements lie in V (both automatic when the space or the
/// restriction to Q is unimodular and V is the whole module).  Falls back
/// to an augmented ambient space when the finer hypotheses fail, extends
/// there, verifies the original module is preserved, and restricts;
/// the factorization is dropped on that route.  Throws
/// PreconditionViolation.
ExtensionResult extend(const ExtensionProblem& prob);

/// Cancellation: given an isometry iso of base + s1 onto base + s2 (block
/// coordinates, base first) with base unimodular, produces an isometry of
/// s1 onto s2.  Throws NotUnimodularBase or PreconditionViolation.
Mat cancel(const QuadraticSpace& base, const QuadraticSpace& s1,
           const QuadraticSpace& s2, const Mat& iso);

/// Splits a presented module against a decomposition of its realized
/// dual: dual_proj must be an idempotent acting on the dual presentation.
/// Returns projections (Q', Q'') of the module with the image of
/// dual_proj annihilating Q'' (and its complement annihilating Q').
/// Throws NotADecomposition.
std::pair<Mat, Mat> dual_split(const UnitaryRing& ur, const ModulePtr& m,
                               const Mat& dual_proj);

/// Whether the module is isomorphic to its realized dual; decided by the
/// half-multiplicity criterion on exchange factors.
bool self_dual_check(const UnitaryRing& ur, const ModulePtr& m);

}  // namespace qf
