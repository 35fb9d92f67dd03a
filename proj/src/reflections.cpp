#include "qf/reflections.hpp"

#include "qf/errors.hpp"
#include "qf/structure.hpp"

namespace qf {

namespace {

Vec sigma_vec(const UnitaryRing& ur, const Vec& x) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = ur.sigma(x[i]);
  return out;
}

Vec vec_rmul(const Ring& R, const Vec& x, Elem a) {
  return vec_scale_right(R, x, a);
}

}  // namespace

Elem validate_reflection(const QuadraticSpace& s, const ReflectionDatum& d) {
  const UnitaryRing& ur = s.ur();
  const Ring& R = ur.ring();
  R.check(d.e);
  R.check(d.c);
  if (!module_contains(*s.module(), d.y))
    throw NotInModule("reflection vector is not a module element");
  if (R.mul(d.e, d.e) != d.e)
    throw InvalidReflectionDatum("reflection idempotent is not idempotent");
  if (vec_rmul(R, d.y, d.e) != d.y)
    throw InvalidReflectionDatum("reflection vector does not end in e");
  const Elem se = ur.sigma(d.e);
  if (R.mul(R.mul(se, d.c), d.e) != d.c)
    throw InvalidReflectionDatum("c does not lie in sigma(e) A e");
  Elem diff = R.sub(d.c, s.beta(d.y, d.y));
  bool in_coset = false;
  for (Elem l : ur.lambda().members())
    if (R.mul(R.mul(se, l), d.e) == diff) {
      in_coset = true;
      break;
    }
  if (!in_coset)
    throw InvalidReflectionDatum(
        "c is not congruent to beta(y,y) modulo sigma(e) Lambda e");
  auto co = ef_inverse(R, d.c, d.e, se);
  if (!co) throw NotEFInvertible("c has no (e, sigma(e))-inverse");
  return *co;
}

Mat reflection_matrix(const QuadraticSpace& s, const ReflectionDatum& d) {
  Elem co = validate_reflection(s, d);
  const Ring& R = s.ur().ring();
  Vec col = vec_rmul(R, d.y, co);
  Vec row = vec_mat(R, sigma_vec(s.ur(), d.y), s.hgram());
  return mat_sub(R, s.presentation(), mat_outer(R, col, row));
}

ReflectionDatum reflection_inverse(const QuadraticSpace& s,
                                   const ReflectionDatum& d) {
  validate_reflection(s, d);
  const Ring& R = s.ur().ring();
  ReflectionDatum inv{d.y, d.e, R.mul(s.ur().sigma(d.c), s.ur().u())};
  validate_reflection(s, inv);
  return inv;
}

ReflectionDatum reflection_reindex(const QuadraticSpace& s,
                                   const ReflectionDatum& d, Elem a, Elem f) {
  Elem co = validate_reflection(s, d);
  (void)co;
  const UnitaryRing& ur = s.ur();
  const Ring& R = ur.ring();
  R.check(a);
  R.check(f);
  if (R.mul(f, f) != f)
    throw InvalidReflectionDatum("target idempotent is not idempotent");
  if (R.mul(R.mul(d.e, a), f) != a)
    throw InvalidReflectionDatum("connecting element does not lie in e A f");
  if (!ef_inverse(R, a, f, d.e))
    throw NotEFInvertible("connecting element is not an (e,f)-isomorphism");
  ReflectionDatum out{vec_rmul(R, d.y, a), f,
                      R.mul(R.mul(ur.sigma(a), d.c), a)};
  validate_reflection(s, out);
  return out;
}

ReflectionDatum compose_orthogonal_reflections(const QuadraticSpace& s,
                                               const ReflectionDatum& left,
                                               const ReflectionDatum& right) {
  validate_reflection(s, left);
  validate_reflection(s, right);
  const Ring& R = s.ur().ring();
  if (R.mul(left.e, right.e) != R.zero() ||
      R.mul(right.e, left.e) != R.zero())
    throw IdempotentsNotOrthogonal(
        "reflection idempotents are not orthogonal");
  ReflectionDatum out{
      vec_add(R, left.y, right.y), R.add(left.e, right.e),
      R.add(R.add(left.c, right.c), s.h(left.y, right.y))};
  validate_reflection(s, out);
  return out;
}

std::optional<ReflectionDatum> transvection_datum(const QuadraticSpace& s,
                                                  const Vec& from,
                                                  const Vec& to, Elem e) {
  const Ring& R = s.ur().ring();
  R.check(e);
  if (vec_rmul(R, from, e) != from || vec_rmul(R, to, e) != to)
    throw PreconditionViolation("transvection endpoints must end in e");
  if (s.qhat(from) != s.qhat(to))
    throw PreconditionViolation(
        "transvection endpoints have different quadratic classes");
  Vec y = vec_sub(R, from, to);
  ReflectionDatum d{y, e, s.h(y, from)};
  if (!ef_inverse(R, d.c, d.e, s.ur().sigma(d.e))) return std::nullopt;
  validate_reflection(s, d);
  return d;
}

}  // namespace qf
