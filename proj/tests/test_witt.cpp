#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qf/oracle.hpp"
#include "qf/witt.hpp"

using namespace qf;

namespace {

QuadraticSpace free_space(const UnitaryRing& ur, const Mat& gram) {
  Mat E = mat_identity(ur.ring(), gram.rows);
  return QuadraticSpace(ur, make_module(ur.ring_ptr(), E), gram);
}

Mat mat_of(std::size_t rows, std::size_t cols,
           std::initializer_list<Elem> vals) {
  Mat m(rows, cols);
  std::size_t i = 0;
  for (Elem v : vals) m.a[i++] = v;
  return m;
}

UnitaryRing f3_ur() {
  auto R = make_residue(3);
  return UnitaryRing(R, R->identity_table(), R->one(), LambdaPolicy::Min);
}

UnitaryRing f2_min_ur() {
  auto R = make_residue(2);
  return UnitaryRing(R, R->identity_table(), R->one(), LambdaPolicy::Min);
}

UnitaryRing f2_max_ur() {
  auto R = make_residue(2);
  return UnitaryRing(R, R->identity_table(), R->one(), LambdaPolicy::Max);
}

// F2 x F2 with the exchange involution; elements are (a, b) encoded as
// 2a + b, so the two half idempotents are 2 and 1 and the identity is 3.
UnitaryRing f2f2_ur() {
  auto F2 = make_residue(2);
  auto P = make_product({F2, F2});
  auto* pr = dynamic_cast<const ProductRing*>(P.get());
  return UnitaryRing(P, pr->exchange_table(), P->one(), LambdaPolicy::Min);
}

UnitaryRing f4_omega_ur() {
  auto F4 = make_field(2, 2);
  auto* f = dynamic_cast<const FieldRing*>(F4.get());
  // u = omega satisfies sigma(u) u = omega^3 = 1 under the Frobenius
  Elem omega = 2;
  return UnitaryRing(F4, f->frobenius_table(1), omega, LambdaPolicy::Min);
}

Mat normalized(const QuadraticSpace& s, const Mat& m) {
  const Ring& R = s.ur().ring();
  return mat_mul(R, mat_mul(R, s.presentation(), m), s.presentation());
}

}  // namespace

TEST_CASE("a swap of two F3 lines extends by one transvection") {
  UnitaryRing ur = f3_ur();
  const Ring& R = ur.ring();
  QuadraticSpace s = free_space(ur, mat_of(2, 2, {1, 0, 0, 1}));
  Mat Q = mat_of(2, 2, {1, 0, 0, 0});
  Mat S = mat_of(2, 2, {0, 0, 0, 1});
  Mat swap = mat_of(2, 2, {0, 1, 1, 0});
  ExtensionProblem prob{s, Q, S, s.presentation(), swap};

  ConditionReport rep = check_conditions(prob);
  CHECK(rep.all());
  CHECK(rep.describe().find("NO") == std::string::npos);

  ExtensionResult res = extend_with_reflections(prob);
  CHECK(res.route == "witt-I");
  CHECK(res.phi == swap);
  REQUIRE(res.factors.has_value());
  REQUIRE(res.factors->size() == 1);
  const ReflectionDatum& d = (*res.factors)[0];
  CHECK(d.y == Vec{1, 2});
  CHECK(d.e == 1);
  CHECK(d.c == 2);
  CHECK(reflection_matrix(s, d) == swap);

  ExtensionResult cyc = extend_cyclic(prob, 0);
  CHECK(cyc.phi == swap);
  ExtensionResult gen = extend(prob);
  CHECK(gen.route == "witt-I");
  CHECK(gen.phi == swap);
  CHECK(mat_vec(R, gen.phi, Vec{1, 0}) == Vec{0, 1});
}

TEST_CASE("a trivial summand extends to the identity") {
  UnitaryRing ur = f3_ur();
  QuadraticSpace s = free_space(ur, mat_of(2, 2, {1, 0, 0, 1}));
  Mat zero = mat_zero(ur.ring(), 2, 2);
  ExtensionProblem prob{s, zero, zero, zero, zero};
  ExtensionResult res = extend(prob);
  CHECK(res.route == "witt-I");
  CHECK(res.phi == s.presentation());
  REQUIRE(res.factors.has_value());
  CHECK(res.factors->empty());
}

TEST_CASE("two reflections move a generator between hyperbolic planes") {
  UnitaryRing ur = f2_max_ur();
  const Ring& R = ur.ring();
  Mat B = mat_zero(R, 4, 4);
  B.at(0, 1) = 1;
  B.at(2, 3) = 1;
  QuadraticSpace s = free_space(ur, B);
  Mat Q = mat_zero(R, 4, 4);
  Q.at(0, 0) = 1;
  Mat S = mat_zero(R, 4, 4);
  S.at(2, 2) = 1;
  Mat psi = mat_zero(R, 4, 4);
  psi.at(2, 0) = 1;
  ExtensionProblem prob{s, Q, S, s.presentation(), psi};

  ExtensionResult res = extend_with_reflections(prob);
  CHECK(res.route == "witt-I");
  REQUIRE(res.factors.has_value());
  // h(e0 - e2, e0) = 0, so the one-reflection fast path cannot apply
  CHECK(res.factors->size() == 2);
  Mat prod = s.presentation();
  for (const ReflectionDatum& d : *res.factors) {
    CHECK(validate_reflection(s, d) == 1);
    prod = mat_mul(R, prod, reflection_matrix(s, d));
  }
  CHECK(prod == res.phi);
  CHECK(mat_vec(R, res.phi, Vec{1, 0, 0, 0}) == Vec{0, 0, 1, 0});
  CHECK(check_isometry(s, s, res.phi));
}

TEST_CASE("a plane swap extends through the induction") {
  UnitaryRing ur = f2_max_ur();
  const Ring& R = ur.ring();
  Mat B = mat_zero(R, 4, 4);
  B.at(0, 1) = 1;
  B.at(2, 3) = 1;
  QuadraticSpace s = free_space(ur, B);
  Mat Q = mat_of(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  Mat S = mat_of(4, 4, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  Mat psi = mat_zero(R, 4, 4);
  psi.at(2, 0) = 1;
  psi.at(3, 1) = 1;
  ExtensionProblem prob{s, Q, S, s.presentation(), psi};

  // the summand is not cyclic, so the direct route refuses it
  CHECK_THROWS_AS(extend_cyclic(prob, 0), PreconditionViolation);
  CHECK_THROWS_AS(extend_cyclic(prob, 7), DomainViolation);

  ExtensionResult res = extend_with_reflections(prob);
  CHECK(res.route == "witt-I");
  REQUIRE(res.factors.has_value());
  CHECK(!res.factors->empty());
  CHECK(mat_vec(R, res.phi, Vec{1, 0, 0, 0}) == Vec{0, 0, 1, 0});
  CHECK(mat_vec(R, res.phi, Vec{0, 1, 0, 0}) == Vec{0, 0, 0, 1});
  CHECK(check_isometry(s, s, res.phi));
}

TEST_CASE("every isometry of the F3 plane is a product of reflections") {
  UnitaryRing ur = f3_ur();
  const Ring& R = ur.ring();
  QuadraticSpace s = free_space(ur, mat_of(2, 2, {1, 0, 0, 1}));
  std::vector<Mat> group = isometry_group(s);
  REQUIRE(group.size() == 8);
  std::vector<Mat> gens;
  for (const Mat& g : group) {
    ExtensionProblem prob{s, s.presentation(), s.presentation(),
                          s.presentation(), g};
    ExtensionResult res = extend_with_reflections(prob);
    CHECK(res.phi == g);
    REQUIRE(res.factors.has_value());
    for (const ReflectionDatum& d : *res.factors)
      gens.push_back(reflection_matrix(s, d));
  }
  CHECK(group_closure(s, gens).size() == 8);
}

TEST_CASE("a degenerate direction blocks the reflection route") {
  UnitaryRing ur = f2_min_ur();
  const Ring& R = ur.ring();
  QuadraticSpace s = free_space(ur, mat_of(2, 2, {0, 1, 0, 0}));
  Mat Q = mat_of(2, 2, {1, 0, 0, 0});
  Mat S = mat_of(2, 2, {0, 0, 0, 1});
  Mat psi = mat_of(2, 2, {0, 0, 1, 0});
  ExtensionProblem prob{s, Q, S, s.presentation(), psi};

  ConditionReport rep = check_conditions(prob);
  CHECK(rep.functionals_reached);
  CHECK(rep.displacement_in_v);
  CHECK(rep.summands_self_dual);
  CHECK(rep.orthogonal_factor_form_nonzero == std::vector<char>{1});
  // the plane is nondegenerate, so its radical carries no form at all
  CHECK(rep.binary_factor_radical_form_nonzero == std::vector<char>{0});
  CHECK(!rep.all());
  CHECK(rep.describe().find("NO") != std::string::npos);

  CHECK_THROWS_AS(extend_with_reflections(prob), ConditionViolation);
  ExtensionResult res = extend(prob);
  CHECK(res.route == "witt-II-augmented");
  CHECK(!res.factors.has_value());
  CHECK(mat_vec(R, res.phi, Vec{1, 0}) == Vec{0, 1});
  CHECK(check_isometry(s, s, res.phi));
}

TEST_CASE("unreachable functionals are a precondition failure") {
  UnitaryRing ur = f3_ur();
  QuadraticSpace s = free_space(ur, mat_of(2, 2, {1, 0, 0, 0}));
  Mat Q = mat_of(2, 2, {0, 0, 0, 1});
  ExtensionProblem prob{s, Q, Q, s.presentation(), Q};
  ConditionReport rep = check_conditions(prob);
  CHECK(!rep.functionals_reached);
  CHECK_THROWS_AS(extend(prob), PreconditionViolation);
  CHECK_THROWS_AS(extend_with_reflections(prob), ConditionViolation);
  CHECK_THROWS_AS(extend_cyclic(prob, 0), ConditionViolation);
}

TEST_CASE("the exchange obstruction forces the augmented route") {
  UnitaryRing ur = f2f2_ur();
  const Ring& R = ur.ring();
  Mat E = mat_of(2, 2, {3, 0, 0, 2});
  Mat B = mat_of(2, 2, {2, 0, 0, 0});
  QuadraticSpace s(ur, make_module(ur.ring_ptr(), E), B);
  REQUIRE(s.size() == 8);
  Mat Q = mat_of(2, 2, {3, 0, 0, 0});
  Mat S = mat_of(2, 2, {3, 0, 2, 0});
  ExtensionProblem prob{s, Q, S, s.presentation(), S};

  ConditionReport rep = check_conditions(prob);
  CHECK(rep.functionals_reached);
  CHECK(rep.displacement_in_v);
  CHECK(rep.summands_self_dual);
  REQUIRE(rep.exchange_factor_unobstructed.size() == 1);
  CHECK(rep.exchange_factor_unobstructed[0] == 0);
  REQUIRE(rep.obstruction_witness[0].has_value());
  CHECK(*rep.obstruction_witness[0] == Vec{3, 0});
  CHECK(!rep.all());

  CHECK_THROWS_AS(extend_with_reflections(prob), ConditionViolation);
  ExtensionResult res = extend(prob);
  CHECK(res.route == "witt-II-augmented");
  CHECK(!res.factors.has_value());
  CHECK(check_isometry(s, s, res.phi));
  // phi restricts to psi: e0 a |-> (a, delta a)
  ModulePtr qmod = make_module(ur.ring_ptr(), Q);
  for (const Vec& x : qmod->elems)
    CHECK(mat_vec(R, res.phi, x) == mat_vec(R, S, x));
  Vec e0{3, 0};
  CHECK(mat_vec(R, res.phi, e0) == Vec{3, 2});
}

TEST_CASE("the two faces of the rank-one obstruction certificate") {
  UnitaryRing ur = f2f2_ur();
  const Ring& R = ur.ring();
  Mat E = mat_of(2, 2, {3, 0, 0, 2});
  Mat B = mat_of(2, 2, {2, 0, 0, 0});
  QuadraticSpace s(ur, make_module(ur.ring_ptr(), E), B);
  std::vector<Vec> all(s.module()->elems);
  Vec x{3, 0};
  CHECK(f2f2_obstruction(s, all, x, x));

  // a hyperbolic partner dissolves the obstruction
  QuadraticSpace hyp = free_space(ur, mat_of(2, 2, {0, 0, 3, 0}));
  std::vector<Vec> hall(hyp.module()->elems);
  CHECK(!f2f2_obstruction(hyp, hall, Vec{3, 0}, Vec{0, 3}));

  CHECK_THROWS_AS(f2f2_obstruction(free_space(f3_ur(), mat_of(1, 1, {1})),
                                   {Vec{0}}, Vec{1}, Vec{1}),
                  WrongFactorType);
  CHECK_THROWS_AS(f2f2_obstruction(s, all, Vec{3}, x), ShapeMismatch);
  CHECK_THROWS_AS(f2f2_obstruction(s, all, Vec{1, 1}, x), NotInModule);
  // v_elems not closed under addition
  CHECK_THROWS_AS(f2f2_obstruction(s, {Vec{0, 0}, Vec{3, 0}}, x, Vec{3, 0}),
                  PreconditionViolation);
  // h(x, z) must be 1
  CHECK_THROWS_AS(f2f2_obstruction(s, all, x, Vec{0, 0}),
                  PreconditionViolation);
  (void)R;
}

TEST_CASE("hyperbolic padding restores self-duality") {
  UnitaryRing ur = f2f2_ur();
  const Ring& R = ur.ring();
  Mat EW(1, 1);
  EW.at(0, 0) = 2;
  QuadraticSpace s = hyperbolic_space(ur, make_module(ur.ring_ptr(), EW));
  REQUIRE(s.rank() == 2);
  REQUIRE(s.size() == 4);
  Mat Q = mat_of(2, 2, {2, 0, 0, 0});
  Mat V = mat_of(2, 2, {0, 0, 0, 1});
  ExtensionProblem prob{s, Q, Q, V, Q};

  ConditionReport rep = check_conditions(prob);
  CHECK(rep.functionals_reached);
  CHECK(rep.displacement_in_v);
  CHECK(!rep.summands_self_dual);
  CHECK(rep.exchange_factor_unobstructed == std::vector<char>{1});

  ExtensionResult res = extend(prob);
  CHECK(res.route == "witt-II-augmented");
  CHECK(!res.factors.has_value());
  CHECK(check_isometry(s, s, res.phi));
  ModulePtr vmod = make_module(ur.ring_ptr(), V);
  for (const Vec& v : s.module()->elems) {
    Vec d = vec_sub(R, mat_vec(R, res.phi, v), v);
    CHECK(module_contains(*vmod, d));
  }
  ModulePtr qmod = make_module(ur.ring_ptr(), Q);
  for (const Vec& q : qmod->elems) CHECK(mat_vec(R, res.phi, q) == q);
}

TEST_CASE("dual splitting and its failure modes") {
  UnitaryRing ur = f3_ur();
  const Ring& R = ur.ring();
  ModulePtr m = make_module(ur.ring_ptr(), mat_identity(R, 2));
  auto [p1, p2] = dual_split(ur, m, mat_of(2, 2, {1, 0, 0, 0}));
  CHECK(p1 == mat_of(2, 2, {1, 0, 0, 0}));
  CHECK(p2 == mat_of(2, 2, {0, 0, 0, 1}));
  auto [f1, f2] = dual_split(ur, m, mat_identity(R, 2));
  CHECK(f1 == mat_identity(R, 2));
  CHECK(f2 == mat_zero(R, 2, 2));
  auto [g1, g2] = dual_split(ur, m, mat_zero(R, 2, 2));
  CHECK(g1 == mat_zero(R, 2, 2));
  CHECK(g2 == mat_identity(R, 2));

  CHECK_THROWS_AS(dual_split(ur, m, mat_of(2, 2, {1, 1, 0, 1})),
                  NotADecomposition);
  ModulePtr line = make_module(ur.ring_ptr(), mat_of(2, 2, {1, 0, 0, 0}));
  CHECK_THROWS_AS(dual_split(ur, line, mat_of(2, 2, {0, 0, 0, 1})),
                  NotADecomposition);
  CHECK_THROWS_AS(dual_split(ur, m, mat_of(1, 2, {1, 0})), ShapeMismatch);
  CHECK_THROWS_AS(dual_split(f2_min_ur(), m, mat_identity(R, 2)),
                  RingMismatch);
}

TEST_CASE("self-duality detection over the exchange ring") {
  UnitaryRing ur = f2f2_ur();
  const Ring& R = ur.ring();
  ModulePtr free1 = make_module(ur.ring_ptr(), mat_identity(R, 1));
  CHECK(self_dual_check(ur, free1));
  Mat half(1, 1);
  half.at(0, 0) = 2;
  CHECK(!self_dual_check(ur, make_module(ur.ring_ptr(), half)));

  UnitaryRing f3 = f3_ur();
  ModulePtr m3 = make_module(f3.ring_ptr(), mat_identity(f3.ring(), 1));
  CHECK(self_dual_check(f3, m3));
  CHECK_THROWS_AS(self_dual_check(ur, m3), RingMismatch);
}

TEST_CASE("cancellation strips a unimodular base") {
  UnitaryRing ur = f3_ur();
  const Ring& R = ur.ring();
  QuadraticSpace base = free_space(ur, mat_of(1, 1, {1}));
  QuadraticSpace s1 = free_space(ur, mat_of(1, 1, {1}));
  QuadraticSpace s2 = free_space(ur, mat_of(1, 1, {1}));
  Mat swap = mat_of(2, 2, {0, 1, 1, 0});
  Mat rho = cancel(base, s1, s2, swap);
  CHECK(rho.rows == 1);
  CHECK(check_isometry(s1, s2, rho));

  // cancelling against summands with zero form
  QuadraticSpace z1 = free_space(ur, mat_of(1, 1, {0}));
  QuadraticSpace z2 = free_space(ur, mat_of(1, 1, {0}));
  Mat shear = mat_of(2, 2, {1, 0, 1, 1});
  Mat rho2 = cancel(base, z1, z2, shear);
  CHECK(check_isometry(z1, z2, rho2));

  QuadraticSpace degenerate = free_space(ur, mat_of(1, 1, {0}));
  CHECK_THROWS_AS(cancel(degenerate, s1, s2, swap), NotUnimodularBase);
  CHECK_THROWS_AS(cancel(base, s1, s2, mat_of(1, 1, {1})), ShapeMismatch);
  CHECK_THROWS_AS(cancel(base, s1, s2, mat_of(2, 2, {1, 1, 0, 1})),
                  PreconditionViolation);
  QuadraticSpace other = free_space(f2_min_ur(), mat_of(1, 1, {1}));
  CHECK_THROWS_AS(cancel(base, other, s2, swap), RingMismatch);
  (void)R;
}

TEST_CASE("extensions agree with the isometry oracle") {
  std::vector<QuadraticSpace> spaces;
  spaces.push_back(free_space(f3_ur(), mat_of(2, 2, {1, 0, 0, 1})));
  spaces.push_back(free_space(f2_max_ur(), mat_of(2, 2, {0, 1, 0, 0})));
  spaces.push_back(free_space(f4_omega_ur(), mat_of(2, 2, {1, 0, 0, 1})));
  {
    UnitaryRing ur = f2f2_ur();
    spaces.push_back(QuadraticSpace(ur,
                                    make_module(ur.ring_ptr(),
                                                mat_of(2, 2, {3, 0, 0, 2})),
                                    mat_of(2, 2, {2, 0, 0, 0})));
  }
  for (const QuadraticSpace& s : spaces) {
    const Ring& R = s.ur().ring();
    std::vector<Mat> group = isometry_group(s);
    std::vector<Mat> projs = summand_projections(s);
    for (const Mat& w1 : projs)
      for (const Mat& w2 : projs) {
        QuadraticSpace r1 = restrict_to_summand(s, w1);
        QuadraticSpace r2 = restrict_to_summand(s, w2);
        for (const Mat& u : all_isometries(r1, r2)) {
          ExtensionProblem prob{s, w1, w2, s.presentation(), u};
          ConditionReport rep = check_conditions(prob);
          if (!rep.functionals_reached || !rep.displacement_in_v) {
            CHECK_THROWS_AS(extend(prob), PreconditionViolation);
            continue;
          }
          ExtensionResult res = extend(prob);
          Mat psiN = mat_mul(R, u, w1);
          ModulePtr w1mod = make_module(s.ur().ring_ptr(), w1);
          for (const Vec& x : w1mod->elems)
            CHECK(mat_vec(R, res.phi, x) == mat_vec(R, psiN, x));
          Mat norm = normalized(s, res.phi);
          CHECK(std::find(group.begin(), group.end(), norm) != group.end());
        }
      }
  }
}
