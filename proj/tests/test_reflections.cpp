#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qf/reflections.hpp"

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

UnitaryRing m2f2_transpose_ur() {
  auto R = make_matrix(2, make_residue(2));
  std::vector<Elem> sigma =
      dynamic_cast<const MatrixRing&>(*R).transpose_table(
          make_residue(2)->identity_table());
  return UnitaryRing(R, sigma, R->one(), LambdaPolicy::Min);
}

}  // namespace

TEST_CASE("classical reflection over F3") {
  auto R = make_residue(3);
  UnitaryRing ur(R, R->identity_table(), R->one(), LambdaPolicy::Min);
  QuadraticSpace s = free_space(ur, mat_of(2, 2, {1, 0, 0, 1}));
  ReflectionDatum d{Vec{1, 0}, 1, 1};
  CHECK(validate_reflection(s, d) == 1);
  Mat M = reflection_matrix(s, d);
  CHECK(M == mat_of(2, 2, {2, 0, 0, 1}));
  CHECK(check_isometry(s, s, M));
  // c = sigma(c) u here, so the reflection is an involution
  ReflectionDatum inv = reflection_inverse(s, d);
  CHECK(inv.c == d.c);
  CHECK(mat_mul(*R, M, M) == s.presentation());
}

TEST_CASE("hyperbolic swap as a reflection") {
  auto R = make_residue(2);
  UnitaryRing ur(R, R->identity_table(), R->one(), LambdaPolicy::Min);
  QuadraticSpace s = free_space(ur, mat_of(2, 2, {0, 0, 1, 0}));
  ReflectionDatum d{Vec{1, 1}, 1, 1};
  Mat M = reflection_matrix(s, d);
  CHECK(M == mat_of(2, 2, {0, 1, 1, 0}));
  CHECK(check_isometry(s, s, M));
  // isotropic vectors admit no reflection over Lambda = {0}
  ReflectionDatum iso{Vec{1, 0}, 1, 0};
  CHECK_THROWS_AS(validate_reflection(s, iso), NotEFInvertible);
}

TEST_CASE("datum validation failures") {
  UnitaryRing ur = m2f2_transpose_ur();
  Mat B(1, 1);
  B.at(0, 0) = 4;  // e12
  QuadraticSpace s = free_space(ur, B);
  // y = e21 does not end in e22
  CHECK_THROWS_AS(validate_reflection(s, ReflectionDatum{Vec{2}, 1, 1}),
                  InvalidReflectionDatum);
  // e = e12 is not idempotent
  CHECK_THROWS_AS(validate_reflection(s, ReflectionDatum{Vec{0}, 4, 0}),
                  InvalidReflectionDatum);
  // c = e12 does not lie in sigma(e22) A e22
  CHECK_THROWS_AS(validate_reflection(s, ReflectionDatum{Vec{4}, 1, 4}),
                  InvalidReflectionDatum);
  // wrong coset: beta(y,y) = e22 but c = 0
  CHECK_THROWS_AS(validate_reflection(s, ReflectionDatum{Vec{5}, 1, 0}),
                  InvalidReflectionDatum);
  // y outside the module
  Mat W(1, 1);
  W.at(0, 0) = 8;  // e11
  QuadraticSpace sub = restrict_to_summand(s, W);
  CHECK_THROWS_AS(validate_reflection(sub, ReflectionDatum{Vec{2}, 1, 1}),
                  NotInModule);
}

TEST_CASE("corner reflection and reindexing in M2(F2)") {
  UnitaryRing ur = m2f2_transpose_ur();
  const Ring& R = ur.ring();
  Mat B(1, 1);
  B.at(0, 0) = 4;  // e12
  QuadraticSpace s = free_space(ur, B);
  // y = e12 + e22 ends in e22 = 1, beta(y,y) = e22
  ReflectionDatum d{Vec{5}, 1, 1};
  CHECK(validate_reflection(s, d) == 1);
  Mat M = reflection_matrix(s, d);
  CHECK(M.at(0, 0) == 6);  // the swap isometry found by exhaustion
  CHECK(check_isometry(s, s, M));

  // reindex along a = e21, an (e22, e11)-isomorphism
  ReflectionDatum rd = reflection_reindex(s, d, 2, 8);
  CHECK(rd.y == Vec{10});  // e11 + e21
  CHECK(rd.e == 8);
  CHECK(rd.c == 8);
  CHECK(reflection_matrix(s, rd) == M);
  // a = e12 lies in e22 A e11? no: it lies in e11 A e22
  CHECK_THROWS_AS(reflection_reindex(s, d, 4, 8), InvalidReflectionDatum);

  // inverse datum gives the inverse matrix
  ReflectionDatum inv = reflection_inverse(s, d);
  CHECK(mat_mul(R, reflection_matrix(s, inv), M) == s.presentation());
}

TEST_CASE("orthogonal composition over F3 x F3") {
  auto R = make_product({make_residue(3), make_residue(3)});
  UnitaryRing ur(R, R->identity_table(), R->one(), LambdaPolicy::Min);
  Mat B(1, 1);
  B.at(0, 0) = 4;  // (1,1)
  QuadraticSpace s = free_space(ur, B);
  ReflectionDatum d1{Vec{3}, 3, 3};  // component (1,0)
  ReflectionDatum d2{Vec{1}, 1, 1};  // component (0,1)
  Mat M1 = reflection_matrix(s, d1);
  Mat M2 = reflection_matrix(s, d2);
  CHECK(M1 == mat_of(1, 1, {7}));
  CHECK(M2 == mat_of(1, 1, {5}));
  ReflectionDatum comp = compose_orthogonal_reflections(s, d1, d2);
  CHECK(comp.y == Vec{4});
  CHECK(comp.e == 4);
  CHECK(comp.c == 4);
  Mat M = reflection_matrix(s, comp);
  CHECK(M == mat_mul(*R, M1, M2));
  CHECK(M == mat_of(1, 1, {8}));  // negation
  CHECK_THROWS_AS(compose_orthogonal_reflections(s, d1, d1),
                  IdempotentsNotOrthogonal);
}

TEST_CASE("transvections") {
  auto R3 = make_residue(3);
  UnitaryRing ur3(R3, R3->identity_table(), R3->one(), LambdaPolicy::Min);
  QuadraticSpace s3 = free_space(ur3, mat_of(2, 2, {1, 0, 0, 1}));
  auto d = transvection_datum(s3, Vec{1, 0}, Vec{0, 1}, 1);
  REQUIRE(d.has_value());
  CHECK(d->y == Vec{1, 2});
  Mat M = reflection_matrix(s3, *d);
  CHECK(mat_vec(*R3, M, Vec{1, 0}) == Vec{0, 1});
  CHECK(check_isometry(s3, s3, M));

  // over F2 with the diagonal form, h vanishes and no transvection exists
  auto R2 = make_residue(2);
  UnitaryRing ur2(R2, R2->identity_table(), R2->one(), LambdaPolicy::Min);
  QuadraticSpace s2 = free_space(ur2, mat_of(2, 2, {1, 0, 0, 1}));
  CHECK_FALSE(transvection_datum(s2, Vec{1, 0}, Vec{0, 1}, 1).has_value());

  // mismatched quadratic classes are rejected
  CHECK_THROWS_AS(transvection_datum(s3, Vec{1, 0}, Vec{1, 1}, 1),
                  PreconditionViolation);

  // but the hyperbolic swap is found as a transvection
  QuadraticSpace hyp = free_space(ur2, mat_of(2, 2, {0, 0, 1, 0}));
  auto hd = transvection_datum(hyp, Vec{1, 0}, Vec{0, 1}, 1);
  REQUIRE(hd.has_value());
  CHECK(mat_vec(*R2, reflection_matrix(hyp, *hd), Vec{1, 0}) == Vec{0, 1});
}

TEST_CASE("coset-shifted reflection data over Z/4") {
  auto R = make_residue(4);
  UnitaryRing ur(R, R->identity_table(), 3, LambdaPolicy::Min);
  QuadraticSpace hyp = free_space(ur, mat_of(2, 2, {0, 1, 0, 0}));
  // beta(y,y) = 1 and Lambda = {0,2}: both c = 1 and c = 3 are valid
  ReflectionDatum a{Vec{1, 1}, 1, 1};
  ReflectionDatum b{Vec{1, 1}, 1, 3};
  Mat Ma = reflection_matrix(hyp, a);
  Mat Mb = reflection_matrix(hyp, b);
  CHECK(Ma != Mb);
  CHECK(check_isometry(hyp, hyp, Ma));
  CHECK(check_isometry(hyp, hyp, Mb));
  // c = 2 and c = 0 sit in the wrong coset
  CHECK_THROWS_AS(validate_reflection(hyp, ReflectionDatum{Vec{1, 1}, 1, 2}),
                  InvalidReflectionDatum);
  CHECK_THROWS_AS(validate_reflection(hyp, ReflectionDatum{Vec{1, 1}, 1, 0}),
                  InvalidReflectionDatum);
  // inverses compose to the identity even when c != sigma(c) u
  ReflectionDatum ainv = reflection_inverse(hyp, a);
  CHECK(mat_mul(*R, reflection_matrix(hyp, ainv), Ma) == hyp.presentation());
}
