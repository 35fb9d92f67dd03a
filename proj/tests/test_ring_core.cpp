#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qf/matrix.hpp"
#include "qf/ring.hpp"
#include "qf/structure.hpp"
#include "qf/unitary.hpp"

using namespace qf;

namespace {

// full ring-axiom sweep; cheap for the sizes used in tests
void check_ring_axioms(const Ring& R) {
  const Elem n = static_cast<Elem>(R.size());
  REQUIRE(n >= 1);
  for (Elem a = 0; a < n; ++a) {
    CHECK(R.add(a, R.zero()) == a);
    CHECK(R.mul(a, R.one()) == a);
    CHECK(R.mul(R.one(), a) == a);
    CHECK(R.add(a, R.neg(a)) == R.zero());
    for (Elem b = 0; b < n; ++b) {
      CHECK(R.add(a, b) == R.add(b, a));
      for (Elem c = 0; c < n; ++c) {
        CHECK(R.add(R.add(a, b), c) == R.add(a, R.add(b, c)));
        CHECK(R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c)));
        CHECK(R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c)));
        CHECK(R.mul(R.add(a, b), c) == R.add(R.mul(a, c), R.mul(b, c)));
      }
    }
  }
}

}  // namespace

TEST_CASE("residue ring Z/4") {
  auto R = make_residue(4);
  CHECK(R->size() == 4);
  CHECK(R->zero() == 0);
  CHECK(R->one() == 1);
  CHECK(R->add(2, 3) == 1);
  CHECK(R->mul(2, 3) == 2);
  CHECK(R->neg(1) == 3);
  CHECK(R->units() == std::vector<Elem>{1, 3});
  CHECK(R->inverse(3) == 3);
  CHECK_FALSE(R->is_unit(2));
  CHECK_THROWS_AS(R->inverse(2), NotAUnit);
  CHECK(R->describe() == "z/4");
  check_ring_axioms(*R);
}

TEST_CASE("GF(4) arithmetic and encoding") {
  auto F = make_field(2, 2);
  CHECK(F->size() == 4);
  auto* f = dynamic_cast<const FieldRing*>(F.get());
  REQUIRE(f != nullptr);
  // least irreducible over F2 of degree 2 is x^2 + x + 1
  CHECK(f->modulus() == std::vector<std::uint32_t>{1, 1});
  // encoding: index = c_0 * 2 + c_1 for x-coefficients (c_0 + c_1 x)
  CHECK(F->zero() == 0);   // 0
  CHECK(F->one() == 2);    // 1
  const Elem x = 1;        // x
  const Elem x1 = 3;       // x + 1
  CHECK(F->mul(x, x) == x1);      // x^2 = x + 1
  CHECK(F->mul(x, x1) == F->one());  // x(x+1) = x^2 + x = 1
  CHECK(F->add(x, F->one()) == x1);
  CHECK(F->units().size() == 3);
  auto frob = f->frobenius_table(1);
  CHECK(frob[0] == 0);
  CHECK(frob[2] == 2);
  CHECK(frob[x] == x1);
  CHECK(frob[x1] == x);
  check_ring_axioms(*F);
}

TEST_CASE("GF(9) least modulus is x^2 + 1") {
  auto F = make_field(3, 2);
  auto* f = dynamic_cast<const FieldRing*>(F.get());
  REQUIRE(f != nullptr);
  CHECK(f->modulus() == std::vector<std::uint32_t>{1, 0});
  CHECK(F->size() == 9);
  CHECK(F->one() == 3);
  // x * x = -1 = 2, i.e. coefficients (2,0) -> index 6
  CHECK(F->mul(1, 1) == 6);
  CHECK(F->units().size() == 8);
  check_ring_axioms(*F);
}

TEST_CASE("matrix ring M2(F2)") {
  auto R = make_matrix(2, make_residue(2));
  CHECK(R->size() == 16);
  auto* m = dynamic_cast<const MatrixRing*>(R.get());
  REQUIRE(m != nullptr);
  // identity (1,0,0,1) -> 9, e12 = (0,1,0,0) -> 4
  CHECK(R->one() == 9);
  Elem e12 = m->encode({0, 1, 0, 0});
  CHECK(e12 == 4);
  CHECK(R->mul(e12, e12) == R->zero());
  CHECK(R->units().size() == 6);  // |GL_2(F_2)|
  // transpose is an anti-automorphism: built table flips e12 to e21
  auto entry_id = make_residue(2)->identity_table();
  auto t = m->transpose_table(entry_id);
  CHECK(t[e12] == m->encode({0, 0, 1, 0}));
  CHECK(t[R->one()] == R->one());
  check_ring_axioms(*R);
}

TEST_CASE("product ring F2 x F2 with exchange") {
  auto F2 = make_residue(2);
  auto R = make_product({F2, F2});
  CHECK(R->size() == 4);
  CHECK(R->one() == 3);
  auto* pr = dynamic_cast<const ProductRing*>(R.get());
  REQUIRE(pr != nullptr);
  auto ex = pr->exchange_table();
  CHECK(ex[0] == 0);
  CHECK(ex[1] == 2);
  CHECK(ex[2] == 1);
  CHECK(ex[3] == 3);
  CHECK(R->units() == std::vector<Elem>{3});
  check_ring_axioms(*R);
}

TEST_CASE("opposite ring reverses multiplication") {
  auto M = make_matrix(2, make_residue(2));
  auto Op = make_opposite(M);
  CHECK(Op->size() == M->size());
  CHECK(Op->one() == M->one());
  for (Elem a = 0; a < M->size(); ++a)
    for (Elem b = 0; b < M->size(); ++b)
      CHECK(Op->mul(a, b) == M->mul(b, a));
  check_ring_axioms(*Op);
}

TEST_CASE("truncated polynomial ring F2[t]/(t^2)") {
  auto R = make_truncated(make_residue(2), 2);
  CHECK(R->size() == 4);
  CHECK(R->one() == 2);  // (1,0)
  const Elem t = 1;      // (0,1)
  CHECK(R->mul(t, t) == R->zero());
  CHECK(R->units() == std::vector<Elem>{2, 3});
  CHECK(R->inverse(3) == 3);  // (1+t)^2 = 1
  check_ring_axioms(*R);
}

TEST_CASE("subquotient: Z/4 mod (2) is Z/2") {
  auto Z4 = make_residue(4);
  // representatives 0,1; projection takes a mod 2
  auto Q = std::make_shared<SubquotientRing>(
      Z4, std::vector<Elem>{0, 1}, std::vector<Elem>{0, 1, 0, 1}, 1,
      "z/4 mod (2)");
  CHECK(Q->size() == 2);
  CHECK(Q->add(1, 1) == 0);
  CHECK(Q->mul(1, 1) == 1);
  CHECK(Q->project(3) == 1);
  CHECK(Q->to_parent(1) == 1);
  check_ring_axioms(*Q);
}

TEST_CASE("build_ring round-trips through specs") {
  RingSpec s;
  s.kind = RingSpec::Kind::Matrix;
  s.n = 2;
  RingSpec f2;
  f2.kind = RingSpec::Kind::Residue;
  f2.n = 2;
  s.children.push_back(f2);
  auto R = build_ring(s);
  CHECK(R->size() == 16);
  REQUIRE(R->spec() != nullptr);
  CHECK(R->spec()->dump() == "mat(2,z/2)");
  auto R2 = build_ring(*R->spec());
  CHECK(R2->describe() == R->describe());
}

TEST_CASE("oversize and malformed constructions are rejected") {
  CHECK_THROWS_AS(make_residue(1), MalformedSpec);
  CHECK_THROWS_AS(make_field(4, 1), MalformedSpec);
  CHECK_THROWS_AS(make_field(2, 2, {0, 0}), MalformedSpec);  // x^2 reducible
  CHECK_THROWS_AS(make_matrix(3, make_residue(256)), OversizeRing);
  CHECK_THROWS_AS(make_product({make_residue(2)}), MalformedSpec);
}

TEST_CASE("unitary ring validation") {
  auto Z4 = make_residue(4);
  UnitaryRing ur(Z4, Z4->identity_table(), 1, LambdaPolicy::Min);
  CHECK(ur.lambda().members() == std::vector<Elem>{0});
  UnitaryRing ur_max(Z4, Z4->identity_table(), 1, LambdaPolicy::Max);
  CHECK(ur_max.lambda().members() == std::vector<Elem>{0, 2});

  // non-unit u
  CHECK_THROWS_AS(UnitaryRing(Z4, Z4->identity_table(), 2, LambdaPolicy::Min),
                  InvalidUnitaryRing);
  // identity is not an anti-automorphism of a noncommutative ring
  auto M = make_matrix(2, make_residue(2));
  CHECK_THROWS_AS(UnitaryRing(M, M->identity_table(), M->one(),
                              LambdaPolicy::Min),
                  InvalidUnitaryRing);
  // u = -1 works on Z/4 (symplectic style): minimal lambda is 2Z/4
  UnitaryRing symp(Z4, Z4->identity_table(), 3, LambdaPolicy::Min);
  CHECK(symp.lambda().members() == std::vector<Elem>{0, 2});
  UnitaryRing symp_max(Z4, Z4->identity_table(), 3, LambdaPolicy::Max);
  CHECK(symp_max.lambda().members() == std::vector<Elem>{0, 1, 2, 3});
}

TEST_CASE("forced form parameters on small unitary rings") {
  // exchange structure on F2 x F2: lambda is {0, (1,1)} both min and max
  auto F2 = make_residue(2);
  auto P = make_product({F2, F2});
  auto* pr = dynamic_cast<const ProductRing*>(P.get());
  UnitaryRing ex(P, pr->exchange_table(), P->one(), LambdaPolicy::Min);
  CHECK(ex.lambda().members() == std::vector<Elem>{0, 3});
  UnitaryRing ex_max(P, pr->exchange_table(), P->one(), LambdaPolicy::Max);
  CHECK(ex_max.lambda().members() == std::vector<Elem>{0, 3});

  // Frobenius structure on GF(4): lambda = prime field either way
  auto F4 = make_field(2, 2);
  auto* f4 = dynamic_cast<const FieldRing*>(F4.get());
  UnitaryRing fr(F4, f4->frobenius_table(1), F4->one(), LambdaPolicy::Min);
  CHECK(fr.lambda().members() == std::vector<Elem>{0, 2});
  UnitaryRing fr_max(F4, f4->frobenius_table(1), F4->one(), LambdaPolicy::Max);
  CHECK(fr_max.lambda().members() == std::vector<Elem>{0, 2});

  // transpose on M2(F2) with minimal lambda: zero and e12+e21
  auto M = make_matrix(2, make_residue(2));
  auto* m = dynamic_cast<const MatrixRing*>(M.get());
  UnitaryRing tr(M, m->transpose_table(F2->identity_table()), M->one(),
                 LambdaPolicy::Min);
  CHECK(tr.lambda().members() == std::vector<Elem>{0, 6});
  // maximal lambda: all symmetric matrices (8 of them)
  UnitaryRing tr_max(M, m->transpose_table(F2->identity_table()), M->one(),
                     LambdaPolicy::Max);
  CHECK(tr_max.lambda().size() == 8);
}

TEST_CASE("radical and quotient of Z/4 and F2[t]/(t^2)") {
  auto Z4 = make_residue(4);
  CHECK(radical_of(*Z4) == std::vector<Elem>{0, 2});
  auto T = make_truncated(make_residue(2), 2);
  CHECK(radical_of(*T) == std::vector<Elem>{0, 1});  // (t)
  auto Q = quotient_by_ideal(Z4, {0, 2}, "test quotient");
  CHECK(Q->size() == 2);
  CHECK(Q->project(3) == 1);
  CHECK(Q->mul(1, 1) == 1);
  CHECK(radical_of(*make_field(3, 2)).size() == 1);  // fields are semisimple
}

TEST_CASE("idempotent lifting") {
  auto Z4 = make_residue(4);
  std::vector<char> inJ{1, 0, 1, 0};
  CHECK(lift_idempotent(*Z4, 3, inJ) == 1);
  CHECK(lift_idempotent(*Z4, 2, inJ) == 0);
  auto F9 = make_field(3, 2);
  std::vector<char> inJ9(9, 0);
  inJ9[0] = 1;
  CHECK_THROWS_AS(lift_idempotent(*F9, 1, inJ9), NotIdempotentModJ);

  // a full system over Z/4: seeds {3, 2} are {1, 0} mod the radical... the
  // system must consist of exact idempotents summing to 1
  auto sys = lift_orthogonal_system(*Z4, {3, 2}, inJ);
  CHECK(sys == std::vector<Elem>{1, 0});
}

TEST_CASE("ef_inverse finds matrix unit partners") {
  auto M = make_matrix(2, make_residue(2));
  auto* m = dynamic_cast<const MatrixRing*>(M.get());
  Elem e11 = m->encode({1, 0, 0, 0}), e22 = m->encode({0, 0, 0, 1});
  Elem e12 = m->encode({0, 1, 0, 0}), e21 = m->encode({0, 0, 1, 0});
  auto d = ef_inverse(*M, e12, e22, e11);
  REQUIRE(d.has_value());
  CHECK(*d == e21);
  CHECK_FALSE(ef_inverse(*M, M->zero(), e22, e11).has_value());
  CHECK_THROWS_AS(ef_inverse(*M, e12, e11, e22), DomainViolation);
}

TEST_CASE("structure of Z/4 with identity involution") {
  auto Z4 = make_residue(4);
  UnitaryRing ur(Z4, Z4->identity_table(), 1, LambdaPolicy::Min);
  const Structure& st = ur.structure();
  CHECK(st.radical() == std::vector<Elem>{0, 2});
  CHECK(st.quotient()->size() == 2);
  CHECK(st.conjugator() == 1);
  REQUIRE(st.factors().size() == 1);
  const FactorData& f = st.factors()[0];
  CHECK(f.kind == FactorKind::Orthogonal);
  CHECK(f.n == 1);
  CHECK(f.eps_system.size() == 1);
  CHECK(f.lifts == std::vector<Elem>{1});
}

TEST_CASE("structure kinds across corner types") {
  // symplectic: u = -1 on F3
  auto F3 = make_residue(3);
  UnitaryRing symp(F3, F3->identity_table(), 2, LambdaPolicy::Min);
  CHECK(symp.structure().factors()[0].kind == FactorKind::Symplectic);

  // unitary: Frobenius on GF(4)
  auto F4 = make_field(2, 2);
  auto* f4 = dynamic_cast<const FieldRing*>(F4.get());
  UnitaryRing uni(F4, f4->frobenius_table(1), F4->one(), LambdaPolicy::Min);
  CHECK(uni.structure().factors()[0].kind == FactorKind::Unitary);

  // symplectic via the form parameter: F2 with lambda = F2
  auto F2 = make_residue(2);
  UnitaryRing sp2(F2, F2->identity_table(), 1, LambdaPolicy::Max);
  CHECK(sp2.structure().factors()[0].kind == FactorKind::Symplectic);
  UnitaryRing or2(F2, F2->identity_table(), 1, LambdaPolicy::Min);
  CHECK(or2.structure().factors()[0].kind == FactorKind::Orthogonal);

  // exchange: swap on F2 x F2
  auto P = make_product({F2, F2});
  auto* pr = dynamic_cast<const ProductRing*>(P.get());
  UnitaryRing ex(P, pr->exchange_table(), P->one(), LambdaPolicy::Min);
  const FactorData& exf = ex.structure().factors()[0];
  CHECK(ex.structure().factors().size() == 1);
  CHECK(exf.kind == FactorKind::Exchange);
  CHECK(exf.central_parts.size() == 2);
  CHECK(exf.n == 1);
  CHECK(exf.delta != kNoElem);
  CHECK(exf.corner->size() == 4);
}

TEST_CASE("structure of M2(F2) with transpose") {
  auto F2 = make_residue(2);
  auto M = make_matrix(2, F2);
  auto* m = dynamic_cast<const MatrixRing*>(M.get());
  UnitaryRing ur(M, m->transpose_table(F2->identity_table()), M->one(),
                 LambdaPolicy::Min);
  const Structure& st = ur.structure();
  CHECK(st.radical() == std::vector<Elem>{0});
  REQUIRE(st.factors().size() == 1);
  const FactorData& f = st.factors()[0];
  CHECK(f.kind == FactorKind::Orthogonal);
  CHECK(f.n == 2);
  CHECK(f.corner->size() == 2);
  // eps = e22 (the least symmetric idempotent with minimal corner), the
  // completion slot is e11; with zero radical the lifted system equals the
  // quotient-level one
  Elem e11 = m->encode({1, 0, 0, 0}), e22 = m->encode({0, 0, 0, 1});
  CHECK(f.lifts == std::vector<Elem>{e22, e11});
}

TEST_CASE("structure of a mixed product F3 x M2(F2)") {
  auto F3 = make_residue(3);
  auto F2 = make_residue(2);
  auto M = make_matrix(2, F2);
  auto* m = dynamic_cast<const MatrixRing*>(M.get());
  auto P = make_product({F3, M});
  auto* pr = dynamic_cast<const ProductRing*>(P.get());
  auto sigma = pr->components_table(
      {F3->identity_table(), m->transpose_table(F2->identity_table())});
  UnitaryRing ur(P, sigma, P->one(), LambdaPolicy::Min);
  const Structure& st = ur.structure();
  REQUIRE(st.factors().size() == 2);
  // atoms: (0, I) has index 9, (1, 0) has index 16, so the matrix block
  // comes first
  CHECK(st.factors()[0].kind == FactorKind::Orthogonal);
  CHECK(st.factors()[0].n == 2);
  CHECK(st.factors()[1].kind == FactorKind::Orthogonal);
  CHECK(st.factors()[1].n == 1);
  // global lift system: orthogonal idempotents summing to 1
  Elem s = P->zero();
  for (const auto& fd : st.factors())
    for (Elem e : fd.lifts) {
      CHECK(P->mul(e, e) == e);
      s = P->add(s, e);
    }
  CHECK(s == P->one());
}

TEST_CASE("structure of F2[t]/(t^2): radical lifting is exercised") {
  auto T = make_truncated(make_residue(2), 2);
  UnitaryRing ur(T, T->identity_table(), T->one(), LambdaPolicy::Min);
  const Structure& st = ur.structure();
  CHECK(st.radical().size() == 2);
  CHECK(st.quotient()->size() == 2);
  REQUIRE(st.factors().size() == 1);
  CHECK(st.factors()[0].kind == FactorKind::Orthogonal);
  CHECK(st.factors()[0].lifts == std::vector<Elem>{T->one()});
}

TEST_CASE("conjugation transports the unitary structure") {
  // on F3 with u = -1 there is nothing to standardize, but conjugating by
  // the unit 2 must reproduce an equivalent structure
  auto F3 = make_residue(3);
  UnitaryRing ur(F3, F3->identity_table(), 2, LambdaPolicy::Min);
  UnitaryRing c = conjugate_unitary(ur, 2);
  CHECK(c.u() == 2);  // commutative: u' = v sigma(v)^{-1} u = u
  CHECK(c.lambda().members() == ur.lambda().members());
  CHECK_THROWS_AS(conjugate_unitary(ur, 0), NotAUnit);
}

TEST_CASE("matrix helpers over Z/4") {
  auto R = make_residue(4);
  Mat A(2, 2);
  A.a = {1, 2, 3, 0};
  Mat B(2, 2);
  B.a = {2, 0, 1, 1};
  Mat AB = mat_mul(*R, A, B);
  CHECK(AB.a == std::vector<Elem>{0, 2, 2, 0});
  Mat I = mat_identity(*R, 2);
  CHECK(mat_mul(*R, A, I) == A);
  CHECK(mat_mul(*R, I, A) == A);
  Mat T = sigma_transpose(A, R->identity_table());
  CHECK(T.a == std::vector<Elem>{1, 3, 2, 0});
  CHECK(mat_add(*R, A, mat_neg(*R, A)) == mat_zero(*R, 2, 2));
  Vec v{1, 2};
  CHECK(mat_vec(*R, A, v) == Vec{1, 3});
  CHECK(vec_mat(*R, v, A) == Vec{3, 2});
  CHECK(sigma_dot(*R, v, v, R->identity_table()) == 1);  // 1+4 mod 4
  Mat D = mat_diag(*R, A, I);
  CHECK(D.rows == 4);
  CHECK(D.at(2, 2) == 1);
  CHECK(D.at(0, 2) == 0);
  CHECK(mat_block(D, 0, 0, 2, 2) == A);
  Mat O = mat_outer(*R, Vec{1, 2}, Vec{3, 1});
  CHECK(O.a == std::vector<Elem>{3, 1, 2, 2});
}
