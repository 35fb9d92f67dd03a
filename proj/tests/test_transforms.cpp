#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qf/transforms.hpp"

using namespace qf;

namespace {

UnitaryRing m2f2_transpose_ur() {
  auto R = make_matrix(2, make_residue(2));
  std::vector<Elem> sigma =
      dynamic_cast<const MatrixRing&>(*R).transpose_table(
          make_residue(2)->identity_table());
  return UnitaryRing(R, sigma, R->one(), LambdaPolicy::Min);
}

QuadraticSpace free_space(const UnitaryRing& ur, const Mat& gram) {
  Mat E = mat_identity(ur.ring(), gram.rows);
  return QuadraticSpace(ur, make_module(ur.ring_ptr(), E), gram);
}

std::vector<Mat> isometries_rank(const QuadraticSpace& s, std::size_t k) {
  // tiny exhaustive sweep, only for rank-k spaces over small rings
  const Ring& R = s.ur().ring();
  std::vector<Mat> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < k * k; ++i) total *= R.size();
  for (std::size_t code = 0; code < total; ++code) {
    Mat U(k, k);
    std::size_t c = code;
    for (std::size_t i = 0; i < k * k; ++i) {
      U.a[i] = static_cast<Elem>(c % R.size());
      c /= R.size();
    }
    if (check_isometry(s, s, U)) out.push_back(U);
  }
  return out;
}

}  // namespace

TEST_CASE("transfer along the identity is trivial") {
  auto R = make_residue(4);
  UnitaryRing ur(R, R->identity_table(), 3, LambdaPolicy::Min);
  TransferContext ctx = make_transfer(ur, R->one());
  CHECK(ctx.terms() == 1);
  CHECK(ctx.corner->size() == 4);
  Mat B(1, 1);
  B.at(0, 0) = 3;
  QuadraticSpace s = free_space(ur, B);
  QuadraticSpace t = transfer_space(ctx, s);
  CHECK(t.size() == s.size());
  CHECK(t.gram().at(0, 0) == ctx.corner->project(3));
  for (const Vec& x : s.module()->elems)
    CHECK(from_corner(ctx, s, to_corner(ctx, s, x)) == x);
}

TEST_CASE("transfer validation") {
  UnitaryRing ur = m2f2_transpose_ur();
  CHECK_THROWS_AS(make_transfer(ur, 4), NotSymmetricIdempotent);   // e12
  CHECK_THROWS_AS(make_transfer(ur, 12), NotSymmetricIdempotent);  // e11+e12

  auto P = make_product({make_residue(2), make_residue(2)});
  UnitaryRing pur(P, P->identity_table(), P->one(), LambdaPolicy::Min);
  CHECK_THROWS_AS(make_transfer(pur, 2), NotFullIdempotent);  // (1,0)
}

TEST_CASE("transfer to the e11 corner of M2(F2)") {
  UnitaryRing ur = m2f2_transpose_ur();
  const Ring& R = ur.ring();
  TransferContext ctx = make_transfer(ur, 8);  // e11
  CHECK(ctx.corner->size() == 2);
  CHECK(ctx.terms() == 2);
  // the witness really decomposes 1
  Elem sum = R.zero();
  for (std::size_t t = 0; t < ctx.terms(); ++t)
    sum = R.add(sum, R.mul(R.mul(ctx.xs[t], 8), ctx.ys[t]));
  CHECK(sum == R.one());
  CHECK(ctx.corner_ur.lambda().members() == std::vector<Elem>{0});

  Mat B(1, 1);
  B.at(0, 0) = 4;  // e12
  QuadraticSpace s = free_space(ur, B);
  QuadraticSpace t = transfer_space(ctx, s);
  CHECK(t.rank() == 2);
  CHECK(t.size() == 4);  // A*e11 has four elements
  CHECK(is_unimodular(t));

  // corner side is the hyperbolic plane over F2: three zero values, one not
  std::size_t zeros = 0;
  for (const Vec& v : t.module()->elems)
    if (t.qhat(v) == t.ur().ring().zero()) ++zeros;
  CHECK(zeros == 3);

  // to_corner is a bijection from A*e11 onto the transferred module
  std::size_t hits = 0;
  for (const Vec& x : s.module()->elems) {
    Vec back = from_corner(ctx, s, to_corner(ctx, s, x));
    Vec xe = x;
    for (Elem& c : xe) c = R.mul(c, 8);
    CHECK(back == xe);
    if (back == x) ++hits;  // x already had coordinates in A*e11
  }
  CHECK(hits == 4);

  // the two isometry groups correspond under the functor
  std::vector<Mat> iso_a = isometries_rank(s, 1);
  std::vector<Mat> iso_c = isometries_rank(t, 2);
  CHECK(iso_a.size() == 2);
  CHECK(iso_c.size() == 2);
  for (const Mat& U : iso_a) {
    Mat Uhat = transfer_matrix(ctx, U);
    CHECK(check_isometry(t, t, Uhat));
    Mat back = untransfer_matrix(ctx, s, Uhat);
    CHECK(back == mat_mul(R, U, s.presentation()));
  }
}

TEST_CASE("transfer matrix map is multiplicative") {
  UnitaryRing ur = m2f2_transpose_ur();
  const Ring& R = ur.ring();
  TransferContext ctx = make_transfer(ur, 8);
  Mat M(1, 1), N(1, 1);
  for (Elem m = 0; m < R.size(); m += 5)
    for (Elem n = 0; n < R.size(); n += 3) {
      M.at(0, 0) = m;
      N.at(0, 0) = n;
      CHECK(mat_mul(*ctx.corner, transfer_matrix(ctx, M),
                    transfer_matrix(ctx, N)) ==
            transfer_matrix(ctx, mat_mul(R, M, N)));
    }
}

TEST_CASE("transfer over a product ring") {
  auto R = make_product({make_residue(3), make_matrix(2, make_residue(2))});
  const auto& PR = dynamic_cast<const ProductRing&>(*R);
  auto M2 = PR.component(1);
  std::vector<Elem> sigma = PR.components_table(
      {PR.component(0)->identity_table(),
       dynamic_cast<const MatrixRing&>(*M2).transpose_table(
           make_residue(2)->identity_table())});
  UnitaryRing ur(R, sigma, R->one(), LambdaPolicy::Min);
  Elem e = PR.encode({1, 8});  // (1, e11), full and symmetric
  TransferContext ctx = make_transfer(ur, e);
  CHECK(ctx.corner->size() == 6);

  Mat B(1, 1);
  B.at(0, 0) = PR.encode({1, 4});  // (1, e12)
  QuadraticSpace s = free_space(ur, B);
  CHECK(is_unimodular(s));
  QuadraticSpace t = transfer_space(ctx, s);
  CHECK(t.size() == 12);
  CHECK(is_unimodular(t));
  for (const Vec& x : s.module()->elems) {
    Vec xe = x;
    for (Elem& c : xe) c = ur.ring().mul(c, e);
    CHECK(from_corner(ctx, s, to_corner(ctx, s, x)) == xe);
    // transferred values agree with the parent values on x*e
    CHECK(t.qraw(to_corner(ctx, s, xe)) ==
          ctx.corner->project(s.qraw(xe)));
  }
}
