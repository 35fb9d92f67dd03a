#include "qf/transforms.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "qf/errors.hpp"

namespace qf {

TransferContext make_transfer(const UnitaryRing& ur, Elem e) {
  const Ring& R = ur.ring();
  R.check(e);
  if (R.mul(e, e) != e)
    throw NotSymmetricIdempotent("transfer element is not idempotent");
  if (ur.sigma(e) != e)
    throw NotSymmetricIdempotent("transfer idempotent is not sigma-invariant");

  // One witness pair (x, y) per attainable product value x e y, least pair
  // first so the construction is deterministic.
  std::map<Elem, std::pair<Elem, Elem>> products;
  for (Elem x = 0; x < R.size(); ++x) {
    Elem xe = R.mul(x, e);
    for (Elem y = 0; y < R.size(); ++y)
      products.emplace(R.mul(xe, y), std::make_pair(x, y));
  }

  // Shortest expression of 1 as a sum of such products, by breadth-first
  // search with parent pointers over the additive closure.
  std::vector<Elem> parent_sum(R.size(), kNoElem);
  std::vector<Elem> parent_prod(R.size(), kNoElem);
  std::deque<Elem> work;
  parent_sum[R.zero()] = R.zero();
  work.push_back(R.zero());
  while (!work.empty() && parent_sum[R.one()] == kNoElem) {
    Elem s = work.front();
    work.pop_front();
    for (const auto& entry : products) {
      Elem p = entry.first;
      Elem next = R.add(s, p);
      if (parent_sum[next] == kNoElem) {
        parent_sum[next] = s;
        parent_prod[next] = p;
        work.push_back(next);
      }
    }
  }
  if (parent_sum[R.one()] == kNoElem)
    throw NotFullIdempotent("idempotent is not full: 1 is not a sum of x*e*y");

  TransferContext ctx{ur, e, nullptr, ur, {}, {}};
  for (Elem s = R.one(); s != R.zero(); s = parent_sum[s]) {
    const auto& [x, y] = products.at(parent_prod[s]);
    ctx.xs.push_back(x);
    ctx.ys.push_back(y);
  }

  // Corner subring eAe.
  std::vector<Elem> members;
  for (Elem a = 0; a < R.size(); ++a)
    members.push_back(R.mul(R.mul(e, a), e));
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::vector<Elem> project(R.size(), kNoElem);
  for (Elem m : members) project[m] = m;
  ctx.corner = std::make_shared<const SubquotientRing>(
      ur.ring_ptr(), std::move(members), std::move(project), e,
      "corner of " + R.describe());

  const SubquotientRing& C = *ctx.corner;
  std::vector<Elem> corner_sigma(C.size());
  for (Elem c = 0; c < C.size(); ++c)
    corner_sigma[c] = C.project(ur.sigma(C.to_parent(c)));
  std::vector<Elem> corner_lambda;
  for (Elem l : ur.lambda().members())
    corner_lambda.push_back(C.project(R.mul(R.mul(e, l), e)));
  std::sort(corner_lambda.begin(), corner_lambda.end());
  corner_lambda.erase(
      std::unique(corner_lambda.begin(), corner_lambda.end()),
      corner_lambda.end());
  ctx.corner_ur =
      UnitaryRing(ctx.corner, std::move(corner_sigma),
                  C.project(R.mul(ur.u(), e)), LambdaPolicy::Explicit,
                  std::move(corner_lambda));
  return ctx;
}

namespace {

// corner-local value of e * ys[s] * M_ij * xs[t] * e
Mat functor_image(const TransferContext& ctx, const Mat& M) {
  const Ring& R = ctx.parent_ur.ring();
  const SubquotientRing& C = *ctx.corner;
  const std::size_t T = ctx.terms();
  Mat out(M.rows * T, M.cols * T);
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t s = 0; s < T; ++s)
      for (std::size_t j = 0; j < M.cols; ++j)
        for (std::size_t t = 0; t < T; ++t) {
          Elem v = R.mul(R.mul(ctx.e, ctx.ys[s]),
                         R.mul(M.at(i, j), R.mul(ctx.xs[t], ctx.e)));
          out.at(i * T + s, j * T + t) = C.project(v);
        }
  return out;
}

}  // namespace

Mat transfer_matrix(const TransferContext& ctx, const Mat& M) {
  return functor_image(ctx, M);
}

QuadraticSpace transfer_space(const TransferContext& ctx,
                              const QuadraticSpace& s) {
  if (!ctx.parent_ur.same(s.ur()))
    throw RingMismatch("space does not live over the transfer's unitary ring");
  const Ring& R = ctx.parent_ur.ring();
  const SubquotientRing& C = *ctx.corner;
  const std::size_t T = ctx.terms();
  Mat Ehat = functor_image(ctx, s.presentation());
  const Mat& B = s.gram();
  Mat Bhat(B.rows * T, B.cols * T);
  for (std::size_t i = 0; i < B.rows; ++i)
    for (std::size_t s2 = 0; s2 < T; ++s2)
      for (std::size_t j = 0; j < B.cols; ++j)
        for (std::size_t t = 0; t < T; ++t) {
          Elem v = R.mul(
              R.mul(ctx.e, ctx.parent_ur.sigma(ctx.xs[s2])),
              R.mul(B.at(i, j), R.mul(ctx.xs[t], ctx.e)));
          Bhat.at(i * T + s2, j * T + t) = C.project(v);
        }
  return QuadraticSpace(ctx.corner_ur, make_module(ctx.corner, std::move(Ehat)),
                        std::move(Bhat));
}

Vec to_corner(const TransferContext& ctx, const QuadraticSpace& s,
              const Vec& x) {
  const Ring& R = ctx.parent_ur.ring();
  const SubquotientRing& C = *ctx.corner;
  const std::size_t T = ctx.terms();
  if (x.size() != s.rank()) throw ShapeMismatch("vector has wrong length");
  Vec out(s.rank() * T);
  for (std::size_t i = 0; i < s.rank(); ++i)
    for (std::size_t t = 0; t < T; ++t)
      out[i * T + t] =
          C.project(R.mul(R.mul(ctx.e, ctx.ys[t]), R.mul(x[i], ctx.e)));
  return out;
}

Vec from_corner(const TransferContext& ctx, const QuadraticSpace& s,
                const Vec& v) {
  const Ring& R = ctx.parent_ur.ring();
  const SubquotientRing& C = *ctx.corner;
  const std::size_t T = ctx.terms();
  if (v.size() != s.rank() * T) throw ShapeMismatch("vector has wrong length");
  Vec out(s.rank(), R.zero());
  for (std::size_t i = 0; i < s.rank(); ++i)
    for (std::size_t t = 0; t < T; ++t) {
      Elem term = R.mul(R.mul(ctx.xs[t], ctx.e), C.to_parent(v[i * T + t]));
      out[i] = R.add(out[i], term);
    }
  return out;
}

Mat untransfer_matrix(const TransferContext& ctx, const QuadraticSpace& s,
                      const Mat& Uhat) {
  const Ring& R = ctx.parent_ur.ring();
  const std::size_t T = ctx.terms();
  if (Uhat.rows != s.rank() * T || Uhat.cols != s.rank() * T)
    throw ShapeMismatch("corner matrix has wrong shape");
  const Mat& E = s.presentation();
  // U x = sum_t Uhat(x xs[t] e) * e ys[t], evaluated on the generators.
  std::vector<Vec> images;
  images.reserve(E.cols);
  for (std::size_t j = 0; j < E.cols; ++j) {
    Vec img = vec_zero(R, E.rows);
    Vec g = E.col(j);
    for (std::size_t t = 0; t < T; ++t) {
      Vec slice(g.size());
      for (std::size_t i = 0; i < g.size(); ++i)
        slice[i] = R.mul(g[i], R.mul(ctx.xs[t], ctx.e));
      Vec mapped = from_corner(
          ctx, s, mat_vec(*ctx.corner, Uhat, to_corner(ctx, s, slice)));
      img = vec_add(R, img,
                    vec_scale_right(R, mapped, R.mul(ctx.e, ctx.ys[t])));
    }
    images.push_back(std::move(img));
  }
  return map_from_generator_images(R, E, images);
}

}  // namespace qf
