#pragma once

#include <memory>
#include <vector>

#include "qf/forms.hpp"

namespace qf {

/// Everything needed to move quadratic spaces between a unitary ring and
/// the corner eAe of a full symmetric idempotent e (e^2 = e, sigma(e) = e,
/// AeA = A): the corner with its inherited unitary structure
/// (sigma restricted, u_e = ue, Lambda_e = e Lambda e) and a fixed witness
/// 1 = sum_t xs[t] * e * ys[t] of fullness.
///
/// A space (P, B) with k generators moves to the corner as the module
/// Pe of vectors with coordinates in Ae, re-coordinatized over eAe by
/// k*T-long vectors v with v[i*T + t] = e * ys[t] * w_i * e.
struct TransferContext {
  UnitaryRing parent_ur;
  Elem e = kNoElem;
  std::shared_ptr<const SubquotientRing> corner;
  UnitaryRing corner_ur;
  std::vector<Elem> xs, ys;

  std::size_t terms() const { return xs.size(); }
};

/// Validates e and extracts a shortest fullness witness (breadth-first over
/// sums of products x e y).  Throws NotSymmetricIdempotent if e^2 != e or
/// sigma(e) != e, NotFullIdempotent if 1 is not a sum of products x e y.
TransferContext make_transfer(const UnitaryRing& ur, Elem e);

/// The corner-side space carried by Pe:
///   presentation E'[(i,s),(j,t)] = e ys[s] E_ij xs[t] e,
///   Gram         B'[(i,s),(j,t)] = e sigma(xs[s]) B_ij xs[t] e.
QuadraticSpace transfer_space(const TransferContext& ctx,
                              const QuadraticSpace& s);

/// Corner coordinates of x * e (for x in the module, x*e coordinatewise).
/// Restricted to vectors with coordinates in Ae this is the module
/// bijection onto the transferred module.
Vec to_corner(const TransferContext& ctx, const QuadraticSpace& s,
              const Vec& x);

/// The vector in A^k with coordinates w_i = sum_t xs[t] * e * v[(i,t)].
Vec from_corner(const TransferContext& ctx, const QuadraticSpace& s,
                const Vec& v);

/// The multiplicative matrix functor
///   F(M)[(i,s),(j,t)] = e ys[s] M_ij xs[t] e   (corner-local entries);
/// it carries isometries of s to isometries of transfer_space(ctx, s).
Mat transfer_matrix(const TransferContext& ctx, const Mat& M);

/// The unique parent-side module map restricting to the corner-side map
/// Uhat, as a presentation-normalized matrix: carries isometries of the
/// transferred space back to isometries of s.
Mat untransfer_matrix(const TransferContext& ctx, const QuadraticSpace& s,
                      const Mat& Uhat);

}  // namespace qf
