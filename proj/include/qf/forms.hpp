#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "qf/module.hpp"
#include "qf/unitary.hpp"

namespace qf {

/// A quadratic space over a unitary ring: a presented module together with
/// a normalized Gram matrix B (B = E^{sT} B E).  The attached data are
///   - the sesquilinear form  beta(x,y) = sum_{i,j} s(x_i) B_ij y_j,
///   - the hermitianized form h(x,y)    = beta(x,y) + s(beta(y,x)) u,
///   - the quadratic class    qhat(x)   = beta(x,x) + Lambda,
/// where s is the anti-automorphism of the unitary ring.  Copying the
/// handle is cheap; all derived data are cached on the shared core.
class QuadraticSpace {
 public:
  QuadraticSpace(UnitaryRing ur, ModulePtr module, Mat gram);

  const UnitaryRing& ur() const { return core_->ur; }
  const ModulePtr& module() const { return core_->module; }
  const Mat& presentation() const { return core_->module->E; }
  std::size_t rank() const { return core_->module->rank(); }
  std::size_t size() const { return core_->module->size(); }
  const Mat& gram() const { return core_->B; }

  const Mat& hgram() const;             // H = B + B^{sT} u
  const Mat& dual_presentation() const; // phi(E), phi(M)_ij = s^{-1}(M_ji)
  const Mat& lmat() const;              // phi(H); x |-> phi(H) x is L
  const ModulePtr& dual_module() const; // column space of phi(E)

  Elem beta(const Vec& x, const Vec& y) const;
  Elem h(const Vec& x, const Vec& y) const;
  Elem qraw(const Vec& x) const;  // beta(x,x)
  Elem qhat(const Vec& x) const;  // least representative of beta(x,x) + Lambda

  /// Least representative of a + Lambda.
  Elem lambda_rep(Elem a) const;

  bool same(const QuadraticSpace& other) const { return core_ == other.core_; }

 private:
  struct Core {
    Core(UnitaryRing u, ModulePtr m, Mat b)
        : ur(std::move(u)), module(std::move(m)), B(std::move(b)) {}
    UnitaryRing ur;
    ModulePtr module;
    Mat B;
    mutable std::once_flag aux_once;
    mutable Mat H, Echeck, L;
    mutable std::once_flag dual_once;
    mutable ModulePtr dual;
    mutable std::once_flag qhat_once;
    mutable std::vector<Elem> qhat_table;  // by module element index
    void ensure_aux() const;
  };
  std::shared_ptr<const Core> core_;
};

/// Pairing of a realized dual vector against a module vector:
/// <y, x> = sum_i s(y_i) x_i.
Elem dual_pairing(const UnitaryRing& ur, const Vec& y, const Vec& x);

/// The matrix carrying each module map P -> A^m to its realization: given
/// the images y_j of the generator columns of E, the map is x |-> M x with
/// M = [y_1 ... y_k] E.
Mat map_from_generator_images(const Ring& R, const Mat& E,
                              const std::vector<Vec>& images);

/// Whether two Gram matrices on the same presented module define the same
/// quadratic class (equal hermitianized forms and equal quadratic values);
/// decided entrywise on the difference.
bool classes_equal(const QuadraticSpace& a, const QuadraticSpace& b);

/// Same question decided by evaluating both forms on every element and
/// every pair; exists as an independent cross-check of classes_equal.
bool classes_equal_pointwise(const QuadraticSpace& a, const QuadraticSpace& b);

/// Whether x |-> phi(H) x is a bijection of the module onto its dual.
bool is_unimodular(const QuadraticSpace& s);

QuadraticSpace orthogonal_sum(const QuadraticSpace& a, const QuadraticSpace& b);

/// Validates that W presents a direct summand inside the module of s:
/// W idempotent, EW = WE = W.  Throws NotASummand.
void validate_summand(const QuadraticSpace& s, const Mat& W);

/// The space carried by the summand W with the restricted form.
QuadraticSpace restrict_to_summand(const QuadraticSpace& s, const Mat& W);

/// For a unimodular summand W, the projection of the whole module onto the
/// h-orthogonal complement of W (a normalized idempotent matrix).
Mat complement_projection(const QuadraticSpace& s, const Mat& W);

QuadraticSpace orthogonal_complement(const QuadraticSpace& s, const Mat& W);

/// Whether U (a matrix acting by x |-> Ux) is a bijective isometry from
/// src onto dst: it must map the module bijectively onto the module of dst,
/// preserve the hermitianized form, and preserve quadratic classes.
bool check_isometry(const QuadraticSpace& src, const QuadraticSpace& dst,
                    const Mat& U);

/// The hyperbolic space on a presented module: presentation diag(E, phi(E)),
/// Gram [[0,0],[E,0]] (dual generators pair against primal ones).
QuadraticSpace hyperbolic_space(const UnitaryRing& ur, const ModulePtr& m);

/// The same space seen over the conjugated unitary ring (sigma' = v s v^{-1},
/// u' = v s(v)^{-1} u, Lambda' = v Lambda): identical module, Gram v B.
QuadraticSpace conjugate_space(const QuadraticSpace& s,
                               const UnitaryRing& conjugated_ur, Elem v);

/// Entrywise projection of a vector into a subquotient ring.
Vec reduce_vec(const SubquotientRing& Q, const Vec& v);

/// The reduction of s modulo the radical: quotient_ur must be a unitary
/// structure on a SubquotientRing whose parent is the ring of s.  The
/// reduced space has presentation and Gram projected entrywise.
QuadraticSpace reduce_space(const QuadraticSpace& s,
                            const UnitaryRing& quotient_ur);

}  // namespace qf
