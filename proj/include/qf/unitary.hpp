#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qf/ring.hpp"

namespace qf {

class Structure;

/// A form parameter: an additive subgroup L with
///   { a - sigma(a)u } = L_min  <=  L  <=  L_max = { a : sigma(a)u = -a },
/// closed under a |-> sigma(x) a x for every ring element x.
class LambdaSet {
 public:
  LambdaSet() = default;
  LambdaSet(std::size_t ring_size, std::vector<Elem> members);

  bool contains(Elem a) const { return a < mask_.size() && mask_[a]; }
  const std::vector<Elem>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<Elem> members_;  // sorted, distinct
  std::vector<char> mask_;
};

enum class LambdaPolicy { Min, Max, Generated, Explicit };

/// The set { a - sigma(a)u : a in R }, sorted.
std::vector<Elem> lambda_min_set(const Ring& R, const std::vector<Elem>& sigma,
                                 Elem u);
/// The set { a : sigma(a)u = -a }, sorted.
std::vector<Elem> lambda_max_set(const Ring& R, const std::vector<Elem>& sigma,
                                 Elem u);
/// Closure of the seed under addition (an additive subgroup once 0 is added).
std::vector<Elem> additive_closure(const Ring& R,
                                   const std::vector<Elem>& seed);

/// A finite ring equipped with an anti-automorphism sigma, a unit u with
/// sigma(u)u = 1 and sigma(sigma(a)) = u a u^{-1}, and a form parameter.
/// Copyable handle; two handles describe the same unitary ring only if
/// they share state (pointer identity), which `same` tests.
class UnitaryRing {
 public:
  UnitaryRing(RingPtr ring, std::vector<Elem> sigma_table, Elem u,
              LambdaPolicy policy, std::vector<Elem> lambda_generators = {});

  const Ring& ring() const { return *core_->ring; }
  const RingPtr& ring_ptr() const { return core_->ring; }

  Elem sigma(Elem a) const { return core_->sigma.at(a); }
  Elem sigma_inv(Elem a) const { return core_->sigma_inv.at(a); }
  const std::vector<Elem>& sigma_table() const { return core_->sigma; }
  const std::vector<Elem>& sigma_inv_table() const { return core_->sigma_inv; }

  Elem u() const { return core_->u; }
  Elem u_inv() const { return core_->u_inv; }

  const LambdaSet& lambda() const { return core_->lambda; }
  LambdaPolicy lambda_policy() const { return core_->policy; }
  const std::vector<Elem>& lambda_generators() const {
    return core_->lambda_gens;
  }

  /// e with e^2 = e and sigma(e) = e.
  bool is_symmetric_idempotent(Elem e) const;

  /// Unit-group, radical and semisimple-factor data; computed on first use.
  const Structure& structure() const;

  bool same(const UnitaryRing& other) const { return core_ == other.core_; }
  std::string describe() const;

 private:
  struct Core {
    RingPtr ring;
    std::vector<Elem> sigma;
    std::vector<Elem> sigma_inv;
    Elem u = 0;
    Elem u_inv = 0;
    LambdaSet lambda;
    LambdaPolicy policy = LambdaPolicy::Min;
    std::vector<Elem> lambda_gens;
    mutable std::once_flag structure_once;
    mutable std::shared_ptr<const Structure> structure;
  };
  std::shared_ptr<const Core> core_;
};

/// One violated anti-structure axiom together with a witness element.
struct AntiAxiomViolation {
  std::string axiom;
  Elem witness = 0;
};

/// Checks that sigma is an additive, product-reversing permutation fixing 1,
/// that u is a unit with sigma(u)u = 1, and that sigma^2 is conjugation by
/// u.  Returns one entry per violated axiom (empty iff the structure is
/// valid); throws ShapeMismatch only when the table does not cover the ring.
std::vector<AntiAxiomViolation> validate_anti_structure(
    const Ring& R, const std::vector<Elem>& sigma, Elem u);

/// Checks the three form-parameter conditions; throws InvalidUnitaryRing
/// naming the first violated one.
void validate_form_parameter(const Ring& R, const std::vector<Elem>& sigma,
                             Elem u, const std::vector<Elem>& members);

/// The unitary ring (A, sigma', u', vL) with sigma'(a) = v sigma(a) v^{-1}
/// and u' = v sigma(v)^{-1} u, for a unit v.  Quadratic structures transport
/// along it with identical underlying modules and isometries.
UnitaryRing conjugate_unitary(const UnitaryRing& ur, Elem v);

}  // namespace qf
