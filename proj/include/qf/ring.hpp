#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qf/errors.hpp"

namespace qf {

/// Elements of a finite ring are identified with indices 0 .. size()-1.
/// Composite rings order elements lexicographically by coordinate tuple,
/// with the FIRST coordinate most significant.
using Elem = std::uint32_t;

/// Sentinel for "no element" in lookup tables.
constexpr Elem kNoElem = 0xFFFFFFFFu;

/// Global enumeration limits.  Exceeding one raises OversizeRing or
/// EnumerationBoundExceeded instead of silently grinding.
struct Bounds {
  static constexpr std::size_t max_ring_size = std::size_t{1} << 16;
  static constexpr std::size_t max_unitary_ring_size = 4096;
  static constexpr std::size_t max_op_table_size = 1024;
  static constexpr std::size_t max_module_elements = std::size_t{1} << 20;
  static constexpr unsigned long long max_candidates = 100000000ULL;

  /// Enumeration cap actually enforced by the searches.  Starts at
  /// max_candidates; the command-line tool may lower it for one run.
  static unsigned long long candidate_cap;
};

/// Serializable description of a ring built from the supported constructors.
struct RingSpec {
  enum class Kind { Residue, Field, Matrix, Product, Opposite, Truncated };

  Kind kind = Kind::Residue;
  /// Residue: modulus n.  Field: characteristic p.  Matrix: dimension.
  /// Truncated: nilpotency exponent e (t^e = 0).
  std::uint32_t n = 0;
  /// Field only: extension degree k.
  std::uint32_t k = 1;
  /// Field only: non-leading coefficients c_0..c_{k-1} of the monic modulus
  /// x^k + c_{k-1} x^{k-1} + ... + c_0.  Empty means "least irreducible".
  std::vector<std::uint32_t> modulus;
  /// Matrix/Opposite/Truncated: exactly one child.  Product: two or more.
  std::vector<RingSpec> children;

  /// Canonical text form; equal dumps mean equal ring constructions.
  std::string dump() const;
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

/// A finite associative unital ring with elements 0 .. size()-1.
///
/// Operations are table-backed for small rings and computed recursively
/// otherwise.  Unit data (inverses, unit list) is computed lazily via the
/// power trick: in a finite ring a is invertible iff some power a^t equals 1,
/// and then a^{t-1} is the two-sided inverse.
class Ring {
 public:
  virtual ~Ring() = default;
  Ring(const Ring&) = delete;
  Ring& operator=(const Ring&) = delete;

  std::size_t size() const { return size_; }
  Elem zero() const { return zero_; }
  Elem one() const { return one_; }

  Elem add(Elem a, Elem b) const {
    check(a);
    check(b);
    return tabled_ ? add_table_[a * size_ + b] : add_impl(a, b);
  }
  Elem mul(Elem a, Elem b) const {
    check(a);
    check(b);
    return tabled_ ? mul_table_[a * size_ + b] : mul_impl(a, b);
  }
  Elem neg(Elem a) const {
    check(a);
    return neg_table_.empty() ? neg_impl(a) : neg_table_[a];
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  bool is_unit(Elem a) const;
  /// Two-sided inverse; throws NotAUnit if there is none.
  Elem inverse(Elem a) const;
  /// Sorted list of all units.
  const std::vector<Elem>& units() const;

  /// Human-readable construction label, e.g. "mat(2,gf(2^1;0))".
  virtual std::string describe() const = 0;
  /// Construction tree when this ring was built from one; null for derived
  /// rings (quotients, corners, factors).
  virtual const RingSpec* spec() const { return nullptr; }

  void check(Elem a) const {
    if (a >= size_) throw DomainViolation("element index out of range");
  }

  /// sigma table for the identity map (valid anti-automorphism iff the ring
  /// is commutative; validated by UnitaryRing).
  std::vector<Elem> identity_table() const;

 protected:
  Ring(std::size_t size, Elem zero, Elem one);

  virtual Elem add_impl(Elem a, Elem b) const = 0;
  virtual Elem mul_impl(Elem a, Elem b) const = 0;
  virtual Elem neg_impl(Elem a) const = 0;

  /// For constructors whose constants are only known after member setup.
  void set_constants(Elem zero, Elem one) {
    zero_ = zero;
    one_ = one;
  }

  /// Concrete constructors call this last, once *_impl is usable.
  void finalize_tables();

 private:
  void ensure_units() const;

  std::size_t size_;
  Elem zero_;
  Elem one_;
  bool tabled_ = false;
  std::vector<Elem> add_table_;
  std::vector<Elem> mul_table_;
  std::vector<Elem> neg_table_;

  mutable std::once_flag units_once_;
  mutable std::vector<Elem> inv_table_;  // kNoElem marks non-units
  mutable std::vector<Elem> units_;
};

/// Z/n with elements 0..n-1.
class ResidueRing final : public Ring {
 public:
  explicit ResidueRing(std::uint32_t n);
  std::uint32_t modulus() const { return n_; }
  std::string describe() const override;
  const RingSpec* spec() const override { return &spec_; }

 protected:
  Elem add_impl(Elem a, Elem b) const override;
  Elem mul_impl(Elem a, Elem b) const override;
  Elem neg_impl(Elem a) const override;

 private:
  std::uint32_t n_;
  RingSpec spec_;
};

/// GF(p^k) presented as Z/p[x] modulo a monic irreducible of degree k.
/// The element with coefficients (c_0,...,c_{k-1}), low degree first, has
/// index c_0 p^{k-1} + c_1 p^{k-2} + ... + c_{k-1}.
class FieldRing final : public Ring {
 public:
  /// Empty modulus selects the least irreducible in coefficient order.
  FieldRing(std::uint32_t p, std::uint32_t k,
            std::vector<std::uint32_t> modulus = {});

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return k_; }
  const std::vector<std::uint32_t>& modulus() const { return mod_; }

  std::vector<Elem> coeffs(Elem a) const;       // low degree first
  Elem from_coeffs(const std::vector<Elem>& c) const;

  /// sigma table for a -> a^(p^m).
  std::vector<Elem> frobenius_table(std::uint32_t m) const;

  std::string describe() const override;
  const RingSpec* spec() const override { return &spec_; }

 protected:
  Elem add_impl(Elem a, Elem b) const override;
  Elem mul_impl(Elem a, Elem b) const override;
  Elem neg_impl(Elem a) const override;

 private:
  std::uint32_t p_;
  std::uint32_t k_;
  std::vector<std::uint32_t> mod_;
  RingSpec spec_;
};

/// n-by-n matrices over an entry ring, row-major coordinates.
class MatrixRing final : public Ring {
 public:
  MatrixRing(std::uint32_t n, RingPtr entries);

  std::uint32_t dim() const { return n_; }
  const RingPtr& entry_ring() const { return entries_; }

  std::vector<Elem> decode(Elem a) const;  // n*n entries, row-major
  Elem encode(const std::vector<Elem>& entries) const;

  /// sigma table for M -> transpose of entrywise entry_sigma(M).
  std::vector<Elem> transpose_table(const std::vector<Elem>& entry_sigma) const;

  std::string describe() const override;
  const RingSpec* spec() const override { return &spec_; }

 protected:
  Elem add_impl(Elem a, Elem b) const override;
  Elem mul_impl(Elem a, Elem b) const override;
  Elem neg_impl(Elem a) const override;

 private:
  std::uint32_t n_;
  RingPtr entries_;
  RingSpec spec_;
};

/// Direct product of two or more rings, componentwise operations.
class ProductRing final : public Ring {
 public:
  explicit ProductRing(std::vector<RingPtr> components);

  std::size_t arity() const { return comps_.size(); }
  const RingPtr& component(std::size_t i) const { return comps_.at(i); }

  std::vector<Elem> decode(Elem a) const;
  Elem encode(const std::vector<Elem>& coords) const;

  /// sigma table applying one table per component.
  std::vector<Elem> components_table(
      const std::vector<std::vector<Elem>>& tables) const;
  /// sigma table swapping the two components of a binary product of rings
  /// with identical element sets (e.g. R x R or E x op(E)).
  std::vector<Elem> exchange_table() const;

  std::string describe() const override;
  const RingSpec* spec() const override { return &spec_; }

 protected:
  Elem add_impl(Elem a, Elem b) const override;
  Elem mul_impl(Elem a, Elem b) const override;
  Elem neg_impl(Elem a) const override;

 private:
  std::vector<RingPtr> comps_;
  std::vector<std::size_t> radix_;  // suffix products of component sizes
  RingSpec spec_;
};

/// Same elements as the base ring, multiplication reversed.
class OppositeRing final : public Ring {
 public:
  explicit OppositeRing(RingPtr base);
  const RingPtr& base() const { return base_; }
  std::string describe() const override;
  const RingSpec* spec() const override { return &spec_; }

 protected:
  Elem add_impl(Elem a, Elem b) const override;
  Elem mul_impl(Elem a, Elem b) const override;
  Elem neg_impl(Elem a) const override;

 private:
  RingPtr base_;
  RingSpec spec_;
};

/// R[t]/(t^e) with coefficient tuples (c_0,...,c_{e-1}), low degree first,
/// first coordinate most significant in the element index.
class TruncPolyRing final : public Ring {
 public:
  TruncPolyRing(RingPtr base, std::uint32_t e);

  const RingPtr& base() const { return base_; }
  std::uint32_t exponent() const { return e_; }

  std::vector<Elem> decode(Elem a) const;
  Elem encode(const std::vector<Elem>& coeffs) const;

  std::string describe() const override;
  const RingSpec* spec() const override { return &spec_; }

 protected:
  Elem add_impl(Elem a, Elem b) const override;
  Elem mul_impl(Elem a, Elem b) const override;
  Elem neg_impl(Elem a) const override;

 private:
  RingPtr base_;
  std::uint32_t e_;
  RingSpec spec_;
};

/// A ring derived from a parent: either a subring (corner eAe, factor Ac)
/// or a quotient presented by canonical coset representatives.  Elements
/// are re-indexed 0..size-1; `project` maps parent elements onto members.
class SubquotientRing final : public Ring {
 public:
  /// members: sorted distinct parent elements closed under the induced ops;
  /// project_parent: for each parent element its representative member, or
  /// kNoElem where projection is undefined (subring case, non-members);
  /// one_member: parent element acting as identity (must be a member).
  SubquotientRing(RingPtr parent, std::vector<Elem> members,
                  std::vector<Elem> project_parent, Elem one_member,
                  std::string label);

  const RingPtr& parent() const { return parent_; }
  Elem to_parent(Elem a) const;
  /// Local index of the representative of a parent element; throws
  /// DomainViolation if the element has none.
  Elem project(Elem parent_elem) const;
  bool projects(Elem parent_elem) const;
  const std::vector<Elem>& members() const { return members_; }

  std::string describe() const override;

 protected:
  Elem add_impl(Elem a, Elem b) const override;
  Elem mul_impl(Elem a, Elem b) const override;
  Elem neg_impl(Elem a) const override;

 private:
  RingPtr parent_;
  std::vector<Elem> members_;      // local -> parent
  std::vector<Elem> project_loc_;  // parent -> local (kNoElem if undefined)
  std::string label_;
};

RingPtr make_residue(std::uint32_t n);
RingPtr make_field(std::uint32_t p, std::uint32_t k,
                   std::vector<std::uint32_t> modulus = {});
RingPtr make_matrix(std::uint32_t n, RingPtr entries);
RingPtr make_product(std::vector<RingPtr> components);
RingPtr make_opposite(RingPtr base);
RingPtr make_truncated(RingPtr base, std::uint32_t e);

/// Builds a ring from a description tree (recursively).
RingPtr build_ring(const RingSpec& spec);

}  // namespace qf
