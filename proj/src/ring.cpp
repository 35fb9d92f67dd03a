#include "qf/ring.hpp"

#include <algorithm>
#include <sstream>

namespace qf {

unsigned long long Bounds::candidate_cap = Bounds::max_candidates;

namespace {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::size_t checked_power(std::size_t base, std::size_t exp) {
  unsigned long long v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    v *= base;
    if (v > Bounds::max_ring_size)
      throw OversizeRing("ring would exceed " +
                         std::to_string(Bounds::max_ring_size) + " elements");
  }
  return static_cast<std::size_t>(v);
}

std::size_t checked_product(const std::vector<std::size_t>& sizes) {
  unsigned long long v = 1;
  for (std::size_t s : sizes) {
    v *= s;
    if (v > Bounds::max_ring_size)
      throw OversizeRing("ring would exceed " +
                         std::to_string(Bounds::max_ring_size) + " elements");
  }
  return static_cast<std::size_t>(v);
}

// Polynomials over Z/p, coefficients low degree first, no trailing zeros.
using Poly = std::vector<std::uint32_t>;

Poly poly_trim(Poly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

// Remainder of f modulo monic g (g nonconstant).
Poly poly_rem(Poly f, const Poly& g, std::uint32_t p) {
  f = poly_trim(std::move(f));
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg) {
    std::uint32_t lead = f.back();
    std::size_t shift = f.size() - 1 - dg;
    for (std::size_t j = 0; j < g.size(); ++j) {
      std::uint64_t sub = static_cast<std::uint64_t>(lead) * g[j] % p;
      f[shift + j] = static_cast<std::uint32_t>((f[shift + j] + p - sub) % p);
    }
    f = poly_trim(std::move(f));  // leading coefficient is now zero
  }
  return f;
}

// Monic polynomial with given non-leading coefficients.
Poly monic_of(const std::vector<std::uint32_t>& tail) {
  Poly f(tail.begin(), tail.end());
  f.push_back(1);
  return f;
}

bool poly_irreducible(const std::vector<std::uint32_t>& tail,
                      std::uint32_t p) {
  const std::uint32_t k = static_cast<std::uint32_t>(tail.size());
  if (k == 1) return true;  // monic degree-1 polynomials are irreducible
  Poly f = monic_of(tail);
  // trial division by every monic polynomial of degree 1..k/2
  for (std::uint32_t d = 1; 2 * d <= k; ++d) {
    std::size_t total = 1;
    for (std::uint32_t i = 0; i < d; ++i) total *= p;
    for (std::size_t t = 0; t < total; ++t) {
      std::vector<std::uint32_t> div_tail(d);
      std::size_t v = t;
      for (std::uint32_t i = 0; i < d; ++i) {
        div_tail[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      if (poly_rem(f, monic_of(div_tail), p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> least_irreducible_tail(std::uint32_t p,
                                                  std::uint32_t k) {
  // scan coefficient tuples (c_0,...,c_{k-1}) with c_0 most significant
  std::size_t total = 1;
  for (std::uint32_t i = 0; i < k; ++i) total *= p;
  for (std::size_t t = 0; t < total; ++t) {
    std::vector<std::uint32_t> tail(k);
    std::size_t v = t;
    for (std::uint32_t i = k; i-- > 0;) {
      tail[i] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    if (poly_irreducible(tail, p)) return tail;
  }
  throw MalformedSpec("no irreducible modulus found");  // unreachable
}

}  // namespace

std::string RingSpec::dump() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Residue:
      out << "z/" << n;
      break;
    case Kind::Field: {
      out << "gf(" << n << "^" << k << ";";
      for (std::size_t i = 0; i < modulus.size(); ++i)
        out << (i ? "," : "") << modulus[i];
      out << ")";
      break;
    }
    case Kind::Matrix:
      out << "mat(" << n << "," << children.at(0).dump() << ")";
      break;
    case Kind::Product: {
      out << "prod(";
      for (std::size_t i = 0; i < children.size(); ++i)
        out << (i ? "," : "") << children[i].dump();
      out << ")";
      break;
    }
    case Kind::Opposite:
      out << "op(" << children.at(0).dump() << ")";
      break;
    case Kind::Truncated:
      out << "trunc(" << children.at(0).dump() << "," << n << ")";
      break;
  }
  return out.str();
}

Ring::Ring(std::size_t size, Elem zero, Elem one)
    : size_(size), zero_(zero), one_(one) {
  if (size == 0) throw MalformedSpec("empty ring");
  if (size > Bounds::max_ring_size)
    throw OversizeRing("ring has " + std::to_string(size) + " elements");
}

void Ring::finalize_tables() {
  neg_table_.resize(size_);
  for (Elem a = 0; a < size_; ++a) neg_table_[a] = neg_impl(a);
  if (size_ <= Bounds::max_op_table_size) {
    add_table_.resize(size_ * size_);
    mul_table_.resize(size_ * size_);
    for (Elem a = 0; a < size_; ++a)
      for (Elem b = 0; b < size_; ++b) {
        add_table_[a * size_ + b] = add_impl(a, b);
        mul_table_[a * size_ + b] = mul_impl(a, b);
      }
    tabled_ = true;
  }
}

void Ring::ensure_units() const {
  std::call_once(units_once_, [this] {
    inv_table_.assign(size_, kNoElem);
    for (Elem a = 0; a < size_; ++a) {
      // power trick: walk a, a^2, ... until hitting 1 or exhausting size_
      Elem prev = one_;
      Elem x = a;
      for (std::size_t step = 0; step < size_; ++step) {
        if (x == one_) {
          inv_table_[a] = prev;
          break;
        }
        prev = x;
        x = mul(x, a);
      }
    }
    for (Elem a = 0; a < size_; ++a)
      if (inv_table_[a] != kNoElem) units_.push_back(a);
  });
}

bool Ring::is_unit(Elem a) const {
  check(a);
  ensure_units();
  return inv_table_[a] != kNoElem;
}

Elem Ring::inverse(Elem a) const {
  check(a);
  ensure_units();
  if (inv_table_[a] == kNoElem)
    throw NotAUnit("element " + std::to_string(a) + " of " + describe());
  return inv_table_[a];
}

const std::vector<Elem>& Ring::units() const {
  ensure_units();
  return units_;
}

std::vector<Elem> Ring::identity_table() const {
  std::vector<Elem> t(size());
  for (Elem a = 0; a < size(); ++a) t[a] = a;
  return t;
}

// ---------------------------------------------------------------- Residue

ResidueRing::ResidueRing(std::uint32_t n) : Ring(n, 0, n > 1 ? 1 : 0), n_(n) {
  if (n < 2) throw MalformedSpec("residue modulus must be at least 2");
  spec_.kind = RingSpec::Kind::Residue;
  spec_.n = n;
  finalize_tables();
}

Elem ResidueRing::add_impl(Elem a, Elem b) const {
  return (a + b) % n_;
}
Elem ResidueRing::mul_impl(Elem a, Elem b) const {
  return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % n_);
}
Elem ResidueRing::neg_impl(Elem a) const {
  return (n_ - a) % n_;
}
std::string ResidueRing::describe() const {
  return spec_.dump();
}

// ------------------------------------------------------------------ Field

FieldRing::FieldRing(std::uint32_t p, std::uint32_t k,
                     std::vector<std::uint32_t> modulus)
    : Ring(checked_power(p, k), 0,
           /*one=*/[&] {
             // one = coefficients (1,0,...,0) -> index p^{k-1}
             std::size_t v = 1;
             for (std::uint32_t i = 1; i < k; ++i) v *= p;
             return static_cast<Elem>(v);
           }()),
      p_(p),
      k_(k) {
  if (!is_prime(p)) throw MalformedSpec("field characteristic must be prime");
  if (k < 1) throw MalformedSpec("field degree must be positive");
  if (modulus.empty()) {
    mod_ = least_irreducible_tail(p, k);
  } else {
    if (modulus.size() != k)
      throw MalformedSpec("field modulus needs exactly degree coefficients");
    for (std::uint32_t c : modulus)
      if (c >= p) throw MalformedSpec("field modulus coefficient out of range");
    if (!poly_irreducible(modulus, p))
      throw MalformedSpec("field modulus is reducible");
    mod_ = std::move(modulus);
  }
  spec_.kind = RingSpec::Kind::Field;
  spec_.n = p;
  spec_.k = k;
  spec_.modulus = mod_;
  finalize_tables();
}

std::vector<Elem> FieldRing::coeffs(Elem a) const {
  check(a);
  std::vector<Elem> c(k_);
  // first coordinate (c_0) most significant
  for (std::uint32_t i = k_; i-- > 0;) {
    c[i] = a % p_;
    a /= p_;
  }
  return c;
}

Elem FieldRing::from_coeffs(const std::vector<Elem>& c) const {
  if (c.size() != k_) throw ShapeMismatch("wrong coefficient count");
  Elem v = 0;
  for (std::uint32_t i = 0; i < k_; ++i) {
    if (c[i] >= p_) throw DomainViolation("coefficient out of range");
    v = v * p_ + c[i];
  }
  return v;
}

Elem FieldRing::add_impl(Elem a, Elem b) const {
  std::vector<Elem> x = coeffs(a), y = coeffs(b);
  for (std::uint32_t i = 0; i < k_; ++i) x[i] = (x[i] + y[i]) % p_;
  return from_coeffs(x);
}

Elem FieldRing::mul_impl(Elem a, Elem b) const {
  std::vector<Elem> x = coeffs(a), y = coeffs(b);
  std::vector<std::uint64_t> buf(2 * k_ - 1, 0);
  for (std::uint32_t i = 0; i < k_; ++i)
    for (std::uint32_t j = 0; j < k_; ++j)
      buf[i + j] += static_cast<std::uint64_t>(x[i]) * y[j];
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] %= p_;
  // reduce x^d = x^{d-k} * x^k = -x^{d-k} * sum_j mod_[j] x^j, top down
  for (std::size_t d = buf.size(); d-- > k_;) {
    std::uint64_t t = buf[d] % p_;
    if (t == 0) continue;
    buf[d] = 0;
    for (std::uint32_t j = 0; j < k_; ++j)
      buf[d - k_ + j] = (buf[d - k_ + j] + (p_ - t * mod_[j] % p_)) % p_;
  }
  std::vector<Elem> out(k_);
  for (std::uint32_t i = 0; i < k_; ++i) out[i] = static_cast<Elem>(buf[i]);
  return from_coeffs(out);
}

Elem FieldRing::neg_impl(Elem a) const {
  std::vector<Elem> x = coeffs(a);
  for (std::uint32_t i = 0; i < k_; ++i) x[i] = (p_ - x[i]) % p_;
  return from_coeffs(x);
}

std::vector<Elem> FieldRing::frobenius_table(std::uint32_t m) const {
  // exponent p^m; reduce m modulo k since a^(p^k) = a
  std::uint64_t e = 1;
  for (std::uint32_t i = 0; i < m % k_; ++i) e *= p_;
  std::vector<Elem> t(size());
  for (Elem a = 0; a < size(); ++a) {
    Elem acc = one();
    Elem base = a;
    for (std::uint64_t exp = e; exp; exp >>= 1) {
      if (exp & 1) acc = mul(acc, base);
      base = mul(base, base);
    }
    t[a] = acc;
  }
  return t;
}

std::string FieldRing::describe() const {
  return spec_.dump();
}

// ----------------------------------------------------------------- Matrix

MatrixRing::MatrixRing(std::uint32_t n, RingPtr entries)
    : Ring(checked_power(entries ? entries->size() : 1,
                         static_cast<std::size_t>(n) * n),
           0, 0),
      n_(n),
      entries_(std::move(entries)) {
  if (!entries_) throw MalformedSpec("matrix needs an entry ring");
  if (n < 1) throw MalformedSpec("matrix dimension must be positive");
  std::vector<Elem> id(static_cast<std::size_t>(n_) * n_, entries_->zero());
  for (std::uint32_t i = 0; i < n_; ++i) id[i * n_ + i] = entries_->one();
  set_constants(encode(std::vector<Elem>(id.size(), entries_->zero())),
                encode(id));
  if (!entries_->spec())
    throw MalformedSpec("matrix entry ring must be a constructed ring");
  spec_.kind = RingSpec::Kind::Matrix;
  spec_.n = n;
  spec_.children.push_back(*entries_->spec());
  finalize_tables();
}

std::vector<Elem> MatrixRing::decode(Elem a) const {
  check(a);
  const std::size_t cells = static_cast<std::size_t>(n_) * n_;
  const std::size_t s = entries_->size();
  std::vector<Elem> out(cells);
  for (std::size_t i = cells; i-- > 0;) {
    out[i] = static_cast<Elem>(a % s);
    a = static_cast<Elem>(a / s);
  }
  return out;
}

Elem MatrixRing::encode(const std::vector<Elem>& entries) const {
  const std::size_t cells = static_cast<std::size_t>(n_) * n_;
  if (entries.size() != cells) throw ShapeMismatch("wrong entry count");
  const std::size_t s = entries_->size();
  std::size_t v = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    entries_->check(entries[i]);
    v = v * s + entries[i];
  }
  return static_cast<Elem>(v);
}

Elem MatrixRing::add_impl(Elem a, Elem b) const {
  std::vector<Elem> x = decode(a), y = decode(b);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = entries_->add(x[i], y[i]);
  return encode(x);
}

Elem MatrixRing::mul_impl(Elem a, Elem b) const {
  std::vector<Elem> x = decode(a), y = decode(b);
  std::vector<Elem> out(x.size(), entries_->zero());
  for (std::uint32_t i = 0; i < n_; ++i)
    for (std::uint32_t l = 0; l < n_; ++l) {
      Elem xi = x[i * n_ + l];
      if (xi == entries_->zero()) continue;
      for (std::uint32_t j = 0; j < n_; ++j)
        out[i * n_ + j] = entries_->add(out[i * n_ + j],
                                        entries_->mul(xi, y[l * n_ + j]));
    }
  return encode(out);
}

Elem MatrixRing::neg_impl(Elem a) const {
  std::vector<Elem> x = decode(a);
  for (Elem& e : x) e = entries_->neg(e);
  return encode(x);
}

std::vector<Elem> MatrixRing::transpose_table(
    const std::vector<Elem>& entry_sigma) const {
  if (entry_sigma.size() != entries_->size())
    throw ShapeMismatch("entry sigma table has wrong size");
  std::vector<Elem> t(size());
  for (Elem a = 0; a < size(); ++a) {
    std::vector<Elem> x = decode(a), out(x.size());
    for (std::uint32_t i = 0; i < n_; ++i)
      for (std::uint32_t j = 0; j < n_; ++j)
        out[j * n_ + i] = entry_sigma[x[i * n_ + j]];
    t[a] = encode(out);
  }
  return t;
}

std::string MatrixRing::describe() const {
  return spec_.dump();
}

// ---------------------------------------------------------------- Product

ProductRing::ProductRing(std::vector<RingPtr> components)
    : Ring(checked_product([&] {
             std::vector<std::size_t> s;
             for (const auto& c : components) s.push_back(c ? c->size() : 1);
             return s;
           }()),
           0, 0),
      comps_(std::move(components)) {
  if (comps_.size() < 2)
    throw MalformedSpec("product needs at least two components");
  for (const auto& c : comps_)
    if (!c) throw MalformedSpec("product component is missing");
  radix_.assign(comps_.size() + 1, 1);
  for (std::size_t i = comps_.size(); i-- > 0;)
    radix_[i] = radix_[i + 1] * comps_[i]->size();
  std::vector<Elem> zeros, ones;
  spec_.kind = RingSpec::Kind::Product;
  for (const auto& c : comps_) {
    zeros.push_back(c->zero());
    ones.push_back(c->one());
    if (!c->spec())
      throw MalformedSpec("product component must be a constructed ring");
    spec_.children.push_back(*c->spec());
  }
  set_constants(encode(zeros), encode(ones));
  finalize_tables();
}

std::vector<Elem> ProductRing::decode(Elem a) const {
  check(a);
  std::vector<Elem> out(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    out[i] = static_cast<Elem>(a / radix_[i + 1]);
    a = static_cast<Elem>(a % radix_[i + 1]);
  }
  return out;
}

Elem ProductRing::encode(const std::vector<Elem>& coords) const {
  if (coords.size() != comps_.size())
    throw ShapeMismatch("wrong coordinate count");
  std::size_t v = 0;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    comps_[i]->check(coords[i]);
    v += static_cast<std::size_t>(coords[i]) * radix_[i + 1];
  }
  return static_cast<Elem>(v);
}

Elem ProductRing::add_impl(Elem a, Elem b) const {
  std::vector<Elem> x = decode(a), y = decode(b);
  for (std::size_t i = 0; i < comps_.size(); ++i)
    x[i] = comps_[i]->add(x[i], y[i]);
  return encode(x);
}

Elem ProductRing::mul_impl(Elem a, Elem b) const {
  std::vector<Elem> x = decode(a), y = decode(b);
  for (std::size_t i = 0; i < comps_.size(); ++i)
    x[i] = comps_[i]->mul(x[i], y[i]);
  return encode(x);
}

Elem ProductRing::neg_impl(Elem a) const {
  std::vector<Elem> x = decode(a);
  for (std::size_t i = 0; i < comps_.size(); ++i) x[i] = comps_[i]->neg(x[i]);
  return encode(x);
}

std::vector<Elem> ProductRing::components_table(
    const std::vector<std::vector<Elem>>& tables) const {
  if (tables.size() != comps_.size())
    throw ShapeMismatch("need one table per component");
  for (std::size_t i = 0; i < comps_.size(); ++i)
    if (tables[i].size() != comps_[i]->size())
      throw ShapeMismatch("component table has wrong size");
  std::vector<Elem> t(size());
  for (Elem a = 0; a < size(); ++a) {
    std::vector<Elem> x = decode(a);
    for (std::size_t i = 0; i < comps_.size(); ++i) x[i] = tables[i][x[i]];
    t[a] = encode(x);
  }
  return t;
}

std::vector<Elem> ProductRing::exchange_table() const {
  if (comps_.size() != 2 || comps_[0]->size() != comps_[1]->size())
    throw MalformedSpec("exchange needs a binary product of equal sizes");
  std::vector<Elem> t(size());
  for (Elem a = 0; a < size(); ++a) {
    std::vector<Elem> x = decode(a);
    std::swap(x[0], x[1]);
    t[a] = encode(x);
  }
  return t;
}

std::string ProductRing::describe() const {
  return spec_.dump();
}

// --------------------------------------------------------------- Opposite

OppositeRing::OppositeRing(RingPtr base)
    : Ring(base ? base->size() : 1, base ? base->zero() : 0,
           base ? base->one() : 0),
      base_(std::move(base)) {
  if (!base_) throw MalformedSpec("opposite needs a base ring");
  if (!base_->spec())
    throw MalformedSpec("opposite base must be a constructed ring");
  spec_.kind = RingSpec::Kind::Opposite;
  spec_.children.push_back(*base_->spec());
  finalize_tables();
}

Elem OppositeRing::add_impl(Elem a, Elem b) const {
  return base_->add(a, b);
}
Elem OppositeRing::mul_impl(Elem a, Elem b) const {
  return base_->mul(b, a);
}
Elem OppositeRing::neg_impl(Elem a) const {
  return base_->neg(a);
}
std::string OppositeRing::describe() const {
  return spec_.dump();
}

// -------------------------------------------------------------- Truncated

TruncPolyRing::TruncPolyRing(RingPtr base, std::uint32_t e)
    : Ring(checked_power(base ? base->size() : 1, e), 0, 0),
      base_(std::move(base)),
      e_(e) {
  if (!base_) throw MalformedSpec("truncation needs a base ring");
  if (e < 1) throw MalformedSpec("truncation exponent must be positive");
  std::vector<Elem> zero_coeffs(e_, base_->zero());
  std::vector<Elem> one_coeffs(e_, base_->zero());
  one_coeffs[0] = base_->one();
  set_constants(encode(zero_coeffs), encode(one_coeffs));
  if (!base_->spec())
    throw MalformedSpec("truncated base must be a constructed ring");
  spec_.kind = RingSpec::Kind::Truncated;
  spec_.n = e;
  spec_.children.push_back(*base_->spec());
  finalize_tables();
}

std::vector<Elem> TruncPolyRing::decode(Elem a) const {
  check(a);
  const std::size_t s = base_->size();
  std::vector<Elem> out(e_);
  for (std::uint32_t i = e_; i-- > 0;) {
    out[i] = static_cast<Elem>(a % s);
    a = static_cast<Elem>(a / s);
  }
  return out;
}

Elem TruncPolyRing::encode(const std::vector<Elem>& coeffs) const {
  if (coeffs.size() != e_) throw ShapeMismatch("wrong coefficient count");
  const std::size_t s = base_->size();
  std::size_t v = 0;
  for (std::uint32_t i = 0; i < e_; ++i) {
    base_->check(coeffs[i]);
    v = v * s + coeffs[i];
  }
  return static_cast<Elem>(v);
}

Elem TruncPolyRing::add_impl(Elem a, Elem b) const {
  std::vector<Elem> x = decode(a), y = decode(b);
  for (std::uint32_t i = 0; i < e_; ++i) x[i] = base_->add(x[i], y[i]);
  return encode(x);
}

Elem TruncPolyRing::mul_impl(Elem a, Elem b) const {
  std::vector<Elem> x = decode(a), y = decode(b);
  std::vector<Elem> out(e_, base_->zero());
  for (std::uint32_t i = 0; i < e_; ++i)
    for (std::uint32_t j = 0; i + j < e_; ++j)
      out[i + j] = base_->add(out[i + j], base_->mul(x[i], y[j]));
  return encode(out);
}

Elem TruncPolyRing::neg_impl(Elem a) const {
  std::vector<Elem> x = decode(a);
  for (Elem& c : x) c = base_->neg(c);
  return encode(x);
}

std::string TruncPolyRing::describe() const {
  return spec_.dump();
}

// ------------------------------------------------------------ Subquotient

SubquotientRing::SubquotientRing(RingPtr parent, std::vector<Elem> members,
                                 std::vector<Elem> project_parent,
                                 Elem one_member, std::string label)
    : Ring(members.size(), /*zero placeholder*/ 0, /*one placeholder*/ 0),
      parent_(std::move(parent)),
      members_(std::move(members)),
      label_(std::move(label)) {
  if (!parent_) throw MalformedSpec("subquotient needs a parent ring");
  if (project_parent.size() != parent_->size())
    throw ShapeMismatch("projection table must cover the parent ring");
  if (!std::is_sorted(members_.begin(), members_.end()) ||
      std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw MalformedSpec("member list must be sorted and distinct");
  project_loc_.assign(parent_->size(), kNoElem);
  for (Elem p = 0; p < parent_->size(); ++p) {
    Elem rep = project_parent[p];
    if (rep == kNoElem) continue;
    auto it = std::lower_bound(members_.begin(), members_.end(), rep);
    if (it == members_.end() || *it != rep)
      throw MalformedSpec("projection image is not a member");
    project_loc_[p] = static_cast<Elem>(it - members_.begin());
  }
  parent_->check(one_member);
  Elem z = project_loc_[parent_->zero()];
  if (z == kNoElem) throw MalformedSpec("zero has no representative");
  Elem o = project_loc_[one_member];
  if (o == kNoElem) throw MalformedSpec("identity has no representative");
  set_constants(z, o);
  finalize_tables();
}

Elem SubquotientRing::to_parent(Elem a) const {
  check(a);
  return members_[a];
}

Elem SubquotientRing::project(Elem parent_elem) const {
  parent_->check(parent_elem);
  Elem loc = project_loc_[parent_elem];
  if (loc == kNoElem)
    throw DomainViolation("parent element has no representative in " + label_);
  return loc;
}

bool SubquotientRing::projects(Elem parent_elem) const {
  parent_->check(parent_elem);
  return project_loc_[parent_elem] != kNoElem;
}

Elem SubquotientRing::add_impl(Elem a, Elem b) const {
  Elem loc = project_loc_[parent_->add(members_[a], members_[b])];
  if (loc == kNoElem) throw DomainViolation("sum leaves " + label_);
  return loc;
}

Elem SubquotientRing::mul_impl(Elem a, Elem b) const {
  Elem loc = project_loc_[parent_->mul(members_[a], members_[b])];
  if (loc == kNoElem) throw DomainViolation("product leaves " + label_);
  return loc;
}

Elem SubquotientRing::neg_impl(Elem a) const {
  Elem loc = project_loc_[parent_->neg(members_[a])];
  if (loc == kNoElem) throw DomainViolation("negation leaves " + label_);
  return loc;
}

std::string SubquotientRing::describe() const {
  return label_;
}

// -------------------------------------------------------------- factories

RingPtr make_residue(std::uint32_t n) {
  return std::make_shared<ResidueRing>(n);
}

RingPtr make_field(std::uint32_t p, std::uint32_t k,
                   std::vector<std::uint32_t> modulus) {
  return std::make_shared<FieldRing>(p, k, std::move(modulus));
}

RingPtr make_matrix(std::uint32_t n, RingPtr entries) {
  return std::make_shared<MatrixRing>(n, std::move(entries));
}

RingPtr make_product(std::vector<RingPtr> components) {
  return std::make_shared<ProductRing>(std::move(components));
}

RingPtr make_opposite(RingPtr base) {
  return std::make_shared<OppositeRing>(std::move(base));
}

RingPtr make_truncated(RingPtr base, std::uint32_t e) {
  return std::make_shared<TruncPolyRing>(base, e);
}

RingPtr build_ring(const RingSpec& spec) {
  switch (spec.kind) {
    case RingSpec::Kind::Residue:
      return make_residue(spec.n);
    case RingSpec::Kind::Field:
      return make_field(spec.n, spec.k, spec.modulus);
    case RingSpec::Kind::Matrix:
      if (spec.children.size() != 1)
        throw MalformedSpec("matrix spec needs one child");
      return make_matrix(spec.n, build_ring(spec.children[0]));
    case RingSpec::Kind::Product: {
      std::vector<RingPtr> comps;
      for (const auto& c : spec.children) comps.push_back(build_ring(c));
      return make_product(std::move(comps));
    }
    case RingSpec::Kind::Opposite:
      if (spec.children.size() != 1)
        throw MalformedSpec("opposite spec needs one child");
      return make_opposite(build_ring(spec.children[0]));
    case RingSpec::Kind::Truncated:
      if (spec.children.size() != 1)
        throw MalformedSpec("truncated spec needs one child");
      return make_truncated(build_ring(spec.children[0]), spec.n);
  }
  throw MalformedSpec("unknown ring kind");
}

}  // namespace qf
