#include "qf/structure.hpp"

#include <algorithm>

namespace qf {
namespace {

void internal_check(bool ok, const char* what) {
  if (!ok) throw Error(std::string("internal invariant failed: ") + what);
}

// Newton iteration e <- 3e^2 - 2e^3; converges when e^2 - e is nilpotent.
Elem newton_idempotent(const Ring& R, Elem e) {
  for (int iter = 0; iter < 64; ++iter) {
    Elem e2 = R.mul(e, e);
    if (e2 == e) return e;
    Elem e3 = R.mul(e2, e);
    Elem three_e2 = R.add(e2, R.add(e2, e2));
    e = R.sub(three_e2, R.add(e3, e3));
  }
  throw Error("internal invariant failed: idempotent refinement diverged");
}

// Unitary structure induced on a quotient/factor presented as a
// SubquotientRing whose project() is a ring surjection.
UnitaryRing induce_ur(const UnitaryRing& ur,
                      const std::shared_ptr<const SubquotientRing>& S,
                      const Ring& parent) {
  (void)parent;
  std::vector<Elem> sigma(S->size());
  for (Elem a = 0; a < S->size(); ++a)
    sigma[a] = S->project(ur.sigma(S->to_parent(a)));
  Elem u = S->project(ur.u());
  std::vector<Elem> lambda;
  for (Elem l : ur.lambda().members()) lambda.push_back(S->project(l));
  std::sort(lambda.begin(), lambda.end());
  lambda.erase(std::unique(lambda.begin(), lambda.end()), lambda.end());
  return UnitaryRing(S, std::move(sigma), u, LambdaPolicy::Explicit,
                     std::move(lambda));
}

// Central primitive idempotents of a (semisimple) ring, ascending.
std::vector<Elem> central_primitive_idempotents(const Ring& Q) {
  std::vector<Elem> cidem;
  for (Elem z = 0; z < Q.size(); ++z) {
    if (z == Q.zero() || Q.mul(z, z) != z) continue;
    bool central = true;
    for (Elem x = 0; x < Q.size() && central; ++x)
      central = Q.mul(z, x) == Q.mul(x, z);
    if (central) cidem.push_back(z);
  }
  std::vector<Elem> atoms;
  for (Elem z : cidem) {
    bool atom = true;
    for (Elem w : cidem) {
      Elem wz = Q.mul(w, z);
      if (wz != Q.zero() && wz != z) {
        atom = false;
        break;
      }
    }
    if (atom) atoms.push_back(z);
  }
  Elem sum = Q.zero();
  for (Elem z : atoms) sum = Q.add(sum, z);
  internal_check(sum == Q.one(), "central atoms do not sum to 1");
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      internal_check(Q.mul(atoms[i], atoms[j]) == Q.zero(),
                     "central atoms are not orthogonal");
  return atoms;
}

bool idempotents_equivalent(const Ring& R, Elem e, Elem f) {
  // e ~ f iff some c in fRe has an inverse d in eRf (dc = e, cd = f)
  std::vector<char> seen(R.size(), 0);
  for (Elem a = 0; a < R.size(); ++a) {
    Elem c = R.mul(R.mul(f, a), e);
    if (seen[c]) continue;
    seen[c] = 1;
    if (ef_inverse(R, c, e, f)) return true;
  }
  return false;
}

std::uint32_t solve_block_size(std::size_t factor_size,
                               std::size_t corner_size) {
  for (std::uint32_t n = 1; n <= 64; ++n) {
    unsigned long long pow = 1;
    bool over = false;
    for (std::uint32_t i = 0; i < n * n; ++i) {
      pow *= corner_size;
      if (pow > factor_size) {
        over = true;
        break;
      }
    }
    if (!over && pow == factor_size) return n;
    if (over) break;
  }
  throw Error("internal invariant failed: factor size is not |corner|^(n^2)");
}

}  // namespace

std::string factor_kind_name(FactorKind k) {
  switch (k) {
    case FactorKind::Orthogonal:
      return "orthogonal";
    case FactorKind::Unitary:
      return "unitary";
    case FactorKind::Symplectic:
      return "symplectic";
    case FactorKind::Exchange:
      return "exchange";
  }
  return "?";
}

std::vector<Elem> radical_of(const Ring& R) {
  std::vector<Elem> out;
  for (Elem a = 0; a < R.size(); ++a) {
    bool quasi = true;
    for (Elem x = 0; x < R.size() && quasi; ++x)
      quasi = R.is_unit(R.sub(R.one(), R.mul(x, a)));
    if (quasi) out.push_back(a);
  }
  return out;
}

std::shared_ptr<const SubquotientRing> quotient_by_ideal(
    const RingPtr& R, const std::vector<Elem>& ideal,
    const std::string& label) {
  const std::size_t n = R->size();
  std::vector<Elem> rep(n);
  for (Elem a = 0; a < n; ++a) {
    Elem m = a;
    for (Elem j : ideal) m = std::min(m, R->add(a, j));
    rep[a] = m;
  }
  std::vector<Elem> members = rep;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return std::make_shared<SubquotientRing>(R, std::move(members),
                                           std::move(rep), R->one(), label);
}

Elem lift_idempotent(const Ring& R, Elem g,
                     const std::vector<char>& in_radical) {
  R.check(g);
  if (!in_radical.at(R.sub(R.mul(g, g), g)))
    throw NotIdempotentModJ("element " + std::to_string(g));
  Elem e = newton_idempotent(R, g);
  internal_check(in_radical.at(R.sub(e, g)) != 0,
                 "idempotent lift left the coset");
  return e;
}

std::vector<Elem> lift_orthogonal_system(const Ring& R,
                                         const std::vector<Elem>& seeds,
                                         const std::vector<char>& in_radical) {
  internal_check(!seeds.empty(), "empty idempotent system");
  std::vector<Elem> out;
  Elem s = R.zero();
  for (std::size_t t = 0; t < seeds.size(); ++t) {
    Elem e;
    if (t + 1 == seeds.size()) {
      e = R.sub(R.one(), s);
      internal_check(R.mul(e, e) == e, "system completion is not idempotent");
    } else {
      // shift the seed into the complement of s, then refine
      Elem c = R.sub(R.one(), s);
      Elem h = R.mul(R.mul(c, seeds[t]), c);
      e = newton_idempotent(R, h);
    }
    internal_check(R.mul(s, e) == R.zero() && R.mul(e, s) == R.zero(),
                   "lifted idempotents are not orthogonal");
    internal_check(in_radical.at(R.sub(e, seeds[t])) != 0,
                   "lifted idempotent left its coset");
    out.push_back(e);
    s = R.add(s, e);
  }
  internal_check(s == R.one(), "lifted system does not sum to 1");
  return out;
}

std::optional<Elem> ef_inverse(const Ring& R, Elem c, Elem e, Elem f) {
  if (R.mul(e, e) != e || R.mul(f, f) != f)
    throw DomainViolation("ef_inverse needs idempotents");
  if (R.mul(R.mul(f, c), e) != c)
    throw DomainViolation("ef_inverse argument is not in fRe");
  std::vector<char> seen(R.size(), 0);
  for (Elem a = 0; a < R.size(); ++a) {
    Elem d = R.mul(R.mul(e, a), f);
    if (seen[d]) continue;
    seen[d] = 1;
    if (R.mul(d, c) == e && R.mul(c, d) == f) return d;
  }
  return std::nullopt;
}

std::optional<CornerAnalysis> analyze_standard_factor(
    const Ring& F, const std::vector<Elem>& sigma, Elem u) {
  const std::size_t n = F.size();
  for (Elem a = 0; a < n; ++a)
    if (sigma.at(sigma.at(a)) != a) return std::nullopt;  // not an involution

  // minimal invariant idempotent by corner size, then by element order
  Elem best = kNoElem;
  std::vector<Elem> best_corner;
  for (Elem e = 0; e < n; ++e) {
    if (e == F.zero() || F.mul(e, e) != e || sigma[e] != e) continue;
    std::vector<char> seen(n, 0);
    std::vector<Elem> corner;
    for (Elem a = 0; a < n; ++a) {
      Elem c = F.mul(F.mul(e, a), e);
      if (!seen[c]) {
        seen[c] = 1;
        corner.push_back(c);
      }
    }
    std::sort(corner.begin(), corner.end());
    if (best == kNoElem || corner.size() < best_corner.size()) {
      best = e;
      best_corner = std::move(corner);
    }
  }
  if (best == kNoElem) return std::nullopt;  // cannot happen: 1 qualifies

  const auto& C = best_corner;
  bool commutative = true;
  for (Elem a : C) {
    for (Elem b : C)
      if (F.mul(a, b) != F.mul(b, a)) {
        commutative = false;
        break;
      }
    if (!commutative) break;
  }
  // invertibility within a corner, by the power trick relative to `id`
  auto invertible_rel = [&](Elem a, Elem id, std::size_t bound) {
    Elem x = a;
    for (std::size_t step = 0; step < bound; ++step) {
      if (x == id) return true;
      x = F.mul(x, a);
    }
    return false;
  };
  bool is_field = commutative;
  if (commutative)
    for (Elem a : C)
      if (a != F.zero() && !invertible_rel(a, best, C.size())) {
        is_field = false;
        break;
      }

  const Elem u_eps = F.mul(F.mul(best, u), best);
  if (is_field) {
    bool sigma_id = true;
    for (Elem a : C)
      if (sigma[a] != a) {
        sigma_id = false;
        break;
      }
    bool u_one;
    if (u_eps == best) {
      u_one = true;
    } else if (sigma_id && u_eps == F.neg(best)) {
      u_one = false;
    } else {
      return std::nullopt;
    }
    CornerAnalysis out;
    out.eps = best;
    out.corner_members = C;
    out.is_exchange = false;
    out.delta = kNoElem;
    out.sigma_id_on_corner = sigma_id;
    out.u_corner_is_one = u_one;
    return out;
  }

  // exchange shape: commutative corner splitting as delta + sigma(delta)
  // with each half a field
  if (!commutative || u_eps != best) return std::nullopt;
  for (Elem d : C) {
    if (F.mul(d, d) != d || d == F.zero() || d == best) continue;
    if (F.add(d, sigma[d]) != best) continue;
    if (F.mul(d, sigma[d]) != F.zero()) continue;
    // half corner dC must be a field with identity d
    std::vector<char> seen(n, 0);
    bool half_field = true;
    for (Elem a : C) {
      Elem x = F.mul(d, a);
      if (seen[x]) continue;
      seen[x] = 1;
      if (x != F.zero() && !invertible_rel(x, d, C.size())) {
        half_field = false;
        break;
      }
    }
    if (!half_field) continue;
    CornerAnalysis out;
    out.eps = best;
    out.corner_members = C;
    out.is_exchange = true;
    out.delta = d;
    out.sigma_id_on_corner = false;
    out.u_corner_is_one = true;
    return out;
  }
  return std::nullopt;
}

Elem standard_form_conjugator(const UnitaryRing& fur) {
  const Ring& F = fur.ring();
  auto try_candidate = [&](Elem v) -> bool {
    if (!F.is_unit(v)) return false;
    Elem v_inv = F.inverse(v);
    std::vector<Elem> sig(F.size());
    for (Elem a = 0; a < F.size(); ++a)
      sig[a] = F.mul(F.mul(v, fur.sigma(a)), v_inv);
    Elem u = F.mul(F.mul(v, F.inverse(fur.sigma(v))), fur.u());
    return analyze_standard_factor(F, sig, u).has_value();
  };

  if (try_candidate(F.one())) return F.one();
  // v = d + u^{-1} sigma(d) yields a structure with u' = 1 when invertible
  std::vector<char> tried(F.size(), 0);
  tried[F.one()] = 1;
  for (Elem d = 0; d < F.size(); ++d) {
    Elem v = F.add(d, F.mul(fur.u_inv(), fur.sigma(d)));
    if (tried[v]) continue;
    tried[v] = 1;
    if (try_candidate(v)) return v;
  }
  for (Elem v : F.units()) {
    if (tried[v]) continue;
    tried[v] = 1;
    if (try_candidate(v)) return v;
  }
  throw InvalidUnitaryRing(
      "no unit puts the factor " + F.describe() + " into standard form");
}

Structure::Structure(const UnitaryRing& ur)
    : ur_(ur), quotient_ur_(ur), std_ur_(ur), std_quotient_ur_(ur) {
  const Ring& A = ur.ring();
  const RingPtr& Aptr = ur.ring_ptr();

  radical_ = radical_of(A);
  in_radical_.assign(A.size(), 0);
  for (Elem j : radical_) in_radical_[j] = 1;

  quotient_ =
      quotient_by_ideal(Aptr, radical_, A.describe() + " mod radical");
  quotient_ur_ = induce_ur(ur, quotient_, A);
  const SubquotientRing& Q = *quotient_;

  // sigma-stable grouping of the central primitive idempotents
  std::vector<Elem> atoms = central_primitive_idempotents(Q);
  std::vector<char> used(Q.size(), 0);
  struct Group {
    Elem central;
    std::vector<Elem> parts;
  };
  std::vector<Group> groups;
  for (Elem c : atoms) {
    if (used[c]) continue;
    used[c] = 1;
    Elem partner = quotient_ur_.sigma(c);
    if (partner == c) {
      groups.push_back({c, {c}});
    } else {
      internal_check(std::find(atoms.begin(), atoms.end(), partner) !=
                             atoms.end() &&
                         !used[partner],
                     "sigma does not permute the central atoms");
      used[partner] = 1;
      groups.push_back({Q.add(c, partner), {c, partner}});
    }
  }

  // factor rings (independent of the unitary structure)
  std::vector<std::shared_ptr<const SubquotientRing>> factor_rings;
  for (const Group& g : groups) {
    std::vector<Elem> project(Q.size());
    for (Elem x = 0; x < Q.size(); ++x) project[x] = Q.mul(x, g.central);
    std::vector<Elem> members = project;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    factor_rings.push_back(std::make_shared<SubquotientRing>(
        quotient_, std::move(members), std::move(project), g.central,
        "factor " + std::to_string(factor_rings.size()) + " of " +
            Q.describe()));
  }

  // per-factor standardizing conjugators, found on the user-side structure
  Elem vbar = Q.zero();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    UnitaryRing fur = induce_ur(quotient_ur_, factor_rings[i], Q);
    Elem vi = standard_form_conjugator(fur);
    vbar = Q.add(vbar, factor_rings[i]->to_parent(vi));
  }
  internal_check(Q.is_unit(vbar), "blockwise conjugator is not a unit");

  // lift the conjugator and transport the whole structure
  v_ = kNoElem;
  for (Elem a = 0; a < A.size(); ++a)
    if (Q.project(a) == vbar) {
      v_ = a;
      break;
    }
  internal_check(v_ != kNoElem && A.is_unit(v_),
                 "conjugator lift is not a unit");
  std_ur_ = conjugate_unitary(ur, v_);
  std_quotient_ur_ = induce_ur(std_ur_, quotient_, A);

  // standardized factors
  std::vector<Elem> seeds;  // global idempotent seeds, elements of A
  std::vector<std::pair<std::size_t, std::size_t>> seed_slots;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& FR = factor_rings[i];
    UnitaryRing fur = induce_ur(std_quotient_ur_, FR, Q);
    auto analysis =
        analyze_standard_factor(*FR, fur.sigma_table(), fur.u());
    internal_check(analysis.has_value(), "factor is not in standard form");

    // corner ring as a subring of the factor
    std::vector<Elem> corner_project(FR->size(), kNoElem);
    for (Elem m : analysis->corner_members) corner_project[m] = m;
    auto corner = std::make_shared<const SubquotientRing>(
        FR, analysis->corner_members, std::move(corner_project),
        analysis->eps,
        "corner of factor " + std::to_string(i) + " of " + Q.describe());
    std::vector<Elem> corner_sigma(corner->size());
    for (Elem a = 0; a < corner->size(); ++a)
      corner_sigma[a] = corner->project(fur.sigma(corner->to_parent(a)));
    Elem corner_u = corner->project(
        FR->mul(FR->mul(analysis->eps, fur.u()), analysis->eps));
    std::vector<Elem> corner_lambda;
    for (Elem l : fur.lambda().members()) {
      Elem le = FR->mul(FR->mul(analysis->eps, l), analysis->eps);
      corner_lambda.push_back(corner->project(le));
    }
    std::sort(corner_lambda.begin(), corner_lambda.end());
    corner_lambda.erase(
        std::unique(corner_lambda.begin(), corner_lambda.end()),
        corner_lambda.end());
    UnitaryRing corner_ur(corner, std::move(corner_sigma), corner_u,
                          LambdaPolicy::Explicit, std::move(corner_lambda));

    FactorKind kind;
    if (analysis->is_exchange) {
      kind = FactorKind::Exchange;
    } else if (!analysis->sigma_id_on_corner) {
      kind = FactorKind::Unitary;
    } else if (!analysis->u_corner_is_one) {
      kind = FactorKind::Symplectic;
    } else if (corner_ur.lambda().size() == 1) {
      kind = FactorKind::Orthogonal;
    } else {
      kind = FactorKind::Symplectic;
    }

    std::uint32_t nblocks =
        solve_block_size(FR->size(), analysis->corner_members.size());

    // orthogonal system of idempotents equivalent to eps
    std::vector<Elem> sys{analysis->eps};
    Elem sum = analysis->eps;
    for (std::uint32_t j = 1; j < nblocks; ++j) {
      Elem g = kNoElem;
      if (j + 1 == nblocks) {
        g = FR->sub(FR->one(), sum);
      } else {
        for (Elem cand = 0; cand < FR->size(); ++cand) {
          if (cand == FR->zero() || FR->mul(cand, cand) != cand) continue;
          if (FR->mul(sum, cand) != FR->zero() ||
              FR->mul(cand, sum) != FR->zero())
            continue;
          if (!idempotents_equivalent(*FR, analysis->eps, cand)) continue;
          g = cand;
          break;
        }
      }
      internal_check(g != kNoElem && FR->mul(g, g) == g,
                     "idempotent system candidate missing");
      internal_check(idempotents_equivalent(*FR, analysis->eps, g),
                     "system completion is not equivalent to eps");
      sys.push_back(g);
      sum = FR->add(sum, g);
    }
    internal_check(sum == FR->one(), "idempotent system does not sum to 1");

    for (std::size_t j = 0; j < sys.size(); ++j) {
      seeds.push_back(Q.to_parent(FR->to_parent(sys[j])));
      seed_slots.emplace_back(i, j);
    }

    factors_.push_back(FactorData{groups[i].central,
                                  groups[i].parts,
                                  FR,
                                  fur,
                                  kind,
                                  analysis->eps,
                                  corner,
                                  corner_ur,
                                  nblocks,
                                  analysis->delta,
                                  sys,
                                  {}});
  }

  // one global lifted orthogonal system, sliced back per factor
  std::vector<Elem> lifted = lift_orthogonal_system(A, seeds, in_radical_);
  for (auto& f : factors_) f.lifts.resize(f.eps_system.size());
  for (std::size_t t = 0; t < lifted.size(); ++t)
    factors_[seed_slots[t].first].lifts[seed_slots[t].second] = lifted[t];
}

const Structure& UnitaryRing::structure() const {
  std::call_once(core_->structure_once, [this] {
    core_->structure = std::make_shared<const Structure>(*this);
  });
  return *core_->structure;
}

}  // namespace qf
