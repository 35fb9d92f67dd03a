#include "qf/unitary.hpp"

#include <algorithm>

namespace qf {

LambdaSet::LambdaSet(std::size_t ring_size, std::vector<Elem> members)
    : members_(std::move(members)), mask_(ring_size, 0) {
  if (!std::is_sorted(members_.begin(), members_.end()) ||
      std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw MalformedSpec("form parameter members must be sorted and distinct");
  for (Elem a : members_) {
    if (a >= ring_size) throw DomainViolation("form parameter element");
    mask_[a] = 1;
  }
}

std::vector<Elem> lambda_min_set(const Ring& R, const std::vector<Elem>& sigma,
                                 Elem u) {
  std::vector<char> seen(R.size(), 0);
  for (Elem a = 0; a < R.size(); ++a)
    seen[R.sub(a, R.mul(sigma.at(a), u))] = 1;
  std::vector<Elem> out;
  for (Elem a = 0; a < R.size(); ++a)
    if (seen[a]) out.push_back(a);
  return out;
}

std::vector<Elem> lambda_max_set(const Ring& R, const std::vector<Elem>& sigma,
                                 Elem u) {
  std::vector<Elem> out;
  for (Elem a = 0; a < R.size(); ++a)
    if (R.mul(sigma.at(a), u) == R.neg(a)) out.push_back(a);
  return out;
}

std::vector<Elem> additive_closure(const Ring& R,
                                   const std::vector<Elem>& seed) {
  std::vector<char> in(R.size(), 0);
  std::vector<Elem> work;
  auto push = [&](Elem a) {
    if (!in[a]) {
      in[a] = 1;
      work.push_back(a);
    }
  };
  push(R.zero());
  for (Elem s : seed) {
    R.check(s);
    push(s);
  }
  for (std::size_t i = 0; i < work.size(); ++i)
    for (Elem s : seed) {
      // adding generators repeatedly reaches every subgroup element
      push(R.add(work[i], s));
    }
  std::vector<Elem> out;
  for (Elem a = 0; a < R.size(); ++a)
    if (in[a]) out.push_back(a);
  return out;
}

void validate_form_parameter(const Ring& R, const std::vector<Elem>& sigma,
                             Elem u, const std::vector<Elem>& members) {
  std::vector<char> in(R.size(), 0);
  for (Elem a : members) in[a] = 1;
  if (!in[R.zero()])
    throw InvalidUnitaryRing("form parameter does not contain 0");
  for (Elem a : members)
    for (Elem b : members)
      if (!in[R.add(a, b)])
        throw InvalidUnitaryRing("form parameter is not closed under +");
  for (Elem a : lambda_min_set(R, sigma, u))
    if (!in[a])
      throw InvalidUnitaryRing("form parameter misses a minimal element");
  for (Elem a : members)
    if (R.mul(sigma.at(a), u) != R.neg(a))
      throw InvalidUnitaryRing("form parameter exceeds the maximal one");
  for (Elem x = 0; x < R.size(); ++x)
    for (Elem l : members)
      if (!in[R.mul(R.mul(sigma.at(x), l), x)])
        throw InvalidUnitaryRing(
            "form parameter is not closed under sigma(x)Lx");
}

std::vector<AntiAxiomViolation> validate_anti_structure(
    const Ring& R, const std::vector<Elem>& sigma, Elem u) {
  const std::size_t n = R.size();
  if (sigma.size() != n)
    throw ShapeMismatch("sigma table size differs from ring size");
  R.check(u);

  std::vector<AntiAxiomViolation> report;
  std::vector<Elem> hit(n, kNoElem);
  for (Elem a = 0; a < n; ++a) {
    Elem s = sigma[a];
    if (s >= n || hit[s] != kNoElem) {
      // nothing further can be evaluated through a non-bijective table
      report.push_back({"sigma is not a permutation", a});
      return report;
    }
    hit[s] = a;
  }
  if (sigma[R.one()] != R.one())
    report.push_back({"sigma does not fix 1", R.one()});
  bool additive_ok = true;
  bool reversing_ok = true;
  for (Elem a = 0; a < n && (additive_ok || reversing_ok); ++a)
    for (Elem b = 0; b < n; ++b) {
      if (additive_ok &&
          sigma[R.add(a, b)] != R.add(sigma[a], sigma[b])) {
        report.push_back({"sigma is not additive", a});
        additive_ok = false;
      }
      if (reversing_ok && sigma[R.mul(a, b)] != R.mul(sigma[b], sigma[a])) {
        report.push_back({"sigma does not reverse products", a});
        reversing_ok = false;
      }
    }
  if (!R.is_unit(u)) {
    report.push_back({"u is not a unit", u});
    return report;  // the remaining axioms need u^{-1}
  }
  if (R.mul(sigma[u], u) != R.one())
    report.push_back({"sigma(u)u != 1", u});
  const Elem u_inv = R.inverse(u);
  for (Elem a = 0; a < n; ++a)
    if (sigma[sigma[a]] != R.mul(R.mul(u, a), u_inv)) {
      report.push_back({"sigma^2 is not conjugation by u", a});
      break;
    }
  return report;
}

UnitaryRing::UnitaryRing(RingPtr ring, std::vector<Elem> sigma_table, Elem u,
                         LambdaPolicy policy,
                         std::vector<Elem> lambda_generators) {
  if (!ring) throw MalformedSpec("unitary ring needs an underlying ring");
  const Ring& R = *ring;
  const std::size_t n = R.size();
  if (n > Bounds::max_unitary_ring_size)
    throw OversizeRing("unitary structure limited to " +
                       std::to_string(Bounds::max_unitary_ring_size) +
                       " elements");
  auto anti_report = validate_anti_structure(R, sigma_table, u);
  if (!anti_report.empty()) throw InvalidUnitaryRing(anti_report.front().axiom);

  std::vector<Elem> sigma_inv(n, kNoElem);
  for (Elem a = 0; a < n; ++a) sigma_inv[sigma_table[a]] = a;
  const Elem u_inv = R.inverse(u);

  std::vector<Elem> members;
  switch (policy) {
    case LambdaPolicy::Min:
      members = lambda_min_set(R, sigma_table, u);
      break;
    case LambdaPolicy::Max:
      members = lambda_max_set(R, sigma_table, u);
      break;
    case LambdaPolicy::Generated: {
      std::vector<Elem> seed = lambda_min_set(R, sigma_table, u);
      seed.insert(seed.end(), lambda_generators.begin(),
                  lambda_generators.end());
      members = additive_closure(R, seed);
      break;
    }
    case LambdaPolicy::Explicit: {
      members = lambda_generators;
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()),
                    members.end());
      break;
    }
  }
  validate_form_parameter(R, sigma_table, u, members);

  auto core = std::make_shared<Core>();
  core->ring = std::move(ring);
  core->sigma = std::move(sigma_table);
  core->sigma_inv = std::move(sigma_inv);
  core->u = u;
  core->u_inv = u_inv;
  core->lambda = LambdaSet(n, std::move(members));
  core->policy = policy;
  core->lambda_gens = std::move(lambda_generators);
  core_ = std::move(core);
}

bool UnitaryRing::is_symmetric_idempotent(Elem e) const {
  const Ring& R = ring();
  R.check(e);
  return R.mul(e, e) == e && sigma(e) == e;
}

UnitaryRing conjugate_unitary(const UnitaryRing& ur, Elem v) {
  const Ring& R = ur.ring();
  if (!R.is_unit(v)) throw NotAUnit("conjugator must be a unit");
  const Elem v_inv = R.inverse(v);
  std::vector<Elem> sigma(R.size());
  for (Elem a = 0; a < R.size(); ++a)
    sigma[a] = R.mul(R.mul(v, ur.sigma(a)), v_inv);
  const Elem u = R.mul(R.mul(v, R.inverse(ur.sigma(v))), ur.u());
  std::vector<Elem> lambda;
  for (Elem l : ur.lambda().members()) lambda.push_back(R.mul(v, l));
  std::sort(lambda.begin(), lambda.end());
  return UnitaryRing(ur.ring_ptr(), std::move(sigma), u,
                     LambdaPolicy::Explicit, std::move(lambda));
}

std::string UnitaryRing::describe() const {
  std::string s = "unitary(" + ring().describe() + ", u=" +
                  std::to_string(core_->u) + ", |lambda|=" +
                  std::to_string(core_->lambda.size()) + ")";
  return s;
}

}  // namespace qf
