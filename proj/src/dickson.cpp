#include "qf/dickson.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qf/errors.hpp"
#include "qf/oracle.hpp"

namespace qf {
namespace {

void internal_check(bool ok, const char* what) {
  if (!ok) throw Error(std::string("internal invariant failed: ") + what);
}

Elem rmul3(const Ring& R, Elem a, Elem b, Elem c) {
  return R.mul(R.mul(a, b), c);
}

// log_base(value) when value is an exact power of base.
std::optional<std::size_t> exact_log(std::size_t value, std::size_t base) {
  if (base < 2)
    return value == 1 ? std::optional<std::size_t>(0) : std::nullopt;
  std::size_t x = 1;
  std::size_t d = 0;
  while (x < value) {
    if (x > value / base) return std::nullopt;
    x *= base;
    ++d;
  }
  return x == value ? std::optional<std::size_t>(d) : std::nullopt;
}

std::optional<std::size_t> exact_isqrt(std::size_t value) {
  std::size_t r = 0;
  while (r * r < value) ++r;
  return r * r == value ? std::optional<std::size_t>(r) : std::nullopt;
}

std::vector<Elem> ring_center(const Ring& R) {
  std::vector<Elem> out;
  for (Elem a = 0; a < R.size(); ++a) {
    bool central = true;
    for (Elem b = 0; b < R.size(); ++b)
      if (R.mul(a, b) != R.mul(b, a)) {
        central = false;
        break;
      }
    if (central) out.push_back(a);
  }
  return out;
}

bool ring_commutative(const Ring& R) {
  for (Elem a = 0; a < R.size(); ++a)
    for (Elem b = a + 1; b < R.size(); ++b)
      if (R.mul(a, b) != R.mul(b, a)) return false;
  return true;
}

Mat project_factor_mat(const Structure& st, std::size_t i, const Mat& m) {
  const FactorData& fd = st.factors()[i];
  Mat out = m;
  for (Elem& v : out.a) v = fd.ring->project(st.reduce(v));
  return out;
}

Mat normalize_map(const QuadraticSpace& s, const Mat& m) {
  const Ring& R = s.ur().ring();
  return mat_mul(R, mat_mul(R, s.presentation(), m), s.presentation());
}

// Every module endomorphism E M E, by additive closure of the
// single-entry generators E (a e_rc) E.
std::vector<Mat> endomorphism_ring(const Ring& R, const Mat& E) {
  const std::size_t k = E.rows;
  std::vector<Mat> gens;
  std::set<std::vector<Elem>> seen;
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c)
      for (Elem a = 0; a < R.size(); ++a) {
        Mat g(k, k, R.zero());
        g.at(r, c) = a;
        g = mat_mul(R, mat_mul(R, E, g), E);
        if (seen.insert(g.a).second) gens.push_back(std::move(g));
      }
  Mat zero(k, k, R.zero());
  std::set<std::vector<Elem>> members;
  members.insert(zero.a);
  std::vector<Mat> out;
  out.push_back(zero);
  std::vector<Mat> queue;
  queue.push_back(zero);
  while (!queue.empty()) {
    Mat cur = std::move(queue.back());
    queue.pop_back();
    for (const Mat& g : gens) {
      Mat nxt = mat_add(R, cur, g);
      if (!members.insert(nxt.a).second) continue;
      if (members.size() > Bounds::candidate_cap)
        throw EnumerationBoundExceeded(
            "endomorphism ring search exceeded the candidate cap");
      out.push_back(nxt);
      queue.push_back(std::move(nxt));
    }
  }
  return out;
}

// Populated split-orthogonal factors of the space, in index order.
struct SplitFactorScan {
  std::vector<std::size_t> factors;
  std::vector<FactorProfile> profiles;
};

SplitFactorScan scan_split_factors(const QuadraticSpace& s) {
  const Structure& st = s.ur().structure();
  SplitFactorScan out;
  for (std::size_t i = 0; i < st.factors().size(); ++i) {
    FactorProfile p = classify_factor(st.factors()[i], i);
    if (!p.split_orthogonal) continue;
    ModulePtr m = factor_space(s, i).module();
    if (m->size() <= 1) continue;
    out.factors.push_back(i);
    out.profiles.push_back(std::move(p));
  }
  return out;
}

// Does the factor image match eps A_i as a module, i.e. does every central
// half of the factor act with simple multiplicity one?
bool half_multiplicities_one(const QuadraticSpace& fs, const FactorData& fd) {
  const Ring& FR = *fd.ring;
  ModulePtr mod = fs.module();
  for (std::size_t j = 0; j < fd.central_parts.size(); ++j) {
    Elem part = fd.ring->project(fd.central_parts[j]);
    std::set<Vec> side;
    for (const Vec& y : mod->elems)
      side.insert(vec_scale_right(FR, y, part));
    std::set<Elem> eps_side;
    for (Elem a = 0; a < FR.size(); ++a)
      eps_side.insert(rmul3(FR, fd.eps, a, part));
    if (side.size() != eps_side.size()) return false;
  }
  return true;
}

// A quasi-reflection of the reduced space whose idempotent is the factor
// identity: one datum along the minimal invariant idempotent, carried
// across the idempotent system and composed.  The zero vector takes part
// in the search, so factors whose Lambda corner holds a unit are covered
// even when their module image vanishes.
ReflectionDatum eps_chain_datum(const QuadraticSpace& sbar,
                                const Structure& st, std::size_t i) {
  const FactorData& fd = st.factors()[i];
  const Ring& QR = sbar.ur().ring();
  const UnitaryRing& qur = sbar.ur();
  const Ring& FR = *fd.ring;
  Elem eps_q = fd.factor_to_quotient(fd.eps);
  internal_check(qur.sigma(eps_q) == eps_q,
                 "the minimal idempotent is invariant");

  std::optional<ReflectionDatum> base;
  ModulePtr mod = sbar.module();
  for (const Vec& yb : mod->elems) {
    if (vec_scale_right(QR, yb, eps_q) != yb) continue;
    for (Elem l : qur.lambda().members()) {
      Elem c = QR.add(sbar.qraw(yb), rmul3(QR, eps_q, l, eps_q));
      if (!ef_inverse(QR, c, eps_q, eps_q)) continue;
      base = ReflectionDatum{yb, eps_q, c};
      break;
    }
    if (base) break;
  }
  internal_check(base.has_value(),
                 "a factor without empty odd obstruction admits an "
                 "eps-reflection");

  ReflectionDatum acc = *base;
  for (std::size_t j = 1; j < fd.eps_system.size(); ++j) {
    Elem ej_f = fd.eps_system[j];
    Elem ej_q = fd.factor_to_quotient(ej_f);
    std::optional<Elem> link;
    for (Elem x = 0; x < FR.size(); ++x) {
      Elem a_f = rmul3(FR, fd.eps, x, ej_f);
      if (ef_inverse(FR, a_f, ej_f, fd.eps)) {
        link = fd.factor_to_quotient(a_f);
        break;
      }
    }
    internal_check(link.has_value(), "idempotent system members are linked");
    ReflectionDatum dj = reflection_reindex(sbar, *base, *link, ej_q);
    acc = compose_orthogonal_reflections(sbar, acc, dj);
  }
  internal_check(acc.e == fd.central, "the chain covers the factor identity");
  return acc;
}

}  // namespace

std::string parity_name(FactorParity p) {
  switch (p) {
    case FactorParity::Odd:
      return "odd";
    case FactorParity::Even:
      return "even";
    default:
      return "n/a";
  }
}

std::string corner_id_name(CornerId id) {
  switch (id) {
    case CornerId::F2:
      return "F_2";
    case CornerId::F2xF2:
      return "F_2xF_2";
    default:
      return "other";
  }
}

std::string subgroup_case_name(SubgroupCase c) {
  switch (c) {
    case SubgroupCase::AllOddFactorsPopulated:
      return "all-odd-factors-populated";
    case SubgroupCase::EmptyOddFactor:
      return "empty-odd-factor";
    default:
      return "no-reflection";
  }
}

FactorProfile classify_factor(const FactorData& fd, std::size_t index) {
  const Ring& FR = *fd.ring;
  const UnitaryRing& fur = fd.ur;
  FactorProfile p;
  p.index = index;
  p.exchange_pair = fd.central_parts.size() == 2;
  p.center = ring_center(FR);
  p.sigma_fixes_center = true;
  for (Elem k : p.center)
    if (fur.sigma(k) != k) {
      p.sigma_fixes_center = false;
      break;
    }
  p.n = fd.n;

  const Ring& CR = *fd.corner;
  if (CR.size() == 2) {
    p.corner_id = CornerId::F2;
  } else if (CR.size() == 4) {
    bool split_idem = false;
    for (Elem a = 0; a < CR.size(); ++a)
      if (CR.mul(a, a) == a && a != CR.zero() && a != CR.one())
        split_idem = true;
    p.corner_id = split_idem ? CornerId::F2xF2 : CornerId::Other;
  }

  const LambdaSet& lam = fur.lambda();
  bool k_stable = true;
  for (Elem k : p.center) {
    for (Elem l : lam.members())
      if (!lam.contains(FR.mul(k, l))) {
        k_stable = false;
        break;
      }
    if (!k_stable) break;
  }
  if (k_stable)
    p.lambda_dim_over_center = exact_log(lam.size(), p.center.size());

  std::optional<std::size_t> deg;
  if (auto dim_a = exact_log(FR.size(), p.center.size()))
    deg = exact_isqrt(*dim_a);
  p.orthogonal = !p.exchange_pair && p.sigma_fixes_center &&
                 deg.has_value() && p.lambda_dim_over_center.has_value() &&
                 *p.lambda_dim_over_center == *deg * (*deg - 1) / 2;
  p.split_orthogonal = p.orthogonal && ring_commutative(CR);
  if (p.split_orthogonal) {
    internal_check(*deg == fd.n,
                   "the matrix size equals the degree over the center");
    p.parity = fd.n % 2 == 1 ? FactorParity::Odd : FactorParity::Even;
  }
  // two independent classification routes must agree: over a finite ring
  // every division ring is a field, so orthogonal factors split and the
  // standardized kind captures exactly the split-orthogonal ones
  internal_check(p.split_orthogonal == (fd.kind == FactorKind::Orthogonal),
                 "profile classification agrees with the standardized kind");
  internal_check(p.orthogonal == p.split_orthogonal,
                 "orthogonal factors over a finite ring are split");
  return p;
}

std::vector<FactorProfile> classify_factors(const UnitaryRing& ur) {
  const Structure& st = ur.structure();
  std::vector<FactorProfile> out;
  out.reserve(st.factors().size());
  for (std::size_t i = 0; i < st.factors().size(); ++i)
    out.push_back(classify_factor(st.factors()[i], i));
  return out;
}

QuadraticSpace factor_space(const QuadraticSpace& s, std::size_t i) {
  const Structure& st = s.ur().structure();
  if (i >= st.factors().size())
    throw PreconditionViolation("factor index out of range");
  const FactorData& fd = st.factors()[i];
  QuadraticSpace std_side =
      conjugate_space(s, st.std_ur(), st.conjugator());
  Mat fe = project_factor_mat(st, i, std_side.presentation());
  Mat fb = project_factor_mat(st, i, std_side.gram());
  return QuadraticSpace(fd.ur, make_module(fd.ring, fe), fb);
}

Mat factor_matrix(const QuadraticSpace& s, std::size_t i, const Mat& m) {
  const Structure& st = s.ur().structure();
  if (i >= st.factors().size())
    throw PreconditionViolation("factor index out of range");
  return project_factor_mat(st, i, m);
}

std::size_t corner_degree(const Ring& factor_ring,
                          const std::vector<Elem>& center, Elem e) {
  const Ring& R = factor_ring;
  R.check(e);
  if (R.mul(e, e) != e)
    throw PreconditionViolation("corner degree needs an idempotent");
  internal_check(center.size() >= 2, "the center holds zero and one");
  std::set<Elem> corner;
  for (Elem a = 0; a < R.size(); ++a) corner.insert(rmul3(R, e, a, e));
  auto dim = exact_log(corner.size(), center.size());
  internal_check(dim.has_value(), "the corner is a space over the center");
  auto deg = exact_isqrt(*dim);
  internal_check(deg.has_value(), "the corner dimension is a perfect square");
  return *deg;
}

int dickson_invariant(const QuadraticSpace& fs, const FactorProfile& profile,
                      const Mat& psi) {
  if (!profile.orthogonal)
    throw NotSplitOrthogonal(
        "the Dickson invariant needs a split-orthogonal factor");
  // no finite division ring is noncommutative, so this branch is
  // unreachable from classify_factor output; the invariant vanishes there
  if (!profile.split_orthogonal) return 0;
  if (!is_unimodular(fs))
    throw NotUnimodular("the Dickson invariant needs a unimodular space");
  const Ring& R = fs.ur().ring();
  Mat psi_n = normalize_map(fs, psi);
  if (!check_isometry(fs, fs, psi_n))
    throw PreconditionViolation(
        "the Dickson invariant is defined for isometries");
  const std::size_t q = profile.center.size();

  // dim_K((1 - psi) End) / deg(End) equals the simple multiplicity of the
  // displacement image (1 - psi) P: a right ideal f End is Hom(P, im f),
  // of dimension deg(End) times that multiplicity
  std::size_t simple_size = 1;
  for (std::uint32_t t = 0; t < profile.n; ++t) simple_size *= q;
  std::set<Vec> image;
  ModulePtr mod = fs.module();
  for (const Vec& x : mod->elems)
    image.insert(vec_sub(R, x, mat_vec(R, psi_n, x)));
  auto mult = exact_log(image.size(), simple_size);
  internal_check(mult.has_value(),
                 "the displacement image is a sum of simple modules");
  int bit = int(*mult % 2);

  // on small instances, recompute inside the endomorphism ring and insist
  // the two routes agree
  std::size_t end_bound = 1;
  bool small = true;
  const std::size_t k = fs.presentation().rows;
  for (std::size_t t = 0; t < k * k && small; ++t) {
    end_bound *= R.size();
    if (end_bound > 4096) small = false;
  }
  if (small) {
    std::vector<Mat> endos = endomorphism_ring(R, fs.presentation());
    auto dim_end = exact_log(endos.size(), q);
    internal_check(dim_end.has_value(),
                   "the endomorphism ring is a space over the center");
    auto deg = exact_isqrt(*dim_end);
    internal_check(deg.has_value(),
                   "the endomorphism ring is central simple");
    if (*deg == 0) return 0;  // zero module: only the identity acts
    Mat one_minus = mat_sub(R, fs.presentation(), psi_n);
    std::set<std::vector<Elem>> ideal;
    for (const Mat& m : endos) ideal.insert(mat_mul(R, one_minus, m).a);
    auto dim_ideal = exact_log(ideal.size(), q);
    internal_check(dim_ideal.has_value(),
                   "the displacement ideal is a space over the center");
    internal_check(*dim_ideal % *deg == 0,
                   "the ideal dimension is divisible by the degree");
    internal_check(int((*dim_ideal / *deg) % 2) == bit,
                   "the ideal route agrees with the image route");
  }
  return bit;
}

DicksonVector delta_I(const QuadraticSpace& s, const Mat& psi) {
  if (!is_unimodular(s))
    throw NotUnimodular("the Dickson vector needs a unimodular space");
  Mat psi_n = normalize_map(s, psi);
  if (!check_isometry(s, s, psi_n))
    throw PreconditionViolation(
        "the Dickson vector is defined for isometries");
  SplitFactorScan scan = scan_split_factors(s);
  DicksonVector out;
  out.factors = scan.factors;
  out.bits.reserve(scan.factors.size());
  for (std::size_t t = 0; t < scan.factors.size(); ++t) {
    std::size_t i = scan.factors[t];
    out.bits.push_back(dickson_invariant(factor_space(s, i),
                                         scan.profiles[t],
                                         factor_matrix(s, i, psi_n)));
  }
  return out;
}

ReflectionExistence reflection_existence(const QuadraticSpace& s) {
  if (!is_unimodular(s))
    throw NotUnimodular("reflection existence needs a unimodular space");
  const Structure& st = s.ur().structure();
  QuadraticSpace std_side =
      conjugate_space(s, st.std_ur(), st.conjugator());
  QuadraticSpace sbar = reduce_space(std_side, st.std_quotient_ur());
  const Ring& QR = sbar.ur().ring();
  const UnitaryRing& qur = sbar.ur();

  ReflectionExistence out;
  std::vector<FactorProfile> profiles;
  profiles.reserve(st.factors().size());
  for (std::size_t i = 0; i < st.factors().size(); ++i) {
    profiles.push_back(classify_factor(st.factors()[i], i));
    ModulePtr fm = factor_space(s, i).module();
    bool populated = fm->size() > 1;
    if (profiles[i].split_orthogonal &&
        profiles[i].parity == FactorParity::Odd && !populated)
      out.empty_odd_factors.push_back(i);
  }
  if (!out.empty_odd_factors.empty()) return out;

  ModulePtr qmod = sbar.module();
  std::optional<ReflectionDatum> total;
  for (std::size_t i = 0; i < st.factors().size(); ++i) {
    const FactorData& fd = st.factors()[i];
    ReflectionDatum factor_datum;
    if (profiles[i].split_orthogonal &&
        profiles[i].parity == FactorParity::Even) {
      // a unit of the Lambda image acts as the datum (0, 1_i, c), so even
      // factors never obstruct, populated or not
      Elem ci = fd.central;
      Elem sci = qur.sigma(ci);
      std::optional<ReflectionDatum> found;
      for (Elem l : qur.lambda().members()) {
        Elem c = rmul3(QR, sci, l, ci);
        if (!ef_inverse(QR, c, ci, sci)) continue;
        found = ReflectionDatum{vec_zero(QR, qmod->E.rows), ci, c};
        break;
      }
      internal_check(found.has_value(),
                     "even split-orthogonal factors carry a Lambda unit");
      factor_datum = *found;
    } else {
      factor_datum = eps_chain_datum(sbar, st, i);
    }
    validate_reflection(sbar, factor_datum);
    total = total ? compose_orthogonal_reflections(sbar, *total, factor_datum)
                  : factor_datum;
  }
  internal_check(total.has_value(), "the quotient has at least one factor");
  internal_check(total->e == QR.one(), "factor data cover the quotient");

  // lift along the radical: rebuild the vector from entry preimages and
  // pick a unit scalar inside the upstairs Lambda coset
  const Ring& R = s.ur().ring();
  const SubquotientRing& Q = *st.quotient();
  Vec rep(total->y.size());
  for (std::size_t j = 0; j < rep.size(); ++j)
    rep[j] = Q.to_parent(total->y[j]);
  Vec y = mat_vec(R, std_side.presentation(), rep);
  internal_check(reduce_vec(Q, y) == total->y, "the lifted vector reduces back");
  std::optional<Elem> c_std;
  for (Elem l : std_side.ur().lambda().members()) {
    Elem c = R.add(std_side.qraw(y), l);
    if (R.is_unit(c)) {
      c_std = c;
      break;
    }
  }
  internal_check(c_std.has_value(), "unit scalars lift along the radical");
  ReflectionDatum lifted{y, R.one(), *c_std};
  validate_reflection(std_side, lifted);
  ReflectionDatum user{y, R.one(),
                       R.mul(R.inverse(st.conjugator()), *c_std)};
  validate_reflection(s, user);
  out.exists = true;
  out.witness = user;
  return out;
}

std::vector<std::size_t> generation_hypothesis_violations(
    const QuadraticSpace& s) {
  if (!is_unimodular(s))
    throw NotUnimodular("the hypothesis check needs a unimodular space");
  const Structure& st = s.ur().structure();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < st.factors().size(); ++i) {
    const FactorData& fd = st.factors()[i];
    FactorProfile p = classify_factor(fd, i);
    bool bad = false;
    if (p.split_orthogonal && p.corner_id == CornerId::F2) bad = true;
    if (p.exchange_pair && p.corner_id == CornerId::F2xF2 &&
        half_multiplicities_one(factor_space(s, i), fd))
      bad = true;
    if (bad) out.push_back(i);
  }
  return out;
}

IndexPrediction predict_reflection_index(const QuadraticSpace& s) {
  if (!is_unimodular(s))
    throw NotUnimodular("the index prediction needs a unimodular space");
  SplitFactorScan scan = scan_split_factors(s);
  IndexPrediction out;
  out.factors = scan.factors;
  out.xi.reserve(scan.factors.size());
  for (const FactorProfile& p : scan.profiles) {
    out.xi.push_back(int(p.n % 2));
    if (p.parity == FactorParity::Odd)
      ++out.odd_count;
    else
      ++out.even_count;
  }
  std::size_t exponent =
      out.even_count + (out.odd_count > 0 ? out.odd_count - 1 : 0);
  out.index = 1ULL << exponent;
  return out;
}

ReflectionSubgroupReport reflection_subgroup(const QuadraticSpace& s,
                                             bool measure) {
  if (!is_unimodular(s))
    throw NotUnimodular(
        "the subgroup classification needs a unimodular space");
  std::vector<std::size_t> bad = generation_hypothesis_violations(s);
  if (!bad.empty())
    throw HypothesisViolation(
        int(bad.front()), "generation hypotheses fail on factor " +
                              std::to_string(bad.front()));
  IndexPrediction pred = predict_reflection_index(s);
  ReflectionExistence ex = reflection_existence(s);
  ReflectionSubgroupReport rep;
  rep.factors = pred.factors;
  rep.xi = pred.xi;
  rep.odd_count = pred.odd_count;
  rep.even_count = pred.even_count;
  if (ex.exists) {
    rep.tag = SubgroupCase::AllOddFactorsPopulated;
    rep.claimed_index = pred.index;
  } else if (!pred.factors.empty()) {
    rep.tag = SubgroupCase::EmptyOddFactor;
  } else {
    rep.tag = SubgroupCase::NoReflection;
  }
  if (measure) {
    std::vector<Mat> group = isometry_group(s);
    std::vector<Mat> gens;
    for (const ReflectionDatum& d : all_reflections(s))
      gens.push_back(reflection_matrix(s, d));
    std::vector<Mat> sub = group_closure(s, gens);
    internal_check(group.size() % sub.size() == 0,
                   "the subgroup order divides the group order");
    rep.measured_index =
        static_cast<unsigned long long>(group.size() / sub.size());
  }
  return rep;
}

}  // namespace qf
