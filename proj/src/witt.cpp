#include "qf/witt.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qf/errors.hpp"
#include "qf/structure.hpp"

namespace qf {
namespace {

void internal_check(bool ok, const char* what) {
  if (!ok) throw Error(std::string("internal invariant failed: ") + what);
}

std::string vec_to_string(const Vec& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

Elem rmul3(const Ring& R, Elem a, Elem b, Elem c) {
  return R.mul(R.mul(a, b), c);
}

Mat mul3(const Ring& R, const Mat& a, const Mat& b, const Mat& c) {
  return mat_mul(R, mat_mul(R, a, b), c);
}

Mat diag3(const Ring& R, const Mat& a, const Mat& b, const Mat& c) {
  return mat_diag(R, mat_diag(R, a, b), c);
}

bool mat_is_zero(const Ring& R, const Mat& m) {
  for (Elem v : m.a)
    if (v != R.zero()) return false;
  return true;
}

std::vector<Vec> sorted_unique(std::vector<Vec> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Working state for one extension problem.  All computation happens on the
/// standardized side (same ring and module, rescaled Gram); matrices of
/// isometries agree between the two sides, reflection scalars convert back
/// by one left multiplication.
struct Setting {
  const Structure& st;
  QuadraticSpace user_space;
  QuadraticSpace space;  // standardized side
  Mat WQ, WS, WV;
  Mat psiN;  // psi * WQ
  ModulePtr Qmod, Smod, Vmod;
  mutable std::vector<std::optional<QuadraticSpace>> factor_cache;

  const Ring& R() const { return space.ur().ring(); }
  const RingPtr& rp() const { return space.ur().ring_ptr(); }

  Vec to_quotient(const Vec& x) const { return reduce_vec(*st.quotient(), x); }

  // quotient-local vector -> factor-local vector
  Vec factor_vec(std::size_t i, const Vec& qvec) const {
    const FactorData& fd = st.factors()[i];
    Vec out(qvec.size());
    for (std::size_t j = 0; j < qvec.size(); ++j)
      out[j] = fd.ring->project(qvec[j]);
    return out;
  }

  // original-ring matrix -> factor-local matrix (entrywise reduction)
  Mat project_mat(std::size_t i, const Mat& m) const {
    const FactorData& fd = st.factors()[i];
    Mat out = m;
    for (Elem& v : out.a) v = fd.ring->project(st.reduce(v));
    return out;
  }

  const QuadraticSpace& factor_space(std::size_t i) const {
    if (!factor_cache[i]) {
      const FactorData& fd = st.factors()[i];
      Mat fe = project_mat(i, space.presentation());
      Mat fb = project_mat(i, space.gram());
      factor_cache[i].emplace(fd.ur, make_module(fd.ring, fe), fb);
    }
    return *factor_cache[i];
  }

  // distinct factor images of a module, optionally ended by the minimal
  // invariant idempotent of the factor
  std::vector<Vec> factor_set(std::size_t i, const ModulePtr& m,
                              bool eps_ended) const {
    const FactorData& fd = st.factors()[i];
    const Ring& FR = *fd.ring;
    std::vector<Vec> out;
    out.reserve(m->elems.size());
    for (const Vec& x : m->elems) {
      Vec f = factor_vec(i, to_quotient(x));
      if (eps_ended) f = vec_scale_right(FR, f, fd.eps);
      out.push_back(std::move(f));
    }
    return sorted_unique(std::move(out));
  }
};

Setting make_setting(const ExtensionProblem& prob) {
  const UnitaryRing& uur = prob.space.ur();
  const Structure& st = uur.structure();
  QuadraticSpace std_side =
      conjugate_space(prob.space, st.std_ur(), st.conjugator());
  const Ring& R = std_side.ur().ring();
  const RingPtr& rp = std_side.ur().ring_ptr();
  Setting s{st,
            prob.space,
            std_side,
            prob.Q,
            prob.S,
            prob.V,
            mat_mul(R, prob.psi, prob.Q),
            make_module(rp, prob.Q),
            make_module(rp, prob.S),
            make_module(rp, prob.V),
            {}};
  s.factor_cache.assign(st.factors().size(), std::nullopt);
  return s;
}

// ---------------------------------------------------------------------------
// condition checking

// Does pairing against V realize every functional on the summand?
bool functionals_reached_for(const Setting& s, const Mat& W) {
  const Ring& R = s.R();
  const UnitaryRing& ur = s.space.ur();
  Mat Ed = sigma_transpose(W, ur.sigma_inv_table());
  Mat L = sigma_transpose(mat_mul(R, s.space.hgram(), W), ur.sigma_inv_table());
  ModulePtr dual = make_module(s.rp(), Ed);
  std::set<Vec> realized;
  for (const Vec& v : s.Vmod->elems) {
    Vec f = mat_vec(R, L, v);
    internal_check(module_contains(*dual, f),
                   "pairing functionals land in the realized dual");
    realized.insert(std::move(f));
  }
  return realized.size() == dual->size();
}

// Corner-level consequence of reaching all functionals: over each factor,
// the idempotent-ended part of V realizes every functional on the
// idempotent-ended part of the summand.
void assert_corner_functionals(const Setting& s, std::size_t i,
                               const ModulePtr& m) {
  const QuadraticSpace& fs = s.factor_space(i);
  std::vector<Vec> qset = s.factor_set(i, m, true);
  std::vector<Vec> vset = s.factor_set(i, s.Vmod, true);
  std::set<std::vector<Elem>> tuples;
  for (const Vec& v : vset) {
    std::vector<Elem> t;
    t.reserve(qset.size());
    for (const Vec& q : qset) t.push_back(fs.h(v, q));
    tuples.insert(std::move(t));
  }
  internal_check(tuples.size() == qset.size(),
                 "corner functionals on the summand are all reached");
}

bool halves_balanced(const Setting& s, const ModulePtr& m) {
  const SubquotientRing& QR = *s.st.quotient();
  for (const FactorData& fd : s.st.factors()) {
    if (fd.kind != FactorKind::Exchange) continue;
    std::array<std::set<Vec>, 2> sides;
    for (const Vec& x : m->elems) {
      Vec q = s.to_quotient(x);
      for (int p = 0; p < 2; ++p)
        sides[p].insert(vec_scale_right(QR, q, fd.central_parts[p]));
    }
    if (sides[0].size() != sides[1].size()) return false;
  }
  return true;
}

bool form_class_zero(const QuadraticSpace& fs, const std::vector<Vec>& set) {
  const Ring& FR = fs.ur().ring();
  const Elem zero_class = fs.lambda_rep(FR.zero());
  for (const Vec& v : set)
    if (fs.qhat(v) != zero_class) return false;
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = a; b < set.size(); ++b)
      if (fs.h(set[a], set[b]) != FR.zero()) return false;
  return true;
}

ConditionReport check_impl(const Setting& s) {
  ConditionReport rep;
  const Ring& R = s.R();
  const std::size_t nf = s.st.factors().size();
  rep.orthogonal_factor_form_nonzero.assign(nf, 1);
  rep.binary_factor_radical_form_nonzero.assign(nf, 1);
  rep.exchange_factor_unobstructed.assign(nf, 1);
  rep.obstruction_witness.assign(nf, std::nullopt);

  rep.functionals_reached =
      functionals_reached_for(s, s.WQ) && functionals_reached_for(s, s.WS);
  if (rep.functionals_reached) {
    for (std::size_t i = 0; i < nf; ++i) {
      assert_corner_functionals(s, i, s.Qmod);
      assert_corner_functionals(s, i, s.Smod);
    }
  }

  rep.displacement_in_v = true;
  for (const Vec& x : s.Qmod->elems) {
    Vec d = vec_sub(R, mat_vec(R, s.psiN, x), x);
    if (!module_contains(*s.Vmod, d)) {
      rep.displacement_in_v = false;
      rep.displacement_witness = x;
      break;
    }
  }

  rep.summands_self_dual =
      halves_balanced(s, s.Qmod) && halves_balanced(s, s.Smod);

  for (std::size_t i = 0; i < nf; ++i) {
    const FactorData& fd = s.st.factors()[i];
    if (fd.kind == FactorKind::Orthogonal) {
      const QuadraticSpace& fs = s.factor_space(i);
      const Ring& FR = *fd.ring;
      std::vector<Vec> vi = s.factor_set(i, s.Vmod, false);
      std::vector<Vec> qi = s.factor_set(i, s.Qmod, false);
      bool q_trivial = true;
      for (const Vec& x : qi)
        if (!vec_is_zero(FR, x)) {
          q_trivial = false;
          break;
        }
      rep.orthogonal_factor_form_nonzero[i] =
          (q_trivial || !form_class_zero(fs, vi)) ? 1 : 0;
      if (fd.corner->size() == 2) {
        const Elem zero_class = fs.lambda_rep(FR.zero());
        bool rad_nonzero = false;
        for (const Vec& v : vi) {
          bool in_rad = true;
          for (const Vec& w : vi)
            if (fs.h(v, w) != FR.zero()) {
              in_rad = false;
              break;
            }
          if (in_rad && fs.qhat(v) != zero_class) {
            rad_nonzero = true;
            break;
          }
        }
        rep.binary_factor_radical_form_nonzero[i] = rad_nonzero ? 1 : 0;
      }
    } else if (fd.kind == FactorKind::Exchange && fd.corner->size() == 4) {
      const QuadraticSpace& fs = s.factor_space(i);
      const Ring& FR = *fd.ring;
      std::vector<Vec> vie = s.factor_set(i, s.Vmod, true);
      std::vector<Vec> vif = s.factor_set(i, s.Vmod, false);
      for (const Vec& z : vie) {
        if (fs.h(z, z) != fd.eps) continue;
        std::vector<Vec> perp;
        for (const Vec& v : vif)
          if (fs.h(z, v) == FR.zero()) perp.push_back(v);
        if (form_class_zero(fs, perp)) {
          rep.exchange_factor_unobstructed[i] = 0;
          rep.obstruction_witness[i] = z;
          break;
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// dual splitting

std::pair<Mat, Mat> dual_split_impl(const UnitaryRing& ur, const ModulePtr& m,
                                    const Mat& T, bool user_facing) {
  const Ring& R = ur.ring();
  const std::size_t k = m->E.rows;
  auto fail = [&](const char* what) {
    if (user_facing) throw NotADecomposition(what);
    internal_check(false, what);
  };
  if (T.rows != k || T.cols != k) {
    if (user_facing)
      throw ShapeMismatch("dual projection must be square of the module rank");
    internal_check(false, "dual projection shape");
  }
  if (user_facing)
    for (Elem v : T.a) R.check(v);
  Mat Ed = sigma_transpose(m->E, ur.sigma_inv_table());
  if (!(mat_mul(R, T, T) == T)) fail("dual projection is not idempotent");
  if (!(mat_mul(R, Ed, T) == T) || !(mat_mul(R, T, Ed) == T))
    fail("dual projection does not act inside the realized dual");
  Mat Tc = mat_sub(R, Ed, T);
  auto annihilated = [&](const Mat& P, const Vec& x) {
    for (std::size_t j = 0; j < k; ++j)
      if (dual_pairing(ur, P.col(j), x) != R.zero()) return false;
    return true;
  };
  std::vector<Vec> first, second;
  for (const Vec& x : m->elems) {
    if (annihilated(Tc, x)) first.push_back(x);
    if (annihilated(T, x)) second.push_back(x);
  }
  if (first.size() * second.size() != m->size())
    fail("annihilator sizes do not multiply up to the module");
  std::unordered_map<Vec, std::pair<Vec, Vec>, VecHash> table;
  table.reserve(m->size());
  for (const Vec& p : first)
    for (const Vec& q : second) {
      Vec sum = vec_add(R, p, q);
      if (!table.emplace(std::move(sum), std::make_pair(p, q)).second)
        fail("annihilator pair sums collide");
    }
  std::vector<Vec> img1, img2;
  img1.reserve(k);
  img2.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto it = table.find(m->E.col(j));
    if (it == table.end())
      fail("a module generator is not split by the annihilator pair");
    img1.push_back(it->second.first);
    img2.push_back(it->second.second);
  }
  Mat P1 = map_from_generator_images(R, m->E, img1);
  Mat P2 = map_from_generator_images(R, m->E, img2);
  internal_check(mat_add(R, P1, P2) == m->E,
                 "split projections sum to the presentation");
  internal_check(mat_mul(R, P1, P1) == P1 && mat_mul(R, P2, P2) == P2 &&
                     mat_is_zero(R, mat_mul(R, P1, P2)) &&
                     mat_is_zero(R, mat_mul(R, P2, P1)),
                 "split projections are orthogonal idempotents");
  return {P1, P2};
}

// ---------------------------------------------------------------------------
// cyclic extension (one aligned generator)

struct CycOut {
  Mat M;
  Mat Minv;
  std::vector<ReflectionDatum> facs;
};

Mat inverse_matrix_of(const QuadraticSpace& sp, const ReflectionDatum& d) {
  return reflection_matrix(sp, reflection_inverse(sp, d));
}

// One- or two-reflection search moving x to y with axes ending in e and
// lying in the given module.  Returns nothing when the search space is
// exhausted.
std::optional<CycOut> cyclic_attempt(const Setting& s, const ModulePtr& vm,
                                     Elem e, const Vec& x, const Vec& y) {
  const QuadraticSpace& sp = s.space;
  const Ring& R = s.R();
  if (auto td = transvection_datum(sp, x, y, e)) {
    internal_check(module_contains(*vm, td->y),
                   "transvection axis lies in the displacement module");
    Mat M = reflection_matrix(sp, *td);
    internal_check(mat_vec(R, M, x) == y,
                   "transvection carries the generator to its target");
    return CycOut{M, inverse_matrix_of(sp, *td), {*td}};
  }
  const Elem se = sp.ur().sigma(e);
  const Elem hyyx = sp.h(y, vec_sub(R, y, x));
  std::vector<Vec> zset;
  zset.reserve(vm->elems.size());
  for (const Vec& v : vm->elems) zset.push_back(vec_scale_right(R, v, e));
  zset = sorted_unique(std::move(zset));
  for (const Vec& z : zset) {
    const Elem hzx = sp.h(z, x);
    if (hzx == R.zero()) continue;
    const Elem hyz = sp.h(y, z);
    if (hyz == R.zero()) continue;
    std::vector<Elem> cs;
    for (Elem lam : sp.ur().lambda().members())
      cs.push_back(R.add(sp.beta(z, z), rmul3(R, se, lam, e)));
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    for (Elem c : cs) {
      auto cinv = ef_inverse(R, c, e, se);
      if (!cinv) continue;
      Elem phi = R.add(hyyx, rmul3(R, hyz, *cinv, hzx));
      if (!ef_inverse(R, phi, e, se)) continue;
      // the second axis joins the reflected generator to the target
      Vec w = vec_sub(R, vec_sub(R, x, y),
                      vec_scale_right(R, z, R.mul(*cinv, hzx)));
      internal_check(module_contains(*vm, w),
                     "second reflection axis lies in the displacement module");
      ReflectionDatum rz{z, e, c};
      ReflectionDatum rw{w, e, phi};
      Mat M = mat_mul(R, reflection_matrix(sp, rw), reflection_matrix(sp, rz));
      internal_check(mat_vec(R, M, x) == y,
                     "reflection pair carries the generator to its target");
      Mat Minv =
          mat_mul(R, inverse_matrix_of(sp, rz), inverse_matrix_of(sp, rw));
      return CycOut{M, Minv, {rw, rz}};
    }
  }
  return std::nullopt;
}

// Moves the cyclic summand presented by WQ onto its image under psiN using
// reflections with axes in the WV module, all ending in the lifted
// idempotent of factor fi.
CycOut cyclic_impl(const Setting& s, const Mat& WQ, const Mat& WV,
                   const Mat& psiN, std::size_t fi) {
  const QuadraticSpace& sp = s.space;
  const Ring& R = s.R();
  const Mat& E = sp.presentation();
  const FactorData& fd = s.st.factors()[fi];
  const Elem e = fd.lifts[0];
  ModulePtr qm = make_module(s.rp(), WQ);
  if (qm->size() == 1) return CycOut{E, E, {}};
  ModulePtr vm = make_module(s.rp(), WV);
  std::optional<Vec> gen;
  for (const Vec& x0 : qm->elems) {
    if (vec_scale_right(R, x0, e) != x0) continue;
    std::set<Vec> span;
    for (Elem a = 0; a < R.size(); ++a)
      span.insert(vec_scale_right(R, x0, a));
    if (span.size() == qm->size()) {
      gen = x0;
      break;
    }
  }
  if (!gen)
    throw PreconditionViolation(
        "summand is not cyclic over the chosen factor idempotent");
  const Vec x = *gen;
  const Vec y = mat_vec(R, psiN, x);
  if (x == y) return CycOut{E, E, {}};
  if (auto out = cyclic_attempt(s, vm, e, x, y)) return *out;
  if (!(fd.kind == FactorKind::Exchange && fd.corner->size() == 4))
    throw SearchExhausted(
        "no reflection pair carries the generator to its target");

  // Four-element exchange corner: align the generator modulo the radical
  // with a pair of corner reflections first, then finish as above.
  const QuadraticSpace& fs = s.factor_space(fi);
  const Ring& FR = *fd.ring;
  const Elem eps = fd.eps;
  const Elem se = sp.ur().sigma(e);
  Vec xb = s.factor_vec(fi, s.to_quotient(x));
  Vec yb = s.factor_vec(fi, s.to_quotient(y));
  std::vector<Vec> vie = s.factor_set(fi, vm, true);
  const Elem want_class = fs.lambda_rep(eps);
  auto frefl = [&](const Vec& axis, const Vec& v) {
    return vec_sub(FR, v,
                   vec_scale_right(FR, axis, FR.mul(eps, fs.h(axis, v))));
  };
  std::optional<std::pair<Vec, Vec>> chosen;
  for (const Vec& f : vie) {
    if (fs.qhat(f) != want_class) continue;
    for (const Vec& g : vie) {
      if (fs.qhat(g) != want_class) continue;
      if (frefl(f, frefl(g, xb)) == yb) {
        chosen = {f, g};
        break;
      }
    }
    if (chosen) break;
  }
  if (!chosen)
    throw SearchExhausted("no corner reflection pair aligns the generator");
  std::vector<Vec> zset;
  zset.reserve(vm->elems.size());
  for (const Vec& v : vm->elems) zset.push_back(vec_scale_right(R, v, e));
  zset = sorted_unique(std::move(zset));
  auto embed_vec = [&](const Vec& fvec) {
    Vec out(fvec.size());
    for (std::size_t j = 0; j < fvec.size(); ++j)
      out[j] = fd.factor_to_quotient(fvec[j]);
    return out;
  };
  auto lift_axis = [&](const Vec& fbar) {
    Vec want = embed_vec(fbar);
    for (const Vec& zc : zset)
      if (s.to_quotient(zc) == want) return zc;
    internal_check(false, "corner axis lifts into the displacement module");
    return Vec{};
  };
  auto lift_scalar = [&](const Vec& axis) {
    Elem b = sp.beta(axis, axis);
    Elem want = fd.factor_to_quotient(eps);
    std::vector<Elem> cs;
    for (Elem lam : sp.ur().lambda().members())
      cs.push_back(R.add(b, rmul3(R, se, lam, e)));
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    for (Elem c : cs)
      if (s.st.reduce(c) == want) return c;
    internal_check(false,
                   "corner scalar lifts to an invertible reflection scalar");
    return Elem{};
  };
  Vec faxis = lift_axis(chosen->first);
  Vec gaxis = lift_axis(chosen->second);
  ReflectionDatum rf{faxis, e, lift_scalar(faxis)};
  ReflectionDatum rg{gaxis, e, lift_scalar(gaxis)};
  validate_reflection(sp, rf);
  validate_reflection(sp, rg);
  Mat Mf = reflection_matrix(sp, rf);
  Mat Mg = reflection_matrix(sp, rg);
  Vec x2 = mat_vec(R, Mf, mat_vec(R, Mg, x));
  internal_check(s.to_quotient(x2) == s.to_quotient(y),
                 "corner pair aligns the generator modulo the radical");
  auto fin = cyclic_attempt(s, vm, e, x2, y);
  if (!fin)
    throw SearchExhausted("no reflection pair completes the aligned extension");
  Mat M = mul3(R, fin->M, Mf, Mg);
  internal_check(mat_vec(R, M, x) == y,
                 "assembled product carries the generator to its target");
  Mat Minv = mul3(R, inverse_matrix_of(sp, rg), inverse_matrix_of(sp, rf),
                  fin->Minv);
  std::vector<ReflectionDatum> facs = fin->facs;
  facs.push_back(rf);
  facs.push_back(rg);
  return CycOut{M, Minv, std::move(facs)};
}

// ---------------------------------------------------------------------------
// induction over the summand

struct RecOut {
  Mat M;
  Mat Minv;
  std::vector<ReflectionDatum> facs;
};

RecOut rec(const Setting& s, const Mat& WQ, const Mat& psiN, const Mat& WV) {
  const QuadraticSpace& sp = s.space;
  const Ring& R = s.R();
  const Mat& E = sp.presentation();
  const std::size_t k = E.rows;
  ModulePtr qm = make_module(s.rp(), WQ);
  if (qm->size() == 1) return RecOut{E, E, {}};
  bool identity = true;
  for (const Vec& x : qm->elems)
    if (mat_vec(R, psiN, x) != x) {
      identity = false;
      break;
    }
  if (identity) return RecOut{E, E, {}};
  ModulePtr vm = make_module(s.rp(), WV);

  // a factor where the summand has nonzero reduction
  std::size_t fi = s.st.factors().size();
  for (std::size_t i = 0; i < s.st.factors().size() && fi >= s.st.factors().size(); ++i) {
    const Ring& FR = *s.st.factors()[i].ring;
    for (const Vec& x : qm->elems)
      if (!vec_is_zero(FR, s.factor_vec(i, s.to_quotient(x)))) {
        fi = i;
        break;
      }
  }
  internal_check(fi < s.st.factors().size(),
                 "nonzero summand has a nonzero reduction");
  const FactorData& fd = s.st.factors()[fi];
  const Elem e = fd.lifts[0];

  // pairing map on the summand and a section of it inside V
  Mat L = sigma_transpose(mat_mul(R, sp.hgram(), WQ), sp.ur().sigma_inv_table());
  Mat Ed = sigma_transpose(WQ, sp.ur().sigma_inv_table());
  std::vector<Vec> scols(k);
  for (std::size_t j = 0; j < k; ++j) {
    Vec g = Ed.col(j);
    if (vec_is_zero(R, g)) {
      scols[j] = vec_zero(R, k);
      continue;
    }
    bool found = false;
    for (const Vec& v : vm->elems)
      if (mat_vec(R, L, v) == g) {
        scols[j] = v;
        found = true;
        break;
      }
    internal_check(found,
                   "every dual generator is reached from the displacement module");
  }
  Mat smat = mat_from_cols(k, scols);
  Mat PiW = mul3(R, smat, L, WV);
  Mat WR = mat_sub(R, WV, PiW);
  internal_check(mat_mul(R, PiW, PiW) == PiW,
                 "dual-reaching projection is idempotent");
  internal_check(mat_is_zero(R, mat_mul(R, PiW, WR)) &&
                     mat_is_zero(R, mat_mul(R, WR, PiW)),
                 "displacement module splits against the dual-reaching part");

  // reduction target for the displacement vector that will carry the peeled
  // summand
  std::optional<Vec> target;  // factor-local
  {
    const QuadraticSpace& fs = s.factor_space(fi);
    const Ring& FR = *fd.ring;
    Mat PiWf = s.project_mat(fi, PiW);
    const Elem zero_class = fs.lambda_rep(FR.zero());
    if (fd.kind == FactorKind::Orthogonal) {
      std::vector<Vec> vie = s.factor_set(fi, vm, true);
      std::optional<Vec> xh;
      if (fd.corner->size() == 2) {
        for (const Vec& v : vie) {
          bool in_rad = true;
          for (const Vec& w : vie)
            if (fs.h(v, w) != FR.zero()) {
              in_rad = false;
              break;
            }
          if (in_rad && fs.qhat(v) != zero_class) {
            xh = v;
            break;
          }
        }
      } else {
        for (const Vec& v : vie)
          if (fs.qhat(v) != zero_class) {
            xh = v;
            break;
          }
      }
      internal_check(xh.has_value(),
                     "split-orthogonal factor provides a form-carrying vector");
      Vec wh = mat_vec(FR, PiWf, *xh);
      if (!vec_is_zero(FR, wh)) target = wh;
    } else if (fd.kind == FactorKind::Exchange && fd.corner->size() == 4) {
      std::vector<Vec> vie = s.factor_set(fi, vm, true);
      std::vector<Vec> qie = s.factor_set(fi, qm, true);
      std::optional<Vec> zh;
      for (const Vec& z : vie) {
        if (fs.qhat(z) != zero_class) continue;
        for (const Vec& q : qie)
          if (fs.h(q, z) == fd.eps) {
            zh = z;
            break;
          }
        if (zh) break;
      }
      internal_check(zh.has_value(),
                     "exchange factor provides an isotropic pairing vector");
      Vec wh = mat_vec(FR, PiWf, *zh);
      internal_check(!vec_is_zero(FR, wh),
                     "exchange pairing vector survives the dual-reaching projection");
      target = wh;
    }
  }

  // lift: a vector of the dual-reaching part spanning a copy of the factor
  // column module, with the chosen reduction when one was selected
  const SubquotientRing& QR = *s.st.quotient();
  ModulePtr wmod = make_module(s.rp(), PiW);
  std::set<Elem> espan;
  for (Elem a = 0; a < R.size(); ++a) espan.insert(R.mul(e, a));
  const std::size_t e_size = espan.size();
  const Elem ebar = s.st.reduce(e);
  std::set<Elem> etop;
  for (Elem a = 0; a < QR.size(); ++a) etop.insert(QR.mul(ebar, a));
  const std::size_t top_size = etop.size();
  std::optional<Vec> wtarget;  // quotient-embedded
  if (target) {
    Vec emb(target->size());
    for (std::size_t j = 0; j < emb.size(); ++j)
      emb[j] = fd.factor_to_quotient((*target)[j]);
    std::set<Vec> tspan;
    for (Elem a = 0; a < QR.size(); ++a)
      tspan.insert(vec_scale_right(QR, emb, a));
    internal_check(tspan.size() == top_size,
                   "reduction target generates a full simple top");
    wtarget = std::move(emb);
  }
  std::optional<Vec> wlift;
  for (const Vec& w0 : wmod->elems) {
    Vec w = vec_scale_right(R, w0, e);
    if (vec_is_zero(R, w)) continue;
    Vec wq = s.to_quotient(w);
    if (wtarget) {
      if (wq != *wtarget) continue;
    } else {
      if (vec_is_zero(QR, wq)) continue;
      std::set<Vec> tspan;
      for (Elem a = 0; a < QR.size(); ++a)
        tspan.insert(vec_scale_right(QR, wq, a));
      if (tspan.size() != top_size) continue;
    }
    std::set<Vec> span;
    for (Elem a = 0; a < R.size(); ++a) span.insert(vec_scale_right(R, w, a));
    if (span.size() != e_size) continue;
    wlift = std::move(w);
    break;
  }
  internal_check(wlift.has_value(),
                 "dual-reaching module contains a cyclic lift of the target");
  const Vec& w = *wlift;

  // rank-one projection of the realized dual onto the pairing image of w
  Vec f = mat_vec(R, L, w);
  internal_check(!vec_is_zero(R, f),
                 "lifted generator pairs nontrivially with the summand");
  std::optional<Vec> rvec;
  {
    std::unordered_map<Elem, Vec> reach;
    std::vector<Elem> frontier{R.zero()};
    reach.emplace(R.zero(), vec_zero(R, k));
    std::optional<Elem> found;
    while (!frontier.empty() && !found) {
      std::vector<Elem> next;
      for (Elem sc : frontier) {
        Vec rbase = reach[sc];
        for (std::size_t b = 0; b < k && !found; ++b) {
          if (f[b] == R.zero()) continue;
          for (Elem a = 0; a < R.size(); ++a) {
            Elem s2 = R.add(sc, R.mul(a, f[b]));
            if (reach.count(s2)) continue;
            Vec r2 = rbase;
            r2[b] = R.add(r2[b], a);
            reach.emplace(s2, r2);
            next.push_back(s2);
            if (vec_scale_right(R, f, s2) == f) {
              found = s2;
              break;
            }
          }
        }
        if (found) break;
      }
      frontier = std::move(next);
    }
    if (!found)
      throw SearchExhausted(
          "no scalar in the pairing ideal fixes the dual generator");
    rvec = reach[*found];
  }
  Vec rowN = vec_mat(R, *rvec, Ed);
  Mat T = mat_outer(R, f, rowN);
  internal_check(mat_mul(R, T, T) == T, "rank-one dual projection is idempotent");
  internal_check(mat_mul(R, Ed, T) == T && mat_mul(R, T, Ed) == T,
                 "rank-one dual projection is normalized");
  internal_check(mat_vec(R, T, f) == f,
                 "rank-one dual projection fixes its generator");

  auto split = dual_split_impl(sp.ur(), qm, T, false);
  const Mat& PiQ1 = split.first;
  const Mat& PiQ2 = split.second;
  internal_check(make_module(s.rp(), PiQ1)->size() == e_size,
                 "peeled summand is cyclic of the expected size");

  RecOut sub = rec(s, PiQ2, mat_mul(R, psiN, PiQ2), WV);

  Mat PiVp = mul3(R, mat_mul(R, smat, T), L, WV);
  Mat WVR = mat_add(R, PiVp, WR);
  internal_check(mat_mul(R, WVR, WVR) == WVR,
                 "restricted displacement module is a summand");
  Mat psiC = mul3(R, sub.Minv, psiN, PiQ1);
  CycOut cyc = cyclic_impl(s, PiQ1, WVR, psiC, fi);
  Mat M = mat_mul(R, sub.M, cyc.M);
  Mat Minv = mat_mul(R, cyc.Minv, sub.Minv);
  std::vector<ReflectionDatum> facs = std::move(sub.facs);
  facs.insert(facs.end(), cyc.facs.begin(), cyc.facs.end());
  for (const Vec& x : qm->elems)
    internal_check(mat_vec(R, M, x) == mat_vec(R, psiN, x),
                   "assembled product agrees with psi on the summand");
  return RecOut{std::move(M), std::move(Minv), std::move(facs)};
}

// ---------------------------------------------------------------------------
// result assembly and verification

std::vector<ReflectionDatum> convert_factors(
    const Setting& s, const std::vector<ReflectionDatum>& facs) {
  const Ring& R = s.R();
  const Elem vinv = R.inverse(s.st.conjugator());
  std::vector<ReflectionDatum> out;
  out.reserve(facs.size());
  for (const ReflectionDatum& d : facs)
    out.push_back(ReflectionDatum{d.y, d.e, R.mul(vinv, d.c)});
  return out;
}

void verify_result(const ExtensionProblem& prob, const ExtensionResult& res) {
  const Ring& R = prob.space.ur().ring();
  internal_check(check_isometry(prob.space, prob.space, res.phi),
                 "extension is an isometry of the whole space");
  Mat psiN = mat_mul(R, prob.psi, prob.Q);
  ModulePtr qm = make_module(prob.space.ur().ring_ptr(), prob.Q);
  for (const Vec& x : qm->elems)
    internal_check(mat_vec(R, res.phi, x) == mat_vec(R, psiN, x),
                   "extension restricts to psi on the summand");
  ModulePtr vm = make_module(prob.space.ur().ring_ptr(), prob.V);
  for (const Vec& x : prob.space.module()->elems)
    internal_check(
        module_contains(*vm, vec_sub(R, mat_vec(R, res.phi, x), x)),
        "extension displaces every vector inside V");
  if (res.factors) {
    Mat prod = prob.space.presentation();
    for (const ReflectionDatum& d : *res.factors) {
      validate_reflection(prob.space, d);
      internal_check(module_contains(*vm, d.y), "reflection axes lie inside V");
      prod = mat_mul(R, prod, reflection_matrix(prob.space, d));
    }
    internal_check(prod == res.phi, "reflection product equals the extension");
  }
}

// ---------------------------------------------------------------------------
// augmentation routes

// Is the functional module of the idempotent-ended part of V over the
// four-element exchange corner free of rank one?
bool factor_functionals_free(const Setting& s, std::size_t i) {
  const FactorData& fd = s.st.factors()[i];
  const QuadraticSpace& fs = s.factor_space(i);
  const Ring& FR = *fd.ring;
  std::vector<Vec> vie = s.factor_set(i, s.Vmod, true);
  std::set<std::vector<Elem>> tuples;
  for (const Vec& v : vie) {
    std::vector<Elem> t;
    t.reserve(vie.size());
    for (const Vec& w : vie) t.push_back(fs.h(v, w));
    tuples.insert(std::move(t));
  }
  if (tuples.size() != fd.corner->size()) return false;
  for (const auto& t : tuples) {
    std::set<std::vector<Elem>> scaled;
    for (Elem a = 0; a < fd.corner->size(); ++a) {
      Elem saf = fd.ur.sigma(fd.corner->to_parent(a));
      std::vector<Elem> ta(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) ta[j] = FR.mul(saf, t[j]);
      scaled.insert(std::move(ta));
    }
    if (scaled.size() == fd.corner->size()) return true;
  }
  return false;
}

// Adjoins a rank-two space carrying one extra functional generator per
// obstructed exchange factor, extends there, and restricts back.
Mat t_adjoin_extend(const ExtensionProblem& prob, const Setting& s) {
  const Ring& R = prob.space.ur().ring();
  const std::size_t k = prob.space.rank();
  const SubquotientRing& QR = *s.st.quotient();
  Elem aq = QR.zero();
  for (std::size_t i = 0; i < s.st.factors().size(); ++i) {
    const FactorData& fd = s.st.factors()[i];
    if (fd.kind == FactorKind::Exchange && fd.corner->size() == 4 &&
        factor_functionals_free(s, i))
      aq = QR.add(aq, fd.factor_to_quotient(fd.delta));
  }
  const Elem a = QR.to_parent(aq);
  Mat tgram = mat_zero(R, 2, 2);
  tgram.at(0, 1) = R.one();
  tgram.at(1, 1) = a;
  tgram = mat_scale_left(R, R.inverse(s.st.conjugator()), tgram);
  QuadraticSpace tspace(prob.space.ur(),
                        make_module(prob.space.ur().ring_ptr(),
                                    mat_identity(R, 2)),
                        tgram);
  QuadraticSpace bigger = orthogonal_sum(prob.space, tspace);
  Mat zonly = mat_zero(R, 2, 2);
  zonly.at(0, 0) = R.one();
  Mat zw = mat_zero(R, 2, 2);
  zw.at(0, 0) = R.one();
  zw.at(1, 0) = R.one();
  ExtensionProblem aug{bigger, mat_diag(R, prob.Q, zonly),
                       mat_diag(R, prob.S, zonly), mat_diag(R, prob.V, zw),
                       mat_diag(R, prob.psi, zonly)};
  validate_problem(aug);
  Setting s2 = make_setting(aug);
  ConditionReport rep2 = check_impl(s2);
  internal_check(rep2.all(),
                 "augmented problem satisfies the extension hypotheses");
  RecOut out = rec(s2, s2.WQ, s2.psiN, s2.WV);
  internal_check(mat_is_zero(R, mat_block(out.M, k, 0, 2, k)),
                 "augmented extension preserves the original space");
  return mat_block(out.M, 0, 0, k, k);
}

// Adjoins hyperbolic planes restoring self-duality of the summands, extends
// there (possibly after a second augmentation), and restricts back.
Mat hyperbolic_adjoin_extend(const ExtensionProblem& prob, const Setting& s) {
  const Ring& R = prob.space.ur().ring();
  const std::size_t k = prob.space.rank();
  const SubquotientRing& QR = *s.st.quotient();
  std::vector<char> rad(R.size());
  for (Elem x = 0; x < R.size(); ++x) rad[x] = s.st.in_radical(x) ? 1 : 0;
  auto exact_log = [](std::size_t val, std::size_t base) {
    std::size_t m = 0, cur = 1;
    while (cur < val) {
      cur *= base;
      ++m;
    }
    internal_check(cur == val, "half sizes are powers of the simple size");
    return m;
  };
  std::vector<Elem> lifted;
  for (const FactorData& fd : s.st.factors()) {
    if (fd.kind != FactorKind::Exchange) continue;
    Elem d1 = fd.factor_to_quotient(fd.delta);
    Elem d2 = fd.factor_to_quotient(fd.ur.sigma(fd.delta));
    std::array<Elem, 2> half_idem =
        (QR.mul(d1, fd.central_parts[0]) == d1) ? std::array<Elem, 2>{d1, d2}
                                                : std::array<Elem, 2>{d2, d1};
    internal_check(
        QR.mul(half_idem[0], fd.central_parts[0]) == half_idem[0] &&
            QR.mul(half_idem[1], fd.central_parts[1]) == half_idem[1],
        "exchange halves separate into the central parts");
    std::array<std::size_t, 2> mult{};
    for (int p = 0; p < 2; ++p) {
      std::set<Vec> side;
      for (const Vec& x : s.Qmod->elems)
        side.insert(
            vec_scale_right(QR, s.to_quotient(x), fd.central_parts[p]));
      std::set<Elem> simple;
      for (Elem q = 0; q < QR.size(); ++q)
        simple.insert(QR.mul(half_idem[p], q));
      mult[p] = exact_log(side.size(), simple.size());
    }
    if (mult[0] == mult[1]) continue;
    const int low = mult[0] < mult[1] ? 0 : 1;
    const std::size_t deficit =
        (low == 0) ? mult[1] - mult[0] : mult[0] - mult[1];
    const Elem lift = lift_idempotent(R, QR.to_parent(half_idem[low]), rad);
    for (std::size_t c = 0; c < deficit; ++c) lifted.push_back(lift);
  }
  internal_check(!lifted.empty(),
                 "self-duality failure produces a positive deficit");
  const std::size_t m = lifted.size();
  Mat EU = mat_zero(R, m, m);
  for (std::size_t j = 0; j < m; ++j) EU.at(j, j) = lifted[j];
  QuadraticSpace hyp = hyperbolic_space(
      prob.space.ur(), make_module(prob.space.ur().ring_ptr(), EU));
  QuadraticSpace bigger = orthogonal_sum(prob.space, hyp);
  Mat zm = mat_zero(R, m, m);
  Mat EUd = sigma_transpose(EU, prob.space.ur().sigma_inv_table());
  ExtensionProblem aug{bigger, diag3(R, prob.Q, EU, zm),
                       diag3(R, prob.S, EU, zm), diag3(R, prob.V, zm, EUd),
                       diag3(R, prob.psi, EU, zm)};
  validate_problem(aug);
  Setting s2 = make_setting(aug);
  ConditionReport rep2 = check_impl(s2);
  internal_check(rep2.functionals_reached && rep2.displacement_in_v &&
                     rep2.summands_self_dual,
                 "augmented problem restores self-duality");
  Mat phi2 =
      rep2.all() ? rec(s2, s2.WQ, s2.psiN, s2.WV).M : t_adjoin_extend(aug, s2);
  internal_check(mat_is_zero(R, mat_block(phi2, k, 0, 2 * m, k)),
                 "augmented extension preserves the original space");
  return mat_block(phi2, 0, 0, k, k);
}

}  // namespace

// ---------------------------------------------------------------------------
// public interface

bool ConditionReport::all() const {
  auto allv = [](const std::vector<char>& v) {
    for (char c : v)
      if (!c) return false;
    return true;
  };
  return functionals_reached && displacement_in_v && summands_self_dual &&
         allv(orthogonal_factor_form_nonzero) &&
         allv(binary_factor_radical_form_nonzero) &&
         allv(exchange_factor_unobstructed);
}

std::string ConditionReport::describe() const {
  std::ostringstream os;
  os << "functionals on Q and S reached from V: "
     << (functionals_reached ? "yes" : "NO") << '\n';
  os << "psi displaces Q inside V: " << (displacement_in_v ? "yes" : "NO");
  if (displacement_witness)
    os << "  [witness x = " << vec_to_string(*displacement_witness) << ']';
  os << '\n';
  os << "Q and S self-dual: " << (summands_self_dual ? "yes" : "NO") << '\n';
  for (std::size_t i = 0; i < orthogonal_factor_form_nonzero.size(); ++i) {
    os << "factor " << i
       << ": form-on-V: " << (orthogonal_factor_form_nonzero[i] ? "yes" : "NO")
       << ", radical-form: "
       << (binary_factor_radical_form_nonzero[i] ? "yes" : "NO")
       << ", exchange-unobstructed: "
       << (exchange_factor_unobstructed[i] ? "yes" : "NO");
    if (i < obstruction_witness.size() && obstruction_witness[i])
      os << "  [witness z = " << vec_to_string(*obstruction_witness[i]) << ']';
    os << '\n';
  }
  return os.str();
}

void validate_problem(const ExtensionProblem& prob) {
  const Ring& R = prob.space.ur().ring();
  const std::size_t k = prob.space.rank();
  auto shape = [&](const Mat& m, const char* what) {
    if (m.rows != k || m.cols != k)
      throw ShapeMismatch(std::string(what) +
                          " must be square of the space rank");
    for (Elem v : m.a) R.check(v);
  };
  shape(prob.Q, "Q projection");
  shape(prob.S, "S projection");
  shape(prob.V, "V projection");
  shape(prob.psi, "psi");
  validate_summand(prob.space, prob.Q);
  validate_summand(prob.space, prob.S);
  validate_summand(prob.space, prob.V);
  Mat psiN = mat_mul(R, prob.psi, prob.Q);
  QuadraticSpace rq = restrict_to_summand(prob.space, prob.Q);
  QuadraticSpace rs = restrict_to_summand(prob.space, prob.S);
  if (!check_isometry(rq, rs, psiN))
    throw PreconditionViolation(
        "psi does not restrict to an isometry from Q onto S");
}

ConditionReport check_conditions(const ExtensionProblem& prob) {
  validate_problem(prob);
  Setting s = make_setting(prob);
  return check_impl(s);
}

bool f2f2_obstruction(const QuadraticSpace& s, const std::vector<Vec>& v_elems,
                      const Vec& x, const Vec& z) {
  const UnitaryRing& ur = s.ur();
  const Ring& R = ur.ring();
  const Elem one = R.one();
  std::vector<Elem> nontrivial;
  for (Elem a = 0; a < R.size(); ++a)
    if (R.mul(a, a) == a && a != R.zero() && a != one) nontrivial.push_back(a);
  if (R.size() != 4 || ur.u() != one || nontrivial.size() != 2 ||
      ur.sigma(nontrivial[0]) != nontrivial[1])
    throw WrongFactorType(
        "expected the four-element ring whose involution exchanges the two "
        "idempotent halves, with u = 1");
  if (x.size() != s.rank() || z.size() != s.rank())
    throw ShapeMismatch("vector length does not match the space rank");
  if (!module_contains(*s.module(), x))
    throw NotInModule("x does not lie in the module");
  std::set<Vec> vset(v_elems.begin(), v_elems.end());
  for (const Vec& v : v_elems)
    if (v.size() != s.rank() || !module_contains(*s.module(), v))
      throw PreconditionViolation("v_elems must lie in the module");
  for (const Vec& v : vset) {
    for (const Vec& w : vset)
      if (!vset.count(vec_add(R, v, w)))
        throw PreconditionViolation("v_elems must be closed under addition");
    for (Elem a = 0; a < R.size(); ++a)
      if (!vset.count(vec_scale_right(R, v, a)))
        throw PreconditionViolation("v_elems must be closed under scalars");
  }
  if (!vset.count(z))
    throw PreconditionViolation("z must be one of v_elems");
  if (s.h(x, z) != one)
    throw PreconditionViolation("h(x, z) must equal 1");

  const Elem zero_class = s.lambda_rep(R.zero());
  bool no_trivial_partner = true;
  for (const Vec& zp : v_elems)
    if (s.h(x, zp) == one && s.qhat(zp) == zero_class) {
      no_trivial_partner = false;
      break;
    }

  bool perp_degenerate = (s.h(z, z) == one);
  if (perp_degenerate) {
    std::vector<Vec> perp;
    for (const Vec& v : vset)
      if (s.h(z, v) == R.zero()) perp.push_back(v);
    for (const Vec& v : perp)
      if (s.qhat(v) != zero_class) {
        perp_degenerate = false;
        break;
      }
    if (perp_degenerate) {
      for (std::size_t a = 0; a < perp.size() && perp_degenerate; ++a)
        for (std::size_t b = a; b < perp.size(); ++b)
          if (s.h(perp[a], perp[b]) != R.zero()) {
            perp_degenerate = false;
            break;
          }
    }
  }
  internal_check(no_trivial_partner == perp_degenerate,
                 "the two obstruction criteria agree");
  if (no_trivial_partner) {
    // obstruction forces the functionals of V to form a free rank-one module
    std::vector<Vec> sorted_v(vset.begin(), vset.end());
    std::set<std::vector<Elem>> tuples;
    for (const Vec& v : sorted_v) {
      std::vector<Elem> t;
      t.reserve(sorted_v.size());
      for (const Vec& w : sorted_v) t.push_back(s.h(v, w));
      tuples.insert(std::move(t));
    }
    bool free_cyclic = false;
    if (tuples.size() == R.size()) {
      for (const auto& t : tuples) {
        std::set<std::vector<Elem>> scaled;
        for (Elem a = 0; a < R.size(); ++a) {
          std::vector<Elem> ta(t.size());
          for (std::size_t j = 0; j < t.size(); ++j)
            ta[j] = R.mul(ur.sigma(a), t[j]);
          scaled.insert(std::move(ta));
        }
        if (scaled.size() == R.size()) {
          free_cyclic = true;
          break;
        }
      }
    }
    internal_check(free_cyclic,
                   "obstruction forces a free rank-one functional module");
  }
  return no_trivial_partner;
}

ExtensionResult extend_cyclic(const ExtensionProblem& prob,
                              std::size_t factor) {
  validate_problem(prob);
  Setting s = make_setting(prob);
  if (factor >= s.st.factors().size())
    throw DomainViolation("factor index out of range");
  ConditionReport rep = check_impl(s);
  if (!rep.all()) throw ConditionViolation(rep.describe());
  CycOut out = cyclic_impl(s, s.WQ, s.WV, s.psiN, factor);
  ExtensionResult res{out.M, convert_factors(s, out.facs), "witt-I"};
  verify_result(prob, res);
  return res;
}

ExtensionResult extend_with_reflections(const ExtensionProblem& prob) {
  validate_problem(prob);
  Setting s = make_setting(prob);
  ConditionReport rep = check_impl(s);
  if (!rep.all()) throw ConditionViolation(rep.describe());
  RecOut out = rec(s, s.WQ, s.psiN, s.WV);
  ExtensionResult res{out.M, convert_factors(s, out.facs), "witt-I"};
  verify_result(prob, res);
  return res;
}

ExtensionResult extend(const ExtensionProblem& prob) {
  validate_problem(prob);
  Setting s = make_setting(prob);
  ConditionReport rep = check_impl(s);
  if (!rep.functionals_reached || !rep.displacement_in_v)
    throw PreconditionViolation("extension hypotheses fail:\n" +
                                rep.describe());
  if (rep.all()) {
    RecOut out = rec(s, s.WQ, s.psiN, s.WV);
    ExtensionResult res{out.M, convert_factors(s, out.facs), "witt-I"};
    verify_result(prob, res);
    return res;
  }
  Mat phi = rep.summands_self_dual ? t_adjoin_extend(prob, s)
                                   : hyperbolic_adjoin_extend(prob, s);
  ExtensionResult res{std::move(phi), std::nullopt, "witt-II-augmented"};
  verify_result(prob, res);
  return res;
}

Mat cancel(const QuadraticSpace& base, const QuadraticSpace& s1,
           const QuadraticSpace& s2, const Mat& iso) {
  const UnitaryRing& ur = base.ur();
  const Ring& R = ur.ring();
  if (!ur.same(s1.ur()) || !ur.same(s2.ur()))
    throw RingMismatch("summands must live over the unitary ring of the base");
  if (!is_unimodular(base))
    throw NotUnimodularBase("base space must be unimodular");
  QuadraticSpace z1 = orthogonal_sum(base, s1);
  QuadraticSpace z2 = orthogonal_sum(base, s2);
  const std::size_t kb = base.rank(), k1 = s1.rank(), k2 = s2.rank();
  if (iso.rows != kb + k2 || iso.cols != kb + k1)
    throw ShapeMismatch("isometry shape does not match the two sums");
  for (Elem v : iso.a) R.check(v);
  if (!check_isometry(z1, z2, iso))
    throw PreconditionViolation(
        "the given matrix is not an isometry between the sums");
  Mat un = mul3(R, z2.presentation(), iso, z1.presentation());
  std::unordered_map<Vec, Vec, VecHash> pre;
  pre.reserve(z1.size());
  for (const Vec& x : z1.module()->elems) pre.emplace(mat_vec(R, un, x), x);
  std::vector<Vec> gens;
  gens.reserve(kb + k2);
  for (std::size_t j = 0; j < kb + k2; ++j) {
    auto it = pre.find(z2.presentation().col(j));
    internal_check(it != pre.end(), "isometry is onto the target module");
    gens.push_back(it->second);
  }
  Mat uinv = map_from_generator_images(R, z2.presentation(), gens);
  for (const Vec& x : z1.module()->elems)
    internal_check(mat_vec(R, uinv, mat_vec(R, un, x)) == x,
                   "inverse reproduces the module identically");
  Mat e_base1 = mat_diag(R, base.presentation(), mat_zero(R, k1, k1));
  Mat wq = mul3(R, un, e_base1, uinv);
  Mat j = mat_zero(R, kb + k2, kb + k1);
  for (std::size_t r = 0; r < kb; ++r)
    for (std::size_t c = 0; c < kb; ++c)
      j.at(r, c) = base.presentation().at(r, c);
  Mat psi0 = mat_mul(R, j, uinv);
  Mat e_base2 = mat_diag(R, base.presentation(), mat_zero(R, k2, k2));
  ExtensionProblem prob{z2, wq, e_base2, z2.presentation(), psi0};
  ExtensionResult res = extend(prob);
  Mat g = mat_mul(R, res.phi, un);
  for (const Vec& b : base.module()->elems)
    internal_check(mat_vec(R, g, vec_cat(b, vec_zero(R, k1))) ==
                       vec_cat(b, vec_zero(R, k2)),
                   "cancellation restricts to the identity on the base");
  internal_check(mat_is_zero(R, mat_block(g, 0, kb, kb, k1)),
                 "cancellation confines the complement");
  Mat rho = mat_block(g, kb, kb, k2, k1);
  internal_check(check_isometry(s1, s2, rho),
                 "cancellation produces an isometry");
  return rho;
}

std::pair<Mat, Mat> dual_split(const UnitaryRing& ur, const ModulePtr& m,
                               const Mat& dual_proj) {
  if (m->ring.get() != ur.ring_ptr().get())
    throw RingMismatch("module ring differs from the unitary ring");
  return dual_split_impl(ur, m, dual_proj, true);
}

bool self_dual_check(const UnitaryRing& ur, const ModulePtr& m) {
  if (m->ring.get() != ur.ring_ptr().get())
    throw RingMismatch("module ring differs from the unitary ring");
  const Structure& st = ur.structure();
  const SubquotientRing& QR = *st.quotient();
  for (const FactorData& fd : st.factors()) {
    if (fd.kind != FactorKind::Exchange) continue;
    std::set<Vec> a, b;
    for (const Vec& x : m->elems) {
      Vec q = reduce_vec(QR, x);
      a.insert(vec_scale_right(QR, q, fd.central_parts[0]));
      b.insert(vec_scale_right(QR, q, fd.central_parts[1]));
    }
    if (a.size() != b.size()) return false;
  }
  return true;
}

}  // namespace qf
