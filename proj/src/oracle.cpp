#include "qf/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "qf/dickson.hpp"
#include "qf/errors.hpp"
#include "qf/structure.hpp"
#include "qf/witt.hpp"

namespace qf {

namespace {

void sort_mats(std::vector<Mat>& mats) {
  std::sort(mats.begin(), mats.end(),
            [](const Mat& a, const Mat& b) { return a.a < b.a; });
}

void bump(unsigned long long& counter) {
  if (++counter > Bounds::candidate_cap)
    throw EnumerationBoundExceeded("oracle search exceeded the candidate cap");
}

}  // namespace

std::vector<Mat> all_isometries(const QuadraticSpace& src,
                                const QuadraticSpace& dst) {
  if (!src.ur().same(dst.ur())) throw RingMismatch("different unitary rings");
  const Ring& R = src.ur().ring();
  std::vector<Mat> found;
  if (src.size() != dst.size()) return found;

  const std::size_t k = src.rank();
  const ModuleData& target = *dst.module();

  // candidate images per source generator: equal quadratic class
  std::vector<std::vector<const Vec*>> candidates(k);
  std::vector<Vec> gens(k);
  for (std::size_t j = 0; j < k; ++j) {
    gens[j] = src.presentation().col(j);
    for (const Vec& y : target.elems)
      if (dst.qhat(y) == src.qhat(gens[j])) candidates[j].push_back(&y);
  }

  std::vector<const Vec*> chosen(k, nullptr);
  unsigned long long visited = 0;

  auto leaf_check = [&]() {
    std::vector<Vec> images(k);
    for (std::size_t j = 0; j < k; ++j) images[j] = *chosen[j];
    Mat Y = mat_from_cols(dst.rank(), images);
    // the assignment must respect the presentation relations
    if (mat_mul(R, Y, src.presentation()) != Y) return;
    if (check_isometry(src, dst, Y)) found.push_back(Y);
  };

  auto dfs = [&](auto&& self, std::size_t j) -> void {
    if (j == k) {
      leaf_check();
      return;
    }
    for (const Vec* y : candidates[j]) {
      bump(visited);
      bool ok = true;
      for (std::size_t i = 0; i < j && ok; ++i) {
        if (dst.h(*chosen[i], *y) != src.h(gens[i], gens[j])) ok = false;
      }
      if (dst.h(*y, *y) != src.h(gens[j], gens[j])) ok = false;
      if (!ok) continue;
      chosen[j] = y;
      self(self, j + 1);
    }
  };
  dfs(dfs, 0);
  sort_mats(found);
  return found;
}

std::vector<Mat> isometry_group(const QuadraticSpace& s) {
  return all_isometries(s, s);
}

std::vector<Mat> group_closure(const QuadraticSpace& s,
                               const std::vector<Mat>& gens) {
  const Ring& R = s.ur().ring();
  const Mat& E = s.presentation();
  std::vector<Mat> normalized;
  for (const Mat& g : gens)
    normalized.push_back(mat_mul(R, mat_mul(R, E, g), E));

  std::unordered_set<Mat, MatHash> seen;
  std::deque<Mat> work;
  seen.insert(E);
  work.push_back(E);
  unsigned long long visited = 0;
  while (!work.empty()) {
    Mat m = std::move(work.front());
    work.pop_front();
    for (const Mat& g : normalized) {
      bump(visited);
      Mat next = mat_mul(R, m, g);
      if (seen.insert(next).second) work.push_back(next);
    }
  }
  std::vector<Mat> out(seen.begin(), seen.end());
  sort_mats(out);
  return out;
}

std::vector<Mat> summand_projections(const QuadraticSpace& s) {
  const Ring& R = s.ur().ring();
  const std::size_t k = s.rank();
  const ModuleData& m = *s.module();
  std::vector<Vec> gens(k);
  for (std::size_t j = 0; j < k; ++j) gens[j] = s.presentation().col(j);

  std::vector<const Vec*> chosen(k, nullptr);
  std::set<std::vector<std::uint32_t>> images_seen;
  std::vector<Mat> found;
  unsigned long long visited = 0;

  auto leaf_check = [&]() {
    std::vector<Vec> images(k);
    for (std::size_t j = 0; j < k; ++j) images[j] = *chosen[j];
    Mat Y = mat_from_cols(k, images);
    if (mat_mul(R, Y, s.presentation()) != Y) return;
    if (mat_mul(R, Y, Y) != Y) return;
    std::vector<std::uint32_t> image_ids;
    for (const Vec& x : m.elems)
      image_ids.push_back(module_index(m, mat_vec(R, Y, x)));
    std::sort(image_ids.begin(), image_ids.end());
    image_ids.erase(std::unique(image_ids.begin(), image_ids.end()),
                    image_ids.end());
    if (images_seen.insert(std::move(image_ids)).second) found.push_back(Y);
  };

  auto dfs = [&](auto&& self, std::size_t j) -> void {
    if (j == k) {
      leaf_check();
      return;
    }
    for (const Vec& y : m.elems) {
      bump(visited);
      chosen[j] = &y;
      self(self, j + 1);
    }
  };
  dfs(dfs, 0);
  sort_mats(found);
  return found;
}

std::vector<ReflectionDatum> all_reflections(const QuadraticSpace& s) {
  const Ring& R = s.ur().ring();
  std::vector<ReflectionDatum> out;
  ModulePtr mod = s.module();
  for (const Vec& y : mod->elems)
    for (Elem l : s.ur().lambda().members()) {
      Elem c = R.add(s.qraw(y), l);
      if (!R.is_unit(c)) continue;
      ReflectionDatum d{y, R.one(), c};
      validate_reflection(s, d);
      out.push_back(std::move(d));
    }
  return out;
}

std::vector<ReflectionDatum> all_quasi_reflections(const QuadraticSpace& s) {
  const Ring& R = s.ur().ring();
  const UnitaryRing& ur = s.ur();
  std::vector<ReflectionDatum> out;
  ModulePtr mod = s.module();
  for (Elem e = 0; e < R.size(); ++e) {
    if (R.mul(e, e) != e) continue;
    Elem se = ur.sigma(e);
    for (const Vec& y : mod->elems) {
      if (vec_scale_right(R, y, e) != y) continue;
      std::set<Elem> scalars;
      for (Elem l : ur.lambda().members())
        scalars.insert(R.add(s.qraw(y), R.mul(R.mul(se, l), e)));
      for (Elem c : scalars) {
        if (!ef_inverse(R, c, e, se)) continue;
        ReflectionDatum d{y, e, c};
        validate_reflection(s, d);
        out.push_back(std::move(d));
      }
    }
  }
  return out;
}

ExtensionSweep verify_extension(const QuadraticSpace& s) {
  if (!is_unimodular(s))
    throw NotUnimodular("the extension sweep needs a unimodular space");
  const Ring& R = s.ur().ring();
  ExtensionSweep sweep;
  std::vector<Mat> projs = summand_projections(s);
  for (const Mat& w1 : projs)
    for (const Mat& w2 : projs) {
      ++sweep.summand_pairs;
      QuadraticSpace r1 = restrict_to_summand(s, w1);
      QuadraticSpace r2 = restrict_to_summand(s, w2);
      ModulePtr qm = make_module(s.ur().ring_ptr(), w1);
      for (const Mat& u : all_isometries(r1, r2)) {
        ++sweep.isometries_checked;
        ExtensionProblem prob{s, w1, w2, s.presentation(), u};
        try {
          ExtensionResult res = extend(prob);
          Mat psi_n = mat_mul(R, u, w1);
          bool ok = check_isometry(s, s, res.phi);
          for (const Vec& x : qm->elems)
            if (mat_vec(R, res.phi, x) != mat_vec(R, psi_n, x)) {
              ok = false;
              break;
            }
          if (!ok) {
            ++sweep.failures;
            sweep.failure_notes.push_back(
                "extension disagrees with its input isometry");
          }
        } catch (const Error& err) {
          ++sweep.failures;
          sweep.failure_notes.push_back(err.what());
        }
      }
    }
  return sweep;
}

IndexMeasurement verify_index(const QuadraticSpace& s) {
  if (!is_unimodular(s))
    throw NotUnimodular("the index measurement needs a unimodular space");
  IndexMeasurement m;
  m.violating_factors = generation_hypothesis_violations(s);
  m.hypotheses_hold = m.violating_factors.empty();
  IndexPrediction pred = predict_reflection_index(s);
  m.xi = pred.xi;
  m.formula_index = pred.index;

  std::vector<Mat> group = isometry_group(s);
  std::vector<Mat> gens;
  for (const ReflectionDatum& d : all_reflections(s))
    gens.push_back(reflection_matrix(s, d));
  std::vector<Mat> sub = group_closure(s, gens);
  m.group_order = group.size();
  m.reflection_generated_order = sub.size();
  if (group.size() % sub.size() != 0)
    throw Error(
        "internal invariant failed: the subgroup order divides the group "
        "order");
  m.measured_index = group.size() / sub.size();
  m.matches_formula = m.measured_index == m.formula_index;

  // members of the full group whose Dickson vector is zero or xi; group
  // and closure are both sorted, and the filtered list keeps group order
  std::vector<Mat> kernel;
  for (const Mat& g : group) {
    DicksonVector dv = delta_I(s, g);
    if (dv.factors != pred.factors)
      throw Error(
          "internal invariant failed: Dickson factors match the populated "
          "split-orthogonal list");
    bool zero = true;
    bool xi = true;
    for (std::size_t t = 0; t < dv.bits.size(); ++t) {
      if (dv.bits[t] != 0) zero = false;
      if (dv.bits[t] != pred.xi[t]) xi = false;
    }
    if (zero || xi) kernel.push_back(g);
  }
  m.matches_kernel_classes = kernel == sub;
  return m;
}

}  // namespace qf
