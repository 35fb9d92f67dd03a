#include "qf/forms.hpp"

#include <unordered_map>

#include "qf/errors.hpp"

namespace qf {

QuadraticSpace::QuadraticSpace(UnitaryRing ur, ModulePtr module, Mat gram) {
  if (!module) throw DomainViolation("null module");
  if (module->ring.get() != &ur.ring())
    throw RingMismatch("module and unitary ring use different rings");
  const Ring& R = ur.ring();
  const Mat& E = module->E;
  if (gram.rows != E.rows || gram.cols != E.cols)
    throw ShapeMismatch("Gram matrix shape does not match the presentation");
  for (Elem a : gram.a) R.check(a);
  // Normalize: values of the form on module elements depend only on
  // E^{sT} B E, and a normalized Gram makes matrix identities exact.
  Mat norm = mat_mul(R, sigma_transpose(E, ur.sigma_table()),
                     mat_mul(R, gram, E));
  core_ = std::make_shared<Core>(std::move(ur), std::move(module),
                                 std::move(norm));
}

void QuadraticSpace::Core::ensure_aux() const {
  std::call_once(aux_once, [this] {
    const Ring& R = ur.ring();
    H = mat_add(R, B,
                mat_scale_right(R, sigma_transpose(B, ur.sigma_table()), ur.u()));
    Echeck = sigma_transpose(module->E, ur.sigma_inv_table());
    L = sigma_transpose(H, ur.sigma_inv_table());
  });
}

const Mat& QuadraticSpace::hgram() const {
  core_->ensure_aux();
  return core_->H;
}

const Mat& QuadraticSpace::dual_presentation() const {
  core_->ensure_aux();
  return core_->Echeck;
}

const Mat& QuadraticSpace::lmat() const {
  core_->ensure_aux();
  return core_->L;
}

const ModulePtr& QuadraticSpace::dual_module() const {
  std::call_once(core_->dual_once, [this] {
    core_->ensure_aux();
    core_->dual = make_module(core_->ur.ring_ptr(), core_->Echeck);
  });
  return core_->dual;
}

Elem QuadraticSpace::beta(const Vec& x, const Vec& y) const {
  const Ring& R = core_->ur.ring();
  return sigma_dot(R, x, mat_vec(R, core_->B, y), core_->ur.sigma_table());
}

Elem QuadraticSpace::h(const Vec& x, const Vec& y) const {
  const Ring& R = core_->ur.ring();
  Elem fwd = beta(x, y);
  Elem back = beta(y, x);
  return R.add(fwd, R.mul(core_->ur.sigma(back), core_->ur.u()));
}

Elem QuadraticSpace::qraw(const Vec& x) const { return beta(x, x); }

Elem QuadraticSpace::lambda_rep(Elem a) const {
  const Ring& R = core_->ur.ring();
  R.check(a);
  Elem best = kNoElem;
  for (Elem l : core_->ur.lambda().members()) {
    Elem c = R.add(a, l);
    if (c < best) best = c;
  }
  return best;
}

Elem QuadraticSpace::qhat(const Vec& x) const {
  std::call_once(core_->qhat_once, [this] {
    core_->qhat_table.resize(core_->module->size());
    for (std::uint32_t i = 0; i < core_->module->size(); ++i)
      core_->qhat_table[i] = lambda_rep(qraw(core_->module->elems[i]));
  });
  return core_->qhat_table[module_index(*core_->module, x)];
}

Elem dual_pairing(const UnitaryRing& ur, const Vec& y, const Vec& x) {
  return sigma_dot(ur.ring(), y, x, ur.sigma_table());
}

Mat map_from_generator_images(const Ring& R, const Mat& E,
                              const std::vector<Vec>& images) {
  if (images.size() != E.cols)
    throw ShapeMismatch("one image per generator column required");
  std::size_t rows = images.empty() ? 0 : images.front().size();
  for (const Vec& v : images)
    if (v.size() != rows) throw ShapeMismatch("ragged image list");
  return mat_mul(R, mat_from_cols(rows, images), E);
}

bool classes_equal(const QuadraticSpace& a, const QuadraticSpace& b) {
  if (!a.ur().same(b.ur())) throw RingMismatch("different unitary rings");
  if (a.module() != b.module())
    throw ModuleMismatch("classes live on different modules");
  if (a.hgram() != b.hgram()) return false;
  const Ring& R = a.ur().ring();
  Mat diff = mat_sub(R, a.gram(), b.gram());
  for (std::size_t i = 0; i < diff.rows; ++i)
    if (!a.ur().lambda().contains(diff.at(i, i))) return false;
  return true;
}

bool classes_equal_pointwise(const QuadraticSpace& a, const QuadraticSpace& b) {
  if (!a.ur().same(b.ur())) throw RingMismatch("different unitary rings");
  if (a.module() != b.module())
    throw ModuleMismatch("classes live on different modules");
  const std::vector<Vec>& elems = a.module()->elems;
  for (const Vec& x : elems)
    if (a.qhat(x) != b.qhat(x)) return false;
  for (const Vec& x : elems)
    for (const Vec& y : elems)
      if (a.h(x, y) != b.h(x, y)) return false;
  return true;
}

bool is_unimodular(const QuadraticSpace& s) {
  const Ring& R = s.ur().ring();
  const ModuleData& dual = *s.dual_module();
  const Mat& L = s.lmat();
  std::vector<char> seen(dual.size(), 0);
  std::size_t hits = 0;
  for (const Vec& x : s.module()->elems) {
    Vec y = mat_vec(R, L, x);
    auto it = dual.index.find(y);
    if (it == dual.index.end()) return false;
    if (seen[it->second]) return false;
    seen[it->second] = 1;
    ++hits;
  }
  return hits == dual.size();
}

QuadraticSpace orthogonal_sum(const QuadraticSpace& a, const QuadraticSpace& b) {
  if (!a.ur().same(b.ur())) throw RingMismatch("different unitary rings");
  const Ring& R = a.ur().ring();
  Mat E = mat_diag(R, a.presentation(), b.presentation());
  Mat B = mat_diag(R, a.gram(), b.gram());
  return QuadraticSpace(a.ur(), make_module(a.ur().ring_ptr(), std::move(E)),
                        std::move(B));
}

void validate_summand(const QuadraticSpace& s, const Mat& W) {
  const Ring& R = s.ur().ring();
  const Mat& E = s.presentation();
  if (W.rows != E.rows || W.cols != E.cols)
    throw ShapeMismatch("summand witness has wrong shape");
  for (Elem a : W.a) R.check(a);
  if (mat_mul(R, W, W) != W)
    throw NotASummand("witness matrix is not idempotent");
  if (mat_mul(R, E, W) != W || mat_mul(R, W, E) != W)
    throw NotASummand("witness does not project inside the module");
}

QuadraticSpace restrict_to_summand(const QuadraticSpace& s, const Mat& W) {
  validate_summand(s, W);
  return QuadraticSpace(s.ur(), make_module(s.ur().ring_ptr(), W), s.gram());
}

Mat complement_projection(const QuadraticSpace& s, const Mat& W) {
  validate_summand(s, W);
  const Ring& R = s.ur().ring();
  ModulePtr sub = make_module(s.ur().ring_ptr(), W);
  // Key each summand element by its pairings against the summand generators;
  // injectivity of the keys is exactly unimodularity of the restriction.
  std::vector<Vec> wgens;
  for (std::size_t j = 0; j < W.cols; ++j) wgens.push_back(W.col(j));
  auto key_of = [&](const Vec& x) {
    Vec key(wgens.size());
    for (std::size_t j = 0; j < wgens.size(); ++j) key[j] = s.h(wgens[j], x);
    return key;
  };
  std::unordered_map<Vec, Vec, VecHash> by_key;
  for (const Vec& q : sub->elems) {
    if (!by_key.emplace(key_of(q), q).second)
      throw NotUnimodular("summand has a degenerate vector");
  }
  const Mat& E = s.presentation();
  std::vector<Vec> images;
  images.reserve(E.cols);
  for (std::size_t i = 0; i < E.cols; ++i) {
    Vec g = E.col(i);
    auto it = by_key.find(key_of(g));
    if (it == by_key.end())
      throw NotUnimodular("summand does not split the module");
    images.push_back(vec_sub(R, g, it->second));
  }
  return map_from_generator_images(R, E, images);
}

QuadraticSpace orthogonal_complement(const QuadraticSpace& s, const Mat& W) {
  return restrict_to_summand(s, complement_projection(s, W));
}

bool check_isometry(const QuadraticSpace& src, const QuadraticSpace& dst,
                    const Mat& U) {
  if (!src.ur().same(dst.ur())) throw RingMismatch("different unitary rings");
  const Ring& R = src.ur().ring();
  if (U.rows != dst.rank() || U.cols != src.rank())
    throw ShapeMismatch("isometry matrix has wrong shape");
  for (Elem a : U.a) R.check(a);
  // V acts on src exactly as U does, and is presentation-normalized.
  Mat V = mat_mul(R, U, src.presentation());
  const ModuleData& target = *dst.module();
  std::vector<char> seen(target.size(), 0);
  for (const Vec& x : src.module()->elems) {
    Vec y = mat_vec(R, V, x);
    auto it = target.index.find(y);
    if (it == target.index.end()) return false;
    if (seen[it->second]) return false;
    seen[it->second] = 1;
  }
  if (src.module()->size() != target.size()) return false;
  Mat Vst = sigma_transpose(V, src.ur().sigma_table());
  if (mat_mul(R, Vst, mat_mul(R, dst.hgram(), V)) != src.hgram()) return false;
  Mat pulled = mat_mul(R, Vst, mat_mul(R, dst.gram(), V));
  Mat diff = mat_sub(R, pulled, src.gram());
  for (std::size_t i = 0; i < diff.rows; ++i)
    if (!src.ur().lambda().contains(diff.at(i, i))) return false;
  return true;
}

QuadraticSpace hyperbolic_space(const UnitaryRing& ur, const ModulePtr& m) {
  if (!m) throw DomainViolation("null module");
  if (m->ring.get() != &ur.ring())
    throw RingMismatch("module and unitary ring use different rings");
  const Ring& R = ur.ring();
  const Mat& E = m->E;
  Mat Echeck = sigma_transpose(E, ur.sigma_inv_table());
  Mat big = mat_diag(R, E, Echeck);
  std::size_t k = E.rows;
  Mat B = mat_zero(R, 2 * k, 2 * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) B.at(k + i, j) = E.at(i, j);
  return QuadraticSpace(ur, make_module(ur.ring_ptr(), std::move(big)),
                        std::move(B));
}

QuadraticSpace conjugate_space(const QuadraticSpace& s,
                               const UnitaryRing& conjugated_ur, Elem v) {
  if (&conjugated_ur.ring() != &s.ur().ring())
    throw RingMismatch("conjugated unitary ring must share the ring");
  const Ring& R = s.ur().ring();
  if (!R.is_unit(v)) throw NotAUnit("conjugator must be a unit");
  return QuadraticSpace(conjugated_ur, s.module(),
                        mat_scale_left(R, v, s.gram()));
}

Vec reduce_vec(const SubquotientRing& Q, const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Q.project(v[i]);
  return out;
}

QuadraticSpace reduce_space(const QuadraticSpace& s,
                            const UnitaryRing& quotient_ur) {
  const auto* Q =
      dynamic_cast<const SubquotientRing*>(quotient_ur.ring_ptr().get());
  if (!Q || Q->parent().get() != &s.ur().ring())
    throw RingMismatch("quotient ring does not reduce the ring of the space");
  auto project_mat = [&](const Mat& M) {
    Mat out(M.rows, M.cols);
    for (std::size_t i = 0; i < M.a.size(); ++i) out.a[i] = Q->project(M.a[i]);
    return out;
  };
  Mat Ebar = project_mat(s.presentation());
  Mat Bbar = project_mat(s.gram());
  return QuadraticSpace(quotient_ur,
                        make_module(quotient_ur.ring_ptr(), std::move(Ebar)),
                        std::move(Bbar));
}

}  // namespace qf
