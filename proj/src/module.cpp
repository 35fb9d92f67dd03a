#include "qf/module.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "qf/errors.hpp"

namespace qf {

namespace {

std::vector<Vec> closure_under_generators(const Ring& R, std::size_t dim,
                                          const std::vector<Vec>& gens,
                                          std::size_t bound) {
  std::unordered_set<Vec, VecHash> seen;
  std::deque<Vec> work;
  Vec zero = vec_zero(R, dim);
  seen.insert(zero);
  work.push_back(zero);
  while (!work.empty()) {
    Vec x = std::move(work.front());
    work.pop_front();
    for (const Vec& g : gens) {
      if (g.size() != dim) throw ShapeMismatch("generator has wrong length");
      for (Elem a = 0; a < R.size(); ++a) {
        Vec y = vec_add(R, x, vec_scale_right(R, g, a));
        if (seen.insert(y).second) {
          if (seen.size() > bound)
            throw EnumerationBoundExceeded("module has more than " +
                                           std::to_string(bound) +
                                           " elements");
          work.push_back(std::move(y));
        }
      }
    }
  }
  std::vector<Vec> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ModulePtr make_module(RingPtr ring, Mat E) {
  if (!ring) throw DomainViolation("null ring");
  const Ring& R = *ring;
  if (E.rows != E.cols) throw ShapeMismatch("presentation matrix must be square");
  for (Elem a : E.a) R.check(a);
  if (mat_mul(R, E, E) != E)
    throw NotFullIdempotent("presentation matrix is not idempotent");
  auto m = std::make_shared<ModuleData>();
  m->ring = std::move(ring);
  std::vector<Vec> gens;
  gens.reserve(E.cols);
  for (std::size_t j = 0; j < E.cols; ++j) gens.push_back(E.col(j));
  m->elems = closure_under_generators(R, E.rows, gens,
                                      Bounds::max_module_elements);
  m->E = std::move(E);
  m->index.reserve(m->elems.size() * 2);
  for (std::uint32_t i = 0; i < m->elems.size(); ++i)
    m->index.emplace(m->elems[i], i);
  return m;
}

bool module_contains(const ModuleData& m, const Vec& v) {
  return m.index.find(v) != m.index.end();
}

std::uint32_t module_index(const ModuleData& m, const Vec& v) {
  auto it = m.index.find(v);
  if (it == m.index.end()) throw NotInModule("vector is not a module element");
  return it->second;
}

std::vector<Vec> span_elements(const Ring& R, std::size_t dim,
                               const std::vector<Vec>& gens,
                               std::size_t bound) {
  return closure_under_generators(R, dim, gens, bound);
}

}  // namespace qf
