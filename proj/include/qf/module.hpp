#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "qf/matrix.hpp"
#include "qf/ring.hpp"

namespace qf {

/// A finitely generated projective right module presented as the column
/// space { x in A^k : Ex = x } of an idempotent matrix E, with its elements
/// enumerated and canonically ordered (lexicographic, first coordinate most
/// significant).
struct ModuleData {
  RingPtr ring;
  Mat E;
  std::vector<Vec> elems;  // sorted
  std::unordered_map<Vec, std::uint32_t, VecHash> index;

  std::size_t rank() const { return E.rows; }
  std::size_t size() const { return elems.size(); }
};

using ModulePtr = std::shared_ptr<const ModuleData>;

/// Validates that E is square and idempotent, then enumerates the module.
ModulePtr make_module(RingPtr ring, Mat E);

bool module_contains(const ModuleData& m, const Vec& v);

/// Position of v in the canonical order; throws NotInModule.
std::uint32_t module_index(const ModuleData& m, const Vec& v);

/// All sums of right scalar multiples of the generators (a submodule of
/// A^k), sorted canonically.
std::vector<Vec> span_elements(const Ring& R, std::size_t dim,
                               const std::vector<Vec>& gens,
                               std::size_t bound = Bounds::max_module_elements);

}  // namespace qf
