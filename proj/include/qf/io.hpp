#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qf/forms.hpp"
#include "qf/reflections.hpp"
#include "qf/unitary.hpp"

namespace qf {

using Json = nlohmann::json;

/// Element literals follow the construction of the ring:
///   - residue rings: an integer (reduced modulo n);
///   - field extensions and truncated polynomial rings: a coefficient array,
///     low degree first, shorter arrays padded with zeros (a bare integer is
///     accepted as a constant);
///   - matrix rings: a nested array of rows;
///   - products: an array with one literal per component.
/// Rendering always emits the full canonical shape, so parse(render(a)) == a.
Elem elem_from_json(const Ring& R, const Json& j);
Json elem_to_json(const Ring& R, Elem a);

Vec vec_from_json(const Ring& R, const Json& j);
Json vec_to_json(const Ring& R, const Vec& v);

/// A matrix literal is an array of equally long rows of element literals.
Mat mat_from_json(const Ring& R, const Json& j);
Json mat_to_json(const Ring& R, const Mat& m);

/// Ring constructor trees: {"residue": n}, {"field": {"p":, "deg":,
/// "modulus": [..]?}}, {"matrix": {"dim":, "entries": <tree>}},
/// {"product": [<tree>, ...]}, {"truncated": {"base": <tree>,
/// "exponent": e}}, {"opposite": <tree>}.
RingSpec ring_spec_from_json(const Json& j);

/// Anti-automorphism rules: "identity", "exchange", {"frobenius": m},
/// {"transpose": <rule for entries>}, {"components": [<rule>, ...]},
/// {"compose": [<outer>, <inner>]}, or {"map": [<image index>, ...]}.
std::vector<Elem> sigma_table_from_json(const Ring& R, const Json& j);

/// Full unitary-ring document: {"ring": <tree>, "sigma": <rule>,
/// "u": <element literal>, "lambda": "min" | "max" |
/// {"generators": [<element literal>, ...]}} (lambda defaults to "min").
UnitaryRing unitary_from_json(const Json& doc);

/// {"y": <vector literal>, "e": <element literal>, "c": <element literal>}.
ReflectionDatum reflection_from_json(const Ring& R, const Json& j);
Json reflection_to_json(const Ring& R, const ReflectionDatum& d);

/// Reads and parses a JSON file; throws MalformedSpec when the file is
/// unreadable or not valid JSON.
Json read_json_file(const std::string& path);

UnitaryRing load_unitary_ring(const std::string& path);

/// Space document: {"ring_ref": <path or inline ring document>, "rank": k,
/// "presentation": <matrix literal, default identity>, "gram": <matrix
/// literal>}.  A path is resolved relative to the space file's directory.
QuadraticSpace load_space(const std::string& path);

/// {"matrix": <matrix literal>} over the ring of s.
Mat load_matrix(const std::string& path, const QuadraticSpace& s);

}  // namespace qf
