#include "qf/io.hpp"

#include <filesystem>
#include <fstream>

#include "qf/matrix.hpp"
#include "qf/module.hpp"

namespace qf {

namespace {

[[noreturn]] void bad(const std::string& what) { throw MalformedSpec(what); }

long long as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<long long>();
}

std::uint32_t as_u32(const Json& j, const char* what) {
  long long v = as_int(j, what);
  if (v < 0 || v > 0xFFFFFFFFLL) bad(std::string(what) + " out of range");
  return static_cast<std::uint32_t>(v);
}

Elem mod_reduce(long long v, std::uint32_t n) {
  long long m = v % static_cast<long long>(n);
  if (m < 0) m += n;
  return static_cast<Elem>(m);
}

/// Coefficient array c_0.. (low degree first), padded with `zero` to len.
std::vector<Elem> coeff_list(const Json& j, std::size_t len, Elem zero,
                             const char* what,
                             const std::function<Elem(const Json&)>& parse) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  if (j.size() > len) bad(std::string(what) + " has too many coefficients");
  std::vector<Elem> c(len, zero);
  for (std::size_t i = 0; i < j.size(); ++i) c[i] = parse(j[i]);
  return c;
}

}  // namespace

Elem elem_from_json(const Ring& R, const Json& j) {
  if (auto* rr = dynamic_cast<const ResidueRing*>(&R))
    return mod_reduce(as_int(j, "residue element"), rr->modulus());

  if (auto* fr = dynamic_cast<const FieldRing*>(&R)) {
    if (j.is_number_integer()) {
      std::vector<Elem> c(fr->degree(), 0);
      c[0] = mod_reduce(j.get<long long>(), fr->characteristic());
      return fr->from_coeffs(c);
    }
    auto c = coeff_list(j, fr->degree(), 0, "field element", [&](const Json& e) {
      return mod_reduce(as_int(e, "field coefficient"), fr->characteristic());
    });
    return fr->from_coeffs(c);
  }

  if (auto* tr = dynamic_cast<const TruncPolyRing*>(&R)) {
    const Ring& base = *tr->base();
    if (!j.is_array()) {
      std::vector<Elem> c(tr->exponent(), base.zero());
      c[0] = elem_from_json(base, j);
      return tr->encode(c);
    }
    auto c = coeff_list(j, tr->exponent(), base.zero(),
                        "truncated polynomial",
                        [&](const Json& e) { return elem_from_json(base, e); });
    return tr->encode(c);
  }

  if (auto* mr = dynamic_cast<const MatrixRing*>(&R)) {
    const std::size_t n = mr->dim();
    if (!j.is_array() || j.size() != n) bad("matrix element needs its rows");
    std::vector<Elem> entries;
    entries.reserve(n * n);
    for (const Json& row : j) {
      if (!row.is_array() || row.size() != n)
        bad("matrix element row has the wrong length");
      for (const Json& e : row)
        entries.push_back(elem_from_json(*mr->entry_ring(), e));
    }
    return mr->encode(entries);
  }

  if (auto* pr = dynamic_cast<const ProductRing*>(&R)) {
    if (!j.is_array() || j.size() != pr->arity())
      bad("product element needs one literal per component");
    std::vector<Elem> coords;
    coords.reserve(pr->arity());
    for (std::size_t i = 0; i < pr->arity(); ++i)
      coords.push_back(elem_from_json(*pr->component(i), j[i]));
    return pr->encode(coords);
  }

  if (auto* orr = dynamic_cast<const OppositeRing*>(&R))
    return elem_from_json(*orr->base(), j);

  // derived rings (corners, factors, quotients): the bare local index
  Elem a = static_cast<Elem>(as_u32(j, "element index"));
  if (a >= R.size()) bad("element index out of range");
  return a;
}

Json elem_to_json(const Ring& R, Elem a) {
  R.check(a);
  if (dynamic_cast<const ResidueRing*>(&R)) return Json(a);

  if (auto* fr = dynamic_cast<const FieldRing*>(&R)) return Json(fr->coeffs(a));

  if (auto* tr = dynamic_cast<const TruncPolyRing*>(&R)) {
    Json out = Json::array();
    for (Elem c : tr->decode(a)) out.push_back(elem_to_json(*tr->base(), c));
    return out;
  }

  if (auto* mr = dynamic_cast<const MatrixRing*>(&R)) {
    const std::size_t n = mr->dim();
    std::vector<Elem> entries = mr->decode(a);
    Json out = Json::array();
    for (std::size_t r = 0; r < n; ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < n; ++c)
        row.push_back(elem_to_json(*mr->entry_ring(), entries[r * n + c]));
      out.push_back(row);
    }
    return out;
  }

  if (auto* pr = dynamic_cast<const ProductRing*>(&R)) {
    std::vector<Elem> coords = pr->decode(a);
    Json out = Json::array();
    for (std::size_t i = 0; i < pr->arity(); ++i)
      out.push_back(elem_to_json(*pr->component(i), coords[i]));
    return out;
  }

  if (auto* orr = dynamic_cast<const OppositeRing*>(&R))
    return elem_to_json(*orr->base(), a);

  return Json(a);
}

Vec vec_from_json(const Ring& R, const Json& j) {
  if (!j.is_array()) bad("vector literal must be an array");
  Vec v;
  v.reserve(j.size());
  for (const Json& e : j) v.push_back(elem_from_json(R, e));
  return v;
}

Json vec_to_json(const Ring& R, const Vec& v) {
  Json out = Json::array();
  for (Elem a : v) out.push_back(elem_to_json(R, a));
  return out;
}

Mat mat_from_json(const Ring& R, const Json& j) {
  if (!j.is_array()) bad("matrix literal must be an array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Mat m;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array()) bad("matrix row must be an array");
    if (r == 0) {
      cols = j[r].size();
      m = Mat(rows, cols);
    } else if (j[r].size() != cols) {
      bad("matrix rows differ in length");
    }
    for (std::size_t c = 0; c < cols; ++c)
      m.at(r, c) = elem_from_json(R, j[r][c]);
  }
  return m;
}

Json mat_to_json(const Ring& R, const Mat& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols; ++c)
      row.push_back(elem_to_json(R, m.at(r, c)));
    out.push_back(row);
  }
  return out;
}

RingSpec ring_spec_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1)
    bad("ring constructor must be an object with exactly one key");
  RingSpec s;
  if (j.contains("residue")) {
    s.kind = RingSpec::Kind::Residue;
    s.n = as_u32(j["residue"], "residue modulus");
    return s;
  }
  if (j.contains("field")) {
    const Json& f = j["field"];
    if (!f.is_object()) bad("field constructor must be an object");
    s.kind = RingSpec::Kind::Field;
    s.n = as_u32(f.at("p"), "field characteristic");
    s.k = f.contains("deg") ? as_u32(f["deg"], "field degree") : 1;
    if (f.contains("modulus")) {
      if (!f["modulus"].is_array()) bad("field modulus must be an array");
      for (const Json& c : f["modulus"])
        s.modulus.push_back(as_u32(c, "modulus coefficient"));
    }
    return s;
  }
  if (j.contains("matrix")) {
    const Json& m = j["matrix"];
    if (!m.is_object()) bad("matrix constructor must be an object");
    s.kind = RingSpec::Kind::Matrix;
    s.n = as_u32(m.at("dim"), "matrix dimension");
    s.children.push_back(ring_spec_from_json(m.at("entries")));
    return s;
  }
  if (j.contains("product")) {
    const Json& p = j["product"];
    if (!p.is_array() || p.size() < 2)
      bad("product constructor needs at least two components");
    s.kind = RingSpec::Kind::Product;
    for (const Json& c : p) s.children.push_back(ring_spec_from_json(c));
    return s;
  }
  if (j.contains("truncated")) {
    const Json& t = j["truncated"];
    if (!t.is_object()) bad("truncated constructor must be an object");
    s.kind = RingSpec::Kind::Truncated;
    s.n = as_u32(t.at("exponent"), "truncation exponent");
    s.children.push_back(ring_spec_from_json(t.at("base")));
    return s;
  }
  if (j.contains("opposite")) {
    s.kind = RingSpec::Kind::Opposite;
    s.children.push_back(ring_spec_from_json(j["opposite"]));
    return s;
  }
  bad("unknown ring constructor: " + j.begin().key());
}

std::vector<Elem> sigma_table_from_json(const Ring& R, const Json& j) {
  if (j.is_string()) {
    const std::string rule = j.get<std::string>();
    if (rule == "identity") return R.identity_table();
    if (rule == "exchange") {
      auto* pr = dynamic_cast<const ProductRing*>(&R);
      if (!pr) bad("the exchange rule needs a product ring");
      return pr->exchange_table();
    }
    bad("unknown sigma rule: " + rule);
  }
  if (!j.is_object() || j.size() != 1)
    bad("sigma rule must be a string or an object with exactly one key");

  if (j.contains("frobenius")) {
    auto* fr = dynamic_cast<const FieldRing*>(&R);
    if (!fr) bad("the frobenius rule needs a field");
    return fr->frobenius_table(as_u32(j["frobenius"], "frobenius power"));
  }
  if (j.contains("transpose")) {
    auto* mr = dynamic_cast<const MatrixRing*>(&R);
    if (!mr) bad("the transpose rule needs a matrix ring");
    return mr->transpose_table(
        sigma_table_from_json(*mr->entry_ring(), j["transpose"]));
  }
  if (j.contains("components")) {
    auto* pr = dynamic_cast<const ProductRing*>(&R);
    if (!pr) bad("the components rule needs a product ring");
    const Json& list = j["components"];
    if (!list.is_array() || list.size() != pr->arity())
      bad("components rule needs one entry per factor");
    std::vector<std::vector<Elem>> tables;
    for (std::size_t i = 0; i < pr->arity(); ++i)
      tables.push_back(sigma_table_from_json(*pr->component(i), list[i]));
    return pr->components_table(tables);
  }
  if (j.contains("compose")) {
    const Json& pair = j["compose"];
    if (!pair.is_array() || pair.size() != 2)
      bad("compose rule needs exactly two rules");
    std::vector<Elem> outer = sigma_table_from_json(R, pair[0]);
    std::vector<Elem> inner = sigma_table_from_json(R, pair[1]);
    std::vector<Elem> out(R.size());
    for (Elem a = 0; a < R.size(); ++a) out[a] = outer.at(inner.at(a));
    return out;
  }
  if (j.contains("map")) {
    const Json& list = j["map"];
    if (!list.is_array() || list.size() != R.size())
      bad("explicit sigma map must cover the whole ring");
    std::vector<Elem> out;
    out.reserve(R.size());
    for (const Json& e : list) {
      Elem a = static_cast<Elem>(as_u32(e, "sigma image"));
      if (a >= R.size()) bad("sigma image out of range");
      out.push_back(a);
    }
    return out;
  }
  bad("unknown sigma rule: " + j.begin().key());
}

UnitaryRing unitary_from_json(const Json& doc) {
  if (!doc.is_object()) bad("unitary ring document must be an object");
  RingPtr ring = build_ring(ring_spec_from_json(doc.at("ring")));
  std::vector<Elem> sigma = sigma_table_from_json(*ring, doc.at("sigma"));
  Elem u = elem_from_json(*ring, doc.at("u"));

  LambdaPolicy policy = LambdaPolicy::Min;
  std::vector<Elem> gens;
  if (doc.contains("lambda")) {
    const Json& l = doc["lambda"];
    if (l.is_string()) {
      const std::string name = l.get<std::string>();
      if (name == "min")
        policy = LambdaPolicy::Min;
      else if (name == "max")
        policy = LambdaPolicy::Max;
      else
        bad("unknown lambda policy: " + name);
    } else if (l.is_object() && l.contains("generators")) {
      if (!l["generators"].is_array()) bad("lambda generators must be an array");
      policy = LambdaPolicy::Generated;
      for (const Json& g : l["generators"])
        gens.push_back(elem_from_json(*ring, g));
    } else {
      bad("lambda must be \"min\", \"max\" or {\"generators\": [...]}");
    }
  }
  return UnitaryRing(std::move(ring), std::move(sigma), u, policy,
                     std::move(gens));
}

ReflectionDatum reflection_from_json(const Ring& R, const Json& j) {
  if (!j.is_object()) bad("reflection literal must be an object");
  ReflectionDatum d;
  d.y = vec_from_json(R, j.at("y"));
  d.e = elem_from_json(R, j.at("e"));
  d.c = elem_from_json(R, j.at("c"));
  return d;
}

Json reflection_to_json(const Ring& R, const ReflectionDatum& d) {
  Json out;
  out["y"] = vec_to_json(R, d.y);
  out["e"] = elem_to_json(R, d.e);
  out["c"] = elem_to_json(R, d.c);
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    bad("invalid JSON in " + path + ": " + e.what());
  }
}

UnitaryRing load_unitary_ring(const std::string& path) {
  try {
    return unitary_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    bad("malformed ring document " + path + ": " + e.what());
  }
}

QuadraticSpace load_space(const std::string& path) {
  Json doc = read_json_file(path);
  try {
    if (!doc.is_object()) bad("space document must be an object");
    const Json& ref = doc.at("ring_ref");
    UnitaryRing ur = [&] {
      if (ref.is_string()) {
        std::filesystem::path p(ref.get<std::string>());
        if (p.is_relative())
          p = std::filesystem::path(path).parent_path() / p;
        return load_unitary_ring(p.string());
      }
      return unitary_from_json(ref);
    }();
    const Ring& R = ur.ring();

    const std::size_t rank = as_u32(doc.at("rank"), "rank");
    Mat gram = mat_from_json(R, doc.at("gram"));
    if (gram.rows != rank || (rank > 0 && gram.cols != rank))
      bad("gram matrix shape does not match the rank");
    gram.cols = rank;  // rank-0 spaces carry an empty literal

    Mat E = mat_identity(R, rank);
    if (doc.contains("presentation")) {
      E = mat_from_json(R, doc["presentation"]);
      if (E.rows != rank || (rank > 0 && E.cols != rank))
        bad("presentation shape does not match the rank");
      E.cols = rank;
    }
    return QuadraticSpace(ur, make_module(ur.ring_ptr(), E), gram);
  } catch (const Json::exception& e) {
    bad("malformed space document " + path + ": " + e.what());
  }
}

Mat load_matrix(const std::string& path, const QuadraticSpace& s) {
  Json doc = read_json_file(path);
  try {
    return mat_from_json(s.ur().ring(), doc.at("matrix"));
  } catch (const Json::exception& e) {
    bad("malformed matrix document " + path + ": " + e.what());
  }
}

}  // namespace qf
