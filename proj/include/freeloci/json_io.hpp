#pragma once

// JSON readers and writers. Scalars travel as canonical strings; readers also accept
// plain JSON integers. Every writer's output is accepted by the matching reader.

#include <json.hpp>

#include <string>
#include <vector>

#include "freeloci/invariants.hpp"
#include "freeloci/ncrat.hpp"
#include "freeloci/pencil.hpp"

namespace freeloci::io {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
  throw FormatError(where + ": " + what);
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing key \"") + key + "\"");
  return *it;
}

inline std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------- scalars, matrices

inline json to_json(const Scalar& s) { return s.str(); }

inline Scalar scalar_from_json(const json& j, const std::string& where = "scalar") {
  if (j.is_number_integer()) return Scalar(j.get<long long>());
  if (!j.is_string()) detail::bad(where, "expected a scalar string");
  return Scalar::parse(j.get<std::string>());
}

inline json to_json(const Vector& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(to_json(s));
  return out;
}

inline Vector vector_from_json(const json& j, const std::string& where = "vector") {
  Vector out;
  std::size_t k = 0;
  for (const auto& e : detail::array(j, where)) out.push_back(scalar_from_json(e, where + "[" + std::to_string(k++) + "]"));
  return out;
}

inline json to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

/// Reads a rows x cols matrix; cols is needed for matrices without rows.
inline Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const std::string& where = "matrix") {
  detail::array(j, where);
  if (j.size() != rows) detail::bad(where, "expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    detail::array(j[r], rw);
    if (j[r].size() != cols) detail::bad(rw, "expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_json(j[r][c], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline Matrix matrix_from_json(const json& j, const std::string& where = "matrix") {
  detail::array(j, where);
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : detail::array(j[0], where + "[0]").size();
  return matrix_from_json(j, rows, cols, where);
}

// ---------------------------------------------------------------- tuples and pencils

inline json tuple_to_json(const MatrixTuple& t, std::size_t d) {
  json ms = json::array();
  for (const auto& m : t) ms.push_back(to_json(m));
  return {{"size", d}, {"vars", t.size()}, {"matrices", ms}};
}

inline json tuple_to_json(const MatrixTuple& t) { return tuple_to_json(t, t.empty() ? 0 : t[0].rows()); }

inline MatrixTuple tuple_from_json(const json& j, const char* key = "matrices", const std::string& where = "tuple") {
  const std::size_t d = detail::count(detail::field(j, "size", where), where + ".size");
  const std::size_t g = detail::count(detail::field(j, "vars", where), where + ".vars");
  const json& ms = detail::array(detail::field(j, key, where), where + "." + key);
  if (ms.size() != g) detail::bad(where, "\"vars\" is " + std::to_string(g) + " but " + std::to_string(ms.size()) + " matrices are given");
  MatrixTuple out;
  for (std::size_t i = 0; i < g; ++i) out.push_back(matrix_from_json(ms[i], d, d, where + "." + key + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::size_t tuple_size(const json& j) { return detail::count(detail::field(j, "size", "tuple"), "tuple.size"); }

inline json to_json(const MonicPencil& l) {
  json cs = json::array();
  for (const auto& m : l.coefficients()) cs.push_back(to_json(m));
  return {{"size", l.size()}, {"vars", l.vars()}, {"coefficients", cs}};
}

/// Accepts pencil JSON, or tuple JSON whose matrices are taken as coefficients.
inline MonicPencil pencil_from_json(const json& j, const std::string& where = "pencil") {
  const char* key = j.is_object() && j.contains("coefficients") ? "coefficients" : "matrices";
  const auto t = tuple_from_json(j, key, where);
  if (t.empty()) detail::bad(where, "a pencil needs at least one variable");
  return MonicPencil(t);
}

// ---------------------------------------------------------------- words and polynomials

inline json to_json(const Word& w) {
  json out = json::array();
  for (auto l : w) out.push_back(l);
  return out;
}

inline Word word_from_json(const json& j, const std::string& where = "word") {
  Word w;
  for (const auto& e : detail::array(j, where)) {
    const std::size_t l = detail::count(e, where);
    if (l == 0) detail::bad(where, "letters are numbered from 1");
    w.push_back(l);
  }
  return w;
}

inline json to_json(const NcPolynomial& p) {
  json out = json::array();
  for (const auto& [w, c] : p.terms()) out.push_back({{"word", to_json(w)}, {"coeff", to_json(c)}});
  return out;
}

inline NcPolynomial polynomial_from_json(const json& j, const std::string& where = "polynomial") {
  NcPolynomial p;
  std::size_t k = 0;
  for (const auto& t : detail::array(j, where)) {
    const std::string tw = where + "[" + std::to_string(k++) + "]";
    p.add_term(word_from_json(detail::field(t, "word", tw), tw + ".word"),
               scalar_from_json(detail::field(t, "coeff", tw), tw + ".coeff"));
  }
  return p;
}

// ---------------------------------------------------------------- verdicts

inline json to_json(const LocusPoint& p) { return {{"point", tuple_to_json(p.point)}, {"kernel_dim", p.kernel_dim}}; }

inline LocusPoint locus_point_from_json(const json& j, const std::string& where = "separating_point") {
  return {tuple_from_json(detail::field(j, "point", where), "matrices", where + ".point"),
          detail::count(detail::field(j, "kernel_dim", where), where + ".kernel_dim")};
}

inline json to_json(const InclusionCertificate& c) {
  json words = json::array();
  for (const auto& w : c.words) words.push_back(to_json(w));
  return {{"words", words}, {"map", to_json(c.map)}};
}

inline InclusionCertificate certificate_from_json(const json& j, const std::string& where = "certificate") {
  InclusionCertificate c;
  for (const auto& w : detail::array(detail::field(j, "words", where), where + ".words"))
    c.words.push_back(word_from_json(w, where + ".words"));
  c.map = matrix_from_json(detail::field(j, "map", where), where + ".map");
  if (c.map.rows() == 0) c.map = Matrix(0, c.words.size());
  return c;
}

inline json to_json(const InclusionVerdict& v) {
  json out = {{"holds", v.holds}, {"length", v.length}};
  out["certificate"] = v.certificate ? to_json(*v.certificate) : json(nullptr);
  out["refutation"] = v.refutation ? to_json(*v.refutation) : json(nullptr);
  out["separating_point"] = v.separating_point ? to_json(*v.separating_point) : json(nullptr);
  return out;
}

inline InclusionVerdict verdict_from_json(const json& j, const std::string& where = "verdict") {
  InclusionVerdict v;
  const json& h = detail::field(j, "holds", where);
  if (!h.is_boolean()) detail::bad(where + ".holds", "expected a boolean");
  v.holds = h.get<bool>();
  if (j.contains("length")) v.length = detail::count(j["length"], where + ".length");
  if (j.contains("certificate") && !j["certificate"].is_null()) v.certificate = certificate_from_json(j["certificate"]);
  if (j.contains("refutation") && !j["refutation"].is_null()) v.refutation = polynomial_from_json(j["refutation"]);
  if (j.contains("separating_point") && !j["separating_point"].is_null())
    v.separating_point = locus_point_from_json(j["separating_point"]);
  return v;
}

// ---------------------------------------------------------------- realizations

inline json to_json(const Realization& r) { return {{"c", to_json(r.c)}, {"b", to_json(r.b)}, {"pencil", to_json(r.pencil)}}; }

inline Realization realization_from_json(const json& j, const std::string& where = "realization") {
  Realization r{vector_from_json(detail::field(j, "c", where), where + ".c"),
                pencil_from_json(detail::field(j, "pencil", where), where + ".pencil"),
                vector_from_json(detail::field(j, "b", where), where + ".b")};
  if (r.c.size() != r.size() || r.b.size() != r.size()) detail::bad(where, "c and b must have the pencil's size");
  return r;
}

// ---------------------------------------------------------------- fingerprints

/// {"size", "vars", "entries": [{"word", "trace"}, ...]} with entries in length-lex order.
inline json to_json(const Fingerprint& f) {
  json entries = json::array();
  for (const auto& [w, t] : f.entries) entries.push_back({{"word", to_json(w)}, {"trace", to_json(t)}});
  return {{"size", f.size}, {"vars", f.vars}, {"entries", entries}};
}

inline Fingerprint fingerprint_from_json(const json& j, const std::string& where = "fingerprint") {
  Fingerprint f;
  f.size = detail::count(detail::field(j, "size", where), where + ".size");
  f.vars = detail::count(detail::field(j, "vars", where), where + ".vars");
  for (const auto& e : detail::array(detail::field(j, "entries", where), where + ".entries")) {
    Word w = word_from_json(detail::field(e, "word", where), where + ".word");
    if (!f.entries.emplace(w, scalar_from_json(detail::field(e, "trace", where))).second)
      detail::bad(where, "duplicate word " + word_str(w));
  }
  return f;
}

// ---------------------------------------------------------------- expressions

inline json to_json(const Expr& e) {
  json out = {{"kind", kind_name(e.kind)}};
  if (e.kind == Expr::Kind::constant) out["value"] = to_json(e.value);
  if (e.kind == Expr::Kind::variable) out["index"] = e.index;
  if (!e.children.empty()) {
    json cs = json::array();
    for (const auto& c : e.children) cs.push_back(to_json(*c));
    out["children"] = cs;
  }
  if (e.end > e.begin) out["span"] = {e.begin, e.end};
  return out;
}

inline ExprPtr expression_from_json(const json& j, const std::string& where = "expression") {
  const json& k = detail::field(j, "kind", where);
  if (!k.is_string()) detail::bad(where + ".kind", "expected a string");
  const std::string kind = k.get<std::string>();
  std::size_t b = 0, e = 0;
  if (j.contains("span")) {
    const json& s = detail::array(j["span"], where + ".span");
    if (s.size() != 2) detail::bad(where + ".span", "expected two positions");
    b = detail::count(s[0], where + ".span");
    e = detail::count(s[1], where + ".span");
  }
  if (kind == "constant") return Expr::make_constant(scalar_from_json(detail::field(j, "value", where)), b, e);
  if (kind == "variable") {
    const std::size_t i = detail::count(detail::field(j, "index", where), where + ".index");
    if (i == 0) detail::bad(where + ".index", "variables are numbered from 1");
    return Expr::make_variable(i, b, e);
  }
  const std::pair<const char*, Expr::Kind> kinds[] = {{"sum", Expr::Kind::sum},
                                                      {"product", Expr::Kind::product},
                                                      {"negation", Expr::Kind::negation},
                                                      {"inverse", Expr::Kind::inverse}};
  for (const auto& [name, kk] : kinds) {
    if (kind != name) continue;
    std::vector<ExprPtr> cs;
    for (const auto& c : detail::array(detail::field(j, "children", where), where + ".children"))
      cs.push_back(expression_from_json(c, where + ".children"));
    const bool unary = kk == Expr::Kind::negation || kk == Expr::Kind::inverse;
    if (unary ? cs.size() != 1 : cs.size() < 2) detail::bad(where, std::string("wrong number of children for ") + name);
    return Expr::make(kk, std::move(cs), b, e);
  }
  detail::bad(where + ".kind", "unknown node kind \"" + kind + "\"");
}

// ---------------------------------------------------------------- domain reports

inline json to_json(const DomainDescriptor& d) {
  json comps = json::array();
  for (std::size_t j = 0; j < d.components.size(); ++j) {
    json atoms = json::array();
    const std::size_t n = d.components[j].size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) atoms.push_back({{"row", i + 1}, {"col", k + 1}});
    comps.push_back({{"pencil", to_json(d.components[j])}, {"atoms", atoms}});
  }
  return {{"components", comps}};
}

inline DomainDescriptor domain_from_json(const json& j, const std::string& where = "domain") {
  DomainDescriptor d;
  for (const auto& c : detail::array(detail::field(j, "components", where), where + ".components"))
    d.components.push_back(pencil_from_json(detail::field(c, "pencil", where), where + ".pencil"));
  return d;
}

inline json to_json(const AtomPolynomial& a) {
  json ns = json::array();
  for (const auto& m : a.n_parts) ns.push_back(to_json(m));
  json atoms = json::array();
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t k = 0; k < a.dim; ++k)
      atoms.push_back({{"letter", a.atom_letter(i, k)}, {"row", i + 1}, {"col", k + 1}});
  return {{"vars", a.vars},
          {"dim", a.dim},
          {"s_pencil", to_json(a.s_pencil)},
          {"n_parts", ns},
          {"atoms", atoms},
          {"polynomial", to_json(a.polynomial)},
          {"letter_degree", a.letter_degree},
          {"total_degree", a.total_degree}};
}

inline AtomPolynomial atom_polynomial_from_json(const json& j, const std::string& where = "atoms") {
  AtomPolynomial a;
  a.vars = detail::count(detail::field(j, "vars", where), where + ".vars");
  a.dim = detail::count(detail::field(j, "dim", where), where + ".dim");
  a.s_pencil = pencil_from_json(detail::field(j, "s_pencil", where), where + ".s_pencil");
  for (const auto& m : detail::array(detail::field(j, "n_parts", where), where + ".n_parts"))
    a.n_parts.push_back(matrix_from_json(m, a.dim, a.dim, where + ".n_parts"));
  a.polynomial = polynomial_from_json(detail::field(j, "polynomial", where), where + ".polynomial");
  a.letter_degree = detail::count(detail::field(j, "letter_degree", where), where + ".letter_degree");
  a.total_degree = detail::count(detail::field(j, "total_degree", where), where + ".total_degree");
  if (a.s_pencil.size() != a.dim || a.s_pencil.vars() != a.vars || a.n_parts.size() != a.vars)
    detail::bad(where, "inconsistent sizes");
  return a;
}

// ---------------------------------------------------------------- parsing text

inline json parse_json(const std::string& text, const std::string& where = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(where + ": " + e.what());
  }
}

}  // namespace freeloci::io
