// freeloci: command-line front end for pencils, matrix algebras, nc rational
// functions and orbit invariants. Reports go to stdout as JSON (default) or text.
// Exit codes: 0 ok, 1 internal invariant violation, 2 malformed input, 3 precondition
// violation, 4 search budget exhausted. Verdicts are part of the report, never the code.

#include <CLI11.hpp>

#include <freeloci/json_io.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace freeloci;
using io::json;

namespace {

struct Config {
  std::string field = "Q";
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  std::size_t max_size = 8;
  std::string format = "json";
  std::string certificate;

  Field base_field() const { return field == "Q" ? Field::rational : Field::gaussian; }
  SearchOptions options() const {
    SearchOptions o;
    o.seed = seed;
    o.max_size = max_size;
    o.field = base_field();
    return o;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const std::string& path) { return io::parse_json(read_file(path), path); }

void check_field(const Config& cfg, const MatrixTuple& t, const std::string& what) {
  if (cfg.base_field() == Field::gaussian) return;
  for (const auto& m : t)
    if (!m.is_real()) throw PreconditionError(what + " has entries outside Q; pass --field 'Q(i)'");
}

MonicPencil read_pencil(const Config& cfg, const std::string& path) {
  auto l = io::pencil_from_json(read_json(path), path);
  check_field(cfg, l.coefficients(), path);
  return l;
}

MatrixTuple read_tuple(const Config& cfg, const std::string& path) {
  const json j = read_json(path);
  const char* key = j.is_object() && j.contains("coefficients") ? "coefficients" : "matrices";
  auto t = io::tuple_from_json(j, key, path);
  if (t.empty()) throw FormatError(path + ": a tuple needs at least one matrix");
  check_field(cfg, t, path);
  return t;
}

ExprPtr read_expression(const std::string& text) { return parse_expression(text); }

std::size_t shared_vars(const std::vector<ExprPtr>& es, std::size_t requested) {
  std::size_t g = std::max<std::size_t>(requested, 1);
  for (const auto& e : es) g = std::max(g, max_variable(*e));
  return g;
}

const char* relation_of(bool forward, bool backward) {
  return forward && backward ? "equal" : forward ? "subset" : backward ? "superset" : "incomparable";
}

// ---------------------------------------------------------------- text rendering

bool is_flat(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

std::string inline_value(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "none";
  if (is_flat(j)) {
    std::string s = "[";
    for (std::size_t k = 0; k < j.size(); ++k) s += (k ? ", " : "") + inline_value(j[k]);
    return s + "]";
  }
  return j.dump();
}

void render(std::ostream& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !is_flat(v) && !v.empty()) {
        out << pad << k << ":\n";
        render(out, v, indent + 2);
      } else {
        out << pad << k << ": " << inline_value(v) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured() && !is_flat(v)) {
        out << pad << "-\n";
        render(out, v, indent + 2);
      } else {
        out << pad << "- " << inline_value(v) << "\n";
      }
    }
  } else {
    out << pad << inline_value(j) << "\n";
  }
}

/// Indented JSON with arrays of plain values kept on one line.
void pretty(std::ostream& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  if (j.is_object() && !j.empty()) {
    out << "{\n";
    std::size_t k = 0;
    for (const auto& [key, v] : j.items()) {
      out << pad << json(key).dump() << ": ";
      pretty(out, v, indent + 2);
      out << (++k < j.size() ? ",\n" : "\n");
    }
    out << std::string(static_cast<std::size_t>(indent), ' ') << "}";
  } else if (j.is_array() && !j.empty() && !is_flat(j)) {
    out << "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      out << pad;
      pretty(out, j[k], indent + 2);
      out << (k + 1 < j.size() ? ",\n" : "\n");
    }
    out << std::string(static_cast<std::size_t>(indent), ' ') << "]";
  } else {
    out << j.dump(-1, ' ', false);
  }
}

void write_certificate(const Config& cfg, const json& j) {
  if (cfg.certificate.empty()) return;
  std::ofstream out(cfg.certificate);
  if (!out) throw FormatError("cannot write " + cfg.certificate);
  pretty(out, j, 0);
  out << "\n";
}

// ---------------------------------------------------------------- handlers

struct Inputs {
  std::string pencil, left, right, tuple, point, realization;
  std::string expr, expr1, expr2;
  std::size_t vars = 0;
};

json algebra_basis_report(const AlgebraBasis& b) {
  json words = json::array(), elems = json::array();
  for (const auto& w : b.words) words.push_back(io::to_json(w));
  for (const auto& m : b.elements) elems.push_back(io::to_json(m));
  return {{"dim", b.dim()},
          {"length", b.length},
          {"lambda_bound", lambda_bound(std::max<std::size_t>(b.size, 1))},
          {"contains_identity", b.contains_identity},
          {"words", words},
          {"elements", elems}};
}

Realization minimal_of(const Inputs& in, const Config& cfg, const std::string& expr, std::size_t g) {
  if (!in.realization.empty() && expr.empty()) {
    auto r = io::realization_from_json(read_json(in.realization), in.realization);
    check_field(cfg, r.pencil.coefficients(), in.realization);
    return minimize(r);
  }
  if (expr.empty()) throw FormatError("an expression (--expr) or a realization file (--realization) is required");
  return minimize(realize(*read_expression(expr), g, expr));
}

json pencil_cmd(const std::string& sub, const Inputs& in, const Config& cfg) {
  const auto opts = cfg.options();
  if (sub == "eval" || sub == "member") {
    const auto l = read_pencil(cfg, in.pencil);
    const auto x = read_tuple(cfg, in.point);
    const Matrix v = evaluate(l, x);
    const std::size_t k = kernel_dimension(v);
    json out = {{"kernel_dim", k}, {"in_locus", k > 0}, {"det", io::to_json(det(v))}};
    if (sub == "eval") out["value"] = io::to_json(v);
    return out;
  }
  if (sub == "compare") {
    const auto a = read_pencil(cfg, in.left), b = read_pencil(cfg, in.right);
    const auto fwd = locus_inclusion(a, b, opts), bwd = locus_inclusion(b, a, opts);
    json out = {{"relation", relation_of(fwd.holds, bwd.holds)},
                {"left_in_right", io::to_json(fwd)},
                {"right_in_left", io::to_json(bwd)}};
    write_certificate(cfg, out);
    return out;
  }
  if (sub == "components") {
    const auto l = read_pencil(cfg, in.pencil);
    json comps = json::array();
    for (const auto& c : locus_components(l, opts)) comps.push_back(io::to_json(c));
    return {{"count", comps.size()}, {"components", comps}};
  }
  if (sub == "reduce") {
    const auto l = read_pencil(cfg, in.pencil);
    const auto r = pencil_reduce(l, opts);
    return {{"input_size", l.size()}, {"size", r.size()}, {"pencil", io::to_json(r)}};
  }
  if (sub == "kippenhahn") {
    const auto l = read_pencil(cfg, in.pencil);
    const auto p = kippenhahn_witness(l);
    return {{"witness", io::to_json(p)}, {"recheck_kernel_dim", in_locus(l, p.point)}};
  }
  throw FormatError("unknown pencil subcommand " + sub);
}

json algebra_cmd(const std::string& sub, const Inputs& in, const Config& cfg) {
  const auto t = read_tuple(cfg, in.tuple);
  const auto basis = word_span(t);
  if (sub == "basis") return algebra_basis_report(basis);
  const auto rad = radical(basis);
  if (sub == "radical") {
    json r = json::array(), words = json::array();
    for (const auto& m : rad.radical) r.push_back(io::to_json(m));
    for (const auto& w : rad.quotient_words) words.push_back(io::to_json(w));
    return {{"dim", basis.dim()},
            {"radical_dim", rad.radical.size()},
            {"quotient_dim", rad.quotient_dim()},
            {"radical", r},
            {"quotient_words", words}};
  }
  if (sub == "components") {
    json comps = json::array();
    for (const auto& c : wedderburn_components(basis, rad, cfg.options()))
      comps.push_back({{"dimension", c.dimension}, {"pencil", io::to_json(MonicPencil(c.generators))}});
    return {{"field", to_string(cfg.base_field())}, {"count", comps.size()}, {"components", comps}};
  }
  throw FormatError("unknown algebra subcommand " + sub);
}

json rat_cmd(const std::string& sub, const Inputs& in, const Config& cfg) {
  const auto opts = cfg.options();
  if (sub == "parse") {
    const auto e = read_expression(in.expr);
    return {{"text", expression_str(*e)}, {"vars", max_variable(*e)}, {"tree", io::to_json(*e)}};
  }
  if (sub == "realize") {
    const auto e = read_expression(in.expr);
    const auto r = realize(*e, shared_vars({e}, in.vars), in.expr);
    return {{"size", r.size()}, {"realization", io::to_json(r)}};
  }
  if (sub == "compare") {
    const auto e1 = read_expression(in.expr1), e2 = read_expression(in.expr2);
    const std::size_t g = shared_vars({e1, e2}, in.vars);
    const auto r1 = minimize(realize(*e1, g, in.expr1)), r2 = minimize(realize(*e2, g, in.expr2));
    const auto c = domain_compare(r1, r2, opts);
    json out = {{"relation", relation_name(c.relation)},
                {"sizes", {r1.size(), r2.size()}},
                {"dom1_in_dom2", io::to_json(c.forward)},
                {"dom2_in_dom1", io::to_json(c.backward)}};
    write_certificate(cfg, out);
    return out;
  }
  const std::size_t g = in.expr.empty() ? 0 : shared_vars({read_expression(in.expr)}, in.vars);
  const auto r = minimal_of(in, cfg, in.expr, g);
  if (sub == "minimize") return {{"size", r.size()}, {"realization", io::to_json(r)}};
  if (sub == "eval") {
    const auto x = read_tuple(cfg, in.point);
    const auto v = eval_realization(r, x);
    json out = {{"defined", v.has_value()}, {"value", v ? io::to_json(*v) : json(nullptr)}};
    if (!in.expr.empty()) {
      const auto w = eval_ast(*read_expression(in.expr), x);
      out["expression_defined"] = w.has_value();
    }
    return out;
  }
  if (sub == "domain") {
    const auto d = domain_decompose(r, opts);
    json out = io::to_json(d);
    out["count"] = d.components.size();
    out["size"] = r.size();
    return out;
  }
  if (sub == "poly") {
    const auto p = to_polynomial(r, opts);
    json out = {{"polynomial", p.polynomial ? io::to_json(*p.polynomial) : json(nullptr)},
                {"is_polynomial", p.polynomial.has_value()},
                {"size", r.size()}};
    if (p.polynomial) out["text"] = p.polynomial->str();
    out["locus_point"] = p.locus_point ? io::to_json(*p.locus_point) : json(nullptr);
    return out;
  }
  if (sub == "atoms") {
    const auto a = rewrite_in_atoms(r);
    json out = io::to_json(a);
    out["text"] = a.polynomial.str();
    return out;
  }
  throw FormatError("unknown rat subcommand " + sub);
}

json orbit_cmd(const std::string& sub, const Inputs& in, const Config& cfg) {
  if (sub == "fingerprint") {
    const auto t = read_tuple(cfg, in.tuple);
    return io::to_json(trace_fingerprint(t, t[0].rows()));
  }
  const auto a = read_tuple(cfg, in.left), b = read_tuple(cfg, in.right);
  if (sub == "compare") {
    const bool same = same_orbit_closure(a, b);
    json out = {{"same_orbit_closure", same}};
    const auto w = same ? conjugacy_witness(a, b, cfg.options()) : std::nullopt;
    out["conjugate"] = w.has_value();
    out["conjugacy_witness"] = w ? io::to_json(*w) : json(nullptr);
    return out;
  }
  if (sub == "detcheck") {
    const auto c = det_generic_check(MonicPencil(a), MonicPencil(b), cfg.trials, cfg.seed);
    json out = {{"agree", c.agree}, {"trials", c.trials}};
    out["refuting_point"] = c.refuting_point ? io::tuple_to_json(*c.refuting_point) : json(nullptr);
    if (c.refuting_point) out["refuting_size"] = c.refuting_size;
    return out;
  }
  throw FormatError("unknown orbit subcommand " + sub);
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::invariant: return 1;
    case ErrorKind::format: return 2;
    case ErrorKind::precondition: return 3;
    case ErrorKind::budget: return 4;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free loci of monic linear pencils, their algebras and nc rational functions"};
  app.require_subcommand(1);
  Config cfg;
  Inputs in;
  app.add_option("--field", cfg.field, "base field")->check(CLI::IsMember({"Q", "Q(i)"}));
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--trials", cfg.trials, "random trials for determinant checks");
  app.add_option("--max-size", cfg.max_size, "largest matrix size tried by point searches");
  app.add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--certificate", cfg.certificate, "also write compare reports to this file");

  std::string group, action;
  auto add_group = [&](const std::string& name, const std::string& help, const std::vector<std::pair<std::string, std::string>>& subs,
                       const std::function<void(CLI::App*, const std::string&)>& options) {
    auto* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    g->fallthrough();
    for (const auto& [s, about] : subs) {
      auto* c = g->add_subcommand(s, about);
      c->fallthrough();
      options(c, s);
      c->callback([&group, &action, name, s] { group = name, action = s; });
    }
  };

  add_group("pencil", "monic linear pencils", {{"eval", "evaluate L(X) at a point"},
             {"member", "is the point in the free locus"},
             {"compare", "inclusion of free loci, both directions"},
             {"components", "irreducible components of the locus"},
             {"reduce", "smaller pencil with the same locus"},
             {"kippenhahn", "point with one-dimensional kernel"}},
            [&](CLI::App* c, const std::string& s) {
              if (s == "compare") {
                c->add_option("--left", in.left, "pencil JSON")->required();
                c->add_option("--right", in.right, "pencil JSON")->required();
              } else {
                c->add_option("--pencil", in.pencil, "pencil JSON")->required();
              }
              if (s == "eval" || s == "member") c->add_option("--point", in.point, "tuple JSON")->required();
            });
  add_group("algebra", "algebras generated by matrix tuples", {{"basis", "word-span basis and stabilization length"},
             {"radical", "Jacobson radical and quotient"},
             {"components", "simple blocks of the semisimple quotient"}},
            [&](CLI::App* c, const std::string&) { c->add_option("--tuple", in.tuple, "tuple JSON")->required(); });
  add_group("rat", "nc rational functions",
            {{"parse", "syntax tree"},
             {"realize", "descriptor realization"},
             {"minimize", "minimal realization"},
             {"eval", "value at a matrix point"},
             {"domain", "domain components"},
             {"compare", "relation between the domains of two functions"},
             {"poly", "polynomial form, or a point off the domain"},
             {"atoms", "rewrite in domain atoms"}},
            [&](CLI::App* c, const std::string& s) {
              if (s == "compare") {
                c->add_option("--expr1", in.expr1, "expression")->required();
                c->add_option("--expr2", in.expr2, "expression")->required();
              } else if (s == "parse" || s == "realize") {
                c->add_option("--expr", in.expr, "expression")->required();
              } else {
                c->add_option("--expr", in.expr, "expression");
                c->add_option("--realization", in.realization, "realization JSON");
              }
              if (s != "parse") c->add_option("--vars", in.vars, "number of variables (default: largest index used)");
              if (s == "eval") c->add_option("--point", in.point, "tuple JSON")->required();
            });
  add_group("orbit", "trace invariants and orbit closures", {{"fingerprint", "traces of necklace words up to length d^2"},
             {"compare", "equal orbit closures, with a conjugating matrix when one exists"},
             {"detcheck", "compare det L_A and det L_B at random points"}},
            [&](CLI::App* c, const std::string& s) {
              if (s == "fingerprint") {
                c->add_option("--tuple", in.tuple, "tuple JSON")->required();
              } else {
                c->add_option("--left", in.left, "tuple or pencil JSON")->required();
                c->add_option("--right", in.right, "tuple or pencil JSON")->required();
              }
            });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    json report;
    if (group == "pencil") report = pencil_cmd(action, in, cfg);
    else if (group == "algebra") report = algebra_cmd(action, in, cfg);
    else if (group == "rat") report = rat_cmd(action, in, cfg);
    else report = orbit_cmd(action, in, cfg);
    report["command"] = group + " " + action;
    if (cfg.format == "json") pretty(std::cout, report, 0), std::cout << "\n";
    else render(std::cout, report, 0);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
