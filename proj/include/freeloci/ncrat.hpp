#pragma once

// Noncommutative rational expressions, realizations c^t L^-1 b and their domains.

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "freeloci/pencil.hpp"

namespace freeloci {

// ---------------------------------------------------------------------------
// Expressions

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { constant, variable, sum, product, negation, inverse };
  Kind kind = Kind::constant;
  Scalar value;                 // constant
  std::size_t index = 0;        // variable, 1-based
  std::vector<ExprPtr> children;
  std::size_t begin = 0, end = 0;  // source span [begin, end)

  static ExprPtr make_constant(const Scalar& s, std::size_t b = 0, std::size_t e = 0) {
    auto p = std::make_shared<Expr>();
    p->kind = Kind::constant;
    p->value = s;
    p->begin = b;
    p->end = e;
    return p;
  }
  static ExprPtr make_variable(std::size_t i, std::size_t b = 0, std::size_t e = 0) {
    auto p = std::make_shared<Expr>();
    p->kind = Kind::variable;
    p->index = i;
    p->begin = b;
    p->end = e;
    return p;
  }
  static ExprPtr make(Kind k, std::vector<ExprPtr> children, std::size_t b = 0, std::size_t e = 0) {
    auto p = std::make_shared<Expr>();
    p->kind = k;
    p->children = std::move(children);
    p->begin = b;
    p->end = e;
    return p;
  }
};

inline const char* kind_name(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::constant: return "constant";
    case Expr::Kind::variable: return "variable";
    case Expr::Kind::sum: return "sum";
    case Expr::Kind::product: return "product";
    case Expr::Kind::negation: return "negation";
    case Expr::Kind::inverse: return "inverse";
  }
  return "?";
}

/// Largest variable index in the expression (0 if there are none).
inline std::size_t max_variable(const Expr& e) {
  std::size_t m = e.kind == Expr::Kind::variable ? e.index : 0;
  for (const auto& c : e.children) m = std::max(m, max_variable(*c));
  return m;
}

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : s_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  ExprPtr expr() {
    skip();
    const std::size_t b = pos_;
    std::vector<ExprPtr> terms{term()};
    for (;;) {
      if (peek('+')) {
        ++pos_;
        terms.push_back(term());
      } else if (peek('-')) {
        const std::size_t nb = pos_++;
        ExprPtr t = term();
        terms.push_back(Expr::make(Expr::Kind::negation, {t}, nb, t->end));
      } else {
        break;
      }
    }
    if (terms.size() == 1) return terms[0];
    return Expr::make(Expr::Kind::sum, std::move(terms), b, pos_);
  }

  ExprPtr term() {
    skip();
    const std::size_t b = pos_;
    std::vector<ExprPtr> factors{factor()};
    while (peek('*')) {
      ++pos_;
      factors.push_back(factor());
    }
    if (factors.size() == 1) return factors[0];
    return Expr::make(Expr::Kind::product, std::move(factors), b, pos_);
  }

  ExprPtr factor() {
    skip();
    const std::size_t b = pos_;
    if (peek('-')) {
      ++pos_;
      ExprPtr f = factor();
      return Expr::make(Expr::Kind::negation, {f}, b, pos_);
    }
    ExprPtr a = atom();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      if (s_.compare(pos_, 3, "^-1") != 0) fail("expected ^-1");
      pos_ += 3;
      return Expr::make(Expr::Kind::inverse, {a}, b, pos_);
    }
    return a;
  }

  mpz_class nat() {
    skip();
    const std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_) fail("expected a natural number");
    return mpz_class(s_.substr(b, pos_ - b));
  }

  ExprPtr atom() {
    skip();
    const std::size_t b = pos_;
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      mpz_class num = nat();
      mpz_class den = 1;
      if (peek('/')) {
        ++pos_;
        const std::size_t at = pos_;
        den = nat();
        if (den == 0) throw ParseError("zero denominator", at);
      }
      return Expr::make_constant(Scalar(mpq_class(num, den)), b, pos_);
    }
    if (ch == 'x') {
      ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a variable index");
      const std::size_t at = pos_;
      const mpz_class i = nat();
      if (i == 0) throw ParseError("variable index must be at least 1", at);
      if (!i.fits_ulong_p() || i > 1000000) throw ParseError("variable index too large", at);
      return Expr::make_variable(i.get_ui(), b, pos_);
    }
    if (s_.compare(pos_, 3, "inv") == 0) {
      pos_ += 3;
      expect('(');
      ExprPtr e = expr();
      expect(')');
      return Expr::make(Expr::Kind::inverse, {e}, b, pos_);
    }
    if (ch == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    fail("unexpected character '" + std::string(1, ch) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Grammar: expr := term {("+"|"-") term}; term := factor {"*" factor};
/// factor := "-" factor | atom ["^-1"]; atom := rational | "x" nat | "(" expr ")" |
/// "inv" "(" expr ")"; rational := nat ["/" nat].
inline ExprPtr parse_expression(const std::string& text) { return detail::ExprParser(text).parse(); }

/// Text form that parses back to an equal expression tree.
inline std::string expression_str(const Expr& e) {
  auto wrap = [](const Expr& c, int min_level) {
    auto level = [](const Expr& x) {
      switch (x.kind) {
        case Expr::Kind::sum: return 0;
        case Expr::Kind::product: return 1;
        case Expr::Kind::negation: return 2;
        default: return 3;
      }
    };
    std::string s = expression_str(c);
    // constants with a sign or an imaginary part need brackets in products
    const bool loose_constant = c.kind == Expr::Kind::constant && (!c.value.is_real() || sgn(c.value.re()) < 0);
    return (level(c) < min_level || (loose_constant && min_level > 0)) ? "(" + s + ")" : s;
  };
  switch (e.kind) {
    case Expr::Kind::constant: return e.value.str();
    case Expr::Kind::variable: return "x" + std::to_string(e.index);
    case Expr::Kind::sum: {
      std::string s = wrap(*e.children[0], 1);
      for (std::size_t k = 1; k < e.children.size(); ++k) {
        const auto& c = *e.children[k];
        if (c.kind == Expr::Kind::negation)
          s += " - " + wrap(*c.children[0], 1);
        else
          s += " + " + wrap(c, 1);
      }
      return s;
    }
    case Expr::Kind::product: {
      std::string s = wrap(*e.children[0], 2);
      for (std::size_t k = 1; k < e.children.size(); ++k) s += "*" + wrap(*e.children[k], 2);
      return s;
    }
    case Expr::Kind::negation: return "-" + wrap(*e.children[0], 2);
    case Expr::Kind::inverse: return "inv(" + expression_str(*e.children[0]) + ")";
  }
  return "";
}

/// Bottom-up evaluation at n x n matrices; nullopt when some inverse is singular.
inline std::optional<Matrix> eval_ast(const Expr& e, const MatrixTuple& x) {
  require(!x.empty(), "evaluation needs at least one matrix");
  require(all_square_of_size(x, x[0].rows()), "point matrices must be square of equal size");
  require(max_variable(e) <= x.size(), "expression uses x" + std::to_string(max_variable(e)) + " but only " +
                                           std::to_string(x.size()) + " matrices were given");
  const std::size_t n = x[0].rows();
  switch (e.kind) {
    case Expr::Kind::constant: return e.value * Matrix::identity(n);
    case Expr::Kind::variable: return x[e.index - 1];
    case Expr::Kind::sum: {
      Matrix s(n, n);
      for (const auto& c : e.children) {
        auto v = eval_ast(*c, x);
        if (!v) return std::nullopt;
        s += *v;
      }
      return s;
    }
    case Expr::Kind::product: {
      Matrix s = Matrix::identity(n);
      for (const auto& c : e.children) {
        auto v = eval_ast(*c, x);
        if (!v) return std::nullopt;
        s = s * *v;
      }
      return s;
    }
    case Expr::Kind::negation: {
      auto v = eval_ast(*e.children[0], x);
      if (!v) return std::nullopt;
      return Scalar(-1) * *v;
    }
    case Expr::Kind::inverse: {
      auto v = eval_ast(*e.children[0], x);
      if (!v) return std::nullopt;
      return inverse(*v);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Realizations

/// r = c^t L^-1 b for a monic pencil L in g variables.
struct Realization {
  Vector c;
  MonicPencil pencil;
  Vector b;

  std::size_t size() const { return pencil.size(); }
  std::size_t vars() const { return pencil.vars(); }
  /// r(0) = c^t b.
  Scalar value_at_zero() const { return dot(c, b); }
};

inline void check_realization(const Realization& r) {
  require(r.c.size() == r.size() && r.b.size() == r.size(), "realization vectors must match the pencil size");
}

/// Coefficient of the word w in the power series of r: c^t w(A) b.
inline Scalar series_coefficient(const Realization& r, const Word& w) {
  Vector v = r.b;
  for (auto it = w.rbegin(); it != w.rend(); ++it) v = r.pencil[*it - 1] * v;
  return dot(r.c, v);
}

namespace detail {

inline Realization constant_realization(const Scalar& a, std::size_t g) {
  return {Vector{a}, MonicPencil(MatrixTuple(g, Matrix(1, 1))), Vector{Scalar(1)}};
}

inline Realization variable_realization(std::size_t i, std::size_t g) {
  MatrixTuple a(g, Matrix(2, 2));
  a[i - 1](0, 1) = 1;
  return {Vector{Scalar(1), Scalar()}, MonicPencil(std::move(a)), Vector{Scalar(), Scalar(1)}};
}

inline Vector concat_vectors(const Vector& a, const Vector& b) {
  Vector out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Realization sum_realization(const Realization& r1, const Realization& r2) {
  return {concat_vectors(r1.c, r2.c), direct_sum(r1.pencil, r2.pencil), concat_vectors(r1.b, r2.b)};
}

/// A = [[A1, b1 c2^t A2], [0, A2]], c = (c1; 0), b = ((c2^t b2) b1; b2).
inline Realization product_realization(const Realization& r1, const Realization& r2) {
  const std::size_t d1 = r1.size(), d2 = r2.size(), g = r1.vars();
  const Matrix bc = Matrix::column(r1.b) * Matrix::column(r2.c).transpose();
  MatrixTuple a;
  for (std::size_t i = 0; i < g; ++i) {
    Matrix m = direct_sum(r1.pencil[i], r2.pencil[i]);
    if (d1 > 0 && d2 > 0) m.set_block(0, d1, bc * r2.pencil[i]);
    a.push_back(std::move(m));
  }
  return {concat_vectors(r1.c, Vector(d2)), MonicPencil(std::move(a)),
          concat_vectors(dot(r2.c, r2.b) * r1.b, r2.b)};
}

/// With alpha = c^t b != 0 and A' = (I - alpha^-1 b c^t) A:
/// r^-1 = alpha^-1 - alpha^-2 c^t A(x) (I - A'(x))^-1 b, realized on a state of size d + 1.
inline Realization inverse_realization(const Realization& r) {
  const std::size_t d = r.size(), g = r.vars();
  const Scalar alpha = r.value_at_zero();
  const Scalar ai = alpha.inverse();
  const Matrix proj = Matrix::identity(d) - ai * (Matrix::column(r.b) * Matrix::column(r.c).transpose());
  MatrixTuple a;
  for (std::size_t i = 0; i < g; ++i) {
    Matrix m(d + 1, d + 1);
    m.set_block(0, 1, Scalar(-1) * ai * ai * (Matrix::column(r.c).transpose() * r.pencil[i]));
    m.set_block(1, 1, proj * r.pencil[i]);
    a.push_back(std::move(m));
  }
  return {unit_vector(d + 1, 0), MonicPencil(std::move(a)), concat_vectors(Vector{ai}, r.b)};
}

inline Realization realize_node(const Expr& e, std::size_t g, const std::string& source) {
  switch (e.kind) {
    case Expr::Kind::constant: return constant_realization(e.value, g);
    case Expr::Kind::variable: return variable_realization(e.index, g);
    case Expr::Kind::sum: {
      Realization r = realize_node(*e.children[0], g, source);
      for (std::size_t k = 1; k < e.children.size(); ++k) r = sum_realization(r, realize_node(*e.children[k], g, source));
      return r;
    }
    case Expr::Kind::product: {
      Realization r = realize_node(*e.children[0], g, source);
      for (std::size_t k = 1; k < e.children.size(); ++k)
        r = product_realization(r, realize_node(*e.children[k], g, source));
      return r;
    }
    case Expr::Kind::negation: {
      Realization r = realize_node(*e.children[0], g, source);
      r.c = Scalar(-1) * r.c;
      return r;
    }
    case Expr::Kind::inverse: {
      Realization r = realize_node(*e.children[0], g, source);
      if (r.value_at_zero().is_zero()) {
        std::string where = "inverse at position " + std::to_string(e.begin);
        if (e.end > e.begin && e.end <= source.size()) where += " ('" + source.substr(e.begin, e.end - e.begin) + "')";
        else where += " ('" + expression_str(e) + "')";
        throw NotRegularAtZero(where + " has an argument vanishing at 0");
      }
      return inverse_realization(r);
    }
  }
  return {};
}

}  // namespace detail

/// Realization of an expression regular at 0, in g variables (default: the largest
/// index used, at least 1). Sizes: constant 1, variable 2, sum and product d1 + d2,
/// inverse d + 1.
inline Realization realize(const Expr& e, std::size_t g = 0, const std::string& source = {}) {
  const std::size_t used = max_variable(e);
  if (g == 0) g = std::max<std::size_t>(used, 1);
  require(used <= g, "expression uses more variables than requested");
  return detail::realize_node(e, g, source);
}

inline Realization realize(const std::string& text, std::size_t g = 0) {
  const auto e = parse_expression(text);
  return realize(*e, g, text);
}

/// (c^t (x) I) L(X)^-1 (b (x) I), or nullopt when L(X) is singular.
inline std::optional<Matrix> eval_realization(const Realization& r, const MatrixTuple& x) {
  check_realization(r);
  check_point(r.vars(), x);
  const std::size_t n = point_size(x), d = r.size();
  if (d == 0) return Matrix(n, n);
  const Matrix id = Matrix::identity(n);
  const auto sol = solve_matrix(evaluate(r.pencil, x), kron(Matrix::column(r.b), id));
  if (!sol) return std::nullopt;
  return kron(Matrix::column(r.c).transpose(), id) * *sol;
}

/// Restriction to the reachable space span{w(A) b}, then the quotient by the
/// unobservable space {v : c^t w(A) v = 0 for all w}.
inline Realization minimize(const Realization& r) {
  check_realization(r);
  const std::size_t d = r.size(), g = r.vars();
  // reachable
  std::vector<Vector> reach;
  {
    LinearSpan span(d);
    std::vector<Vector> frontier;
    if (span.insert(r.b)) frontier.push_back(r.b), reach.push_back(r.b);
    while (!frontier.empty()) {
      std::vector<Vector> next;
      for (const auto& v : frontier)
        for (std::size_t i = 0; i < g; ++i) {
          Vector w = r.pencil[i] * v;
          if (span.insert(w)) {
            reach.push_back(w);
            next.push_back(std::move(w));
          }
        }
      frontier = std::move(next);
    }
  }
  const std::size_t k = reach.size();
  if (k == 0) return {Vector{}, MonicPencil::empty(g), Vector{}};
  const Matrix vb = Matrix::from_columns(d, reach);
  MatrixTuple a1;
  for (std::size_t i = 0; i < g; ++i) {
    auto s = solve_full_column_rank(vb, r.pencil[i] * vb);
    ensure(s.has_value(), "reachable space is not invariant");
    a1.push_back(std::move(*s));
  }
  Vector b1 = unit_vector(k, 0);
  Vector c1 = vb.transpose() * r.c;
  // observable rows c^t w(A), as columns of the transpose
  std::vector<Vector> obs;
  {
    LinearSpan span(k);
    std::vector<Vector> frontier;
    if (span.insert(c1)) frontier.push_back(c1), obs.push_back(c1);
    while (!frontier.empty()) {
      std::vector<Vector> next;
      for (const auto& v : frontier)
        for (std::size_t i = 0; i < g; ++i) {
          Vector w = a1[i].transpose() * v;
          if (span.insert(w)) {
            obs.push_back(w);
            next.push_back(std::move(w));
          }
        }
      frontier = std::move(next);
    }
  }
  const std::size_t m = obs.size();
  if (m == 0) return {Vector{}, MonicPencil::empty(g), Vector{}};
  const Matrix w = Matrix::from_columns(k, obs).transpose();  // m x k, rows span the observable space
  // W A_i = A~_i W  <=>  A_i^t W^t = W^t A~_i^t
  MatrixTuple a2;
  for (std::size_t i = 0; i < g; ++i) {
    auto s = solve_full_column_rank(w.transpose(), a1[i].transpose() * w.transpose());
    ensure(s.has_value(), "observable space is not invariant");
    a2.push_back(s->transpose());
  }
  // c1 lies in the row space of W: c1 = W^t c2
  const auto c2m = solve_full_column_rank(w.transpose(), Matrix::column(c1));
  ensure(c2m.has_value(), "output vector outside the observable space");
  const Vector c2 = c2m->col(0);
  return {c2, MonicPencil(std::move(a2)), w * b1};
}

inline bool is_minimal(const Realization& r) { return minimize(r).size() == r.size(); }

/// Realization of r1 - r2.
inline Realization difference(const Realization& r1, const Realization& r2) {
  require(r1.vars() == r2.vars(), "realizations must have the same number of variables");
  return {detail::concat_vectors(r1.c, Scalar(-1) * r2.c), direct_sum(r1.pencil, r2.pencil),
          detail::concat_vectors(r1.b, r2.b)};
}

inline bool same_function(const Realization& r1, const Realization& r2) { return minimize(difference(r1, r2)).size() == 0; }

enum class DomainRelation { equal, subset, superset, incomparable };

inline const char* relation_name(DomainRelation r) {
  switch (r) {
    case DomainRelation::equal: return "equal";
    case DomainRelation::subset: return "subset";
    case DomainRelation::superset: return "superset";
    case DomainRelation::incomparable: return "incomparable";
  }
  return "?";
}

struct DomainComparison {
  DomainRelation relation = DomainRelation::incomparable;
  InclusionVerdict forward;   // dom r1 in dom r2, i.e. locus of L2 in locus of L1
  InclusionVerdict backward;  // dom r2 in dom r1
};

/// Compares domains of two minimal realizations through their free loci.
inline DomainComparison domain_compare(const Realization& r1, const Realization& r2, const SearchOptions& opts = {},
                                       bool find_points = true) {
  require(r1.vars() == r2.vars(), "realizations must have the same number of variables");
  require(is_minimal(r1) && is_minimal(r2), "domain comparison needs minimal realizations");
  DomainComparison out;
  out.forward = locus_inclusion(r2.pencil, r1.pencil, opts, find_points);
  out.backward = locus_inclusion(r1.pencil, r2.pencil, opts, find_points);
  const bool f = out.forward.holds, b = out.backward.holds;
  out.relation = f && b ? DomainRelation::equal
                        : f ? DomainRelation::subset : b ? DomainRelation::superset : DomainRelation::incomparable;
  return out;
}

struct PolynomialResult {
  std::optional<NcPolynomial> polynomial;
  std::optional<LocusPoint> locus_point;  // present when r is not a polynomial
};

/// r as a polynomial of degree at most d - 1 when the coefficients are jointly
/// nilpotent; otherwise a point of the locus of the minimal pencil.
inline PolynomialResult to_polynomial(const Realization& r, const SearchOptions& opts = {}) {
  check_realization(r);
  require(is_minimal(r), "to_polynomial needs a minimal realization");
  PolynomialResult out;
  const std::size_t g = r.vars();
  if (!jointly_nilpotent(r.pencil)) {
    auto v = locus_inclusion(r.pencil, MonicPencil::empty(g), opts, true);
    ensure(!v.holds && v.separating_point.has_value(), "non-nilpotent pencil with empty locus");
    out.locus_point = v.separating_point;
    return out;
  }
  NcPolynomial p;
  // row vectors c^t w(A), extended letter by letter while nonzero
  std::vector<std::pair<Word, Vector>> frontier{{Word{}, r.c}};
  while (!frontier.empty()) {
    std::vector<std::pair<Word, Vector>> next;
    for (const auto& [w, row] : frontier) {
      p.add_term(w, dot(row, r.b));
      for (std::size_t i = 1; i <= g; ++i) {
        Vector nr = r.pencil[i - 1].transpose() * row;
        if (!is_zero(nr)) next.emplace_back(concat(w, Word{i}), std::move(nr));
      }
    }
    ensure(next.empty() || next.front().first.size() < std::max<std::size_t>(r.size(), 1),
           "nilpotent realization produced a word longer than d - 1");
    frontier = std::move(next);
  }
  out.polynomial = std::move(p);
  return out;
}

/// Atom e_i^t L^-1 e_k of a pencil, as a realization.
inline Realization atom_realization(const MonicPencil& l, std::size_t i, std::size_t k) {
  return {unit_vector(l.size(), i), l, unit_vector(l.size(), k)};
}

struct DomainDescriptor {
  std::vector<MonicPencil> components;
  /// Atoms of component j: d_j^2 realizations, row-major in (i, k).
  std::vector<Realization> atoms(std::size_t j) const {
    std::vector<Realization> out;
    const auto& l = components.at(j);
    for (std::size_t i = 0; i < l.size(); ++i)
      for (std::size_t k = 0; k < l.size(); ++k) out.push_back(atom_realization(l, i, k));
    return out;
  }
};

/// dom r as the intersection of the complements of the component loci.
inline DomainDescriptor domain_decompose(const Realization& r, const SearchOptions& opts = {}) {
  check_realization(r);
  require(is_minimal(r), "domain_decompose needs a minimal realization");
  return {locus_components(r.pencil, opts)};
}

/// r as a polynomial in the letters x_1..x_g and atoms u_ik = entry (i, k) of
/// (I - S)^-1, where A_i = S_i + N_i splits along a Malcev complement. Atom (i, k) is
/// the letter g + i d + k + 1 (0-based i, k).
struct AtomPolynomial {
  std::size_t vars = 0;
  std::size_t dim = 0;        // d; there are d^2 atoms
  MonicPencil s_pencil;       // I - sum S_i x_i
  MatrixTuple n_parts;        // N_i
  NcPolynomial polynomial;
  std::size_t letter_degree = 0;  // largest number of x letters in a term
  std::size_t total_degree = 0;   // letters plus atoms

  std::size_t atom_letter(std::size_t i, std::size_t k) const { return vars + i * dim + k + 1; }
  bool is_atom(std::size_t letter) const { return letter > vars; }

  /// Atom values are the n x n blocks of (I - S(X))^-1; nullopt off the domain.
  std::optional<Matrix> evaluate(const MatrixTuple& x) const {
    check_point(vars, x);
    const std::size_t n = point_size(x);
    MatrixTuple ext = x;
    if (dim > 0) {
      const auto inv = inverse(freeloci::evaluate(s_pencil, x));
      if (!inv) return std::nullopt;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) ext.push_back(inv->block(i * n, k * n, n, n));
    }
    return polynomial.evaluate(ext, n);
  }
};

inline AtomPolynomial rewrite_in_atoms(const Realization& r) {
  check_realization(r);
  require(is_minimal(r), "rewrite_in_atoms needs a minimal realization");
  const std::size_t d = r.size(), g = r.vars();
  AtomPolynomial out;
  out.vars = g;
  out.dim = d;
  if (d == 0) {
    out.s_pencil = MonicPencil::empty(g);
    out.n_parts = MatrixTuple(g, Matrix(0, 0));
    return out;
  }
  const auto basis = word_span(r.pencil.coefficients());
  const auto rad = radical(basis);
  MatrixTuple s;
  if (rad.quotient_dim() == 0) {
    s.assign(g, Matrix(d, d));
  } else {
    const auto split = malcev_complement(basis, rad);
    for (std::size_t i = 0; i < g; ++i) s.push_back(split.project(r.pencil[i]));
  }
  for (std::size_t i = 0; i < g; ++i) out.n_parts.push_back(r.pencil[i] - s[i]);
  out.s_pencil = MonicPencil(s);

  auto atom = [&](std::size_t i, std::size_t k) { return NcPolynomial::variable(out.atom_letter(i, k)); };
  // v = c^t U, then repeatedly v <- v N(x) U, accumulating v b
  std::vector<NcPolynomial> v(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      if (!r.c[i].is_zero()) v[k] += r.c[i] * atom(i, k);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k)
      if (!r.b[k].is_zero()) out.polynomial += r.b[k] * v[k];
    if (j + 1 == d) break;
    std::vector<NcPolynomial> vn(d);
    for (std::size_t m = 0; m < d; ++m)
      for (std::size_t k = 0; k < d; ++k) {
        if (v[k].is_zero()) continue;
        for (std::size_t i = 0; i < g; ++i)
          if (!out.n_parts[i](k, m).is_zero()) vn[m] += out.n_parts[i](k, m) * (v[k] * NcPolynomial::variable(i + 1));
      }
    std::vector<NcPolynomial> vu(d);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t m = 0; m < d; ++m)
        if (!vn[m].is_zero()) vu[k] += vn[m] * atom(m, k);
    v = std::move(vu);
  }
  for (const auto& [w, c] : out.polynomial.terms()) {
    std::size_t letters = 0;
    for (auto l : w) letters += l <= g ? 1 : 0;
    out.letter_degree = std::max(out.letter_degree, letters);
    out.total_degree = std::max(out.total_degree, w.size());
  }
  return out;
}

/// P with P^t c2 = c1, A2_i P = P A1_i and b2 = P b1, for minimal realizations of the
/// same function.
inline Matrix realization_similarity(const Realization& r1, const Realization& r2, const SearchOptions& opts = {}) {
  check_realization(r1);
  check_realization(r2);
  require(r1.vars() == r2.vars(), "realizations must have the same number of variables");
  require(r1.size() == r2.size(), "realizations must have the same size");
  if (!same_function(r1, r2)) throw NotSameFunction("the realizations have different power series");
  const std::size_t d = r1.size(), g = r1.vars();
  if (d == 0) return Matrix(0, 0);
  // unknown P in row-major order: P(r, c) is unknown r * d + c
  const std::size_t rows = g * d * d + 2 * d;
  Matrix sys(rows, d * d);
  Vector rhs(rows);
  std::size_t row = 0;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t c = 0; c < d; ++c, ++row) {
        // (A2 P - P A1)(a, c) = 0
        for (std::size_t k = 0; k < d; ++k) {
          sys(row, k * d + c) += r2.pencil[i](a, k);
          sys(row, a * d + k) -= r1.pencil[i](k, c);
        }
      }
  for (std::size_t c = 0; c < d; ++c, ++row) {
    // (P^t c2)(c) = sum_k P(k, c) c2(k) = c1(c)
    for (std::size_t k = 0; k < d; ++k) sys(row, k * d + c) += r2.c[k];
    rhs[row] = r1.c[c];
  }
  for (std::size_t a = 0; a < d; ++a, ++row) {
    for (std::size_t k = 0; k < d; ++k) sys(row, a * d + k) += r1.b[k];
    rhs[row] = r2.b[a];
  }
  const auto sol = solve(sys, rhs);
  ensure(sol.has_value(), "similarity system of equal functions is inconsistent");
  const Matrix p0 = Matrix::unvec(d, d, sol->particular);
  if (!det(p0).is_zero()) return p0;
  Rng rng(opts.seed);
  for (int round = 0; round < opts.budget; ++round) {
    Matrix p = p0;
    for (const auto& k : sol->kernel) p += rng.scalar(round_bound(round), opts.field) * Matrix::unvec(d, d, k);
    if (!det(p).is_zero()) return p;
  }
  throw SearchBudgetExceeded("no invertible similarity found", opts.seed, opts.budget);
}

}  // namespace freeloci
