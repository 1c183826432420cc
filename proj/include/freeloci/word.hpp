#pragma once

// Words in the free monoid on x_1..x_g and noncommutative polynomials.

#include <map>
#include <string>
#include <vector>

#include "freeloci/matrix.hpp"

namespace freeloci {

/// Letters are 1-based variable indices; the empty word is the monoid unit.
using Word = std::vector<std::size_t>;

/// Shorter words first, then lexicographic.
struct LengthLexLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

inline std::string word_str(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += "*";
    s += "x" + std::to_string(w[k]);
  }
  return s;
}

inline Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline Word reversed(Word w) {
  std::reverse(w.begin(), w.end());
  return w;
}

/// w(X) for a tuple of n x n matrices; the empty word evaluates to I_n.
inline Matrix evaluate_word(const Word& w, const MatrixTuple& x, std::size_t n) {
  Matrix r = Matrix::identity(n);
  for (auto letter : w) {
    if (letter == 0 || letter > x.size()) throw PreconditionError("word letter out of range");
    r = r * x[letter - 1];
  }
  return r;
}

/// All words of length exactly len over g letters in lexicographic order.
inline std::vector<Word> words_of_length(std::size_t g, std::size_t len) {
  std::vector<Word> out;
  Word w(len, 1);
  if (g == 0) return len == 0 ? std::vector<Word>{Word{}} : out;
  for (;;) {
    out.push_back(w);
    std::size_t k = len;
    while (k > 0 && w[k - 1] == g) w[--k] = 1;
    if (k == 0) return out;
    ++w[k - 1];
  }
}

/// Finite linear combination of words.
class NcPolynomial {
 public:
  using Terms = std::map<Word, Scalar, LengthLexLess>;

  NcPolynomial() = default;
  static NcPolynomial constant(const Scalar& s) { return monomial(Word{}, s); }
  static NcPolynomial variable(std::size_t i) { return monomial(Word{i}, 1); }
  static NcPolynomial monomial(const Word& w, const Scalar& s = 1) {
    NcPolynomial p;
    p.add_term(w, s);
    return p;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Scalar coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Scalar() : it->second;
  }
  bool has_constant_term() const { return terms_.count(Word{}) != 0; }
  /// Degree; -1 for the zero polynomial.
  long degree() const {
    return terms_.empty() ? -1 : static_cast<long>(terms_.rbegin()->first.size());
  }
  std::size_t max_letter() const {
    std::size_t m = 0;
    for (const auto& [w, c] : terms_)
      for (auto l : w) m = std::max(m, l);
    return m;
  }

  void add_term(const Word& w, const Scalar& s) {
    if (s.is_zero()) return;
    auto [it, inserted] = terms_.emplace(w, s);
    if (!inserted) {
      it->second += s;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  NcPolynomial& operator+=(const NcPolynomial& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  NcPolynomial& operator-=(const NcPolynomial& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  friend NcPolynomial operator+(NcPolynomial a, const NcPolynomial& b) { return a += b; }
  friend NcPolynomial operator-(NcPolynomial a, const NcPolynomial& b) { return a -= b; }
  friend NcPolynomial operator*(const Scalar& s, const NcPolynomial& p) {
    NcPolynomial r;
    for (const auto& [w, c] : p.terms_) r.add_term(w, s * c);
    return r;
  }
  friend NcPolynomial operator*(const NcPolynomial& a, const NcPolynomial& b) {
    NcPolynomial r;
    for (const auto& [u, c] : a.terms_)
      for (const auto& [v, e] : b.terms_) r.add_term(concat(u, v), c * e);
    return r;
  }
  friend bool operator==(const NcPolynomial& a, const NcPolynomial& b) { return a.terms_ == b.terms_; }

  /// p(X) for n x n matrices; constants act as scalar multiples of I_n.
  Matrix evaluate(const MatrixTuple& x, std::size_t n) const {
    Matrix r = Matrix::zero(n, n);
    for (const auto& [w, c] : terms_) r += c * evaluate_word(w, x, n);
    return r;
  }
  Matrix evaluate(const MatrixTuple& x) const {
    if (x.empty()) throw PreconditionError("evaluation needs at least one matrix");
    return evaluate(x, x[0].rows());
  }

  /// Text form such as "2*x1 - x1*x1 + 1/2".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : terms_) {
      std::string coef = c.str();
      bool negative = c.is_real() && sgn(c.re()) < 0;
      if (negative) coef = (-c).str();
      if (!c.is_real()) coef = "(" + coef + ")";
      if (out.empty())
        out += negative ? "-" : "";
      else
        out += negative ? " - " : " + ";
      if (w.empty())
        out += coef;
      else
        out += (coef == "1" ? "" : coef + "*") + word_str(w);
    }
    return out;
  }

 private:
  Terms terms_;
};

}  // namespace freeloci
