#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "freeloci/matrix.hpp"

namespace freeloci {

/// Univariate polynomial over Q or Q(i), lowest degree first, no trailing zeros.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }
  UniPoly(std::initializer_list<Scalar> coeffs) : c_(coeffs) { trim(); }

  static UniPoly constant(const Scalar& s) { return UniPoly(std::vector<Scalar>{s}); }
  static UniPoly monomial(std::size_t deg, const Scalar& s = 1) {
    std::vector<Scalar> c(deg + 1);
    c[deg] = s;
    return UniPoly(std::move(c));
  }
  /// t - root
  static UniPoly linear(const Scalar& root) { return UniPoly{-root, Scalar(1)}; }

  const std::vector<Scalar>& coefficients() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  Scalar lead() const { return c_.empty() ? Scalar() : c_.back(); }
  Scalar coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Scalar(); }
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
  bool is_real() const {
    for (const auto& s : c_)
      if (!s.is_real()) return false;
    return true;
  }

  UniPoly monic() const {
    if (c_.empty()) return *this;
    Scalar inv = c_.back().inverse();
    std::vector<Scalar> c = c_;
    for (auto& s : c) s *= inv;
    return UniPoly(std::move(c));
  }
  UniPoly conj() const {
    std::vector<Scalar> c = c_;
    for (auto& s : c) s = s.conj();
    return UniPoly(std::move(c));
  }
  UniPoly derivative() const {
    std::vector<Scalar> c;
    for (std::size_t k = 1; k < c_.size(); ++k) c.push_back(c_[k] * Scalar(static_cast<long>(k)));
    return UniPoly(std::move(c));
  }

  Scalar operator()(const Scalar& x) const {
    Scalar r;
    for (std::size_t k = c_.size(); k-- > 0;) r = r * x + c_[k];
    return r;
  }
  /// Horner evaluation at a square matrix.
  Matrix operator()(const Matrix& m) const {
    Matrix r = Matrix::zero(m.rows(), m.cols());
    const Matrix id = Matrix::identity(m.rows());
    for (std::size_t k = c_.size(); k-- > 0;) r = r * m + c_[k] * id;
    return r;
  }
  /// p(t + shift)
  UniPoly shift(const Scalar& s) const {
    UniPoly r;
    const UniPoly x{s, Scalar(1)};
    for (std::size_t k = c_.size(); k-- > 0;) r = r * x + constant(c_[k]);
    return r;
  }

  UniPoly& operator+=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  UniPoly& operator-=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Scalar> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(c));
  }
  friend UniPoly operator*(const Scalar& s, const UniPoly& p) {
    std::vector<Scalar> c = p.c_;
    for (auto& e : c) e *= s;
    return UniPoly(std::move(c));
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division: a = q * b + r with deg r < deg b.
  static std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Scalar> r = a.c_;
    const std::size_t db = b.c_.size() - 1;
    if (r.size() <= db) return {UniPoly(), a};
    std::vector<Scalar> q(r.size() - db);
    const Scalar inv = b.c_.back().inverse();
    for (std::size_t k = r.size(); k-- > db;) {
      if (r[k].is_zero()) continue;
      Scalar f = r[k] * inv;
      q[k - db] = f;
      for (std::size_t j = 0; j <= db; ++j) r[k - db + j] -= f * b.c_[j];
    }
    r.resize(db);
    return {UniPoly(std::move(q)), UniPoly(std::move(r))};
  }
  friend UniPoly operator/(const UniPoly& a, const UniPoly& b) { return divmod(a, b).first; }
  friend UniPoly operator%(const UniPoly& a, const UniPoly& b) { return divmod(a, b).second; }

  std::string str(const std::string& var = "t") const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = c_.size(); k-- > 0;) {
      if (c_[k].is_zero()) continue;
      std::string coef = c_[k].is_real() ? c_[k].str() : "(" + c_[k].str() + ")";
      if (!out.empty()) out += " + ";
      if (k == 0)
        out += coef;
      else
        out += (c_[k].is_one() ? "" : coef + "*") + var + (k > 1 ? "^" + std::to_string(k) : "");
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Scalar> c_;
};

/// Monic gcd (zero if both inputs are zero).
inline UniPoly gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Returns (g, s, t) with s*a + t*b = g = gcd(a, b), g monic.
inline std::tuple<UniPoly, UniPoly, UniPoly> extended_gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly r0 = a, r1 = b, s0 = UniPoly::constant(1), s1, t0, t1 = UniPoly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = UniPoly::divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    UniPoly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    UniPoly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  Scalar inv = r0.lead().inverse();
  return {inv * r0, inv * s0, inv * t0};
}

/// Yun's square-free decomposition of a nonzero polynomial: returns monic pairwise
/// coprime square-free s_i with p = lead(p) * prod s_i^i (entries with s_i = 1 omitted).
inline std::vector<std::pair<UniPoly, std::size_t>> squarefree_decomposition(const UniPoly& p) {
  if (p.is_zero()) throw PreconditionError("square-free decomposition of the zero polynomial");
  std::vector<std::pair<UniPoly, std::size_t>> out;
  UniPoly f = p.monic();
  if (f.degree() < 1) return out;
  UniPoly a = gcd(f, f.derivative());
  UniPoly b = f / a;
  UniPoly c = f.derivative() / a;
  UniPoly d = c - b.derivative();
  std::size_t i = 1;
  while (b.degree() > 0) {
    UniPoly s = gcd(b, d);
    if (s.degree() > 0) out.emplace_back(s.monic(), i);
    b = b / s;
    c = d / s;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

/// Minimal polynomial of a square matrix (monic, least degree annihilator), computed
/// from the first linear dependency among vec(I), vec(M), vec(M^2), ...
inline UniPoly minpoly(const Matrix& m) {
  if (!m.is_square()) throw PreconditionError("minimal polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  LinearSpan span(n * n);
  Matrix pw = Matrix::identity(n);
  for (std::size_t k = 0;; ++k) {
    if (auto coords = span.coordinates(pw.vec())) {
      std::vector<Scalar> c(k + 1);
      for (std::size_t j = 0; j < k; ++j) c[j] = -(*coords)[j];
      c[k] = 1;
      return UniPoly(std::move(c));
    }
    span.insert(pw.vec());
    pw = pw * m;
  }
}

/// Companion matrix of a monic polynomial of degree >= 1: ones on the subdiagonal,
/// last column -(a_0, ..., a_{k-1}). Its minimal polynomial is p.
inline Matrix companion(const UniPoly& p) {
  if (p.degree() < 1) throw PreconditionError("companion matrix needs degree >= 1");
  if (!p.is_monic()) throw PreconditionError("companion matrix needs a monic polynomial");
  const std::size_t k = static_cast<std::size_t>(p.degree());
  Matrix c(k, k);
  for (std::size_t i = 1; i < k; ++i) c(i, i - 1) = 1;
  for (std::size_t i = 0; i < k; ++i) c(i, k - 1) = -p.coeff(i);
  return c;
}

/// Exact interpolation through (x_k, y_k) with distinct nodes (Newton form).
inline UniPoly interpolate(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys) {
  const std::size_t n = xs.size();
  std::vector<Scalar> dd = ys;
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t k = n - 1; k >= level; --k) {
      dd[k] = (dd[k] - dd[k - 1]) / (xs[k] - xs[k - level]);
      if (k == level) break;
    }
  UniPoly r;
  for (std::size_t k = n; k-- > 0;) r = r * UniPoly{-xs[k], Scalar(1)} + UniPoly::constant(dd[k]);
  return r;
}

}  // namespace freeloci
