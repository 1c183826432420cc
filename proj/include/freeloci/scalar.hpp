#pragma once

// Exact scalars over Q or Q(i), backed by GMP rationals.

#include <gmpxx.h>

#include <cctype>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "freeloci/errors.hpp"

namespace freeloci {

/// Base field of a computation. Only affects operations whose answer depends on the
/// field (factorization, splitting of algebras, random sampling).
enum class Field { rational, gaussian };

inline std::string to_string(Field f) { return f == Field::rational ? "Q" : "Q(i)"; }

/// Element a + b*i with a, b in Q. Both parts are always canonical GMP rationals.
class Scalar {
 public:
  Scalar() = default;
  template <std::integral T>
  Scalar(T v) : re_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Scalar(mpq_class re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
  Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  static Scalar fraction(long num, long den) { return Scalar(mpq_class(num, den)); }
  static Scalar imaginary_unit() { return Scalar(mpq_class(0), mpq_class(1)); }

  const mpq_class& re() const noexcept { return re_; }
  const mpq_class& im() const noexcept { return im_; }
  bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const noexcept { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const noexcept { return sgn(im_) == 0; }
  bool is_integer() const {
    return re_.get_den() == 1 && im_.get_den() == 1;
  }

  Scalar conj() const { return Scalar(re_, -im_); }
  /// |z|^2, always rational.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("division by zero scalar");
    if (is_real()) return Scalar(mpq_class(1) / re_);
    mpq_class n = norm();
    return Scalar(re_ / n, -im_ / n);
  }

  Scalar operator-() const { return Scalar(-re_, -im_); }

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0) im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0) im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    if (is_real() && o.is_real()) {
      re_ *= o.re_;
      return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw std::domain_error("division by zero scalar");
    if (is_real() && o.is_real()) {
      re_ /= o.re_;
      return *this;
    }
    return *this *= o.inverse();
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Canonical text form: "a", "a/b", "c/d*i", "a/b+c/d*i", "a/b-c/d*i".
  std::string str() const {
    if (is_real()) return re_.get_str();
    mpq_class mag = abs(im_);
    if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + mag.get_str() + "*i";
    return re_.get_str() + (sgn(im_) < 0 ? "-" : "+") + mag.get_str() + "*i";
  }

  /// Parses the canonical form. Also accepts "i", "-i", "a+i", whitespace, and
  /// non-reduced fractions such as "2/4".
  static Scalar parse(std::string_view text) {
    std::string s;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw FormatError("empty scalar");
    if (s.back() != 'i') return Scalar(parse_rational(s));
    s.pop_back();
    if (!s.empty() && s.back() == '*') s.pop_back();
    // split at the last sign that is not the leading character
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '/') {
        split = k;
        break;
      }
    }
    std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string im_part = split == std::string::npos ? s : s.substr(split);
    mpq_class im;
    if (im_part.empty() || im_part == "+")
      im = 1;
    else if (im_part == "-")
      im = -1;
    else
      im = parse_rational(im_part);
    mpq_class re = re_part.empty() ? mpq_class(0) : parse_rational(re_part);
    return Scalar(re, im);
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

 private:
  static mpq_class parse_rational(std::string s) {
    if (!s.empty() && s.front() == '+') s.erase(s.begin());
    bool seen_digit = false;
    bool seen_slash = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
      char c = s[k];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        seen_digit = true;
      } else if (c == '-' && k == 0) {
      } else if (c == '/' && seen_digit && !seen_slash) {
        seen_slash = true;
        seen_digit = false;
      } else {
        throw FormatError("malformed scalar '" + s + "'");
      }
    }
    if (!seen_digit) throw FormatError("malformed scalar '" + s + "'");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw FormatError("malformed scalar '" + s + "'");
    if (q.get_den() == 0) throw FormatError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }

  mpq_class re_{0};
  mpq_class im_{0};
};

}  // namespace freeloci
