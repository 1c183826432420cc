#pragma once

// Factorization of univariate polynomials over Q (modular: Cantor-Zassenhaus mod p,
// Hensel lifting, subset recombination) and over Q(i) (norm method).

#include <algorithm>
#include <cstdint>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "freeloci/unipoly.hpp"

namespace freeloci {

namespace detail {

// ---- dense polynomials over Z/p, lowest degree first --------------------------------
namespace modp {

using Poly = std::vector<std::uint64_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
inline std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}
inline std::uint64_t inv(std::uint64_t a, std::uint64_t p) { return pow(a, p - 2, p); }

inline Poly add(Poly a, const Poly& b, std::uint64_t p) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t k = 0; k < b.size(); ++k) a[k] = (a[k] + b[k]) % p;
  trim(a);
  return a;
}
inline Poly sub(Poly a, const Poly& b, std::uint64_t p) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t k = 0; k < b.size(); ++k) a[k] = (a[k] + p - b[k]) % p;
  trim(a);
  return a;
}
inline Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mul(a[i], b[j], p)) % p;
  }
  trim(c);
  return c;
}
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) return {{}, a};
  const std::size_t db = b.size() - 1;
  Poly q(a.size() - db, 0);
  const std::uint64_t li = inv(b.back(), p);
  for (std::size_t k = a.size(); k-- > db;) {
    if (a[k] == 0) continue;
    const std::uint64_t f = mul(a[k], li, p);
    q[k - db] = f;
    for (std::size_t j = 0; j <= db; ++j) a[k - db + j] = (a[k - db + j] + p - mul(f, b[j], p)) % p;
  }
  a.resize(db);
  trim(a);
  trim(q);
  return {q, a};
}
inline Poly rem(const Poly& a, const Poly& b, std::uint64_t p) { return divmod(a, b, p).second; }
inline Poly monic(Poly a, std::uint64_t p) {
  if (a.empty()) return a;
  const std::uint64_t li = inv(a.back(), p);
  for (auto& c : a) c = mul(c, li, p);
  return a;
}
inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}
/// (g, s, t) with s a + t b = g monic.
inline std::tuple<Poly, Poly, Poly> ext_gcd(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1, p);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = sub(s0, mul(q, s1, p), p);
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly t2 = sub(t0, mul(q, t1, p), p);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  const std::uint64_t li = inv(r0.back(), p);
  for (auto* v : {&r0, &s0, &t0})
    for (auto& c : *v) c = mul(c, li, p);
  return {r0, s0, t0};
}
inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly r{1};
  base = rem(base, m, p);
  while (e) {
    if (e & 1) r = rem(mul(r, base, p), m, p);
    base = rem(mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}
inline Poly derivative(const Poly& a, std::uint64_t p) {
  Poly d;
  for (std::size_t k = 1; k < a.size(); ++k) d.push_back(mul(a[k], k % p, p));
  trim(d);
  return d;
}

/// Distinct-degree factorization of a monic square-free f: pairs (product of all
/// irreducible factors of degree k, k).
inline std::vector<std::pair<Poly, std::size_t>> distinct_degree(Poly f, std::uint64_t p) {
  std::vector<std::pair<Poly, std::size_t>> out;
  const Poly x{0, 1};
  Poly h = x;
  for (std::size_t k = 1; 2 * k <= f.size() - 1; ++k) {
    h = powmod(h, p, f, p);
    Poly g = gcd(f, sub(h, x, p), p);
    if (g.size() > 1) {
      out.emplace_back(g, k);
      f = divmod(f, g, p).first;
      h = rem(h, f, p);
    }
  }
  if (f.size() > 1) out.emplace_back(f, f.size() - 1);
  return out;
}

/// Equal-degree splitting (Cantor-Zassenhaus, odd p) of a product of degree-k factors.
inline void equal_degree(const Poly& f, std::size_t k, std::uint64_t p, std::mt19937_64& rng,
                         std::vector<Poly>& out) {
  const std::size_t n = f.size() - 1;
  if (n == k) {
    out.push_back(f);
    return;
  }
  for (;;) {
    Poly a(n);
    for (auto& c : a) c = rng() % p;
    trim(a);
    if (a.size() < 2) continue;
    // a^((p^k - 1)/2) = (a^(1 + p + ... + p^(k-1)))^((p-1)/2)
    Poly t = a, b = a;
    for (std::size_t i = 1; i < k; ++i) {
      t = powmod(t, p, f, p);
      b = rem(mul(b, t, p), f, p);
    }
    b = powmod(b, (p - 1) / 2, f, p);
    Poly g = gcd(f, sub(b, Poly{1}, p), p);
    if (g.size() > 1 && g.size() < f.size()) {
      equal_degree(g, k, p, rng, out);
      equal_degree(divmod(f, g, p).first, k, p, rng, out);
      return;
    }
  }
}

}  // namespace modp

// ---- integer polynomials -------------------------------------------------------------
using ZPoly = std::vector<mpz_class>;

inline void ztrim(ZPoly& a) {
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}
inline ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  ztrim(c);
  return c;
}
inline void zreduce(ZPoly& a, const mpz_class& m, bool symmetric) {
  const mpz_class half = m / 2;
  for (auto& c : a) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (symmetric && c > half) c -= m;
  }
  ztrim(a);
}
inline modp::Poly to_modp(const ZPoly& a, std::uint64_t p) {
  modp::Poly r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = mpz_fdiv_ui(a[k].get_mpz_t(), p);
  modp::trim(r);
  return r;
}
inline ZPoly from_modp(const modp::Poly& a) {
  ZPoly r;
  for (auto c : a) r.emplace_back(static_cast<unsigned long>(c));
  return r;
}
/// Exact division by a monic integer polynomial; nullopt when it does not divide.
inline std::optional<ZPoly> zdivide_monic(ZPoly a, const ZPoly& b) {
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) return std::nullopt;
  ZPoly q(a.size() - db);
  for (std::size_t k = a.size(); k-- > db;) {
    const mpz_class f = a[k];
    q[k - db] = f;
    if (sgn(f) == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[k - db + j] -= f * b[j];
  }
  for (std::size_t k = 0; k < db; ++k)
    if (sgn(a[k]) != 0) return std::nullopt;
  return q;
}

inline bool is_probable_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Lifts f = g0 * h0 (mod p), g0 h0 monic coprime, to a factorization mod p^k.
inline std::pair<ZPoly, ZPoly> hensel_pair(const ZPoly& f, const modp::Poly& g0,
                                           const modp::Poly& h0, std::uint64_t p, unsigned k) {
  auto [one, s, t] = modp::ext_gcd(g0, h0, p);
  ensure(one.size() == 1, "Hensel lifting needs coprime factors");
  ZPoly g = from_modp(g0), h = from_modp(h0);
  mpz_class m = static_cast<unsigned long>(p);
  for (unsigned e = 1; e < k; ++e) {
    ZPoly err = f;
    const ZPoly gh = zmul(g, h);
    if (gh.size() > err.size()) err.resize(gh.size());
    for (std::size_t j = 0; j < gh.size(); ++j) err[j] -= gh[j];
    for (auto& c : err) {
      ensure(mpz_divisible_p(c.get_mpz_t(), m.get_mpz_t()) != 0, "Hensel step lost congruence");
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    }
    const modp::Poly e_p = to_modp(err, p);
    const modp::Poly dg = modp::rem(modp::mul(t, e_p, p), g0, p);
    const modp::Poly dh = modp::divmod(modp::sub(e_p, modp::mul(h0, dg, p), p), g0, p).first;
    const mpz_class next = m * static_cast<unsigned long>(p);
    if (dg.size() > g.size()) g.resize(dg.size());
    for (std::size_t j = 0; j < dg.size(); ++j) g[j] += m * static_cast<unsigned long>(dg[j]);
    if (dh.size() > h.size()) h.resize(dh.size());
    for (std::size_t j = 0; j < dh.size(); ++j) h[j] += m * static_cast<unsigned long>(dh[j]);
    zreduce(g, next, false);
    zreduce(h, next, false);
    m = next;
  }
  return {g, h};
}

/// Lifts f = prod(factors) (mod p), factors monic, to monic factors mod p^k.
inline std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<modp::Poly>& factors,
                                      std::uint64_t p, unsigned k) {
  if (factors.size() == 1) {
    ZPoly r = f;
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), p, k);
    zreduce(r, m, false);
    return {r};
  }
  const std::size_t half = factors.size() / 2;
  std::vector<modp::Poly> left(factors.begin(), factors.begin() + half);
  std::vector<modp::Poly> right(factors.begin() + half, factors.end());
  modp::Poly g{1}, h{1};
  for (const auto& q : left) g = modp::mul(g, q, p);
  for (const auto& q : right) h = modp::mul(h, q, p);
  auto [G, H] = hensel_pair(f, g, h, p, k);
  auto out = hensel_lift(G, left, p, k);
  auto rest = hensel_lift(H, right, p, k);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

/// Irreducible monic factors over Z of a monic square-free integer polynomial.
inline std::vector<ZPoly> factor_monic_integer(ZPoly f) {
  const std::size_t n = f.size() - 1;
  if (n <= 1) return {f};

  // Choose among a few good primes the one giving the fewest modular factors.
  std::uint64_t best_p = 0;
  std::vector<modp::Poly> best;
  std::uint64_t cand = 2147483647ULL;
  for (int tried = 0; tried < 4; --cand) {
    if (!is_probable_prime(cand)) continue;
    const modp::Poly fp = to_modp(f, cand);
    if (modp::gcd(fp, modp::derivative(fp, cand), cand).size() != 1) continue;
    ++tried;
    std::mt19937_64 rng(cand);
    std::vector<modp::Poly> fs;
    for (auto& [part, deg] : modp::distinct_degree(fp, cand))
      modp::equal_degree(part, deg, cand, rng, fs);
    if (best_p == 0 || fs.size() < best.size()) {
      best_p = cand;
      best = std::move(fs);
    }
    if (best.size() == 1) return {f};
  }
  const std::uint64_t p = best_p;

  // Coefficients of monic factors are bounded by 2^n * |f|_2.
  mpz_class norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  mpz_class bound = (sqrt(norm2) + 1) << static_cast<unsigned>(n);
  bound *= 2;
  unsigned k = 1;
  mpz_class pk = static_cast<unsigned long>(p);
  while (pk <= bound) {
    pk *= static_cast<unsigned long>(p);
    ++k;
  }
  std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<ZPoly> lifted = hensel_lift(f, best, p, k);

  std::vector<ZPoly> out;
  std::vector<std::size_t> remaining(lifted.size());
  for (std::size_t j = 0; j < remaining.size(); ++j) remaining[j] = j;
  std::size_t s = 1;
  while (2 * s <= remaining.size()) {
    bool found = false;
    std::vector<std::size_t> pick(s);
    for (std::size_t j = 0; j < s; ++j) pick[j] = j;
    for (;;) {
      ZPoly g{1};
      for (auto j : pick) {
        g = zmul(g, lifted[remaining[j]]);
        zreduce(g, pk, true);
      }
      if (auto q = zdivide_monic(f, g)) {
        out.push_back(g);
        f = std::move(*q);
        for (std::size_t j = s; j-- > 0;) remaining.erase(remaining.begin() + pick[j]);
        found = true;
        break;
      }
      // next combination
      std::size_t j = s;
      while (j > 0 && pick[j - 1] == remaining.size() - s + j - 1) --j;
      if (j == 0) break;
      ++pick[j - 1];
      for (std::size_t i = j; i < s; ++i) pick[i] = pick[i - 1] + 1;
    }
    if (!found) ++s;
  }
  if (f.size() > 1) out.push_back(f);
  return out;
}

/// Irreducible monic factors over Q of a monic square-free polynomial with rational
/// coefficients.
inline std::vector<UniPoly> factor_squarefree_rational(const UniPoly& q) {
  const std::size_t n = static_cast<std::size_t>(q.degree());
  if (n <= 1) return {q};
  mpz_class den = 1;
  for (const auto& c : q.coefficients()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.re().get_den_mpz_t());
  ZPoly z;
  for (const auto& c : q.coefficients()) z.push_back(mpz_class(c.re() * den));
  mpz_class content = 0;
  for (const auto& c : z) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
  for (auto& c : z) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
  const mpz_class lc = z.back();
  // monic transform: lc^(n-1) z(t / lc)
  ZPoly m(n + 1);
  mpz_class pw = 1;
  for (std::size_t j = n; j-- > 0;) {
    m[j] = z[j] * pw;
    pw *= lc;
  }
  m[n] = 1;
  std::vector<UniPoly> out;
  for (const auto& h : factor_monic_integer(m)) {
    // undo: h(lc t), then normalize to monic over Q
    std::vector<Scalar> c;
    mpz_class l = 1;
    for (const auto& a : h) {
      c.emplace_back(mpq_class(a * l));
      l *= lc;
    }
    out.push_back(UniPoly(std::move(c)).monic());
  }
  return out;
}

/// Irreducible monic factors over Q(i) of a monic square-free polynomial (norm method).
inline std::vector<UniPoly> factor_squarefree_gaussian(const UniPoly& f) {
  if (f.degree() <= 1) return {f};
  for (long s = 0;; ++s) {
    const Scalar shift = Scalar(mpq_class(0), mpq_class(s));
    const UniPoly fs = f.shift(shift);
    const UniPoly norm = fs * fs.conj();
    if (gcd(norm, norm.derivative()).degree() != 0) continue;
    std::vector<UniPoly> out;
    for (const auto& nj : factor_squarefree_rational(norm)) {
      UniPoly g = gcd(fs, nj);
      if (g.degree() > 0) out.push_back(g.shift(-shift));
    }
    return out;
  }
}

}  // namespace detail

/// Factorization into monic irreducibles over the chosen base field, with
/// multiplicities. p = lead(p) * prod f^m. Sorted by (degree, text form).
inline std::vector<std::pair<UniPoly, std::size_t>> factor(const UniPoly& p, Field field) {
  if (p.is_zero()) throw PreconditionError("factorization of the zero polynomial");
  if (field == Field::rational && !p.is_real())
    throw PreconditionError("polynomial has non-rational coefficients over Q");
  std::vector<std::pair<UniPoly, std::size_t>> out;
  for (const auto& [part, mult] : squarefree_decomposition(p)) {
    const auto fs = field == Field::rational ? detail::factor_squarefree_rational(part)
                                             : detail::factor_squarefree_gaussian(part);
    for (const auto& f : fs) out.emplace_back(f, mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    const std::string sa = a.first.str(), sb = b.first.str();
    return sa != sb ? sa < sb : a.second < b.second;
  });
  return out;
}

}  // namespace freeloci
