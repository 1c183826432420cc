#pragma once

// Trace-word fingerprints of matrix tuples and comparison of orbit closures.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "freeloci/algebra.hpp"
#include "freeloci/pencil.hpp"
#include "freeloci/random.hpp"
#include "freeloci/word.hpp"

namespace freeloci {

/// Lyndon words over g letters of length at most max_len, in length-lex order.
inline std::vector<Word> lyndon_words(std::size_t g, std::size_t max_len) {
  require(g >= 1, "at least one letter is needed");
  require(max_len >= 1, "maximum length must be at least 1");
  std::vector<Word> out;
  Word w{1};
  while (!w.empty()) {
    out.push_back(w);
    const std::size_t m = w.size();
    while (w.size() < max_len) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == g) w.pop_back();
    if (!w.empty()) ++w.back();
  }
  std::stable_sort(out.begin(), out.end(), LengthLexLess{});
  return out;
}

/// Smallest rotation of w.
inline Word necklace(const Word& w) {
  Word best = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    Word r(w.begin() + static_cast<long>(k), w.end());
    r.insert(r.end(), w.begin(), w.begin() + static_cast<long>(k));
    if (r < best) best = std::move(r);
  }
  return best;
}

struct Fingerprint {
  std::size_t size = 0;  // d
  std::size_t vars = 0;
  /// tr w(A) for every necklace w (a Lyndon word or a power of one) of length 1..d^2.
  std::map<Word, Scalar, LengthLexLess> entries;

  Scalar trace(const Word& w) const {
    if (w.empty()) return Scalar(static_cast<long>(size));
    auto it = entries.find(necklace(w));
    require(it != entries.end(), "word is longer than the fingerprint covers");
    return it->second;
  }
  friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
    return a.size == b.size && a.vars == b.vars && a.entries == b.entries;
  }
};

inline constexpr std::size_t kFingerprintLimit = 200000;

/// Number of Lyndon words of length at most n over g letters, stopping once it
/// passes `cap`.
inline std::size_t lyndon_count(std::size_t g, std::size_t n, std::size_t cap) {
  // Witt's formula per length, via the Moebius function
  auto mu = [](std::size_t k) {
    int m = 1;
    for (std::size_t p = 2; p * p <= k; ++p)
      if (k % p == 0) {
        k /= p;
        if (k % p == 0) return 0;
        m = -m;
      }
    return k > 1 ? -m : m;
  };
  std::size_t total = 0;
  for (std::size_t len = 1; len <= n; ++len) {
    long double s = 0;
    for (std::size_t k = 1; k <= len; ++k)
      if (len % k == 0) s += mu(len / k) * std::pow(static_cast<long double>(g), static_cast<long double>(k));
    total += static_cast<std::size_t>(s / static_cast<long double>(len) + 0.5L);
    if (total > cap) return total;
  }
  return total;
}

/// Traces of all necklaces up to length d^2. Equal fingerprints at equal size mean
/// equal traces of every word, hence the same closed orbit.
inline Fingerprint trace_fingerprint(const MatrixTuple& a, std::size_t d) {
  require(all_square_of_size(a, d), "tuple matrices must all be d x d");
  Fingerprint fp;
  fp.size = d;
  fp.vars = a.size();
  if (d == 0 || a.empty()) return fp;
  const std::size_t n = d * d;
  require(lyndon_count(a.size(), n, kFingerprintLimit) <= kFingerprintLimit,
          "fingerprint table too large; compare orbits with same_orbit_closure instead");
  for (const auto& u : lyndon_words(a.size(), n)) {
    const Matrix m = evaluate_word(u, a, d);
    Matrix p = m;
    Word w = u;
    for (std::size_t k = 1; k * u.size() <= n; ++k) {
      fp.entries.emplace(w, p.trace());
      p = p * m;
      w = concat(w, u);
    }
  }
  return fp;
}

/// tr w(a) = tr w(b) for every word w. Decided on a spanning set of words of the
/// algebra generated by the tuple a_i (+) b_i.
inline bool same_orbit_closure(const MatrixTuple& a, const MatrixTuple& b) {
  require(a.size() == b.size(), "tuples must have the same number of matrices");
  require(!a.empty(), "tuples must be nonempty");
  const std::size_t d = a[0].rows();
  require(all_square_of_size(a, d) && all_square_of_size(b, d), "tuples must have equal square sizes");
  if (d == 0) return true;
  MatrixTuple joint;
  for (std::size_t i = 0; i < a.size(); ++i) joint.push_back(direct_sum(a[i], b[i]));
  const auto basis = word_span(joint);
  for (const auto& m : basis.elements) {
    if (!(m.block(0, 0, d, d).trace() == m.block(d, d, d, d).trace())) return false;
  }
  return true;
}

struct DetCheck {
  bool agree = true;
  std::size_t trials = 0;
  std::optional<MatrixTuple> refuting_point;  // det L_A(X) != det L_B(X)
  std::size_t refuting_size = 0;
};

/// det L_A(X) = det L_B(X) at `trials` seeded integer tuples of sizes 1, 2, ..., d^2
/// in turn. A mismatch is an exact refutation.
inline DetCheck det_generic_check(const MonicPencil& la, const MonicPencil& lb, std::size_t trials,
                                  std::uint64_t seed = 0, long bound = 3) {
  require(la.size() == lb.size(), "pencils must have equal size");
  require(la.vars() == lb.vars(), "pencils must have the same number of variables");
  DetCheck out;
  const std::size_t d = la.size(), top = std::max<std::size_t>(d * d, 1);
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 1 + t % top;
    const auto x = rng.tuple(la.vars(), n, bound);
    ++out.trials;
    if (!(det(evaluate(la, x)) == det(evaluate(lb, x)))) {
      out.agree = false;
      out.refuting_point = x;
      out.refuting_size = n;
      return out;
    }
  }
  return out;
}

}  // namespace freeloci
