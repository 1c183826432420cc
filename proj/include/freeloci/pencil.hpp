#pragma once

// Monic linear pencils L(x) = I - sum A_i x_i and their free singular loci.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "freeloci/algebra.hpp"
#include "freeloci/factor.hpp"
#include "freeloci/random.hpp"
#include "freeloci/unipoly.hpp"
#include "freeloci/word.hpp"

namespace freeloci {

class MonicPencil {
 public:
  MonicPencil() = default;
  explicit MonicPencil(MatrixTuple coefficients) : coefficients_(std::move(coefficients)) {
    require(!coefficients_.empty(), "a pencil needs at least one variable");
    require(all_square_of_size(coefficients_, coefficients_[0].rows()),
            "pencil coefficients must be square of equal size");
  }
  /// The size-0 pencil in g variables; its determinant is identically 1.
  static MonicPencil empty(std::size_t g) { return MonicPencil(MatrixTuple(g, Matrix(0, 0))); }

  std::size_t size() const noexcept { return coefficients_.empty() ? 0 : coefficients_[0].rows(); }
  std::size_t vars() const noexcept { return coefficients_.size(); }
  const MatrixTuple& coefficients() const noexcept { return coefficients_; }
  const Matrix& operator[](std::size_t i) const { return coefficients_[i]; }

  friend bool operator==(const MonicPencil& a, const MonicPencil& b) { return a.coefficients_ == b.coefficients_; }

 private:
  MatrixTuple coefficients_;
};

inline MonicPencil direct_sum(const MonicPencil& a, const MonicPencil& b) {
  require(a.vars() == b.vars(), "pencils must have the same number of variables");
  MatrixTuple c;
  for (std::size_t i = 0; i < a.vars(); ++i) c.push_back(direct_sum(a[i], b[i]));
  return MonicPencil(std::move(c));
}

inline std::size_t point_size(const MatrixTuple& x) { return x.empty() ? 0 : x[0].rows(); }

inline void check_point(std::size_t g, const MatrixTuple& x) {
  require(x.size() == g, "point has " + std::to_string(x.size()) + " matrices, expected " + std::to_string(g));
  require(all_square_of_size(x, point_size(x)), "point matrices must be square of equal size");
}

/// I (x) I - sum A_i (x) X_i.
inline Matrix evaluate(const MonicPencil& l, const MatrixTuple& x) {
  check_point(l.vars(), x);
  const std::size_t n = point_size(x);
  Matrix out = Matrix::identity(l.size() * n);
  for (std::size_t i = 0; i < l.vars(); ++i)
    if (!l[i].is_zero() && !x[i].is_zero()) out -= kron(l[i], x[i]);
  return out;
}

/// dim ker L(X); X is in the free locus iff this is positive.
inline std::size_t in_locus(const MonicPencil& l, const MatrixTuple& x) { return kernel_dimension(evaluate(l, x)); }

struct LocusPoint {
  MatrixTuple point;
  std::size_t kernel_dim = 0;
};

/// Given f without constant term, builds X' (independent of any coefficients) with
/// dim ker(L_A(X) - f(A) (x) Y) = dim ker L_A(X') for every tuple A. Each word
/// x_j v with coefficient matrix Z = C R (rank factorization, r = rank Z) is traded
/// for a Schur complement step of size r: the new coordinates come first, X_j gets C
/// in the lower left block and v inherits R in the upper right block.
inline MatrixTuple lemma_poly_expand(const NcPolynomial& f, const MatrixTuple& x, const Matrix& y) {
  require(!f.is_zero(), "lemma_poly_expand needs a nonzero polynomial");
  require(!f.has_constant_term(), "lemma_poly_expand needs a polynomial without constant term");
  require(!x.empty(), "lemma_poly_expand needs at least one variable");
  check_point(x.size(), x);
  require(f.max_letter() <= x.size(), "polynomial uses more variables than the point provides");
  const std::size_t n0 = point_size(x);
  require(y.rows() == n0 && y.cols() == n0, "Y must have the size of the point");

  MatrixTuple out = x;
  std::vector<std::pair<Word, Matrix>> pending;
  for (const auto& [w, c] : f.terms()) pending.emplace_back(w, c * y);
  std::reverse(pending.begin(), pending.end());

  auto embed = [](const Matrix& m, std::size_t r) {
    Matrix e(m.rows() + r, m.cols() + r);
    e.set_block(r, r, m);
    return e;
  };

  while (!pending.empty()) {
    auto [w, z] = std::move(pending.back());
    pending.pop_back();
    if (z.is_zero()) continue;
    const std::size_t j = w.front() - 1;
    if (w.size() == 1) {
      out[j] += z;
      continue;
    }
    const Echelon ech = rref(z);
    const std::size_t r = ech.pivots.size(), n = z.rows();
    Matrix cfac(n, r), rfac(r, n);
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        cfac(i, k) = z(i, ech.pivots[k]);
        rfac(k, i) = ech.reduced(k, i);
      }
    }
    for (auto& m : out) m = embed(m, r);
    for (auto& [pw, pz] : pending) pz = embed(pz, r);
    out[j].set_block(r, 0, out[j].block(r, 0, n, r) + cfac);
    Matrix tail(n + r, n + r);
    tail.set_block(0, r, rfac);
    pending.emplace_back(Word(w.begin() + 1, w.end()), std::move(tail));
  }
  return out;
}

/// Value of I - sum a_i (x) X_i - sum n_j (x) Y_j.
inline Matrix joint_pencil_value(const MatrixTuple& a, const MatrixTuple& nil, const MatrixTuple& x,
                                 const MatrixTuple& y, std::size_t d) {
  const std::size_t m = x.empty() ? point_size(y) : point_size(x);
  Matrix out = Matrix::identity(d * m);
  for (std::size_t i = 0; i < a.size(); ++i) out -= kron(a[i], x[i]);
  for (std::size_t j = 0; j < nil.size(); ++j) out -= kron(nil[j], y[j]);
  return out;
}

struct NilpotencyResult {
  bool nilpotent = true;
  Word witness;          // letters 1..g refer to a, g+1..g+h to n
  Scalar witness_trace;  // nonzero when a witness is present
};

/// Whether the ideal generated by the n-tuple inside the algebra generated by a and n
/// is nilpotent, i.e. every n_j lies in the radical of the joint algebra. A witness is
/// the first non-nilpotent word containing an n-letter in length-lexicographic order,
/// raised to the least power with nonzero trace.
inline NilpotencyResult nilpotent_ideal_test(const MatrixTuple& a, const MatrixTuple& nil) {
  MatrixTuple joint = a;
  joint.insert(joint.end(), nil.begin(), nil.end());
  NilpotencyResult out;
  if (nil.empty()) return out;
  check_tuple(joint, "nilpotent_ideal_test");
  const std::size_t d = joint[0].rows(), g = a.size(), total = joint.size();
  if (d == 0) return out;
  const auto basis = word_span(joint);
  const auto rad = radical(basis);
  for (const auto& m : nil)
    if (!rad.in_radical(m)) out.nilpotent = false;
  if (out.nilpotent) return out;

  auto try_word = [&](const Word& w) {
    const Matrix u = evaluate_word(w, joint, d);
    if (is_nilpotent(u)) return false;
    Matrix p = u;
    for (std::size_t k = 1; k <= d; ++k) {
      if (!p.trace().is_zero()) {
        out.witness.clear();
        for (std::size_t r = 0; r < k; ++r) out.witness = concat(out.witness, w);
        out.witness_trace = p.trace();
        return true;
      }
      p = p * u;
    }
    ensure(false, "non-nilpotent matrix with vanishing power traces");
    return false;
  };
  // exhaustive search over short words while the word count stays small
  const std::size_t max_len = lambda_bound(d);
  std::size_t count = 1;
  for (std::size_t len = 1; len <= max_len; ++len) {
    count *= total;
    if (count > 100000) break;
    for (const auto& w : words_of_length(total, len)) {
      bool has_n = false;
      for (auto l : w) has_n = has_n || l > g;
      if (has_n && try_word(w)) return out;
    }
  }
  // Fallback: the ideal is spanned by words containing an n-letter, and since it is
  // not inside the radical one of its spanning words has nonzero trace.
  LinearSpan span(d * d);
  std::vector<std::pair<Word, Matrix>> frontier;
  for (std::size_t j = g + 1; j <= total; ++j)
    if (span.insert(joint[j - 1].vec())) frontier.emplace_back(Word{j}, joint[j - 1]);
  while (!frontier.empty()) {
    for (const auto& [w, m] : frontier)
      if (try_word(w)) return out;
    std::vector<std::pair<Word, Matrix>> next;
    for (const auto& [w, m] : frontier)
      for (std::size_t l = 1; l <= total; ++l) {
        Matrix left = joint[l - 1] * m, right = m * joint[l - 1];
        if (span.insert(left.vec())) next.emplace_back(concat(Word{l}, w), std::move(left));
        if (span.insert(right.vec())) next.emplace_back(concat(w, Word{l}), std::move(right));
      }
    frontier = std::move(next);
  }
  ensure(false, "no witness found for a non-nilpotent ideal");
  return out;
}

struct DeterminantCheck {
  std::size_t trials = 0;
  std::size_t agreements = 0;  // trials where det(L_a(X) - sum n_j (x) Y_j) = det L_a(X)
  bool all_agree() const { return agreements == trials; }
};

/// Compares det(L_a(X) - sum n_j (x) Y_j) with det L_a(X) at seeded random points
/// whose sizes cycle through 1..lambda(d).
inline DeterminantCheck nilpotent_determinant_check(const MatrixTuple& a, const MatrixTuple& nil, std::size_t trials,
                                                    const SearchOptions& opts = {}) {
  MatrixTuple joint = a;
  joint.insert(joint.end(), nil.begin(), nil.end());
  check_tuple(joint, "nilpotent_determinant_check");
  const std::size_t d = joint[0].rows();
  const std::size_t cycle = d == 0 ? 1 : lambda_bound(d);
  Rng rng(opts.seed);
  DeterminantCheck out;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t m = 1 + t % cycle;
    const MatrixTuple x = rng.tuple(a.size(), m, 3, opts.field);
    const MatrixTuple y = rng.tuple(nil.size(), m, 3, opts.field);
    const Scalar lhs = det(joint_pencil_value(a, nil, x, y, d));
    const Scalar rhs = det(joint_pencil_value(a, {}, x, {}, d));
    ++out.trials;
    if (lhs == rhs) ++out.agreements;
  }
  return out;
}

/// Whether the coefficient algebra is nilpotent (equivalently L(X) is invertible
/// everywhere).
inline bool jointly_nilpotent(const MonicPencil& l) {
  if (l.size() == 0) return true;
  return radical(word_span(l.coefficients())).quotient_dim() == 0;
}

/// Homomorphism certificate from the semisimple quotient of the B-algebra to that of
/// the A-algebra: column k holds the A-quotient coordinates of word_k(A), where word_k
/// runs over the B-quotient basis words.
struct InclusionCertificate {
  std::vector<Word> words;
  Matrix map;
};

struct InclusionVerdict {
  bool holds = false;
  std::size_t length = 0;  // max of the two stabilization lengths
  std::optional<InclusionCertificate> certificate;
  std::optional<NcPolynomial> refutation;
  std::optional<LocusPoint> separating_point;
};

namespace detail {

struct PencilAlgebra {
  AlgebraBasis basis;
  RadicalData rad;
  MatrixTuple classes;  // left-regular action of the classes of the coefficients
};

inline PencilAlgebra pencil_algebra(const MonicPencil& l) {
  PencilAlgebra p;
  p.basis = word_span(l.coefficients());
  p.rad = radical(p.basis);
  for (const auto& m : l.coefficients()) {
    const std::size_t q = p.rad.quotient_dim();
    p.classes.push_back(q == 0 ? Matrix(0, 0) : p.rad.quotient.left_matrix(p.rad.qcoords(m)));
  }
  return p;
}

inline bool lies_in_radical(const PencilAlgebra& p, const Matrix& m) { return p.rad.in_radical(m); }

}  // namespace detail

/// A point X with det L_A(X) = 0 and det L_B(X) != 0, built from f with f(B) in the
/// radical of the B-algebra and f(A) outside the radical of the A-algebra.
inline LocusPoint separating_point(const MonicPencil& la, const MonicPencil& lb, const NcPolynomial& f,
                                   const SearchOptions& opts = {}) {
  require(la.vars() == lb.vars(), "pencils must have the same number of variables");
  require(!f.is_zero() && !f.has_constant_term(), "f must be nonzero without constant term");
  require(f.max_letter() <= la.vars(), "f uses more variables than the pencils");
  const std::size_t d = la.size(), g = la.vars();
  const auto pa = detail::pencil_algebra(la);
  const auto pb = detail::pencil_algebra(lb);
  const Matrix fa = f.evaluate(la.coefficients(), d);
  const Matrix fb = f.evaluate(lb.coefficients(), lb.size());
  require(detail::lies_in_radical(pb, fb), "f(B) must lie in the radical of the B-algebra");
  require(!detail::lies_in_radical(pa, fa), "f(A) must lie outside the radical of the A-algebra");
  const std::size_t deg_bound = rank(fa);

  auto finish = [&](const MatrixTuple& x) {
    LocusPoint p{x, in_locus(la, x)};
    ensure(p.kernel_dim > 0, "separating point is not in the locus of L_A");
    ensure(in_locus(lb, x) == 0, "separating point is in the locus of L_B");
    return p;
  };

  Rng rng(opts.seed);
  for (std::size_t n = 1; n <= opts.max_size; ++n) {
    for (int round = 0; round < opts.budget; ++round) {
      const long bound = round_bound(round);
      const MatrixTuple x = rng.tuple(g, n, bound, opts.field);
      if (det(evaluate(lb, x)).is_zero()) continue;
      const Matrix lax = evaluate(la, x);
      if (det(lax).is_zero()) return finish(x);
      const Matrix y0 = round == 0 ? Matrix(n, n) : rng.matrix(n, n, bound, opts.field);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          // q(t) = det(L_A(X) - f(A) (x) (Y0 + t E_ij)) has degree at most rank f(A)
          const Matrix base = lax - kron(fa, y0);
          const Matrix step = kron(fa, Matrix::unit(n, n, i, j));
          std::vector<Scalar> ts, values;
          for (std::size_t t = 0; t <= deg_bound; ++t) {
            ts.emplace_back(static_cast<long>(t));
            values.push_back(det(base - ts.back() * step));
          }
          const UniPoly q = interpolate(ts, values);
          if (q.degree() < 1) continue;
          const Matrix tm = companion(q.monic());
          const std::size_t k = tm.rows();
          MatrixTuple xk;
          for (const auto& m : x) xk.push_back(kron(m, Matrix::identity(k)));
          const Matrix yk = kron(y0, Matrix::identity(k)) + kron(Matrix::unit(n, n, i, j), tm);
          return finish(lemma_poly_expand(f, xk, yk));
        }
    }
  }
  throw SearchBudgetExceeded("no separating point found up to size " + std::to_string(opts.max_size), opts.seed,
                             opts.budget);
}

/// Decides fl(L_A) subset of fl(L_B), i.e. whether B_i -> A_i induces a homomorphism
/// between the semisimple quotients. The test runs on the graph algebra generated by
/// the pairs (class of B_i, class of A_i): the map exists iff projecting the graph
/// onto the B side is injective.
inline InclusionVerdict locus_inclusion(const MonicPencil& la, const MonicPencil& lb, const SearchOptions& opts = {},
                                        bool find_point = true) {
  require(la.vars() == lb.vars(), "pencils must have the same number of variables");
  const std::size_t g = la.vars();
  const auto pa = detail::pencil_algebra(la);
  const auto pb = detail::pencil_algebra(lb);
  const std::size_t qa = pa.rad.quotient_dim(), qb = pb.rad.quotient_dim();

  InclusionVerdict out;
  out.length = std::max(pa.basis.length, pb.basis.length);

  MatrixTuple pairs;
  for (std::size_t i = 0; i < g; ++i) pairs.push_back(direct_sum(pb.classes[i], pa.classes[i]));
  const auto graph = word_span(pairs);

  auto b_coords = [&](const Word& w) {
    return qb == 0 ? Vector{} : pb.rad.qcoords(evaluate_word(w, lb.coefficients(), lb.size()));
  };
  auto a_coords = [&](const Word& w) {
    return qa == 0 ? Vector{} : pa.rad.qcoords(evaluate_word(w, la.coefficients(), la.size()));
  };

  if (graph.dim() == qb) {
    out.holds = true;
    InclusionCertificate cert;
    cert.words = pb.rad.quotient_words;
    cert.map = Matrix(qa, qb);
    for (std::size_t k = 0; k < qb; ++k) {
      const Vector c = a_coords(cert.words[k]);
      for (std::size_t r = 0; r < qa; ++r) cert.map(r, k) = c[r];
    }
    // generator images
    for (std::size_t i = 0; i < g; ++i) {
      const Vector bi = qb == 0 ? Vector{} : pb.rad.qcoords(lb[i]);
      const Vector ai = qa == 0 ? Vector{} : pa.rad.qcoords(la[i]);
      ensure(cert.map * bi == ai, "certificate does not map generator classes");
    }
    // multiplicativity on basis pairs
    for (std::size_t j = 0; j < qb; ++j)
      for (std::size_t k = 0; k < qb; ++k) {
        const Vector lhs = cert.map * pb.rad.quotient.product_of_basis(j, k);
        const Vector rhs = qa == 0 ? Vector{} : pa.rad.quotient.multiply(cert.map.col(j), cert.map.col(k));
        ensure(lhs == rhs, "certificate is not multiplicative");
      }
    // unitality
    if (qb > 0) {
      const auto ub = pb.rad.quotient.unit();
      ensure(ub.has_value(), "semisimple quotient without unit");
      const Vector image = cert.map * *ub;
      if (qa > 0) {
        const auto ua = pa.rad.quotient.unit();
        ensure(ua.has_value() && image == *ua, "certificate is not unital");
      }
    }
    out.certificate = std::move(cert);
    return out;
  }

  // Refutation: the first graph word whose B-part depends on the earlier B-parts.
  ensure(graph.dim() > qb, "graph algebra smaller than the B quotient");
  LinearSpan bspan(qb);
  std::vector<Word> accepted;
  for (const auto& w : graph.words) {
    const Vector c = b_coords(w);
    if (bspan.insert(c)) {
      accepted.push_back(w);
      continue;
    }
    const Vector coeffs = *bspan.coordinates(c);
    NcPolynomial f;
    for (std::size_t k = 0; k < accepted.size(); ++k) f.add_term(accepted[k], coeffs[k]);
    f.add_term(w, Scalar(-1));
    ensure(detail::lies_in_radical(pb, f.evaluate(lb.coefficients(), lb.size())), "refutation fails on B");
    ensure(!detail::lies_in_radical(pa, f.evaluate(la.coefficients(), la.size())), "refutation fails on A");
    out.refutation = f;
    if (find_point) out.separating_point = separating_point(la, lb, f, opts);
    return out;
  }
  ensure(false, "no refuting word found");
  return out;
}

inline bool loci_equal(const MonicPencil& a, const MonicPencil& b, const SearchOptions& opts = {}) {
  return locus_inclusion(a, b, opts, false).holds && locus_inclusion(b, a, opts, false).holds;
}

/// One pencil per simple component of the semisimple quotient, given by the
/// left-regular representation of that component.
inline std::vector<MonicPencil> locus_components(const MonicPencil& l, const SearchOptions& opts = {}) {
  std::vector<MonicPencil> out;
  if (l.size() == 0) return out;
  const auto basis = word_span(l.coefficients());
  const auto rad = radical(basis);
  if (rad.quotient_dim() == 0) return out;
  for (auto& comp : wedderburn_components(basis, rad, opts)) out.emplace_back(std::move(comp.generators));
  return out;
}

/// Locus-equal pencil: direct sum of the component pencils (size 0 for an empty
/// locus). Equality with the input is verified both ways.
inline MonicPencil pencil_reduce(const MonicPencil& l, const SearchOptions& opts = {}) {
  const auto comps = locus_components(l, opts);
  MonicPencil out = MonicPencil::empty(l.vars());
  for (const auto& c : comps) out = direct_sum(out, c);
  ensure(loci_equal(l, out, opts), "reduced pencil has a different locus");
  return out;
}

inline bool is_selfadjoint_tuple(const MatrixTuple& t) {
  for (const auto& m : t)
    if (!(m == m.adjoint())) return false;
  return true;
}

/// Inclusion of loci for symmetric or hermitian pencils. Both algebras are
/// semisimple, and the certificate must respect the involution w -> reversed w.
inline InclusionVerdict real_locus_inclusion(const MonicPencil& la, const MonicPencil& lb,
                                             const SearchOptions& opts = {}, bool find_point = true) {
  require(is_selfadjoint_tuple(la.coefficients()), "coefficients of L_A must be symmetric or hermitian");
  require(is_selfadjoint_tuple(lb.coefficients()), "coefficients of L_B must be symmetric or hermitian");
  const auto pa = detail::pencil_algebra(la);
  const auto pb = detail::pencil_algebra(lb);
  ensure(pa.rad.radical.empty(), "algebra of a symmetric pencil has a nonzero radical");
  ensure(pb.rad.radical.empty(), "algebra of a symmetric pencil has a nonzero radical");
  auto verdict = locus_inclusion(la, lb, opts, find_point);
  if (verdict.holds) {
    const auto& cert = *verdict.certificate;
    for (const auto& w : cert.words) {
      const Vector lhs = cert.map * pb.rad.qcoords(evaluate_word(reversed(w), lb.coefficients(), lb.size()));
      const Matrix wa = evaluate_word(w, la.coefficients(), la.size()).adjoint();
      const Vector rhs = pa.rad.quotient_dim() == 0 ? Vector{} : pa.rad.qcoords(wa);
      ensure(lhs == rhs, "certificate does not respect the involution");
    }
  }
  return verdict;
}

namespace detail {

/// A square root of m that is a polynomial in m, for m with square-free minimal
/// polynomial. Works factor by factor of the minimal polynomial and glues the pieces
/// with the Chinese remainder theorem.
inline std::optional<Matrix> polynomial_sqrt(const Matrix& m) {
  const UniPoly mp = minpoly(m);
  const auto factors = factor(mp, Field::rational);
  UniPoly glued;
  for (const auto& [mk, mult] : factors) {
    if (mult != 1) return std::nullopt;
    const std::size_t k = static_cast<std::size_t>(mk.degree());
    // mk(t^2)
    std::vector<Scalar> spread(2 * k + 1);
    for (std::size_t j = 0; j <= k; ++j) spread[2 * j] = mk.coeff(j);
    std::optional<UniPoly> r;
    for (const auto& [fac, fm] : factor(UniPoly(spread), Field::rational))
      if (static_cast<std::size_t>(fac.degree()) == k) {
        r = fac;
        break;
      }
    if (!r) return std::nullopt;
    // t = sum_j c_j t^(2j) mod r, solved in the basis 1, t, ..., t^(k-1)
    Matrix sys(k, k);
    const UniPoly t2 = UniPoly::monomial(2, Scalar(1));
    UniPoly pw = UniPoly::constant(1);
    for (std::size_t j = 0; j < k; ++j) {
      const UniPoly red = pw % *r;
      for (std::size_t i = 0; i < k; ++i) sys(i, j) = red.coeff(i);
      pw = pw * t2;
    }
    const UniPoly target = UniPoly::monomial(1, Scalar(1)) % *r;
    Vector rhs(k);
    for (std::size_t i = 0; i < k; ++i) rhs[i] = target.coeff(i);
    const auto sol = solve(sys, rhs);
    if (!sol) return std::nullopt;
    const UniPoly piece(sol->particular);
    // idempotent polynomial for this factor
    const UniPoly others = mp / mk;
    const auto [g, s, t] = extended_gcd(others, mk);
    const UniPoly e = (s * others) % mp;
    glued = (glued + piece * e) % mp;
  }
  const Matrix root = glued(m);
  if (!(root * root == m)) return std::nullopt;
  return root;
}

}  // namespace detail

struct OrthogonalConjugacy {
  Matrix p;
  Scalar alpha;  // p^t p = alpha I
};

/// P with P a_i = b_i P and P^t P = alpha I (alpha > 0 rational), or nullopt when no
/// conjugation exists at all. When a has only scalar endomorphisms every invertible
/// intertwiner qualifies; otherwise intertwiners are sampled.
inline std::optional<OrthogonalConjugacy> orthogonal_conjugacy(const MatrixTuple& a, const MatrixTuple& b,
                                                              const SearchOptions& opts = {}) {
  check_tuple(a, "orthogonal_conjugacy");
  check_tuple(b, "orthogonal_conjugacy");
  require(a.size() == b.size() && a[0].rows() == b[0].rows(), "tuples must have equal size and length");
  require(is_selfadjoint_tuple(a) && is_selfadjoint_tuple(b), "tuples must be symmetric");
  for (const auto& m : a) require(m.is_real(), "orthogonal conjugacy needs rational entries");
  for (const auto& m : b) require(m.is_real(), "orthogonal conjugacy needs rational entries");
  const std::size_t d = a[0].rows();
  if (a == b) return OrthogonalConjugacy{Matrix::identity(d), Scalar(1)};

  // H = P^t P is symmetric and commutes with a, and for a true scaled orthogonal
  // conjugator Q P = Q c0 gives H = alpha c0^t c0. A square root S of H / alpha inside
  // Q[H] therefore turns P into P S^-1 with (P S^-1)^t (P S^-1) = alpha I. The square
  // class of alpha is guessed from small squarefree integers and rational eigenvalues.
  auto scaled_orthogonal = [&](const Matrix& p) -> std::optional<OrthogonalConjugacy> {
    if (det(p).is_zero()) return std::nullopt;
    const Matrix h = p.transpose() * p;
    if (h == h(0, 0) * Matrix::identity(d)) return OrthogonalConjugacy{p, h(0, 0)};
    std::vector<Scalar> alphas;
    for (long k = 1; k <= 50; ++k) {
      bool squarefree = true;
      for (long q = 2; q * q <= k; ++q) squarefree = squarefree && k % (q * q) != 0;
      if (squarefree) alphas.emplace_back(k);
    }
    for (const auto& [fac, mult] : factor(minpoly(h), Field::rational))
      if (fac.degree() == 1) alphas.push_back(-fac.coeff(0));
    for (const auto& alpha : alphas) {
      if (sgn(alpha.re()) <= 0) continue;
      const auto root = detail::polynomial_sqrt(alpha.inverse() * h);
      if (!root) continue;
      const Matrix q = p * *inverse(*root);
      if (q.transpose() * q == alpha * Matrix::identity(d)) return OrthogonalConjugacy{q, alpha};
    }
    return std::nullopt;
  };

  SearchOptions rational_opts = opts;
  rational_opts.field = Field::rational;
  const auto p0 = conjugacy_witness(a, b, rational_opts);
  if (!p0) return std::nullopt;
  if (auto r = scaled_orthogonal(*p0)) return r;
  const auto hom = intertwiners(a, b);
  for (const auto& h : hom)
    if (auto r = scaled_orthogonal(h)) return r;
  Rng rng(opts.seed);
  for (int round = 0; round < opts.budget; ++round) {
    const long bound = std::min<long>(round_bound(round), 8);
    Matrix p(d, d);
    for (const auto& h : hom) p += Scalar(rng.integer(bound)) * h;
    if (auto r = scaled_orthogonal(p)) return r;
  }
  throw SearchBudgetExceeded("no scaled orthogonal intertwiner found", opts.seed, opts.budget);
}

/// For a pencil whose coefficients generate all of M_d: a point with one-dimensional
/// kernel, obtained from f with f(A) = E_11 expanded at X = 0, Y = [1].
inline LocusPoint kippenhahn_witness(const MonicPencil& l) {
  const std::size_t d = l.size();
  require(d > 0, "Kippenhahn witness needs a pencil of positive size");
  const auto basis = word_span(l.coefficients());
  if (basis.dim() != d * d)
    throw NotFullMatrixAlgebra("coefficients span an algebra of dimension " + std::to_string(basis.dim()) +
                               ", expected " + std::to_string(d * d));
  const Vector c = *basis.coordinates(Matrix::unit(d, d, 0, 0));
  NcPolynomial f;
  for (std::size_t k = 0; k < c.size(); ++k) f.add_term(basis.words[k], c[k]);
  const MatrixTuple x(l.vars(), Matrix(1, 1));
  LocusPoint p;
  p.point = lemma_poly_expand(f, x, Matrix::identity(1));
  p.kernel_dim = in_locus(l, p.point);
  ensure(p.kernel_dim == 1, "Kippenhahn witness does not have a one-dimensional kernel");
  return p;
}

/// Entrywise a + b i -> [[a, -b], [b, a]].
inline Matrix realify(const Matrix& m) {
  Matrix out(2 * m.rows(), 2 * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const Scalar re(m(r, c).re()), im(m(r, c).im());
      out(2 * r, 2 * c) = re;
      out(2 * r, 2 * c + 1) = -im;
      out(2 * r + 1, 2 * c) = im;
      out(2 * r + 1, 2 * c + 1) = re;
    }
  return out;
}

inline MatrixTuple realify(const MatrixTuple& x) {
  MatrixTuple out;
  for (const auto& m : x) out.push_back(realify(m));
  return out;
}

}  // namespace freeloci
