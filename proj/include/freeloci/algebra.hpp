#pragma once

// Structure of the (possibly non-unital) algebra generated by a matrix tuple:
// word bases, radical, semisimple quotient, Wedderburn blocks, Malcev complement.

#include <optional>
#include <vector>

#include "freeloci/factor.hpp"
#include "freeloci/random.hpp"
#include "freeloci/word.hpp"

namespace freeloci {

/// Universal bound on the length of a generating set of a subalgebra of M_d:
/// 1 for d = 1, otherwise ceil(d*sqrt(2d^2/(d-1) + 1/4) + d/2 - 2), computed exactly.
inline std::size_t lambda_bound(std::size_t d) {
  require(d >= 1, "lambda_bound needs d >= 1");
  if (d == 1) return 1;
  // smallest m with y = m + 2 - d/2 >= 0 and y^2 >= d^2 (8d^2 + d - 1) / (4(d - 1))
  const mpq_class dd(static_cast<unsigned long>(d));
  const mpq_class rhs = dd * dd * (8 * dd * dd + dd - 1) / (4 * (dd - 1));
  for (std::size_t m = 0;; ++m) {
    const mpq_class y = mpq_class(static_cast<unsigned long>(m)) + 2 - dd / 2;
    if (sgn(y) >= 0 && y * y >= rhs) return m;
  }
}

/// Finite-dimensional algebra given by structure constants on a basis e_1..e_m:
/// e_i e_j = sum_k table[i][j][k] e_k.
class StructureAlgebra {
 public:
  StructureAlgebra() = default;
  StructureAlgebra(std::size_t dim, std::vector<std::vector<Vector>> table)
      : dim_(dim), table_(std::move(table)) {}

  std::size_t dim() const noexcept { return dim_; }
  const Vector& product_of_basis(std::size_t i, std::size_t j) const { return table_[i][j]; }

  Vector multiply(const Vector& u, const Vector& v) const {
    Vector r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (u[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (v[j].is_zero()) continue;
        const Scalar f = u[i] * v[j];
        for (std::size_t k = 0; k < dim_; ++k)
          if (!table_[i][j][k].is_zero()) r[k] += f * table_[i][j][k];
      }
    }
    return r;
  }

  /// Matrix of x -> u x in the basis.
  Matrix left_matrix(const Vector& u) const {
    Matrix m(dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      Vector col = multiply(u, unit_vector(dim_, j));
      for (std::size_t k = 0; k < dim_; ++k) m(k, j) = col[k];
    }
    return m;
  }

  /// Two-sided identity, if one exists.
  std::optional<Vector> unit() const {
    if (dim_ == 0) return std::nullopt;
    // unknown u: u e_j = e_j and e_j u = e_j for all j
    Matrix sys(2 * dim_ * dim_, dim_);
    Vector rhs(2 * dim_ * dim_);
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k) {
        const std::size_t r1 = (j * dim_ + k), r2 = dim_ * dim_ + r1;
        for (std::size_t i = 0; i < dim_; ++i) {
          sys(r1, i) = table_[i][j][k];
          sys(r2, i) = table_[j][i][k];
        }
        rhs[r1] = rhs[r2] = (j == k) ? Scalar(1) : Scalar(0);
      }
    auto sol = solve(sys, rhs);
    if (!sol) return std::nullopt;
    return sol->particular;
  }

  /// Basis of the center.
  std::vector<Vector> center() const {
    Matrix sys(dim_ * dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k)
        for (std::size_t i = 0; i < dim_; ++i) sys(j * dim_ + k, i) = table_[i][j][k] - table_[j][i][k];
    return kernel(sys);
  }

  /// p(z) computed with z^0 = one.
  Vector polynomial(const UniPoly& p, const Vector& z, const Vector& one) const {
    Vector r(dim_), pw = one;
    for (std::size_t k = 0; k < p.coefficients().size(); ++k) {
      if (k) pw = multiply(pw, z);
      r = r + p.coefficients()[k] * pw;
    }
    return r;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<Vector>> table_;
};

/// Word-labelled basis of the algebra generated by a tuple of d x d matrices.
struct AlgebraBasis {
  MatrixTuple generators;
  std::size_t size = 0;        // d
  std::vector<Word> words;     // length-lexicographic
  std::vector<Matrix> elements;
  std::size_t length = 0;      // stabilization length l
  bool contains_identity = false;
  std::optional<Matrix> unit;  // identity of the algebra, if unital
  LinearSpan span{0};

  std::size_t dim() const noexcept { return elements.size(); }
  CoordinateFrame frame;      // over the basis elements
  std::optional<Vector> coordinates(const Matrix& m) const { return frame.coordinates(m.vec()); }
  bool contains(const Matrix& m) const { return frame.contains(m.vec()); }
};

inline void check_tuple(const MatrixTuple& t, const char* what) {
  require(!t.empty(), std::string(what) + ": empty matrix tuple");
  require(all_square_of_size(t, t[0].rows()), std::string(what) + ": matrices must be square of equal size");
}

/// Greedy basis of word values by increasing length. Only basis words of the
/// current length are extended, since shorter basis words times a letter are words
/// whose values are already in the span.
inline AlgebraBasis word_span(const MatrixTuple& generators) {
  check_tuple(generators, "word_span");
  AlgebraBasis out;
  out.generators = generators;
  out.size = generators[0].rows();
  const std::size_t d = out.size, g = generators.size();
  out.span = LinearSpan(d * d);
  std::vector<std::pair<Word, Matrix>> frontier;
  for (std::size_t i = 1; i <= g; ++i) {
    if (out.span.insert(generators[i - 1].vec())) {
      out.words.push_back({i});
      out.elements.push_back(generators[i - 1]);
      frontier.emplace_back(Word{i}, generators[i - 1]);
    }
  }
  if (!frontier.empty()) out.length = 1;
  while (!frontier.empty()) {
    std::vector<std::pair<Word, Matrix>> next;
    for (const auto& [w, m] : frontier)
      for (std::size_t i = 1; i <= g; ++i) {
        Matrix v = m * generators[i - 1];
        if (out.span.insert(v.vec())) {
          Word wi = w;
          wi.push_back(i);
          out.words.push_back(wi);
          out.elements.push_back(v);
          next.emplace_back(std::move(wi), std::move(v));
        }
      }
    if (!next.empty()) ++out.length;
    frontier = std::move(next);
  }
  if (d > 0) ensure(out.length <= lambda_bound(d), "stabilization length exceeds lambda(d)");
  {
    std::vector<Vector> vs;
    for (const auto& e : out.elements) vs.push_back(e.vec());
    out.frame = CoordinateFrame(d * d, std::move(vs));
  }
  if (out.dim() > 0) {
    out.contains_identity = out.contains(Matrix::identity(d));
    // identity of the algebra: e with e a = a e = a for every generator a (hence for
    // every word)
    if (out.contains_identity) {
      out.unit = Matrix::identity(d);
    } else {
      const std::size_t m = out.dim(), dd = d * d;
      Matrix sys(2 * g * dd, m);
      Vector rhs(2 * g * dd);
      for (std::size_t j = 0; j < g; ++j)
        for (std::size_t k = 0; k < m; ++k) {
          const Matrix left = out.elements[k] * generators[j];
          const Matrix right = generators[j] * out.elements[k];
          for (std::size_t e = 0; e < dd; ++e) {
            sys(j * dd + e, k) = left.vec()[e];
            sys(g * dd + j * dd + e, k) = right.vec()[e];
          }
        }
      for (std::size_t j = 0; j < g; ++j)
        for (std::size_t e = 0; e < dd; ++e) rhs[j * dd + e] = rhs[g * dd + j * dd + e] = generators[j].vec()[e];
      if (auto sol = solve(sys, rhs)) {
        Matrix u(d, d);
        for (std::size_t k = 0; k < m; ++k) u += sol->particular[k] * out.elements[k];
        out.unit = u;
      }
    }
  }
  return out;
}

/// Radical of the algebra and a presentation of the semisimple quotient.
struct RadicalData {
  std::vector<Matrix> radical;          // basis of rad A
  std::vector<Word> quotient_words;     // basis words whose classes span A / rad A
  std::vector<Matrix> quotient_reps;    // their values
  std::vector<Vector> quotient_coords;  // their coordinates in the algebra basis
  StructureAlgebra quotient;
  CoordinateFrame joint;                // radical basis followed by quotient reps

  std::size_t quotient_dim() const noexcept { return quotient_reps.size(); }

  /// Coordinates of the class of a (an element of A) in the quotient basis.
  Vector qcoords(const Matrix& a) const {
    auto c = joint.coordinates(a.vec());
    ensure(c.has_value(), "element is not in the algebra");
    return Vector(c->begin() + static_cast<long>(radical.size()), c->end());
  }
  bool in_radical(const Matrix& a) const { return is_zero(qcoords(a)); }
  /// The element of A represented by quotient coordinates (using the reps).
  Matrix lift(const Vector& q) const {
    const std::size_t d = quotient_reps.empty() ? (radical.empty() ? 0 : radical[0].rows())
                                                : quotient_reps[0].rows();
    Matrix m(d, d);
    for (std::size_t k = 0; k < q.size(); ++k)
      if (!q[k].is_zero()) m += q[k] * quotient_reps[k];
    return m;
  }
};

/// rad A is the kernel of the trace form (a, b) -> tr(ab) on A (characteristic 0).
inline RadicalData radical(const AlgebraBasis& basis) {
  RadicalData out;
  const std::size_t m = basis.dim(), d = basis.size;
  Matrix gram(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j; k < m; ++k) gram(j, k) = gram(k, j) = (basis.elements[j] * basis.elements[k]).trace();
  // Kernel vectors are indexed by the free columns of the echelon form, so the basis
  // elements at pivot columns complete them to a basis of A. A pivot column is
  // exactly a basis element independent of the earlier ones modulo the radical.
  const Echelon ech = rref(gram);
  std::vector<bool> is_pivot(m, false);
  for (auto p : ech.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < m; ++f) {
    if (is_pivot[f]) continue;
    Matrix r = basis.elements[f];
    for (std::size_t k = 0; k < ech.pivots.size(); ++k)
      if (!ech.reduced(k, f).is_zero()) r -= ech.reduced(k, f) * basis.elements[ech.pivots[k]];
    out.radical.push_back(std::move(r));
  }
  for (auto k : ech.pivots) {
    out.quotient_words.push_back(basis.words[k]);
    out.quotient_reps.push_back(basis.elements[k]);
    out.quotient_coords.push_back(unit_vector(m, k));
  }
  {
    std::vector<Vector> vs;
    for (const auto& r : out.radical) vs.push_back(r.vec());
    for (const auto& r : out.quotient_reps) vs.push_back(r.vec());
    out.joint = CoordinateFrame(d * d, std::move(vs));
  }
  const std::size_t q = out.quotient_reps.size();
  std::vector<std::vector<Vector>> table(q, std::vector<Vector>(q));
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) table[i][j] = out.qcoords(out.quotient_reps[i] * out.quotient_reps[j]);
  out.quotient = StructureAlgebra(q, std::move(table));
  return out;
}

/// One simple block of the semisimple quotient.
struct SimpleComponent {
  std::size_t index = 0;
  Vector idempotent;            // central idempotent, quotient coordinates
  std::vector<Vector> basis;    // basis of e_j Q, quotient coordinates
  std::size_t dimension = 0;
  MatrixTuple generators;       // left-regular action of e_j * class(A_i) on e_j Q
};

/// Central idempotents from a separating central element, then the regular
/// representation of each block.
inline std::vector<SimpleComponent> wedderburn_components(const AlgebraBasis& basis, const RadicalData& rad,
                                                          const SearchOptions& opts = {}) {
  const StructureAlgebra& q = rad.quotient;
  const std::size_t m = q.dim();
  std::vector<SimpleComponent> out;
  if (m == 0) return out;
  auto one = q.unit();
  ensure(one.has_value(), "semisimple quotient has no identity");
  const std::vector<Vector> center = q.center();
  const std::size_t c = center.size();

  std::vector<Vector> idempotents;
  if (c == 1) {
    idempotents.push_back(*one);
  } else {
    Rng rng(opts.seed);
    for (int round = 0; round < opts.budget && idempotents.empty(); ++round) {
      const long bound = round_bound(round);
      Vector z(m);
      for (const auto& v : center) z = z + Scalar(rng.integer(bound)) * v;
      const UniPoly p = minpoly(q.left_matrix(z));
      if (static_cast<std::size_t>(p.degree()) != c) continue;
      const Field field = p.is_real() ? opts.field : Field::gaussian;
      const auto factors = factor(p, field);
      for (const auto& [pj, mult] : factors) {
        ensure(mult == 1, "minimal polynomial of a central element is not square-free");
        const UniPoly cof = p / pj;
        auto [gj, s, t] = extended_gcd(cof, pj);
        ensure(gj.degree() == 0, "cofactors are not coprime");
        const UniPoly coeff = (s * cof) % p;
        idempotents.push_back(q.polynomial(coeff, z, *one));
      }
    }
    if (idempotents.empty())
      throw SplittingBudgetExceeded("no separating central element found", opts.seed, opts.budget);
  }

  Vector sum(m);
  for (std::size_t j = 0; j < idempotents.size(); ++j) {
    sum = sum + idempotents[j];
    for (std::size_t k = 0; k < idempotents.size(); ++k) {
      const Vector prod = q.multiply(idempotents[j], idempotents[k]);
      ensure(j == k ? prod == idempotents[j] : is_zero(prod), "central idempotents are not orthogonal");
    }
  }
  ensure(sum == *one, "central idempotents do not sum to the identity");

  for (std::size_t j = 0; j < idempotents.size(); ++j) {
    SimpleComponent comp;
    comp.index = j;
    comp.idempotent = idempotents[j];
    const Matrix le = q.left_matrix(idempotents[j]);
    LinearSpan span(m);
    for (std::size_t k = 0; k < m; ++k)
      if (span.insert(le.col(k))) comp.basis.push_back(le.col(k));
    comp.dimension = comp.basis.size();
    for (const auto& a : basis.generators) {
      const Vector x = q.multiply(idempotents[j], rad.qcoords(a));
      Matrix rep(comp.dimension, comp.dimension);
      for (std::size_t k = 0; k < comp.dimension; ++k) {
        auto coords = span.coordinates(q.multiply(x, comp.basis[k]));
        ensure(coords.has_value(), "component is not a left ideal");
        for (std::size_t r = 0; r < comp.dimension; ++r) rep(r, k) = (*coords)[r];
      }
      comp.generators.push_back(std::move(rep));
    }
    out.push_back(std::move(comp));
  }
  return out;
}

/// Semisimple subalgebra S with A = S + rad A, given by lifts s_k of the quotient
/// basis that multiply exactly like the quotient basis.
struct MalcevSplit {
  std::vector<Matrix> s_basis;
  RadicalData rad;

  /// Projection A -> S along rad A.
  Matrix project(const Matrix& a) const {
    const Vector q = rad.qcoords(a);
    const std::size_t d = a.rows();
    Matrix r(d, d);
    for (std::size_t k = 0; k < q.size(); ++k)
      if (!q[k].is_zero()) r += q[k] * s_basis[k];
    return r;
  }
};

/// Lifts the quotient basis along rad ⊇ rad^2 ⊇ ..., correcting the lifts at each
/// stage by solving a linear system modulo the next power.
inline MalcevSplit malcev_complement(const AlgebraBasis& basis, const RadicalData& rad) {
  require(rad.quotient_dim() >= 1, "Malcev complement needs a non-nilpotent algebra");
  const std::size_t m = rad.quotient_dim(), d = basis.size;
  const StructureAlgebra& q = rad.quotient;
  MalcevSplit out;
  out.rad = rad;
  out.s_basis = rad.quotient_reps;

  // powers[t] spans rad^(t+1)
  std::vector<std::vector<Matrix>> powers;
  powers.push_back(rad.radical);
  while (!powers.back().empty()) {
    LinearSpan next_span(d * d);
    std::vector<Matrix> next;
    for (const auto& x : powers.back())
      for (const auto& r : rad.radical) {
        Matrix p = x * r;
        if (next_span.insert(p.vec())) next.push_back(std::move(p));
      }
    powers.push_back(std::move(next));
  }

  auto defect = [&](std::size_t i, std::size_t j) {
    Matrix dlt = out.s_basis[i] * out.s_basis[j];
    const Vector& c = q.product_of_basis(i, j);
    for (std::size_t k = 0; k < m; ++k)
      if (!c[k].is_zero()) dlt -= c[k] * out.s_basis[k];
    return dlt;
  };

  for (std::size_t t = 0; t + 1 < powers.size(); ++t) {
    // complement of rad^(t+2) inside rad^(t+1)
    LinearSpan filt(d * d);
    for (const auto& x : powers[t + 1]) filt.insert(x.vec());
    const std::size_t lower = filt.size();
    std::vector<Matrix> comp;
    for (const auto& x : powers[t])
      if (filt.insert(x.vec())) comp.push_back(x);
    const std::size_t cdim = comp.size();
    auto tail = [&](const Matrix& x) {
      auto c = filt.coordinates(x.vec());
      ensure(c.has_value(), "element escaped the radical filtration");
      return Vector(c->begin() + static_cast<long>(lower), c->end());
    };
    bool clean = true;
    std::vector<std::vector<Vector>> dcoords(m, std::vector<Vector>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        dcoords[i][j] = tail(defect(i, j));
        if (!is_zero(dcoords[i][j])) clean = false;
      }
    if (clean) continue;
    // unknown y[i][l]: r_i = sum_l y[i][l] comp_l
    Matrix sys(m * m * cdim, m * cdim);
    Vector rhs(m * m * cdim);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t row0 = (i * m + j) * cdim;
        for (std::size_t e = 0; e < cdim; ++e) rhs[row0 + e] = -dcoords[i][j][e];
        const Vector& c = q.product_of_basis(i, j);
        for (std::size_t ip = 0; ip < m; ++ip)
          for (std::size_t l = 0; l < cdim; ++l) {
            Matrix term(d, d);
            if (ip == j) term += out.s_basis[i] * comp[l];
            if (ip == i) term += comp[l] * out.s_basis[j];
            if (!c[ip].is_zero()) term -= c[ip] * comp[l];
            if (term.is_zero()) continue;
            const Vector tc = tail(term);
            for (std::size_t e = 0; e < cdim; ++e) sys(row0 + e, ip * cdim + l) = tc[e];
          }
      }
    auto sol = solve(sys, rhs);
    ensure(sol.has_value(), "Malcev correction system is inconsistent");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t l = 0; l < cdim; ++l)
        if (!sol->particular[i * cdim + l].is_zero()) out.s_basis[i] += sol->particular[i * cdim + l] * comp[l];
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) ensure(defect(i, j).is_zero(), "complement is not multiplicatively closed");
  return out;
}

/// Basis of {P : P a_i = b_i P for all i}; P is (size of b) x (size of a).
inline std::vector<Matrix> intertwiners(const MatrixTuple& a, const MatrixTuple& b) {
  require(a.size() == b.size(), "tuples must have the same length");
  const std::size_t da = a.empty() ? 0 : a[0].rows(), db = b.empty() ? 0 : b[0].rows();
  Matrix sys(a.size() * db * da, db * da);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t r = 0; r < db; ++r)
      for (std::size_t c = 0; c < da; ++c) {
        const std::size_t row = (i * db + r) * da + c;
        for (std::size_t k = 0; k < da; ++k) sys(row, r * da + k) += a[i](k, c);
        for (std::size_t k = 0; k < db; ++k) sys(row, k * da + c) -= b[i](r, k);
      }
  std::vector<Matrix> out;
  for (auto& v : kernel(sys)) out.push_back(Matrix::unvec(db, da, std::move(v)));
  return out;
}

/// Invertible P with P a_i = b_i P, or nullopt when none exists. nullopt is only
/// returned on a definite criterion: the intertwiner space is zero, or its dimension
/// differs from dim End(a) or dim End(b) (for semisimple tuples these dimensions agree
/// exactly when the tuples are conjugate). Otherwise random elements are tried.
inline std::optional<Matrix> conjugacy_witness(const MatrixTuple& a, const MatrixTuple& b,
                                               const SearchOptions& opts = {}) {
  check_tuple(a, "conjugacy_witness");
  check_tuple(b, "conjugacy_witness");
  require(a.size() == b.size() && a[0].rows() == b[0].rows(), "tuples must have equal size and length");
  const std::size_t d = a[0].rows();
  if (a == b) return Matrix::identity(d);
  const auto hom = intertwiners(a, b);
  if (hom.empty()) return std::nullopt;
  if (intertwiners(a, a).size() != hom.size() || intertwiners(b, b).size() != hom.size()) return std::nullopt;
  for (const auto& p : hom)
    if (!det(p).is_zero()) return p;
  Rng rng(opts.seed);
  for (int round = 0; round < opts.budget; ++round) {
    const long bound = round_bound(round);
    Matrix p(d, d);
    for (const auto& h : hom) p += rng.scalar(bound, opts.field) * h;
    if (!det(p).is_zero()) return p;
  }
  throw SearchBudgetExceeded("no invertible intertwiner found", opts.seed, opts.budget);
}

}  // namespace freeloci
