// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <freeloci/invariants.hpp>
#include <freeloci/ncrat.hpp>

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"

using namespace freeloci;

namespace {

/// Collects failed expectations of one criterion.
struct Check {
  std::size_t failures = 0;
  std::ostringstream first;
  std::string note;  // what was exercised

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ < 3) first << (failures > 1 ? "; " : "") << what;
  }
};

/// Every tuple handed to word_span by the suites, for the stabilization-length check.
std::vector<MatrixTuple>& spanned_tuples() {
  static std::vector<MatrixTuple> all;
  return all;
}

void record(const MatrixTuple& t) {
  if (!t.empty() && t[0].rows() > 0) spanned_tuples().push_back(t);
}

Matrix E(std::size_t n, std::size_t i, std::size_t j) { return Matrix::unit(n, n, i - 1, j - 1); }

bool singular(const Matrix& m) { return oracle::gauss_rank(m) < m.rows(); }

MatrixTuple nil_combinations_pair() {
  return {Matrix{{0, 1, 0}, {0, 0, 0}, {1, 0, 0}}, Matrix{{0, 0, -1}, {1, 0, 0}, {0, 0, 0}}};
}

Scalar random_fraction(Rng& rng) { return Scalar(rng.integer(20)) / Scalar(rng.range(1, 9)); }

// ---------------------------------------------------------------- 1

void nil_combinations(Check& c) {
  const auto p = nil_combinations_pair();
  record(p);
  const MonicPencil l(p);
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const Scalar a1 = random_fraction(rng), a2 = random_fraction(rng);
    const Matrix m = a1 * p[0] + a2 * p[1];
    c.expect(power(m, 3).is_zero(), "combination not cubing to zero");
    c.expect(m.trace().is_zero() && (m * m).trace().is_zero(), "characteristic polynomial is not t^3");
    const MatrixTuple x{Matrix{{a1}}, Matrix{{a2}}};
    c.expect(oracle::cofactor_det(oracle::pencil_value(p, x)) == Scalar(1), "det L(alpha) != 1");
  }
  c.expect(!jointly_nilpotent(l), "pair reported jointly nilpotent");
  const auto w = nilpotent_ideal_test({}, p);
  c.expect(!w.nilpotent && w.witness == Word{1, 2, 1, 2} && w.witness_trace == Scalar(2),
           "witness is not (x1 x2)^2 with trace 2");
  c.expect(evaluate_word({1, 2, 1, 2}, p, 3).trace() == Scalar(2), "trace of (x1 x2)^2 is not 2");
}

// ---------------------------------------------------------------- 2

void lemma_poly_suite(Check& c) {
  Rng rng(2);
  int done = 0;
  while (done < 200) {
    const std::size_t g = static_cast<std::size_t>(rng.range(1, 3)), n = static_cast<std::size_t>(rng.range(1, 2));
    NcPolynomial f;
    for (long k = rng.range(1, 3); k > 0; --k) {
      Word w(static_cast<std::size_t>(rng.range(1, 3)));
      for (auto& l : w) l = static_cast<std::size_t>(rng.range(1, static_cast<long>(g)));
      f.add_term(w, Scalar(rng.range(1, 3) * (rng.range(0, 1) ? 1 : -1)));
    }
    if (f.is_zero()) continue;
    const MatrixTuple x = rng.tuple(g, n, 2);
    const Matrix y = rng.matrix(n, n, 2);
    const MatrixTuple xp = lemma_poly_expand(f, x, y);
    // the same X' serves two independent coefficient tuples
    for (int rep = 0; rep < 2; ++rep) {
      const std::size_t d = static_cast<std::size_t>(rng.range(1, 3));
      const MatrixTuple a = rng.tuple(g, d, 2);
      const Matrix lhs = oracle::pencil_value(a, x) - oracle::kron_by_definition(f.evaluate(a, d), y);
      c.expect(oracle::kernel_dim(lhs) == oracle::kernel_dim(oracle::pencil_value(a, xp)),
               "kernel dimensions differ for f = " + f.str());
    }
    ++done;
  }
}

// ---------------------------------------------------------------- 3

MatrixTuple upper_blocks(Rng& rng, std::size_t g, std::size_t d1, std::size_t d2, bool strict) {
  MatrixTuple out;
  for (std::size_t i = 0; i < g; ++i) {
    Matrix m(d1 + d2, d1 + d2);
    if (!strict) {
      m.set_block(0, 0, rng.matrix(d1, d1, 2));
      m.set_block(d1, d1, rng.matrix(d2, d2, 2));
    }
    m.set_block(0, d1, rng.matrix(d1, d2, 2));
    out.push_back(m);
  }
  return out;
}

void nilpotent_ideal_suite(Check& c) {
  Rng rng(3);
  int refuted = 0;
  for (int t = 0; t < 100; ++t) {
    const bool plant_nil = t < 50;
    const std::size_t d1 = static_cast<std::size_t>(rng.range(1, 2)), d2 = 3 - d1;
    const std::size_t g = static_cast<std::size_t>(rng.range(1, 2)), h = static_cast<std::size_t>(rng.range(1, 2));
    MatrixTuple a = upper_blocks(rng, g, d1, d2, false), n;
    if (plant_nil) {
      n = upper_blocks(rng, h, d1, d2, true);  // couples the blocks only
    } else if (t % 2 == 0) {
      n = upper_blocks(rng, h, d1, d2, false);
      n[0](0, 0) = n[0](0, 0) + Scalar(5);  // n_1 has a nonzero eigenvalue
    } else {
      // each n_j nilpotent, but the dense a makes the ideal everything
      n = upper_blocks(rng, h, d1, d2, true);
      do a = rng.tuple(2, 3, 3);
      while (oracle::span_rank(word_span(a).elements) != 9);
      if (n[0].is_zero()) n[0](0, 2) = Scalar(1);
    }
    MatrixTuple joint = a;
    joint.insert(joint.end(), n.begin(), n.end());
    record(joint);
    const bool nil = nilpotent_ideal_test(a, n).nilpotent;
    SearchOptions opts;
    opts.seed = static_cast<std::uint64_t>(t);
    const auto check = nilpotent_determinant_check(a, n, 50, opts);
    c.expect(check.all_agree() == nil, "case " + std::to_string(t) + ": determinant identity disagrees");
    c.expect(nil == plant_nil, "planted case " + std::to_string(t) + " misclassified");
    refuted += check.all_agree() ? 0 : 1;
  }
  c.note = std::to_string(refuted) + " refuted by the determinant identity";
}

// ---------------------------------------------------------------- 4

bool verified_homomorphism(const MonicPencil& la, const MonicPencil& lb, const InclusionCertificate& cert, Rng& rng) {
  const auto ra = radical(word_span(la.coefficients()));
  const auto rb = radical(word_span(lb.coefficients()));
  const std::size_t g = la.vars();
  // classes of random words must be carried along: q_A(w(A)) = map q_B(w(B))
  for (int t = 0; t < 30; ++t) {
    Word w(static_cast<std::size_t>(rng.range(1, 5)));
    for (auto& l : w) l = static_cast<std::size_t>(rng.range(1, static_cast<long>(g)));
    const Matrix wa = evaluate_word(w, la.coefficients(), la.size());
    const Matrix wb = evaluate_word(w, lb.coefficients(), lb.size());
    const Vector qa = ra.quotient_dim() ? ra.qcoords(wa) : Vector{};
    const Vector qb = rb.quotient_dim() ? rb.qcoords(wb) : Vector{};
    if (!(cert.map * qb == qa)) return false;
  }
  return true;
}

void inclusion_suite(Check& c) {
  Rng rng(4);
  const std::size_t g = 2;
  int included = 0, refuted = 0, attempt = 0;
  while ((included < 30 || refuted < 30) && attempt < 400) {
    ++attempt;
    const auto s1 = gen::random_semisimple(rng, g, {1}), s2 = gen::random_semisimple(rng, g, {2});
    const auto s3 = gen::random_semisimple(rng, g, {1});
    SearchOptions opts;
    opts.seed = static_cast<std::uint64_t>(attempt);
    if (included < 30) {
      // B has semisimple blocks s1, s2, s3; A keeps a sub-collection, so A/rad is a quotient of B/rad
      const auto b = gen::block_triangular(rng, gen::block_sum(s1, s2), s3);
      const auto a = attempt % 3 == 0 ? s2 : attempt % 3 == 1 ? gen::block_sum(s3, s1) : gen::block_triangular(rng, s2, s2);
      record(a), record(b);
      const MonicPencil la(a), lb(b);
      const auto v = locus_inclusion(la, lb, opts);
      c.expect(v.holds && v.certificate.has_value(), "planted inclusion " + std::to_string(included) + " not certified");
      if (v.certificate) c.expect(verified_homomorphism(la, lb, *v.certificate, rng), "certificate is not a homomorphism");
      ++included;
    }
    if (refuted < 30) {
      // A carries a block s3 that B lacks
      const auto b = gen::block_sum(s1, s2);
      const auto a = gen::block_sum(b, s3);
      const MonicPencil la(a), lb(b);
      record(a), record(b);
      if (loci_equal(la, lb, opts)) continue;  // s3 repeats a block
      const auto v = locus_inclusion(la, lb, opts);
      const bool ok = !v.holds && v.refutation && v.separating_point;
      c.expect(ok, "planted non-inclusion " + std::to_string(refuted) + " not refuted");
      if (ok) {
        const auto& x = v.separating_point->point;
        c.expect(singular(oracle::pencil_value(a, x)), "det L_A != 0 at the separating point");
        c.expect(!singular(oracle::pencil_value(b, x)), "det L_B = 0 at the separating point");
      }
      ++refuted;
    }
  }
  c.expect(included == 30 && refuted == 30, "could not plant 30 + 30 pairs");
  c.note = std::to_string(included) + " certified, " + std::to_string(refuted) + " refuted";
}

// ---------------------------------------------------------------- 5

const std::string kR1 = "inv(1 - x1 - x2*inv(1-x1)*x2) * (1 + x1*inv(1 - x1 + x2))";
const std::string kR2 = "inv(1-x1-x2)*(1-x1)*inv(1-x1-x2) + inv(1-x1-x2)*x1*inv(1-x1+x2)";
const std::string kS1 = "inv(1-x1-x2)";

void worked_example(Check& c) {
  const auto r1 = minimize(realize(kR1)), r2 = minimize(realize(kR2));
  record(r1.pencil.coefficients()), record(r2.pencil.coefficients());
  c.expect(r1.size() == 3 && r2.size() == 3, "minimal sizes are not 3");
  c.expect(domain_compare(r1, r2).relation == DomainRelation::equal, "domains of r1 and r2 differ");
  const auto dd = domain_decompose(r1);
  c.expect(dd.components.size() == 2, "r1 does not have two components");
  if (dd.components.size() == 2) {
    const MonicPencil p({Matrix{{1}}, Matrix{{1}}}), m({Matrix{{1}}, Matrix{{-1}}});
    const auto& k0 = dd.components[0];
    const auto& k1 = dd.components[1];
    c.expect((loci_equal(k0, p) && loci_equal(k1, m)) || (loci_equal(k0, m) && loci_equal(k1, p)),
             "components are not the loci of 1-x1-x2 and 1-x1+x2");
  }
  c.expect(domain_decompose(r2).components.size() == 2, "r2 does not have two components");
  const auto a1 = rewrite_in_atoms(r1), a2 = rewrite_in_atoms(r2);
  const auto f1 = parse_expression("1/2*(inv(1-x1-x2) + inv(1-x1+x2))*(1 + x1*inv(1-x1+x2))");
  const auto f2 = parse_expression("inv(1-x1-x2)*((1-x1)*inv(1-x1-x2) + x1*inv(1-x1+x2))");
  Rng rng(5);
  for (std::size_t n : {2u, 3u}) {
    int done = 0;
    while (done < 20) {
      const auto x = rng.tuple(2, n, 3);
      const auto v1 = eval_ast(*f1, x), v2 = eval_ast(*f2, x);
      if (!v1 || !v2) continue;
      const auto w1 = a1.evaluate(x), w2 = a2.evaluate(x);
      c.expect(w1 && *w1 == *v1, "atom rewrite of r1 disagrees");
      c.expect(w2 && *w2 == *v2, "atom rewrite of r2 disagrees");
      ++done;
    }
  }
}

// ---------------------------------------------------------------- 6

void polynomial_suite(Check& c) {
  Rng rng(6);
  long top = 0;
  for (int k = 0; k < 25; ++k) {
    const std::size_t d = static_cast<std::size_t>(rng.range(1, 5)), g = static_cast<std::size_t>(rng.range(1, 3));
    const auto raw = gen::nilpotent_realization(rng, g, d);
    const auto r = minimize(raw);
    record(raw.pencil.coefficients());
    const auto p = to_polynomial(r);
    c.expect(p.polynomial.has_value(), "nilpotent realization not converted");
    if (!p.polynomial) continue;
    c.expect(p.polynomial->degree() <= static_cast<long>(d) - 1, "degree exceeds d - 1");
    top = std::max(top, p.polynomial->degree());
    for (int t = 0; t < 50; ++t) {
      const auto x = rng.tuple(g, static_cast<std::size_t>(1 + t % 3), 3);
      c.expect(p.polynomial->evaluate(x) == *eval_realization(raw, x), "polynomial value differs");
    }
  }
  c.note = "degrees up to " + std::to_string(top);
  const auto s1 = minimize(realize(kS1, 2));
  const auto p = to_polynomial(s1);
  c.expect(!p.polynomial && p.locus_point, "s1 not rejected with a locus point");
  if (p.locus_point) c.expect(singular(oracle::pencil_value(s1.pencil.coefficients(), p.locus_point->point)), "locus point is regular");
}

// ---------------------------------------------------------------- 7

void kippenhahn_suite(Check& c) {
  Rng rng(7);
  for (std::size_t d : {2u, 3u}) {
    int done = 0;
    while (done < 20) {
      const auto a = rng.tuple(2, d, 2);
      record(a);
      if (oracle::span_rank(word_span(a).elements) != d * d) continue;
      const auto p = kippenhahn_witness(MonicPencil(a));
      c.expect(oracle::kernel_dim(oracle::pencil_value(a, p.point)) == 1, "kernel dimension is not 1");
      ++done;
    }
  }
  const MatrixTuple e{E(2, 1, 2), E(2, 2, 1)};
  const auto p = kippenhahn_witness(MonicPencil(e));
  const Matrix l = oracle::pencil_value(e, p.point);
  c.expect(l.rows() == 4 && oracle::kernel_dim(l) == 1, "(E12, E21) witness is not a 4x4 instance with kernel 1");
}

// ---------------------------------------------------------------- 8

void orbit_suite(Check& c) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = static_cast<std::size_t>(rng.range(1, 3)), g = static_cast<std::size_t>(rng.range(1, 2));
    const auto a = rng.tuple(g, d, 3);
    const auto q = oracle::random_invertible(rng, d);
    c.expect(trace_fingerprint(a, d) == trace_fingerprint(oracle::conjugate(a, q, *inverse(q)), d),
             "fingerprint changed under conjugation");
  }
  int done = 0, equal = 0;
  while (done < 30) {
    const std::vector<std::size_t> blocks = done % 3 == 0 ? std::vector<std::size_t>{2} : std::vector<std::size_t>{1, 1};
    const auto a = gen::random_semisimple(rng, 2, blocks);
    if (!radical(word_span(a)).radical.empty()) continue;
    MatrixTuple b;
    if (done % 2 == 0) {
      const auto q = oracle::random_invertible(rng, 2);
      b = oracle::conjugate(a, q, *inverse(q));
    } else {
      b = gen::random_semisimple(rng, 2, blocks);
      if (!radical(word_span(b)).radical.empty()) continue;
    }
    record(a), record(b);
    const bool same = trace_fingerprint(a, 2) == trace_fingerprint(b, 2);
    equal += same ? 1 : 0;
    c.expect(same == same_orbit_closure(a, b), "fingerprints and orbit test disagree");
    c.expect(same == conjugacy_witness(a, b).has_value(), "fingerprint equality does not match conjugacy");
    const auto check = det_generic_check(MonicPencil(a), MonicPencil(b), 200, static_cast<std::uint64_t>(done));
    if (same) c.expect(check.agree, "det check refuted an equal-fingerprint pair");
    else c.expect(!check.agree, "det check missed an unequal-fingerprint pair");
    ++done;
  }
  c.note = std::to_string(equal) + " equal, " + std::to_string(30 - equal) + " unequal semisimple pairs";
}

// ---------------------------------------------------------------- 9

void similarity_suite(Check& c) {
  Rng rng(9);
  int done = 0;
  std::size_t largest = 0;
  while (done < 20) {
    const auto e = gen::random_expression(rng, 2, 3);
    const auto r = minimize(realize(*e, 2));
    if (r.size() == 0) continue;
    record(r.pencil.coefficients());
    largest = std::max(largest, r.size());
    const Matrix q = oracle::random_invertible(rng, r.size());
    const Matrix qi = *inverse(q);
    const Realization r2{qi.transpose() * r.c, MonicPencil(oracle::conjugate(r.pencil.coefficients(), q, qi)), q * r.b};
    const Matrix p = realization_similarity(r, r2);
    c.expect(!singular(p), "similarity is singular");
    c.expect(p.transpose() * r2.c == r.c, "c transport fails");
    c.expect(p * r.b == r2.b, "b transport fails");
    for (std::size_t i = 0; i < 2; ++i) c.expect(r2.pencil[i] * p == p * r.pencil[i], "pencil transport fails");
    ++done;
  }
  c.note = "minimal sizes up to " + std::to_string(largest);
}

// ---------------------------------------------------------------- 10

void lambda_suite(Check& c) {
  c.expect(lambda_bound(2) == 5 && lambda_bound(3) == 9, "lambda(2) or lambda(3) is off");
  for (const auto& t : spanned_tuples()) {
    const std::size_t d = t[0].rows();
    const auto b = word_span(t);
    c.expect(b.length <= lambda_bound(d), "stabilization length " + std::to_string(b.length) + " exceeds lambda(" +
                                              std::to_string(d) + ")");
  }
  c.expect(spanned_tuples().size() > 200, "too few recorded tuples");
  c.note = std::to_string(spanned_tuples().size()) + " tuples";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;  // seconds
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "pair with nilpotent combinations, not jointly nilpotent", 5, nil_combinations},
      {2, "polynomial-to-pencil lemma, 200 cases", 60, lemma_poly_suite},
      {3, "nilpotent ideal test vs determinant identity, 50 + 50 plants", 120, nilpotent_ideal_suite},
      {4, "locus inclusion certificates and separating points, 30 + 30 plants", 300, inclusion_suite},
      {5, "worked rational example r1, r2", 60, worked_example},
      {6, "nilpotent realizations are polynomials", 1e9, polynomial_suite},
      {7, "Kippenhahn witnesses", 1e9, kippenhahn_suite},
      {8, "trace fingerprints and orbit closures", 1e9, orbit_suite},
      {9, "similarity of minimal realizations", 1e9, similarity_suite},
      {10, "stabilization length within lambda(d)", 1e9, lambda_suite},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.limit) c.expect(false, "runtime above the limit");
    const bool pass = c.failures == 0;
    failed += pass ? 0 : 1;
    std::cout << "criterion " << std::setw(2) << cr.id << ": " << (pass ? "PASS" : "FAIL") << "  " << cr.name << "  ("
              << std::fixed << std::setprecision(2) << secs << " s)";
    if (!c.note.empty()) std::cout << "  " << c.note;
    if (!pass) std::cout << "  [" << c.failures << " failures: " << c.first.str() << "]";
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
