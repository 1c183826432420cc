#include <gtest/gtest.h>

#include <freeloci/pencil.hpp>

#include "../support/oracles.hpp"

using namespace freeloci;

namespace {

Matrix E(std::size_t n, std::size_t i, std::size_t j) { return Matrix::unit(n, n, i - 1, j - 1); }
Matrix M1(long v) { return Matrix{{v}}; }

MonicPencil scalar_pencil(long a) { return MonicPencil({M1(a)}); }

/// The 3x3 pair whose linear combinations are all nilpotent but which is not
/// jointly nilpotent.
MatrixTuple nil_pair() {
  return {Matrix{{0, 1, 0}, {0, 0, 0}, {1, 0, 0}}, Matrix{{0, 0, -1}, {1, 0, 0}, {0, 0, 0}}};
}

Scalar det_oracle(const MatrixTuple& a, const MatrixTuple& x) { return oracle::cofactor_det(oracle::pencil_value(a, x)); }

/// Direct sum of dense random blocks: semisimple almost surely.
MatrixTuple random_semisimple(Rng& rng, std::size_t g, const std::vector<std::size_t>& blocks) {
  MatrixTuple out(g, Matrix(0, 0));
  for (auto k : blocks)
    for (std::size_t i = 0; i < g; ++i) out[i] = direct_sum(out[i], rng.matrix(k, k, 3));
  return out;
}

MatrixTuple block_sum(const MatrixTuple& a, const MatrixTuple& b) {
  MatrixTuple out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(direct_sum(a[i], b[i]));
  return out;
}

/// Block upper triangular [[a, n], [0, b]] with random coupling n.
MatrixTuple block_triangular(Rng& rng, const MatrixTuple& a, const MatrixTuple& b) {
  MatrixTuple out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Matrix m = direct_sum(a[i], b[i]);
    m.set_block(0, a[i].rows(), rng.matrix(a[i].rows(), b[i].rows(), 2));
    out.push_back(m);
  }
  return out;
}

void check_verdict(const MonicPencil& la, const MonicPencil& lb, const InclusionVerdict& v) {
  if (v.holds) {
    ASSERT_TRUE(v.certificate);
    EXPECT_FALSE(v.refutation);
  } else {
    ASSERT_TRUE(v.refutation);
    const auto ra = radical(word_span(la.coefficients()));
    const auto rb = radical(word_span(lb.coefficients()));
    EXPECT_TRUE(rb.in_radical(v.refutation->evaluate(lb.coefficients(), lb.size())));
    EXPECT_FALSE(ra.in_radical(v.refutation->evaluate(la.coefficients(), la.size())));
    ASSERT_TRUE(v.separating_point);
    const auto& x = v.separating_point->point;
    EXPECT_TRUE(det_oracle(la.coefficients(), x).is_zero());
    EXPECT_FALSE(det_oracle(lb.coefficients(), x).is_zero());
    EXPECT_EQ(v.separating_point->kernel_dim, oracle::kernel_dim(oracle::pencil_value(la.coefficients(), x)));
  }
}

}  // namespace

TEST(Evaluate, Examples) {
  MonicPencil l({E(2, 1, 2), E(2, 2, 1)});
  EXPECT_EQ(evaluate(l, {Matrix(3, 3), Matrix(3, 3)}), Matrix::identity(6));
  EXPECT_EQ(evaluate(scalar_pencil(1), {M1(1)}), M1(0));
  MonicPencil u({E(2, 1, 2)});
  Matrix expect = Matrix::identity(4);
  expect(1, 2) = -1;  // row (1,2), column (2,1)
  EXPECT_EQ(evaluate(u, {E(2, 2, 1)}), expect);
  EXPECT_THROW(evaluate(u, {E(2, 2, 1), E(2, 2, 1)}), PreconditionError);
  EXPECT_THROW(evaluate(l, {Matrix(2, 2), Matrix(3, 3)}), PreconditionError);
  EXPECT_THROW(MonicPencil(MatrixTuple{}), PreconditionError);
  EXPECT_EQ(det(evaluate(MonicPencil::empty(2), {M1(1), M1(2)})), Scalar(1));
}

TEST(Evaluate, MatchesOracle) {
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = rng.range(1, 3), n = rng.range(1, 3), g = rng.range(1, 3);
    const MatrixTuple a = rng.tuple(g, d, 3), x = rng.tuple(g, n, 3);
    EXPECT_EQ(evaluate(MonicPencil(a), x), oracle::pencil_value(a, x));
  }
}

TEST(InLocus, Examples) {
  EXPECT_EQ(in_locus(scalar_pencil(1), {M1(1)}), 1u);
  EXPECT_EQ(in_locus(scalar_pencil(1), {M1(2)}), 0u);
  MonicPencil l(nil_pair());
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const MatrixTuple x{M1(rng.integer(50)), M1(rng.integer(50))};
    EXPECT_EQ(in_locus(l, x), 0u);
    EXPECT_EQ(det(evaluate(l, x)), Scalar(1));
  }
}

TEST(LemmaPoly, Examples) {
  const MatrixTuple x{Matrix{{1, 2}, {3, 4}}, Matrix{{0, 1}, {1, 0}}};
  const Matrix y{{5, 6}, {7, 8}};
  auto one = lemma_poly_expand(NcPolynomial::variable(1), x, y);
  EXPECT_EQ(one[0], x[0] + y);
  EXPECT_EQ(one[1], x[1]);
  auto two = lemma_poly_expand(2 * NcPolynomial::variable(1), x, y);
  EXPECT_EQ(two[0], x[0] + 2 * y);

  const auto f = NcPolynomial::monomial({1, 2});
  auto xp = lemma_poly_expand(f, {M1(0), M1(0)}, M1(1));
  ASSERT_EQ(xp.size(), 2u);
  EXPECT_EQ(xp[0], (Matrix{{0, 0}, {1, 0}}));
  EXPECT_EQ(xp[1], (Matrix{{0, 1}, {0, 0}}));
  const MatrixTuple a{E(2, 1, 2), E(2, 2, 1)};
  EXPECT_EQ(oracle::kernel_dim(Matrix::identity(2) - E(2, 1, 1)), 1u);
  EXPECT_EQ(oracle::kernel_dim(oracle::pencil_value(a, xp)), 1u);

  EXPECT_THROW(lemma_poly_expand(NcPolynomial(), x, y), PreconditionError);
  EXPECT_THROW(lemma_poly_expand(NcPolynomial::constant(1), x, y), PreconditionError);
}

TEST(LemmaPoly, CoefficientIndependence) {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const std::size_t g = 2, n = rng.range(1, 2);
    NcPolynomial f;
    const int terms = static_cast<int>(rng.range(1, 3));
    for (int k = 0; k < terms; ++k) {
      Word w(rng.range(1, 3));
      for (auto& l : w) l = rng.range(1, g);
      f.add_term(w, Scalar(rng.range(1, 3) * (rng.range(0, 1) ? 1 : -1)));
    }
    if (f.is_zero()) continue;
    const MatrixTuple x = rng.tuple(g, n, 2);
    const Matrix y = rng.matrix(n, n, 2);
    const MatrixTuple xp = lemma_poly_expand(f, x, y);
    for (std::size_t d : {2u, 3u}) {
      const MatrixTuple a = rng.tuple(g, d, 2);
      const Matrix lhs = oracle::pencil_value(a, x) - oracle::kron_by_definition(f.evaluate(a, d), y);
      EXPECT_EQ(oracle::kernel_dim(lhs), oracle::kernel_dim(oracle::pencil_value(a, xp))) << f.str();
    }
  }
}

TEST(Nilpotency, Examples) {
  const MatrixTuple i2{Matrix::identity(2)};
  EXPECT_TRUE(nilpotent_ideal_test(i2, {E(2, 1, 2)}).nilpotent);
  EXPECT_TRUE(nilpotent_determinant_check(i2, {E(2, 1, 2)}, 50).all_agree());

  auto r = nilpotent_ideal_test(i2, {E(2, 1, 1)});
  EXPECT_FALSE(r.nilpotent);
  EXPECT_EQ(r.witness, (Word{2}));
  EXPECT_EQ(r.witness_trace, Scalar(1));

  const auto p = nil_pair();
  auto q = nilpotent_ideal_test(p, {p[0] * p[1]});
  EXPECT_FALSE(q.nilpotent);
  EXPECT_EQ(q.witness, (Word{3, 3}));
  EXPECT_EQ(q.witness_trace, Scalar(2));

  auto s = nilpotent_ideal_test({}, p);
  EXPECT_FALSE(s.nilpotent);
  EXPECT_EQ(s.witness, (Word{1, 2, 1, 2}));
  EXPECT_EQ(s.witness_trace, Scalar(2));
}

TEST(Nilpotency, AgreesWithDeterminantIdentity) {
  Rng rng(13);
  const MatrixTuple i2{Matrix::identity(2)};
  struct Case {
    MatrixTuple a, n;
  };
  std::vector<Case> cases{{i2, {E(2, 1, 2)}}, {i2, {E(2, 1, 1)}}, {nil_pair(), {nil_pair()[0] * nil_pair()[1]}},
                          {{E(3, 1, 1), E(3, 2, 2)}, {E(3, 1, 3)}}, {{E(3, 1, 1)}, {E(3, 1, 2), E(3, 2, 1)}}};
  for (int t = 0; t < 6; ++t) {
    // upper triangular a with strictly upper n: nilpotent by construction
    MatrixTuple a, n;
    for (int i = 0; i < 2; ++i) {
      Matrix u = rng.matrix(3, 3, 2), s = rng.matrix(3, 3, 2);
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c <= r; ++c) {
          if (c < r) u(r, c) = 0;
          s(r, c) = 0;
        }
      a.push_back(u);
      n.push_back(s);
    }
    cases.push_back({a, n});
  }
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    const bool nil = nilpotent_ideal_test(c.a, c.n).nilpotent;
    SearchOptions opts;
    opts.seed = k;
    const auto check = nilpotent_determinant_check(c.a, c.n, 50, opts);
    EXPECT_EQ(check.trials, 50u);
    EXPECT_EQ(check.all_agree(), nil) << "case " << k;
  }
}

TEST(JointlyNilpotent, Examples) {
  EXPECT_TRUE(jointly_nilpotent(MonicPencil({E(3, 1, 2), E(3, 1, 3)})));
  EXPECT_FALSE(jointly_nilpotent(MonicPencil(nil_pair())));
  EXPECT_FALSE(jointly_nilpotent(MonicPencil({Matrix::identity(2)})));
  EXPECT_TRUE(jointly_nilpotent(MonicPencil::empty(1)));
}

TEST(LocusInclusion, Examples) {
  MonicPencil l({E(2, 1, 2), E(2, 2, 1)});
  auto same = locus_inclusion(l, l);
  EXPECT_TRUE(same.holds);
  ASSERT_TRUE(same.certificate);
  EXPECT_EQ(same.certificate->map, Matrix::identity(4));

  const auto la = scalar_pencil(1), lb = scalar_pencil(2);
  auto v = locus_inclusion(la, lb);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.refutation);
  NcPolynomial expected = 2 * NcPolynomial::variable(1) - NcPolynomial::monomial({1, 1});
  EXPECT_EQ(*v.refutation, expected);
  EXPECT_EQ(v.refutation->str(), "2*x1 - x1*x1");
  check_verdict(la, lb, v);

  MonicPencil e11({E(2, 1, 1)});
  EXPECT_TRUE(locus_inclusion(e11, scalar_pencil(1)).holds);
  EXPECT_TRUE(locus_inclusion(scalar_pencil(1), e11).holds);

  // empty locus is contained in everything and contains only empty loci
  const auto empty = MonicPencil::empty(1);
  EXPECT_TRUE(locus_inclusion(empty, la).holds);
  EXPECT_TRUE(locus_inclusion(MonicPencil({E(2, 1, 2)}), empty).holds);
  auto w = locus_inclusion(la, empty);
  EXPECT_FALSE(w.holds);
  check_verdict(la, empty, w);
}

TEST(SeparatingPoint, Examples) {
  const NcPolynomial f = 2 * NcPolynomial::variable(1) - NcPolynomial::monomial({1, 1});
  auto p = separating_point(scalar_pencil(1), scalar_pencil(2), f);
  EXPECT_GE(p.kernel_dim, 1u);
  EXPECT_TRUE(det(evaluate(scalar_pencil(1), p.point)).is_zero());
  EXPECT_FALSE(det(evaluate(scalar_pencil(2), p.point)).is_zero());

  auto q = separating_point(scalar_pencil(1), scalar_pencil(0), NcPolynomial::variable(1));
  EXPECT_TRUE(det(evaluate(scalar_pencil(1), q.point)).is_zero());
  EXPECT_EQ(det(evaluate(scalar_pencil(0), q.point)), Scalar(1));

  EXPECT_THROW(separating_point(scalar_pencil(1), scalar_pencil(2), NcPolynomial::variable(1)), PreconditionError);
}

TEST(SeparatingPoint, PlantedPairs) {
  Rng rng(14);
  for (int t = 0; t < 12; ++t) {
    const std::size_t g = 2;
    const MatrixTuple b = random_semisimple(rng, g, {static_cast<std::size_t>(rng.range(1, 2))});
    const MatrixTuple extra = random_semisimple(rng, g, {1});
    const MonicPencil lb(b), la(block_sum(b, extra));
    SearchOptions opts;
    opts.seed = t;
    auto v = locus_inclusion(la, lb, opts);
    // the A-locus is strictly larger unless the extra block is already a quotient of B
    if (!v.holds) {
      check_verdict(la, lb, v);
      auto p = separating_point(la, lb, *v.refutation, opts);
      EXPECT_TRUE(det_oracle(la.coefficients(), p.point).is_zero());
      EXPECT_FALSE(det_oracle(lb.coefficients(), p.point).is_zero());
    }
    EXPECT_TRUE(locus_inclusion(lb, la, opts).holds);
  }
}

TEST(LocusInclusion, CertificatesAndRefutations) {
  Rng rng(15);
  for (int t = 0; t < 25; ++t) {
    const std::size_t g = 2;
    const MatrixTuple b = random_semisimple(rng, g, {static_cast<std::size_t>(rng.range(1, 2))});
    const MatrixTuple c = random_semisimple(rng, g, {1});
    const MatrixTuple big = block_triangular(rng, b, c);
    const MonicPencil lb(b), lbig(big);
    SearchOptions opts;
    opts.seed = t;
    auto v = locus_inclusion(lb, lbig, opts);
    EXPECT_TRUE(v.holds);
    check_verdict(lb, lbig, v);
    auto w = locus_inclusion(lbig, lb, opts);
    check_verdict(lbig, lb, w);
    // random unrelated pencils
    const MonicPencil r1(rng.tuple(g, rng.range(1, 2), 2)), r2(rng.tuple(g, rng.range(1, 2), 2));
    check_verdict(r1, r2, locus_inclusion(r1, r2, opts));
  }
}

TEST(LocusInclusion, TransitivityAndComposition) {
  Rng rng(16);
  for (int t = 0; t < 30; ++t) {
    const std::size_t g = 2;
    const MatrixTuple a = random_semisimple(rng, g, {static_cast<std::size_t>(rng.range(1, 2))});
    const MatrixTuple b = block_triangular(rng, a, random_semisimple(rng, g, {1}));
    MatrixTuple c = block_sum(b, random_semisimple(rng, g, {1}));
    const Matrix q = oracle::random_invertible(rng, c[0].rows());
    c = oracle::conjugate(c, q, *inverse(q));
    const MonicPencil la(a), lb(b), lc(c);
    auto ab = locus_inclusion(la, lb), bc = locus_inclusion(lb, lc), ac = locus_inclusion(la, lc);
    ASSERT_TRUE(ab.holds && bc.holds && ac.holds);
    EXPECT_EQ(ab.certificate->map * bc.certificate->map, ac.certificate->map);
  }
}

TEST(Components, Examples) {
  auto two = locus_components(MonicPencil({Matrix::diagonal({1, 2})}));
  ASSERT_EQ(two.size(), 2u);
  const bool first_is_one = loci_equal(two[0], scalar_pencil(1));
  EXPECT_TRUE(loci_equal(two[first_is_one ? 0 : 1], scalar_pencil(1)));
  EXPECT_TRUE(loci_equal(two[first_is_one ? 1 : 0], scalar_pencil(2)));

  EXPECT_EQ(locus_components(MonicPencil({E(2, 1, 2), E(2, 2, 1)})).size(), 1u);
  EXPECT_TRUE(locus_components(MonicPencil({E(2, 1, 2)})).empty());
}

TEST(Components, UnionEqualsLocus) {
  Rng rng(17);
  for (int t = 0; t < 15; ++t) {
    const std::size_t g = 2;
    const MatrixTuple a = block_triangular(rng, random_semisimple(rng, g, {static_cast<std::size_t>(rng.range(1, 2))}),
                                           random_semisimple(rng, g, {1, 1}));
    const MonicPencil l(a);
    SearchOptions opts;
    opts.seed = t;
    const auto comps = locus_components(l, opts);
    ASSERT_FALSE(comps.empty());
    MonicPencil sum = MonicPencil::empty(g);
    for (const auto& c : comps) {
      sum = direct_sum(sum, c);
      EXPECT_TRUE(locus_inclusion(c, l, opts, false).holds);
    }
    EXPECT_TRUE(locus_inclusion(sum, l, opts, false).holds);
    EXPECT_TRUE(locus_inclusion(l, sum, opts, false).holds);
  }
}

TEST(Reduce, Examples) {
  EXPECT_EQ(pencil_reduce(MonicPencil({Matrix::diagonal({1, 1})})), scalar_pencil(1));
  const auto empty = pencil_reduce(MonicPencil({E(2, 1, 2)}));
  EXPECT_EQ(empty.size(), 0u);
  EXPECT_EQ(empty.vars(), 1u);
  EXPECT_EQ(pencil_reduce(MonicPencil({E(2, 1, 1)})), scalar_pencil(1));
  const auto red = pencil_reduce(MonicPencil({E(3, 1, 2), E(3, 2, 1)}));
  EXPECT_EQ(red.size(), 4u);
}

TEST(RealLocus, Examples) {
  const MonicPencil swap({Matrix{{0, 1}, {1, 0}}});
  auto v = real_locus_inclusion(scalar_pencil(1), swap);
  EXPECT_TRUE(v.holds);
  Rng rng(18);
  for (int t = 0; t < 10; ++t) {
    const Matrix x = rng.matrix(2, 2, 3);
    const Matrix i2 = Matrix::identity(2);
    EXPECT_EQ(det(evaluate(swap, {x})), det(i2 - x) * det(i2 + x));
  }
  EXPECT_TRUE(real_locus_inclusion(swap, swap).holds);
  auto w = real_locus_inclusion(swap, scalar_pencil(1));
  EXPECT_FALSE(w.holds);
  check_verdict(swap, scalar_pencil(1), w);

  const MonicPencil herm({Matrix{{Scalar(0), Scalar::imaginary_unit()}, {-Scalar::imaginary_unit(), Scalar(0)}}});
  EXPECT_TRUE(real_locus_inclusion(herm, herm).holds);
  EXPECT_THROW(real_locus_inclusion(MonicPencil({E(2, 1, 2)}), swap), PreconditionError);
}

TEST(RealLocus, AgreesWithLocusInclusion) {
  Rng rng(19);
  for (int t = 0; t < 25; ++t) {
    auto sym = [&](std::size_t d) {
      MatrixTuple out;
      for (int i = 0; i < 2; ++i) {
        Matrix m = rng.matrix(d, d, 2);
        out.push_back(m + m.transpose());
      }
      return out;
    };
    const MonicPencil a(sym(rng.range(1, 2))), b(sym(rng.range(1, 3)));
    SearchOptions opts;
    opts.seed = t;
    EXPECT_EQ(real_locus_inclusion(a, b, opts, false).holds, locus_inclusion(a, b, opts, false).holds);
    const MonicPencil ab(block_sum(a.coefficients(), b.coefficients()));
    EXPECT_TRUE(real_locus_inclusion(a, ab, opts, false).holds);
  }
}

TEST(OrthogonalConjugacy, Examples) {
  const MatrixTuple a{Matrix::diagonal({1, -1}), Matrix{{0, 1}, {1, 0}}};
  const MatrixTuple b{Matrix::diagonal({-1, 1}), Matrix{{0, -1}, {-1, 0}}};
  auto r = orthogonal_conjugacy(a, b);
  ASSERT_TRUE(r);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(r->p * a[i], b[i] * r->p);
  EXPECT_EQ(r->p.transpose() * r->p, r->alpha * Matrix::identity(2));
  EXPECT_TRUE(sgn(r->alpha.re()) > 0);
  EXPECT_TRUE(r->p == (Matrix{{0, -1}, {1, 0}}) || r->p == (Matrix{{0, 1}, {-1, 0}}) ||
              r->p.transpose() * r->p == r->alpha * Matrix::identity(2));

  auto same = orthogonal_conjugacy(a, a);
  ASSERT_TRUE(same);
  EXPECT_EQ(same->p, Matrix::identity(2));
  EXPECT_EQ(same->alpha, Scalar(1));

  EXPECT_FALSE(orthogonal_conjugacy({Matrix::diagonal({1, 2})}, {Matrix::diagonal({1, 3})}));
  EXPECT_THROW(orthogonal_conjugacy({E(2, 1, 2)}, {E(2, 1, 2)}), PreconditionError);
}

TEST(OrthogonalConjugacy, RandomOrthogonalConjugates) {
  Rng rng(20);
  // rational orthogonal matrices from Pythagorean triples and permutations
  const std::vector<Matrix> qs{Matrix{{Scalar::fraction(3, 5), Scalar::fraction(-4, 5)},
                                      {Scalar::fraction(4, 5), Scalar::fraction(3, 5)}},
                               Matrix{{0, 1}, {1, 0}}, Matrix{{Scalar::fraction(5, 13), Scalar::fraction(12, 13)},
                                                              {Scalar::fraction(12, 13), Scalar::fraction(-5, 13)}}};
  for (int t = 0; t < 24; ++t) {
    MatrixTuple a;
    for (int i = 0; i < 2; ++i) {
      Matrix m = rng.matrix(2, 2, 3);
      a.push_back(m + m.transpose());
    }
    // every fourth case uses the scaled orthogonal [[1,1],[-1,1]] (q^t q = 2 I)
    const Matrix q = t % 4 == 3 ? Matrix{{1, 1}, {-1, 1}} : qs[t % qs.size()];
    const MatrixTuple b = oracle::conjugate(a, q, *inverse(q));
    SearchOptions opts;
    opts.seed = t;
    auto r = orthogonal_conjugacy(a, b, opts);
    ASSERT_TRUE(r);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(r->p * a[i], b[i] * r->p);
    EXPECT_EQ(r->p.transpose() * r->p, r->alpha * Matrix::identity(2));
  }
}

TEST(Kippenhahn, Examples) {
  auto p = kippenhahn_witness(MonicPencil({E(2, 1, 2), E(2, 2, 1)}));
  EXPECT_EQ(p.kernel_dim, 1u);
  ASSERT_EQ(p.point.size(), 2u);
  EXPECT_EQ(p.point[0], (Matrix{{0, 0}, {1, 0}}));
  EXPECT_EQ(p.point[1], (Matrix{{0, 1}, {0, 0}}));

  auto q = kippenhahn_witness(MonicPencil({E(2, 1, 1), E(2, 1, 2), E(2, 2, 1), E(2, 2, 2)}));
  EXPECT_EQ(q.point[0], M1(1));
  EXPECT_EQ(q.kernel_dim, 1u);

  EXPECT_THROW(kippenhahn_witness(MonicPencil({E(2, 1, 2)})), NotFullMatrixAlgebra);
}

TEST(Kippenhahn, RandomGeneratingPairs) {
  Rng rng(21);
  int done = 0;
  while (done < 20) {
    const MatrixTuple a = rng.tuple(2, 3, 2);
    if (word_span(a).dim() != 9) continue;
    auto p = kippenhahn_witness(MonicPencil(a));
    EXPECT_EQ(oracle::kernel_dim(oracle::pencil_value(a, p.point)), 1u);
    ++done;
  }
}

TEST(Realify, Examples) {
  EXPECT_EQ(realify(Matrix{{Scalar::imaginary_unit()}}), (Matrix{{0, -1}, {1, 0}}));
  auto r = realify(MatrixTuple{M1(1)});
  EXPECT_EQ(in_locus(scalar_pencil(1), {M1(1)}), 1u);
  EXPECT_EQ(in_locus(scalar_pencil(1), r), 2u);
  const Matrix h{{Scalar(0), Scalar::imaginary_unit()}, {-Scalar::imaginary_unit(), Scalar(0)}};
  const Matrix s = realify(h);
  EXPECT_EQ(s.rows(), 4u);
  EXPECT_TRUE(s.is_real());
  EXPECT_EQ(s, s.transpose());
}

TEST(Realify, KernelDoubles) {
  Rng rng(22);
  for (int t = 0; t < 40; ++t) {
    const MonicPencil l(rng.tuple(2, rng.range(1, 2), 2));
    MatrixTuple x = rng.tuple(2, rng.range(1, 2), 2, Field::gaussian);
    // force some points into the locus
    if (t % 2) {
      auto kp = lemma_poly_expand(NcPolynomial::variable(1), x, Matrix::identity(point_size(x)));
      x = kp;
    }
    EXPECT_EQ(in_locus(l, realify(x)), 2 * in_locus(l, x));
  }
}
