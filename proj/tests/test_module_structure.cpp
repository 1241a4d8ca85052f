#include <doctest.h>

#include "gen.hpp"
#include "ltforge/module_structure.hpp"

using namespace ltforge;

namespace {

constexpr long kN = 48;

ContextOptions opts() {
  ContextOptions o;
  o.D = 96;
  o.N = kN;
  return o;
}

Context mult(unsigned long p) { return LTContext::multiplicative(p, opts()); }
Context basic(unsigned long p) { return LTContext::basic(p, opts()); }

FieldElement varpi(const LocalField& L) { return FieldElement::uniformizer(L, L.default_precision()); }

// -eps_bar is a (q-1)-th power in k_L iff (-eps_bar)^((|k|-1)/gcd(q-1,|k|-1)) = 1
bool oracle_nonregular(const LocalField& L, const RegularityReport& r, unsigned long q) {
  if (L.e() % static_cast<long>(q - 1) != 0) return false;
  const ResidueField& k = L.residue_field();
  unsigned long order = k.size() - 1;
  unsigned long g = std::gcd(q - 1, order);
  return k.pow(k.neg(r.epsilon_bar), order / g) == k.one();
}

long vmin_of(const std::vector<FieldElement>& xs) {
  long m = 1L << 30;
  for (const auto& x : xs)
    if (!x.is_zero()) m = std::min(m, x.valuation());
  return m;
}

}  // namespace

TEST_CASE("regularity of small towers") {
  auto m3 = mult(3);
  auto L = make_tower(3, 1, 4, kN);
  auto r = regularity_check(L, *m3);
  CHECK(r.is_regular);
  CHECK(r.ratio_integral);
  CHECK(r.epsilon.valuation() == 0);

  auto r5 = regularity_check(make_tower(5, 1, 6, kN), *mult(5));
  CHECK(r5.is_regular);
  CHECK_FALSE(r5.ratio_integral);

  for (unsigned long p : {3UL, 5UL}) {
    auto tf = torsion_field(*mult(p), 1, kN);
    auto rt = regularity_check(tf.field, *mult(p));
    CHECK_FALSE(rt.is_regular);
    REQUIRE(rt.witness);
    const ResidueField& k = tf.field.residue_field();
    CHECK(k.is_zero(k.add(k.pow(*rt.witness, p), k.mul(rt.epsilon_bar, *rt.witness))));
  }

  // every extension of Q_2 contains the 2-torsion point -2
  for (int e : {1, 2, 3}) CHECK_FALSE(regularity_check(make_tower(2, 1, e, kN), *mult(2)).is_regular);
}

TEST_CASE("regularity agrees with the power-residue oracle and ignores the choice of prime") {
  std::mt19937_64 rng(11);
  for (unsigned long p : {2UL, 3UL, 5UL})
    for (int f : {1, 2})
      for (int e : {1, 2, 3, 4, 6, 8}) {
        auto L = make_tower(p, f, e, 24);
        for (auto ctx : {basic(p), mult(p)}) {
          auto r = regularity_check(L, *ctx);
          CHECK(r.is_regular == !oracle_nonregular(L, r, p));
          CHECK(r.is_regular == !(r.ratio_integral && r.witness));
          FieldElement u = gen::element_at(rng, L, 0, 24);
          auto r2 = regularity_check(L, *ctx, u * FieldElement::uniformizer(L, 24));
          CHECK(r2.is_regular == r.is_regular);
        }
      }
}

TEST_CASE("induced maps on graded pieces") {
  auto m3 = mult(3);
  auto L = make_tower(3, 1, 4, kN);
  // i < e/(q-1), i = e/(q-1) on a regular field, i > e/(q-1)
  for (long i : {1L, 2L, 3L, 5L}) {
    auto rep = induced_map_check(L, *m3, i);
    CHECK(rep.target == (i <= 2 ? 3 * i : i + 4));
    CHECK(rep.well_defined);
    CHECK(rep.homomorphism);
    CHECK(rep.injective);
    CHECK(rep.surjective);
  }
  for (unsigned long p : {3UL, 5UL}) {
    auto tf = torsion_field(*mult(p), 1, kN);
    auto rep = induced_map_check(tf.field, *mult(p), 1);
    CHECK(rep.target == static_cast<long>(p));
    CHECK(rep.homomorphism);
    CHECK_FALSE(rep.injective);
    CHECK_FALSE(rep.surjective);
    CHECK(rep.kernel_witness);
    CHECK(rep.image_size == 1);
    CHECK(induced_map_check(tf.field, *mult(p), 2).injective);
  }
  // f = 2: Q_9(sqrt 3) contains sqrt(-3)
  auto L92 = make_tower(3, 2, 2, 32);
  CHECK_FALSE(regularity_check(L92, *basic(3)).is_regular);
  auto rep = induced_map_check(L92, *basic(3), 1);
  CHECK(rep.classes == 9);
  CHECK(rep.kernel_witness);
  CHECK(rep.image_size == 3);
}

TEST_CASE("basis B_L") {
  auto m3 = mult(3);
  auto B = basis_BL(make_tower(3, 1, 4, kN), *m3);
  CHECK(B.size() == 4);
  CHECK(B.levels == std::vector<long>{1, 2, 4, 5});
  CHECK(basis_BL(make_tower(5, 1, 6, kN), *mult(5)).size() == 6);
  auto Bu = basis_BL(make_tower(5, 1, 1, kN), *mult(5));
  CHECK(Bu.levels == std::vector<long>{1});
  auto B2 = basis_BL(make_tower(3, 2, 3, kN), *basic(3));
  CHECK(B2.size() == 6);
  CHECK(B2.indices == std::vector<int>{0, 1, 0, 1, 0, 1});
  CHECK(B2.levels == std::vector<long>{1, 1, 2, 2, 4, 4});
  auto tf = torsion_field(*m3, 1, kN);
  CHECK_THROWS_WITH_AS(basis_BL(tf.field, *m3), doctest::Contains("NotRegular"), Error);
  CHECK_THROWS_WITH_AS(spanning_SL(make_tower(3, 1, 4, kN), *m3), doctest::Contains("RegularFieldGiven"),
                       Error);
}

TEST_CASE("log basis of Q_3(3^(1/4)) spans the worked lattice") {
  auto m3 = mult(3);
  auto L = make_tower(3, 1, 4, kN);
  auto w = varpi(L);
  auto lb = log_basis(L, *m3);
  std::vector<FieldElement> lattice = {w.pow(2), w.inverse() - w, w.pow(3), w.pow(4)};
  CHECK(same_lattice(lb.elements, lattice));
  CHECK_FALSE(coordinate_determinant(lb.elements).is_zero());
  // the unrefined six-term description spans the same lattice
  auto sol = coords_in_span(w.pow(5), lattice);
  CHECK(sol.integral);
  // log(1+varpi) = 1/varpi - varpi - varpi^2 mod varpi^3
  auto l1 = eval_log(*m3, w);
  CHECK(l1.equals_mod(w.inverse() - w - w.pow(2), 3));
  CHECK(eval_log(*m3, -w).equals_mod(w - w.inverse() - w.pow(2), 3));
}

TEST_CASE("log basis of Q_5(5^(1/6))") {
  auto m5 = mult(5);
  auto L = make_tower(5, 1, 6, kN);
  auto w = varpi(L);
  auto lb = log_basis(L, *m5);
  CHECK(lb.size() == 6);
  std::vector<FieldElement> lattice = {w + w.inverse()};
  for (int i = 2; i <= 6; ++i) lattice.push_back(w.pow(i));
  CHECK(same_lattice(lb.elements, lattice));
}

TEST_CASE("coords_in_span") {
  auto L = make_tower(3, 2, 2, 40);
  std::mt19937_64 rng(5);
  std::vector<FieldElement> g;
  for (int k = 0; k < 3; ++k) g.push_back(gen::element_at(rng, L, k, 40));
  auto s = coords_in_span(g[0], g);
  CHECK(s.coeffs[0].equals_at_precision(PadicScalar::from_integer(3, 1, s.coeffs[0].precision())));
  CHECK(s.coeffs[1].is_zero());
  CHECK(s.coeffs[2].is_zero());
  auto t = g[0] * Integer(3) + g[1];
  auto s2 = coords_in_span(t, g);
  CHECK(s2.coeffs[0].valuation() == 1);
  CHECK(s2.coeffs[0].congruent(PadicScalar::from_integer(3, 3, 40), 30));
  CHECK(s2.coeffs[1].congruent(PadicScalar::from_integer(3, 1, 40), 30));
  CHECK(s2.integral);
  CHECK_FALSE(coords_in_span(g[0] / FieldElement::from_integer(L, 3, 40), g).integral);

  CHECK_THROWS_WITH_AS(coords_in_span(gen::element_at(rng, L, 2, 40), {g[0]}),
                       doctest::Contains("NotInSpan"), Error);
  std::vector<FieldElement> dup = {g[0], g[1], g[0] * Integer(5)};
  CHECK_THROWS_WITH_AS(coords_in_span(g[0], dup), doctest::Contains("RankDeficient"), Error);

  // random combinations come back exactly
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<FieldElement> basis;
    for (int k = 0; k < 4; ++k) basis.push_back(gen::element_at(rng, L, gen::range(rng, -2, 4), 40));
    std::vector<Integer> c(4);
    FieldElement x = FieldElement::zero(L, 40);
    for (int k = 0; k < 4; ++k) {
      c[k] = gen::below(rng, 1000) - 500;
      x += basis[k] * c[k];
    }
    try {
      auto sol = coords_in_span(x, basis);
      CHECK(sol.determinant);
      for (int k = 0; k < 4; ++k) CHECK(sol.coeffs[k].congruent(PadicScalar::from_integer(3, c[k], 60), 10));
    } catch (const Error& err) {
      // a random quadruple can be dependent modulo the working precision
      CHECK(err.code() == Errc::RankDeficient);
    }
  }
}

TEST_CASE("valuation certificates") {
  auto m3 = mult(3);
  auto L = make_tower(3, 1, 4, kN);
  auto c = valuation_certificate(L, *m3, varpi(L));
  CHECK(c.ell == 1);
  CHECK(c.predicted == -1);
  CHECK(c.observed == -1);
  CHECK(c.holds);
  auto d = valuation_certificate(L, *m3, varpi(L).pow(3));
  CHECK(d.ell == 0);
  CHECK(d.predicted == 3);
  CHECK(d.equality);

  for (unsigned long p : {3UL, 5UL}) {
    auto tf = torsion_field(*mult(p), 1, kN);
    auto t = valuation_certificate(tf.field, *mult(p), tf.lambda);
    CHECK(t.predicted == 1);
    CHECK_FALSE(t.observed);
    CHECK(t.observed_floor > 1);
    CHECK(t.holds);
    CHECK_FALSE(t.regular);
  }

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    auto x = gen::element_min(rng, L, 1, 6, kN);
    auto u = gen::element_at(rng, L, 0, kN);
    auto cx = valuation_certificate(L, *m3, x, true);
    auto cu = valuation_certificate(L, *m3, u * x, true);
    CHECK(cx.holds);
    CHECK(cu.observed == cx.observed);
  }
}

TEST_CASE("minimal valuation of the log image") {
  auto m3 = mult(3);
  auto a = min_valuation(make_tower(3, 1, 4, kN), *m3);
  CHECK(a.regular);
  CHECK(a.gamma == 1);
  CHECK(a.value == -1);
  CHECK(a.log_varpi == -1);
  CHECK(a.sweep == -1);

  auto b = min_valuation(make_tower(5, 1, 6, kN), *mult(5));
  CHECK(b.value == -1);
  CHECK(b.sweep == -1);

  CHECK_THROWS_WITH_AS(min_valuation(make_tower(5, 1, 2, kN), *mult(5)), doctest::Contains("RatioTooSmall"), Error);

  for (unsigned long p : {3UL, 5UL}) {
    auto tf = torsion_field(*mult(p), 1, kN);
    auto z = min_valuation(tf.field, *mult(p));
    CHECK_FALSE(z.regular);
    CHECK(z.value == 2);
  }
  // Q_2(2^(1/3)) is not regular yet meets the regular-case formula 4 - 6
  auto t = min_valuation(make_tower(2, 1, 3, kN), *mult(2));
  CHECK_FALSE(t.regular);
  CHECK(t.value == -2);

  // regular towers: formula, log varpi and the basis sweep all agree
  for (unsigned long p : {3UL, 5UL})
    for (int e : {2, 4, 5, 6, 8}) {
      if (e < static_cast<int>(p - 1)) continue;
      auto L = make_tower(p, 1, e, kN);
      auto ctx = basic(p);
      if (!regularity_check(L, *ctx).is_regular) continue;
      auto m = min_valuation(L, *ctx);
      CHECK(m.formula == m.log_varpi);
      CHECK(m.formula == m.sweep);
    }
}

TEST_CASE("Lubin-Tate generating sets") {
  struct Case {
    unsigned long p;
    int n;
  };
  for (Case cs : {Case{3, 1}, Case{5, 1}, Case{2, 2}}) {
    auto ctx = mult(cs.p);
    auto sets = lt_sets(*ctx, cs.n, kN);
    long qn = 1;
    for (int i = 0; i < cs.n; ++i) qn *= static_cast<long>(cs.p);
    long qn1 = qn / static_cast<long>(cs.p);
    CHECK(static_cast<long>(sets.S.size()) == qn - qn1 + 1);
    CHECK(static_cast<long>(sets.B.size()) == qn - qn1);
    CHECK(sets.log_lambda.is_zero());
    CHECK_FALSE(coordinate_determinant(sets.B.elements).is_zero());
    FieldElement lam = sets.torsion.lambda;
    FieldElement pw = lam;
    for (long j = 1; j <= qn + static_cast<long>(cs.p); ++j) {
      if (j > 1) pw = pw * lam;
      auto lg = eval_log(*ctx, pw);
      if (lg.is_zero()) continue;
      CHECK(coords_in_span(lg, sets.B.elements).integral);
    }
  }
  auto s3 = lt_sets(*mult(3), 1, kN);
  CHECK(s3.S.levels == std::vector<long>{1, 2, 3});
  CHECK(s3.B.levels == std::vector<long>{2, 3});
  CHECK(vmin_of(s3.B.elements) == 2);
}

TEST_CASE("digit expansions over generating sets") {
  auto m3 = mult(3);
  auto L = make_tower(3, 1, 4, 32);
  auto B = basis_BL(L, *m3);
  auto ex = expand_in_generators(B.elements[1], B, *m3);
  CHECK(ex.digits[1].equals_at_precision(PadicScalar::from_integer(3, 1, ex.digits[1].precision())));
  CHECK(ex.digits[0].is_zero());
  auto sum = fgl_add(*m3, B.elements[0], B.elements[2]);
  auto ex2 = expand_in_generators(sum, B, *m3);
  CHECK(ex2.digits[0].is_unit());
  CHECK(ex2.digits[2].is_unit());
  CHECK(ex2.digits[1].is_zero());

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 4; ++trial) {
    auto x = gen::element_min(rng, L, 1, 3, 32);
    auto e = expand_in_generators(x, B, *m3);
    CHECK(e.precision >= 32);
    CHECK(recombine(e, B, *m3, 32).equals_mod(x, 32));
  }

  auto tf = torsion_field(*m3, 1, 32);
  auto S = lt_sets(*m3, 1, 32).S;
  auto SL = spanning_SL(tf.field, *m3);
  CHECK(SL.size() == 3);
  for (int trial = 0; trial < 4; ++trial) {
    auto x = gen::element_min(rng, tf.field, 1, 3, 32);
    auto e = expand_in_generators(x, S, *m3);
    CHECK(recombine(e, S, *m3, 32).equals_mod(x, 32));
    auto e2 = expand_in_generators(x, SL, *m3);
    CHECK(recombine(e2, SL, *m3, 32).equals_mod(x, 32));
  }
  // without the extra level the varpi^3 class cannot be reached
  GeneratingSet cut = SL;
  cut.elements.pop_back();
  cut.levels.pop_back();
  cut.indices.pop_back();
  auto hard = FieldElement::uniformizer(tf.field, 32).pow(3);
  CHECK_THROWS_WITH_AS(expand_in_generators(hard, cut, *m3), doctest::Contains("StuckLevel"), Error);
}
