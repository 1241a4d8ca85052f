#include <doctest.h>

#include "gen.hpp"
#include "ltforge/series.hpp"

using namespace ltforge;

namespace {

constexpr long kPrec = 60;

Series1 poly(unsigned long p, int D, std::vector<long> c) {
  Series1 s(p, D);
  for (size_t n = 0; n < c.size() && static_cast<int>(n) <= D; ++n)
    if (c[n] != 0) s[static_cast<int>(n)] = PadicScalar::from_integer(p, c[n], kPrec);
  return s;
}

// (1+X)^k - 1 by the binomial theorem
Series1 binom(unsigned long p, int D, long k) {
  Series1 s(p, D);
  Integer b = 1;
  for (long n = 1; n <= k && n <= D; ++n) {
    b = b * (k - n + 1) / n;
    s[static_cast<int>(n)] = PadicScalar::from_integer(p, b, kPrec);
  }
  return s;
}

Series2 multiplicative_law(unsigned long p, int D) {
  Series2 F = Series2::x_plus_y(p, D, kPrec);
  F.at(1, 1) = PadicScalar::from_integer(p, 1, kPrec);
  return F;
}

Series1 random_series(std::mt19937_64& rng, unsigned long p, int D) {
  Series1 s(p, D);
  for (int n = 1; n <= D; ++n) s[n] = PadicScalar::from_integer(p, gen::below(rng, ppow(p, 30)), 40);
  return s;
}

}  // namespace

TEST_CASE("compose1 examples") {
  const unsigned long p = 2;
  const int D = 12;
  auto S = poly(p, D, {0, 3, 5, 7, 1});
  CHECK(compose1(Series1::identity(p, D, kPrec), S).equals_at_precision(S));

  auto pi = PadicScalar::from_integer(p, 2, kPrec);
  auto sq = compose1(poly(p, D, {0, 0, 1}), Series1::monomial(p, D, 1, pi));
  CHECK(sq.equals_at_precision(poly(p, D, {0, 0, 4})));

  auto P = binom(p, D, 2);
  auto PP = compose1(P, P);
  CHECK(PP.equals_at_precision(binom(p, D, 4)));
  CHECK(PP.support_degree() == 4);

  CHECK_THROWS_AS(compose1(P, poly(p, D, {1, 1})), Error);
}

TEST_CASE("substitute2 examples") {
  const unsigned long p = 2;
  const int D = 10;
  auto S = poly(p, D, {0, 1, 4, 0, 2});
  auto sum = Series2::x_plus_y(p, D, kPrec);
  CHECK(substitute2(sum, S, S).equals_at_precision(S * PadicScalar::from_integer(p, 2, kPrec)));

  auto F = multiplicative_law(p, D);
  auto X = Series1::identity(p, D, kPrec);
  CHECK(substitute2(F, X, X).equals_at_precision(poly(p, D, {0, 2, 1})));
  auto g = binom(p, D, 2);
  CHECK(substitute2(F, g, g).equals_at_precision(binom(p, D, 4)));
}

TEST_CASE("bivariate substitution into the multiplicative law") {
  const unsigned long p = 3;
  const int D = 9;
  auto F = multiplicative_law(p, D);
  auto g = binom(p, D, 3);
  auto G = substitute2_bivariate(F, g, g);
  // (1+X)^3 (1+Y)^3 - 1
  Integer bx = 1;
  for (int a = 0; a <= 3; ++a) {
    if (a > 0) bx = bx * (3 - a + 1) / a;
    Integer by = 1;
    for (int b = 0; b <= 3; ++b) {
      if (b > 0) by = by * (3 - b + 1) / b;
      if (a + b == 0) continue;
      CHECK(G.at(a, b).equals_at_precision(PadicScalar::from_integer(p, bx * by, kPrec)));
    }
  }
  CHECK(G.at(4, 0).is_zero());
  // [3](F(X,Y)) = F([3]X, [3]Y)
  CHECK(compose_outer(g, F).equals_at_precision(G));
}

TEST_CASE("composition is associative on random triples") {
  std::mt19937_64 rng(3);
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    for (int trial = 0; trial < 8; ++trial) {
      const int D = 14;
      auto a = random_series(rng, p, D);
      auto b = random_series(rng, p, D);
      auto c = random_series(rng, p, D);
      auto lhs = compose1(compose1(a, b), c);
      auto rhs = compose1(a, compose1(b, c));
      CHECK(lhs.first_mismatch(rhs) == -1);
      CHECK(lhs.min_precision() >= 40);
    }
  }
}

TEST_CASE("series multiplication") {
  const unsigned long p = 5;
  const int D = 20;
  Series1 geo(p, D);
  for (int n = 0; n <= D; ++n) geo[n] = PadicScalar::from_integer(p, n % 2 ? -1 : 1, kPrec);
  auto prod = poly(p, D, {1, 1}) * geo;
  CHECK(prod.equals_at_precision(poly(p, D, {1})));
  CHECK(prod[7].is_zero());
}

TEST_CASE("associativity defect") {
  const unsigned long p = 3;
  CHECK(associativity_defect(multiplicative_law(p, 12), 12) == -1);
  CHECK(associativity_defect(Series2::x_plus_y(p, 12, kPrec), 12) == -1);
  auto bad = Series2::x_plus_y(p, 8, kPrec);
  bad.at(2, 1) = PadicScalar::from_integer(p, 1, kPrec);
  CHECK(associativity_defect(bad, 8) == 3);  // 2XYZ appears on one side only
}

TEST_CASE("solver reproduces an endomorphism of the multiplicative series") {
  // A with A(P(X)) = P(A(X)), A = 2X + ..., P = (1+X)^3 - 1
  const unsigned long p = 3;
  const int D = 24;
  auto P = binom(p, D, 3);
  auto pi = P[1];
  PowerTable pp(P, D);
  OnlinePowers ap(p, D, P.support_degree());
  Series1 start(p, D);
  start[1] = PadicScalar::from_integer(p, 2, kPrec);
  ap.set_linear(start, 1);
  auto residual = [&](const Series1& a, int m) {
    ap.set_linear(a, m - 1);
    ap.advance(a, m);
    DotAccumulator acc(p);
    for (int n = 2; n <= P.support_degree(); ++n) acc.add_product(P[n], ap.pow(n, m));
    for (int k = 1; k < m; ++k) acc.sub(a[k] * pp.power(k)[m]);
    return acc.result();
  };
  Series1 A = solve_coefficientwise(start, 2, pi, residual, {});
  CHECK(A.equals_at_precision(binom(p, D, 2)));
  CHECK(compose1(P, A).equals_at_precision(compose1(A, P)));
}

TEST_CASE("solver raises on non-integral coefficients and exhausted precision") {
  const unsigned long p = 3;
  auto pi = PadicScalar::from_integer(p, 3, 40);
  Series1 start = Series1::identity(p, 4, 40);
  auto unit = [&](const Series1&, int) { return PadicScalar::from_integer(p, 1, 40); };
  CHECK_THROWS_WITH_AS(solve_coefficientwise(start, 2, pi, unit, {}), doctest::Contains("NonIntegral"),
                       Error);
  SolveOptions lax;
  lax.require_integral = false;
  CHECK_NOTHROW(solve_coefficientwise(start, 2, pi, unit, lax));
  auto coarse = [&](const Series1&, int) { return PadicScalar::from_integer(p, 9, 6); };
  CHECK_THROWS_WITH_AS(solve_coefficientwise(start, 2, pi, coarse, {}), doctest::Contains("Precision"),
                       Error);
}
