#include <doctest.h>

#include <set>

#include "gen.hpp"
#include "ltforge/local_field.hpp"

using namespace ltforge;

namespace {

FieldElement w(const LocalField& F) { return FieldElement::uniformizer(F, F.default_precision()); }
FieldElement z(const LocalField& F) { return FieldElement::generator(F, F.default_precision()); }
FieldElement num(const LocalField& F, long n) {
  return FieldElement::from_integer(F, n, F.default_precision());
}

// Exact product in Z[zeta, varpi]/(g~(zeta), E(varpi)), written independently of the library:
// full bivariate product, then eliminate high zeta powers, then high varpi powers.
using Mat = std::vector<std::vector<Integer>>;  // [j][i]

Mat reduce_zeta(Mat m, const std::vector<Integer>& g, int f) {
  for (auto& row : m) {
    for (int d = static_cast<int>(row.size()) - 1; d >= f; --d) {
      Integer c = row[d];
      if (c == 0) continue;
      for (int k = 0; k < f; ++k) row[d - f + k] -= c * g[k];
      row[d] = 0;
    }
    row.resize(f);
  }
  return m;
}

Mat ring_mul(const Mat& a, const Mat& b, const Tower& t) {
  int e = t.e, f = t.f;
  Mat prod(2 * e - 1, std::vector<Integer>(2 * f - 1));
  for (int j1 = 0; j1 < e; ++j1)
    for (int i1 = 0; i1 < f; ++i1)
      for (int j2 = 0; j2 < e; ++j2)
        for (int i2 = 0; i2 < f; ++i2) prod[j1 + j2][i1 + i2] += a[j1][i1] * b[j2][i2];
  prod = reduce_zeta(prod, t.gtilde, f);
  for (int jj = 2 * e - 2; jj >= e; --jj) {
    for (int k = 0; k < e; ++k) {
      // subtract prod[jj] * a_k at slot jj - e + k
      Mat single(1, std::vector<Integer>(2 * f - 1));
      for (int i1 = 0; i1 < f; ++i1)
        for (int i2 = 0; i2 < f; ++i2) single[0][i1 + i2] += prod[jj][i1] * t.eis[k][i2];
      single = reduce_zeta(single, t.gtilde, f);
      for (int i = 0; i < f; ++i) prod[jj - e + k][i] -= single[0][i];
    }
    for (int i = 0; i < f; ++i) prod[jj][i] = 0;
  }
  prod.resize(e);
  return prod;
}

Integer bareiss_det(std::vector<std::vector<Integer>> m) {
  size_t n = m.size();
  Integer prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace

TEST_CASE("make_tower accepts the documented towers") {
  auto L = make_tower(3, 1, 4, 40);
  CHECK(L.degree() == 4);
  CHECK(num(L, 3).valuation() == 4);

  auto Q5 = make_tower(5, 1, 1, 40);
  CHECK(Q5.degree() == 1);
  CHECK(w(Q5).valuation() == 1);
  CHECK(w(Q5) == num(Q5, 5));

  auto U = make_tower(2, 2, 1, 40);
  CHECK(U.residue_field().size() == 4);
  // enumerate residues of products of lifts: closed set of exactly 4 classes
  std::set<unsigned long> seen;
  for (unsigned long a = 0; a < 4; ++a) {
    for (unsigned long b = 0; b < 4; ++b) {
      auto x = lift_residue(U, U.residue_field().from_index(a), 0, 40);
      auto y = lift_residue(U, U.residue_field().from_index(b), 0, 40);
      auto r = residue_at_level(x * y, 0);
      seen.insert(U.residue_field().index(r));
      auto s = residue_at_level(x + y, 0);
      seen.insert(U.residue_field().index(s));
    }
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("make_tower rejects malformed input") {
  CHECK_THROWS_WITH_AS(make_tower(4, 1, 2), doctest::Contains("BadPrime"), Error);
  CHECK_THROWS_WITH_AS(make_tower(1, 1, 2), doctest::Contains("BadPrime"), Error);

  TowerSpec s;
  s.p = 2;
  s.f = 2;
  s.e = 1;
  s.unram = {1, 0, 1};  // (X+1)^2 over F_2
  CHECK_THROWS_WITH_AS(make_tower(s), doctest::Contains("NotIrreducible"), Error);

  TowerSpec t;
  t.p = 3;
  t.f = 1;
  t.e = 2;
  t.eis = {{Integer(-9)}, {Integer(0)}, {Integer(1)}};  // X^2 - 9
  CHECK_THROWS_WITH_AS(make_tower(t), doctest::Contains("NotEisenstein"), Error);
  t.eis = {{Integer(3)}, {Integer(1)}, {Integer(1)}};  // middle coefficient a unit
  CHECK_THROWS_WITH_AS(make_tower(t), doctest::Contains("NotEisenstein"), Error);
  t.eis = {{Integer(3)}, {Integer(3)}, {Integer(3)}};  // leading coefficient not a unit
  CHECK_THROWS_WITH_AS(make_tower(t), doctest::Contains("NotEisenstein"), Error);
  t.eis = {{Integer(6)}, {Integer(3)}, {Integer(2)}};  // unit leading coefficient is fine
  CHECK_NOTHROW(make_tower(t));
}

TEST_CASE("default unramified moduli") {
  CHECK(default_modulus(2, 2) == FpPoly{1, 1, 1});
  CHECK(default_modulus(3, 2) == FpPoly{1, 0, 1});
  CHECK(default_modulus(5, 2) == FpPoly{2, 0, 1});
  CHECK(fp_is_irreducible(default_modulus(2, 3), 2));
  CHECK(fp_is_irreducible(default_modulus(3, 4), 3));
}

TEST_CASE("valuation examples") {
  auto L = make_tower(3, 1, 4, 40);
  CHECK((w(L) + num(L, 3)).valuation() == 1);
  auto rel = w(L).pow(4) - num(L, 3);
  CHECK(rel.is_zero());
  CHECK_THROWS_WITH_AS(rel.valuation(), doctest::Contains("PrecisionExhausted"), Error);
}

TEST_CASE("residue_decompose examples") {
  auto L = make_tower(3, 2, 4, 40);
  auto x = z(L) * w(L).pow(3) * Integer(2);
  CHECK(residue_decompose(x, 3) == ResidueField::Elem{0, 2});
  auto y = w(L).pow(3) + w(L).pow(5);
  CHECK(residue_decompose(y, 3) == ResidueField::Elem{1, 0});
  auto u = (num(L, 1) + z(L)) * w(L).pow(2);
  CHECK(residue_decompose(u, 2) == ResidueField::Elem{1, 1});
  CHECK_THROWS_WITH_AS(residue_decompose(u, 3), doctest::Contains("WrongLevel"), Error);
  // levels above e and below zero go through powers of p
  auto deep = u * Integer(9);
  CHECK(residue_decompose(deep, 10) == ResidueField::Elem{1, 1});
  auto neg = u / num(L, 27);
  CHECK(residue_decompose(neg, -10) == ResidueField::Elem{1, 1});
}

TEST_CASE("Teichmuller lifts are fixed by the q-power map") {
  for (auto [p, f] : {std::pair{2UL, 2}, {3UL, 2}, {5UL, 2}, {2UL, 3}}) {
    auto L = make_tower(p, f, 3, 60);
    long q = 1;
    for (int i = 0; i < f; ++i) q *= static_cast<long>(p);
    for (int i = 0; i < f; ++i) {
      auto t = FieldElement::teichmuller(L, i, 60);
      CHECK(t.pow(q).equals_mod(t, 60));
    }
    // zeta_1 reduces to the generator
    auto t1 = FieldElement::teichmuller(L, 1, 60);
    CHECK(residue_decompose(t1, 0) == residue_decompose(z(L), 0));
  }
}

TEST_CASE("element arithmetic properties") {
  std::mt19937_64 rng(2024);
  std::vector<LocalField> fields = {make_tower(2, 1, 3, 48), make_tower(3, 2, 4, 48),
                                    make_tower(5, 1, 6, 48), make_tower(2, 2, 5, 48),
                                    make_tower(7, 1, 1, 48)};
  for (const auto& L : fields) {
    for (int trial = 0; trial < 60; ++trial) {
      auto x = gen::element_min(rng, L, -3, 8, 48);
      auto y = gen::element_min(rng, L, -3, 8, 48);
      CHECK((x * y).valuation() == x.valuation() + y.valuation());
      auto s = x + y;
      if (x.valuation() != y.valuation()) {
        CHECK(s.valuation() == std::min(x.valuation(), y.valuation()));
      } else if (!s.is_zero()) {
        CHECK(s.valuation() >= x.valuation());
      }
      auto inv = x.inverse();
      CHECK(inv.precision() == x.precision() - 2 * x.valuation());
      CHECK((inv * x).equals_mod(FieldElement::one(L, 400), std::min(48 - 2 * x.valuation(), 48 - x.valuation())));
      // precision contract of multiplication
      CHECK((x * y).precision() == std::min(x.precision() + y.valuation(), y.precision() + x.valuation()));
      // varpi shifts are exact inverses of each other
      long k = gen::range(rng, 1, 2 * L.e() + 1);
      CHECK(x.mul_varpi_power(k).mul_varpi_power(-k).equals_mod(x, x.precision()));
      CHECK(x.mul_varpi_power(-k).valuation() == x.valuation() - k);
      // residue decomposition round trip
      long j = x.valuation();
      auto r = residue_decompose(x, j);
      auto back = lift_residue(L, r, j, x.precision());
      CHECK((x - back).val_floor() >= j + 1);
      // distributivity
      auto c = gen::element_min(rng, L, 0, 4, 48);
      auto lhs = c * (x + y);
      auto rhs = c * x + c * y;
      CHECK(lhs.equals_mod(rhs, std::min(lhs.precision(), rhs.precision())));
    }
  }
}

TEST_CASE("valuation agrees with the norm determinant oracle") {
  std::mt19937_64 rng(99);
  std::vector<LocalField> fields = {make_tower(3, 1, 4), make_tower(2, 2, 3), make_tower(5, 2, 2),
                                    make_tower(3, 2, 3), make_tower(2, 1, 5)};
  for (const auto& L : fields) {
    const Tower& t = L.tower();
    int e = t.e, f = t.f, n = e * f;
    for (int trial = 0; trial < 40; ++trial) {
      Mat c(e, std::vector<Integer>(f));
      for (auto& row : c)
        for (auto& v : row) v = Integer(static_cast<long>(rng() % 50)) - 25;
      bool allzero = true;
      for (auto& row : c)
        for (auto& v : row) allzero = allzero && v == 0;
      if (allzero) continue;
      long s = gen::range(rng, -2, 2);
      // multiplication matrix on the basis zeta^i varpi^j
      std::vector<std::vector<Integer>> M(n, std::vector<Integer>(n));
      for (int j = 0; j < e; ++j) {
        for (int i = 0; i < f; ++i) {
          Mat b(e, std::vector<Integer>(f));
          b[j][i] = 1;
          Mat col = ring_mul(c, b, t);
          for (int jj = 0; jj < e; ++jj)
            for (int ii = 0; ii < f; ++ii) M[jj * f + ii][j * f + i] = col[jj][ii];
        }
      }
      Integer det = bareiss_det(M);
      REQUIRE(det != 0);
      long vnorm = vp(det, t.p) + static_cast<long>(n) * s;
      std::vector<Integer> flat(n);
      for (int j = 0; j < e; ++j)
        for (int i = 0; i < f; ++i) flat[j * f + i] = c[j][i];
      auto x = FieldElement::from_coeffs(L, s, flat, 400);
      // v_p(N_{L/Q_p}(x)) = f * v_L(x) with v_L(varpi) = 1
      CHECK(vnorm == f * x.valuation());
    }
  }
}

TEST_CASE("precision exhaustion is reported, never hidden") {
  auto L = make_tower(3, 1, 2, 10);
  auto x = FieldElement::from_integer(L, 81, 10);  // 3^4 has valuation 8 < 10
  CHECK(x.valuation() == 8);
  auto y = x + FieldElement::zero(L, 5);
  CHECK(y.is_zero());
  CHECK(y.precision() == 5);
  CHECK((x * x).valuation() == 16);
  CHECK((x * x).precision() == 18);
  CHECK_THROWS_AS(y.inverse(), Error);
  auto tiny = FieldElement::from_integer(L, 1, 10) * FieldElement::zero(L, 3);
  CHECK(tiny.precision() == 3);
}
