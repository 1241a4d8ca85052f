#include <doctest.h>

#include "ltforge/verify.hpp"

using namespace ltforge;

namespace {

SuiteConfig small_config() {
  SuiteConfig c;
  c.primes = {3};
  c.max_e = 4;
  c.max_f = 1;
  c.max_n = 1;
  c.N = 32;
  c.D = 48;
  c.samples = 3;
  c.logval_samples = 12;
  c.pair_samples = 3;
  c.threads = 1;
  return c;
}

std::string dump(const std::vector<CheckResult>& rs) {
  std::string s;
  for (const auto& r : rs) s += r.to_json().dump() + "\n";
  return s;
}

}  // namespace

TEST_CASE("derived seeds are stable and separate checks") {
  auto a = derive_seed(7, "logval", 3);
  CHECK(a == derive_seed(7, "logval", 3));
  CHECK(a != derive_seed(7, "logval", 4));
  CHECK(a != derive_seed(8, "logval", 3));
  CHECK(a != derive_seed(7, "unitinv", 3));
}

TEST_CASE("random elements have the requested valuation") {
  std::mt19937_64 rng(3);
  auto L = make_tower(5, 2, 3, 30);
  for (long v = -2; v <= 6; ++v) {
    auto x = random_element(rng, L, v, 30);
    CHECK(x.valuation() == v);
    CHECK(x.precision() == 30);
  }
}

TEST_CASE("torsion points lifted from the regularity witness") {
  ContextOptions o;
  o.D = 48;
  o.N = 40;
  struct Case {
    unsigned long p;
    int f, e;
    long a0;  // Eisenstein polynomial X^e + a0
  };
  // Q_3(sqrt(-3)), an f = 2 tower, Q_2(2^(1/3)) and Q_5((-5)^(1/4))
  for (auto c : {Case{3, 1, 2, 3}, Case{3, 2, 4, -3}, Case{2, 1, 3, -2}, Case{5, 1, 4, 5}}) {
    for (auto ctx : {LTContext::multiplicative(c.p, o), LTContext::basic(c.p, o)}) {
      TowerSpec spec{c.p, c.f, c.e, {}, {}, 40};
      spec.eis.assign(static_cast<size_t>(c.e + 1), UVec{0});
      spec.eis[0] = UVec{c.a0};
      spec.eis.back() = UVec{1};
      auto L = make_tower(spec);
      auto reg = regularity_check(L, *ctx);
      REQUIRE_FALSE(reg.is_regular);
      auto lambda = torsion_point(L, *ctx, *reg.witness, 40);
      CHECK(lambda.valuation() * static_cast<long>(c.p - 1) == c.e);
      CHECK(apply_pi(*ctx, lambda).is_zero());
      CHECK(eval_log(*ctx, lambda).is_zero());
    }
  }
  // the multiplicative torsion point of Q_2 is -2
  auto ctx = LTContext::multiplicative(2, o);
  auto L = make_tower(2, 1, 1, 40);
  auto lambda = torsion_point(L, *ctx, {1}, 40);
  CHECK(lambda.equals_mod(FieldElement::from_integer(L, -2, 40), 40));
}

TEST_CASE("every theorem id runs consistently on a small grid") {
  Suite suite(small_config());
  // 4 towers plus the level-one torsion field
  CHECK(suite.subjects().size() == 5);
  for (const auto& id : theorem_ids()) {
    auto rs = suite.run(id);
    REQUIRE_FALSE(rs.empty());
    for (const auto& r : rs) {
      INFO(r.to_json().dump());
      CHECK(r.consistent);
      CHECK(r.theorem == id);
      CHECK(r.witness.is_null());
    }
  }
  CHECK_THROWS_WITH_AS(suite.run("nosuch"), doctest::Contains("InvalidArgument"), Error);
}

TEST_CASE("suite output is deterministic and independent of the thread count") {
  auto c = small_config();
  c.max_e = 3;
  std::string one = dump(Suite(c).run_all());
  CHECK(one == dump(Suite(c).run_all()));
  c.threads = 3;
  CHECK(one == dump(Suite(c).run_all()));
  c.seed = 2;
  CHECK(one != dump(Suite(c).run_all()));
}

TEST_CASE("report records follow the wire format") {
  auto c = small_config();
  c.towers = {TowerSpec{3, 1, 4, {}, {}, 32}};
  Suite suite(c);
  auto rs = suite.run("minval");
  REQUIRE(rs.size() == 1);
  Json j = rs[0].to_json();
  CHECK(j["theorem"] == "minval");
  CHECK(j["status"] == "consistent");
  CHECK(j["precision"] == 32);
  CHECK(j["witness"].is_null());
  CHECK(j["field"]["e"] == 4);
  CHECK(j["details"]["value"] == -1);
  CHECK(j["details"]["gamma"] == 1);

  // a theorem whose hypotheses fail on every selected field
  auto none = suite.run("genspan");
  REQUIRE(none.size() == 1);
  CHECK(none[0].consistent);
  CHECK(none[0].details["applies"] == false);
}

TEST_CASE("basic series and torsion-only selections") {
  auto c = small_config();
  c.series = "basic";
  c.primes = {2};
  c.lt_level = 2;
  Suite suite(c);
  REQUIRE(suite.subjects().size() == 1);
  CHECK(suite.subjects()[0].L.degree() == 2);
  for (const char* id : {"kernel", "ltbasis", "mincor", "genspan", "genval2", "regisolem"}) {
    for (const auto& r : suite.run(id)) {
      INFO(r.to_json().dump());
      CHECK(r.consistent);
    }
  }
}

TEST_CASE("custom series contexts") {
  // [3](X) = X^3 + 3X with a unit twist on the linear term: -3X + X^3
  Series1 s(3, 3);
  s[1] = PadicScalar::from_integer(3, -3, 200);
  s[3] = PadicScalar::from_integer(3, 1, 200);
  auto c = small_config();
  c.series = "custom";
  c.custom_series = s;
  c.custom_polynomial = true;
  c.max_e = 2;
  Suite suite(c);
  for (const char* id : {"ltseries", "log-hom", "kernel", "logval"})
    for (const auto& r : suite.run(id)) {
      INFO(r.to_json().dump());
      CHECK(r.consistent);
    }
}
