// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "ltforge/verify.hpp"

using namespace ltforge;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  void fail(const std::string& why) {
    if (ok) note = why;
    ok = false;
  }
  void expect(bool c, const std::string& why) {
    if (!c) fail(why);
  }
};

using Clock = std::chrono::steady_clock;

// Runs one criterion; limit_s <= 0 means no time bound.
bool criterion(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "took %.2f s, limit %.0f s", secs, limit_s);
    out.fail(buf);
  }
  std::printf("AC%-2d %s  %s (%.2f s)%s%s\n", id, out.ok ? "PASS" : "FAIL", title.c_str(), secs,
              out.ok ? "" : "  -- ", out.note.c_str());
  std::fflush(stdout);
  return out.ok;
}

// All records of a theorem must be consistent.
void all_consistent(const std::vector<CheckResult>& rs, Outcome& out) {
  out.expect(!rs.empty(), "no records");
  for (const auto& r : rs)
    if (!r.consistent) out.fail(r.theorem + " violated on " + r.field.dump());
}

const long kN = 64;
const int kD = 128;

}  // namespace

int main() {
  bool ok = true;
  SuiteConfig base;  // the default suite: p in {2,3,5}, e <= 8, f <= 2, n <= 2, N = 64, D = 128
  std::unique_ptr<Suite> suite;

  ok &= criterion(1, "multiplicative log coefficients are (-1)^(n-1)/n through D", 1.0, [&](Outcome& out) {
    ContextOptions o;
    o.D = kD;
    o.N = kN;
    for (unsigned long p : {2UL, 3UL, 5UL}) {
      auto ctx = LTContext::multiplicative(p, o);
      const Series1& log = ctx->log_series();
      out.expect(log.degree() == kD, "wrong degree");
      out.expect(log[0].is_zero(), "constant term");
      for (int n = 1; n <= kD; ++n) {
        const PadicScalar& c = log[n];
        PadicScalar want = PadicScalar::from_rational(p, n % 2 ? 1 : -1, n, c.precision());
        out.expect(c.precision() >= kN, "coefficient carries fewer than N digits");
        out.expect(!c.is_zero() && c.congruent(want, c.precision()),
                   "p=" + std::to_string(p) + " coefficient " + std::to_string(n));
      }
    }
  });

  ok &= criterion(2, "log(1+pZ_p) is pZ_p for p = 3, 5 and 4Z_2 for p = 2", 5.0, [&](Outcome& out) {
    ContextOptions o;
    o.D = kD;
    o.N = kN;
    std::mt19937_64 rng(derive_seed(1, "AC2", 0));
    for (unsigned long p : {2UL, 3UL, 5UL}) {
      auto ctx = LTContext::multiplicative(p, o);
      LocalField Q = make_tower(p, 1, 1, kN);
      const long want = p == 2 ? 2 : 1;
      long seen = kN;
      for (int k = 0; k < 200; ++k) {
        FieldElement x = random_element(rng, Q, 1 + k % 3, kN);
        FieldElement y = eval_log(*ctx, x);
        out.expect(!y.is_zero(), "log vanished");
        seen = std::min(seen, y.valuation());
        // the log of x = p u lies in the claimed ideal
        out.expect(y.valuation() >= want, "log value below the claimed ideal");
      }
      out.expect(seen == want, "minimum over samples for p=" + std::to_string(p) + " is " + std::to_string(seen));
      // the generator of the image reaches it exactly
      long gen_val = eval_log(*ctx, FieldElement::from_integer(Q, static_cast<long>(p), kN)).valuation();
      out.expect(gen_val == want, "log(1+p) has the wrong valuation");
    }
  });

  ok &= criterion(3, "Q_3(3^(1/4)): regular, gamma 1, minimum -1, explicit log lattice", 30.0, [&](Outcome& out) {
    SuiteConfig c = base;
    c.primes = {3};
    Context ctx = make_context(c, 3);
    LocalField L = make_tower(3, 1, 4, kN);
    RegularityReport reg = regularity_check(L, *ctx);
    out.expect(reg.is_regular, "not regular");
    MinValuation mv = min_valuation(L, *ctx);
    out.expect(mv.gamma == 1, "gamma != 1");
    out.expect(mv.value == -1 && mv.sweep == -1 && mv.log_varpi == -1 && mv.formula == -1, "minimum != -1");
    FieldElement w = FieldElement::uniformizer(L, kN);
    std::vector<FieldElement> lattice = {w.pow(2), w.inverse() - w, w.pow(3), w.pow(4)};
    GeneratingSet LB = log_basis(L, *ctx);
    out.expect(LB.size() == 4, "log basis size != 4");
    // mutual integrality of coordinates
    for (const auto& y : LB.elements) out.expect(coords_in_span(y, lattice).integral, "basis outside the lattice");
    for (const auto& y : lattice) out.expect(coords_in_span(y, LB.elements).integral, "lattice outside the basis span");
    out.expect(eval_log(*ctx, w).equals_mod(w.inverse() - w - w.pow(2), 3), "log(1+varpi) mod varpi^3");
    out.expect(eval_log(*ctx, -w).equals_mod(-w.inverse() + w - w.pow(2), 3), "log(1-varpi) mod varpi^3");
  });

  ok &= criterion(4, "Q_5(5^(1/6)): minimum -1 and a six-element basis", 60.0, [&](Outcome& out) {
    SuiteConfig c = base;
    Context ctx = make_context(c, 5);
    LocalField L = make_tower(5, 1, 6, kN);
    out.expect(regularity_check(L, *ctx).is_regular, "not regular");
    MinValuation mv = min_valuation(L, *ctx);
    out.expect(mv.value == -1 && mv.sweep == -1 && mv.log_varpi == -1, "minimum != -1");
    GeneratingSet B = basis_BL(L, *ctx);
    out.expect(B.size() == 6, "basis size != 6");
    FieldElement w = FieldElement::uniformizer(L, kN);
    std::vector<FieldElement> lattice = {w + w.inverse()};
    for (int j = 2; j <= 6; ++j) lattice.push_back(w.pow(j));
    out.expect(same_lattice(log_of(B, *ctx).elements, lattice), "log basis differs from the explicit lattice");
  });

  suite = std::make_unique<Suite>(base);

  ok &= criterion(5, "valuation formula on 200 samples per regular tower, zero mismatches", 0, [&](Outcome& out) {
    auto rs = suite->run("logval");
    all_consistent(rs, out);
    int towers = 0;
    for (const auto& r : rs) {
      out.expect(r.details.value("samples", 0) == 200, "fewer than 200 samples");
      out.expect(r.details.value("mismatches", -1) == 0, "mismatch on " + r.field.dump());
      out.expect(r.details.value("equalities", 0) == 200, "certificate without equality");
      ++towers;
    }
    // regular towers of the default grid: p = 3 and p = 5 fields without torsion
    out.expect(towers == 26, "expected 26 regular towers, saw " + std::to_string(towers));
  });

  ok &= criterion(6, "q^gamma - gamma e = v(log varpi) = basis-image minimum on regular towers", 0, [&](Outcome& out) {
    auto rs = suite->run("minval");
    all_consistent(rs, out);
    int exact = 0;
    for (const auto& r : rs) {
      long q = r.field["p"].get<long>(), e = r.field["e"].get<long>();
      if (e < q - 1) continue;
      const Json& d = r.details;
      out.expect(d.contains("formula") && d["formula"] == d["log_varpi"] && d["formula"] == d["sweep"],
                 "disagreement on " + r.field.dump());
      ++exact;
    }
    out.expect(exact > 0, "no tower with e >= q-1");
  });

  ok &= criterion(7, "induced maps on graded pieces, with kernels at Q_p(zeta_p)", 0, [&](Outcome& out) {
    for (const char* id : {"FV", "regisolem", "FV3"}) all_consistent(suite->run(id), out);
    std::map<unsigned long, bool> kernel_seen;
    for (const auto& r : suite->run("regisolem")) {
      if (r.field.value("torsion_level", 0) != 1) continue;
      unsigned long p = r.field["p"].get<unsigned long>();
      const Json& lv = r.details["levels"][0];
      kernel_seen[p] = lv["injective"] == false && r.details.contains("kernel_witness");
    }
    for (unsigned long p : {2UL, 3UL, 5UL})
      out.expect(kernel_seen.count(p) && kernel_seen[p], "no kernel witness for Q_" + std::to_string(p) + "(zeta)");
  });

  ok &= criterion(8, "B_n for (3,1), (5,1), (2,2), (3,2): size, independence, integral coordinates", 0, [&](Outcome& out) {
    std::map<std::pair<unsigned long, int>, bool> seen;
    for (const auto& r : suite->run("ltbasis")) {
      auto key = std::make_pair(r.field["p"].get<unsigned long>(), r.field.value("torsion_level", 0));
      seen[key] = r.consistent && !r.details["determinant_valuation"].is_null();
      if (!r.consistent) out.fail("violated on " + r.field.dump());
    }
    for (auto key : {std::make_pair(3UL, 1), std::make_pair(5UL, 1), std::make_pair(2UL, 2), std::make_pair(3UL, 2)})
      out.expect(seen.count(key) && seen[key],
                 "missing or failed (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")");
  });

  ok &= criterion(9, "Q_p(zeta_p): minimum 2 and log(1+(zeta_p-1)^j) = (zeta_p-1)^j mod m^(j+1)", 0, [&](Outcome& out) {
    auto rs = suite->run("example-zetap");
    all_consistent(rs, out);
    out.expect(rs.size() == 2, "expected p = 3 and p = 5");
    for (const auto& r : rs) out.expect(r.details.value("min_valuation", 0) == 2, "minimum != 2");
  });

  ok &= criterion(10, "property suites at N = 64 and stability under doubling D and N", 0, [&](Outcome& out) {
    int pairs = 0;
    for (const char* id : {"fgl", "log-hom", "wiles", "genlemgen", "unitinv"}) {
      auto rs = suite->run(id);
      all_consistent(rs, out);
      if (std::string(id) == "log-hom")
        for (const auto& r : rs) pairs += r.details.value("pairs", 0);
      if (std::string(id) == "fgl")
        for (const auto& r : rs) out.expect(r.details.value("associative_through", 0) == kD, "associativity short of D");
    }
    out.expect(pairs >= 1000, "only " + std::to_string(pairs) + " log-hom pairs");

    // every reported digit survives doubling D and N
    SuiteConfig big = base;
    big.D = 2 * kD;
    big.N = 2 * kN;
    for (unsigned long p : {2UL, 3UL, 5UL}) {
      Context lo = suite->context(p);
      Context hi = make_context(big, p);
      std::mt19937_64 rng(derive_seed(1, "AC10", p));
      for (const auto& s : suite->subjects()) {
        if (s.L.p() != p || s.sets) continue;
        LocalField Lhi = s.L.with_precision(2 * kN);
        for (int k = 0; k < 4; ++k) {
          FieldElement x = random_element(rng, s.L, 1 + k % std::max(1L, s.top), kN);
          FieldElement a = eval_log(*lo, x);
          FieldElement b = eval_log(*hi, x.lifted(2 * kN));
          out.expect(b.precision() >= a.precision() && b.equals_mod(a, a.precision()),
                     "log digits moved on " + s.L.describe());
        }
        if (s.regularity.is_regular && s.L.e() >= static_cast<long>(p - 1)) {
          long v1 = min_valuation(s.L, *lo).value, v2 = min_valuation(Lhi, *hi).value;
          out.expect(v1 == v2, "minimum valuation moved on " + s.L.describe());
        }
      }
    }
  });

  return ok ? 0 : 1;
}
