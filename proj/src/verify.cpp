#include "ltforge/verify.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>

namespace ltforge {

namespace {

using Rng = std::mt19937_64;

Integer below(Rng& rng, const Integer& bound) {
  static const Integer word("18446744073709551616");
  Integer r = 0, span = 1;
  while (span < bound * 1024) {
    r = r * word + Integer(std::to_string(rng()));
    span *= word;
  }
  return r % bound;
}

long pick(Rng& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

long top_level(unsigned long q, long e) { return static_cast<long>(q) * e / static_cast<long>(q - 1); }

// Records a failed assertion; the first witness offered is kept.
struct Recorder {
  CheckResult& r;
  int failures = 0;

  void fail(const std::string& what, const Json& witness = nullptr) {
    r.consistent = false;
    if (failures++ < 8) r.details["failures"].push_back(what);
    if (r.witness.is_null() && !witness.is_null()) r.witness = witness;
  }
  void expect(bool ok, const std::string& what, const Json& witness = nullptr) {
    if (!ok) fail(what, witness);
  }
};

Json witness_of(const FieldElement& x) { return element_to_json(x); }

Json residue_json(const ResidueField::Elem& a) {
  Json j = Json::array();
  for (auto c : a) j.push_back(c);
  return j;
}

bool agree(const FieldElement& a, const FieldElement& b) {
  return a.equals_mod(b, std::min(a.precision(), b.precision()));
}

Json qp_field(unsigned long p, long N) { return field_to_json(make_tower(p, 1, 1, N)); }

}  // namespace

// ---------------------------------------------------------------------------

Json CheckResult::to_json() const {
  return Json{{"theorem", theorem},
              {"field", field},
              {"status", consistent ? "consistent" : "violated"},
              {"witness", witness},
              {"precision", precision},
              {"details", details}};
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {
      "ltseries", "fgl",     "endo",     "log-hom",   "valpix", "genlemgen",  "wiles",
      "kernel",   "FV",      "regisolem", "FV3",      "basisthm1", "basisthm2", "logval",
      "unitinv",  "minval",  "genspan",  "genval2",   "mincor", "ltbasis",    "example-p3",
      "example-p5", "example-zetap"};
  return ids;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& theorem, size_t task) {
  // FNV-1a over the inputs, then a splitmix64 finaliser
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  for (int i = 0; i < 8; ++i) mix((seed >> (8 * i)) & 0xff);
  for (unsigned char c : theorem) mix(c);
  for (int i = 0; i < 8; ++i) mix((static_cast<std::uint64_t>(task) >> (8 * i)) & 0xff);
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

FieldElement random_element(Rng& rng, const LocalField& L, long v, long prec) {
  const int e = L.e(), f = L.f();
  std::vector<Integer> c(static_cast<size_t>(e * f));
  long bound = (prec - v) / e + 2;
  for (auto& x : c) x = below(rng, ppow(L.p(), bound));
  ResidueField::Elem r(static_cast<size_t>(f));
  for (int i = 0; i < f; ++i) r[i] = rng() % L.p();
  if (L.residue_field().is_zero(r)) r[0] = 1;
  FieldElement lead = lift_residue(L, r, v, prec);
  FieldElement rest = FieldElement::from_coeffs(L, 0, c, prec - v).mul_varpi_power(v + 1);
  return (lead + rest).with_precision(prec);
}

FieldElement torsion_point(const LocalField& L, const LTContext& ctx, const ResidueField::Elem& u,
                           long prec) {
  const unsigned long q = ctx.q();
  const long e = L.e();
  if (e % static_cast<long>(q - 1) != 0) raise(Errc::InvalidArgument, "no torsion below a non-integral ratio");
  const long s = e / static_cast<long>(q - 1);
  const long work = prec + static_cast<long>(q) * s + e + 8;
  const Series1& P = ctx.lt_series();
  Series1 dP(ctx.p(), P.degree());
  for (int n = 2; n <= P.degree(); ++n)
    if (!P[n].is_zero()) dP[n - 1] = P[n] * PadicScalar::from_integer(ctx.p(), n, P[n].precision() + 64);
  const FieldElement pi = FieldElement::from_scalar(L, ctx.pi(), work);
  const FieldElement ws = FieldElement::uniformizer(L, work).pow(s);
  const FieldElement scale = ws.pow(static_cast<long>(q)).inverse();

  // Newton on g(Y) = [pi](varpi^s Y) / varpi^(qs), whose reduction Y^q + eps Y has u as a simple root
  FieldElement y = lift_residue(L, u, 0, work);
  for (int it = 0; it < 64; ++it) {
    FieldElement x = ws * y;
    FieldElement g = eval_series(P, x) * scale;
    if (g.val_floor() >= prec + e) break;
    FieldElement dg = (eval_series(dP, x) + pi) * ws * scale;
    y = (y - g / dg).with_precision(work);
  }
  return (ws * y).with_precision(prec);
}

ContextOptions options_of(const SuiteConfig& cfg) {
  ContextOptions o;
  o.D = cfg.D;
  o.N = cfg.N;
  return o;
}

Context make_context(const SuiteConfig& cfg, unsigned long p) {
  ContextOptions o = options_of(cfg);
  if (cfg.series == "basic") return LTContext::basic(p, o);
  if (cfg.series == "multiplicative") return LTContext::multiplicative(p, o);
  if (cfg.series == "custom") {
    if (!cfg.custom_series) raise(Errc::InvalidArgument, "custom series kind without a series");
    if (cfg.custom_series->prime() != p) raise(Errc::InvalidArgument, "custom series is over another prime");
    return LTContext::custom(*cfg.custom_series, cfg.custom_polynomial, o);
  }
  raise(Errc::InvalidArgument, "unknown series kind \"" + cfg.series + "\"");
}

// ---------------------------------------------------------------------------

struct Suite::Task {
  std::string theorem;
  Json field;
  long precision = 0;
  std::function<void(Recorder&, Rng&)> run;
};

Suite::Suite(SuiteConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.samples < 1 || cfg_.logval_samples < 1 || cfg_.pair_samples < 1)
    raise(Errc::InvalidArgument, "sample counts must be positive");
  if (cfg_.series == "custom" && cfg_.custom_series) cfg_.primes = {cfg_.custom_series->prime()};
  std::vector<unsigned long> primes = cfg_.primes;
  for (const auto& t : cfg_.towers) primes.push_back(t.p);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (auto p : primes)
    if (!is_prime(p)) raise(Errc::BadPrime, std::to_string(p) + " is not prime");
  cfg_.primes = primes;
  for (auto p : primes) contexts_.push_back(make_context(cfg_, p));

  auto add_field = [&](const LocalField& L) {
    Subject s;
    s.L = L;
    s.ctx = context(L.p());
    s.regularity = regularity_check(L, *s.ctx);
    s.top = top_level(L.p(), L.e());
    subjects_.push_back(std::move(s));
  };
  auto add_torsion = [&](unsigned long p, int n) {
    Subject s;
    s.ctx = context(p);
    s.sets = lt_sets(*s.ctx, n, cfg_.N);
    s.L = s.sets->torsion.field;
    s.torsion_level = n;
    s.regularity = regularity_check(s.L, *s.ctx);
    s.top = top_level(p, s.L.e());
    subjects_.push_back(std::move(s));
  };

  if (cfg_.lt_level) {
    if (*cfg_.lt_level < 1) raise(Errc::InvalidArgument, "torsion level must be positive");
    for (auto p : cfg_.primes) add_torsion(p, *cfg_.lt_level);
  } else if (!cfg_.towers.empty()) {
    for (auto t : cfg_.towers) {
      t.N = cfg_.N;
      add_field(make_tower(t));
    }
  } else {
    for (auto p : cfg_.primes)
      for (int f = 1; f <= cfg_.max_f; ++f)
        for (int e = 1; e <= cfg_.max_e; ++e) add_field(make_tower(p, f, e, cfg_.N));
    for (auto p : cfg_.primes)
      for (int n = 1; n <= cfg_.max_n; ++n) {
        long deg = static_cast<long>(p - 1);
        for (int k = 1; k < n; ++k) deg *= static_cast<long>(p);
        if (deg <= cfg_.max_e) add_torsion(p, n);
      }
  }
}

Context Suite::context(unsigned long p) const {
  for (size_t k = 0; k < cfg_.primes.size(); ++k)
    if (cfg_.primes[k] == p) return contexts_[k];
  raise(Errc::InvalidArgument, "no context for p = " + std::to_string(p));
}

std::vector<CheckResult> Suite::execute(std::vector<Task> tasks) const {
  std::vector<CheckResult> out(tasks.size());
  auto run_one = [&](size_t k) {
    const Task& t = tasks[k];
    CheckResult& r = out[k];
    r.theorem = t.theorem;
    r.field = t.field;
    r.precision = t.precision;
    Recorder rec{r};
    Rng rng(derive_seed(cfg_.seed, t.theorem, k));
    try {
      t.run(rec, rng);
    } catch (const Error& err) {
      r.details["error"] = Json{{"code", errc_name(err.code())}, {"message", err.what()}};
      rec.fail("check aborted");
    } catch (const std::exception& err) {
      r.details["error"] = Json{{"code", "exception"}, {"message", err.what()}};
      rec.fail("check aborted");
    }
  };
  unsigned n = cfg_.threads ? cfg_.threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(tasks.size()));
  if (n <= 1) {
    for (size_t k = 0; k < tasks.size(); ++k) run_one(k);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n; ++w)
    pool.emplace_back([&] {
      for (size_t k; (k = next.fetch_add(1)) < tasks.size();) run_one(k);
    });
  for (auto& th : pool) th.join();
  return out;
}

std::vector<CheckResult> Suite::run(const std::string& id) const { return execute(tasks_for(id)); }

std::vector<CheckResult> Suite::run_all() const {
  std::vector<Task> all;
  for (const auto& id : theorem_ids()) {
    auto t = tasks_for(id);
    std::move(t.begin(), t.end(), std::back_inserter(all));
  }
  return execute(std::move(all));
}

// ---------------------------------------------------------------------------
// individual checks

namespace {

using Check = std::function<void(Recorder&, Rng&)>;

// Sample valuations sweep the generator levels 1..top.
long sample_level(const Subject& s, int k) { return 1 + k % std::max(1L, s.top); }

void check_ltseries(const LTContext& ctx, Recorder& rec) {
  const Series1& P = ctx.lt_series();
  const unsigned long q = ctx.q();
  const int D = P.degree();
  rec.expect(P[0].is_zero(), "nonzero constant term");
  rec.expect(!P[1].is_zero() && P[1].valuation() == 1, "linear coefficient is not a prime of Z_p");
  for (int n = 2; n <= D; ++n) {
    PadicScalar c = n == static_cast<int>(q) ? P[n] - PadicScalar::from_integer(ctx.p(), 1, P[n].precision()) : P[n];
    if (!c.is_zero() && c.valuation() < 1) rec.fail("coefficient " + std::to_string(n) + " breaks [pi](X) = X^q mod p");
  }
  int checked = 0;
  long qn = static_cast<long>(q);
  for (int n = 1; n <= 3 && qn <= D; ++n, qn *= static_cast<long>(q)) {
    Series1 it = ctx.iterate_pi(n);
    PadicScalar pin = ctx.pi().pow(n);
    rec.expect(it[1].congruent(pin, std::min(it[1].precision(), pin.precision())),
               "[pi^" + std::to_string(n) + "] has the wrong linear term");
    for (int m = 2; m <= D; ++m) {
      PadicScalar c = m == qn ? it[m] - PadicScalar::from_integer(ctx.p(), 1, it[m].precision()) : it[m];
      if (!c.is_zero() && c.valuation() < 1)
        rec.fail("[pi^" + std::to_string(n) + "] is not X^(q^n) mod p at degree " + std::to_string(m));
    }
    ++checked;
  }
  // log o [pi] = pi log and exp o log = X characterise the logarithm
  Series1 lhs = compose1(ctx.log_series(), P);
  Series1 rhs = ctx.log_series() * ctx.pi();
  int bad = lhs.first_mismatch(rhs);
  rec.expect(bad < 0, "log([pi](X)) differs from pi log(X) at degree " + std::to_string(bad));
  Series1 id = compose1(ctx.exp_series(), ctx.log_series());
  int bad2 = id.first_mismatch(Series1::identity(ctx.p(), D, ctx.precision()));
  rec.expect(bad2 < 0, "exp(log(X)) differs from X at degree " + std::to_string(bad2));
  rec.r.details["series"] = ctx.kind_name();
  rec.r.details["D"] = D;
  rec.r.details["iterates"] = checked;
}

void check_fgl(const LTContext& ctx, Recorder& rec) {
  const Series2& F = ctx.fgl();
  const int D = F.degree();
  const auto one = PadicScalar::from_integer(ctx.p(), 1, ctx.precision());
  rec.expect(F.at(0, 0).is_zero(), "constant term");
  rec.expect(F.at(1, 0).congruent(one, F.at(1, 0).precision()) && F.at(0, 1).congruent(one, F.at(0, 1).precision()),
             "F is not X + Y modulo degree 2");
  for (int i = 2; i <= D; ++i)
    if (!F.at(i, 0).is_zero() || !F.at(0, i).is_zero()) {
      rec.fail("F(X,0) != X at degree " + std::to_string(i));
      break;
    }
  rec.expect(F.is_integral(), "F has a non-integral coefficient");
  rec.expect(F.swapped().equals_at_precision(F), "F is not symmetric");
  int defect = associativity_defect(F, D);
  rec.expect(defect < 0, "associativity fails at total degree " + std::to_string(defect));
  const Series1& P = ctx.lt_series();
  Series2 lhs = compose_outer(P, F);
  Series2 rhs = substitute2_bivariate(F, P, P);
  rec.expect(lhs.equals_at_precision(rhs), "[pi](F(X,Y)) != F([pi]X, [pi]Y)");
  rec.r.details["series"] = ctx.kind_name();
  rec.r.details["D"] = D;
  rec.r.details["associative_through"] = D;
  rec.r.details["min_precision"] = F.min_precision();
}

void check_endo(const LTContext& ctx, Recorder& rec, Rng& rng) {
  const unsigned long p = ctx.p();
  const long prec = ctx.precision();
  const int D = ctx.degree();
  auto sc = [&](const Integer& n) { return PadicScalar::from_integer(p, n, prec); };
  std::vector<PadicScalar> as = {sc(2), sc(-1), sc(1 + static_cast<long>(p)), sc(static_cast<long>(p)),
                                 sc(below(rng, ppow(p, 40)) + 1)};
  const Series1& P = ctx.lt_series();
  const Series2& F = ctx.fgl();
  std::vector<Series1> es;
  for (const auto& a : as) {
    Series1 s = ctx.endo(a);
    es.push_back(s);
    std::string name = "[" + a.to_string() + "]";
    rec.expect(s[1].congruent(a, std::min(s[1].precision(), a.precision())), name + " has the wrong linear term");
    rec.expect(compose1(P, s).first_mismatch(compose1(s, P)) < 0, name + " does not commute with [pi]");
  }
  for (size_t i = 0; i < as.size(); ++i) {
    size_t j = (i + 1) % as.size();
    Series1 prod = ctx.endo(as[i] * as[j]);
    rec.expect(compose1(es[i], es[j]).first_mismatch(prod) < 0, "[a] o [b] != [ab]");
    Series1 sum = ctx.endo(as[i] + as[j]);
    rec.expect(substitute2(F, es[i], es[j]).first_mismatch(sum) < 0, "F([a],[b]) != [a+b]");
  }
  rec.expect(ctx.endo(1).first_mismatch(Series1::identity(p, D, prec)) < 0, "[1] != X");
  rec.r.details["series"] = ctx.kind_name();
  rec.r.details["scalars"] = as.size();
}


void check_log_hom(const Subject& s, Recorder& rec, Rng& rng, int pairs) {
  const LTContext& ctx = *s.ctx;
  const long N = s.L.default_precision();
  long min_digits = N;
  for (int k = 0; k < pairs; ++k) {
    FieldElement x = random_element(rng, s.L, pick(rng, 1, s.top + 1), N);
    FieldElement y = random_element(rng, s.L, pick(rng, 1, s.top + 1), N);
    FieldElement lhs = eval_log(ctx, fgl_add(ctx, x, y));
    FieldElement rhs = eval_log(ctx, x) + eval_log(ctx, y);
    min_digits = std::min({min_digits, lhs.precision(), rhs.precision()});
    rec.expect(agree(lhs, rhs), "log F(x,y) != log x + log y", witness_of(x));
  }
  // exp and log are mutually inverse on the convergence disc
  const long vmin = s.L.e() / static_cast<long>(ctx.q() - 1) + 1;
  for (int k = 0; k < pairs; ++k) {
    FieldElement x = random_element(rng, s.L, pick(rng, vmin, vmin + 3), N);
    rec.expect(agree(eval_exp(ctx, eval_log(ctx, x)), x), "exp(log x) != x", witness_of(x));
    rec.expect(agree(eval_log(ctx, eval_exp(ctx, x)), x), "log(exp x) != x", witness_of(x));
  }
  rec.r.details["pairs"] = pairs;
  rec.r.details["disc_samples"] = pairs;
  rec.r.details["min_precision"] = min_digits;
}

void check_valpix(const Subject& s, Recorder& rec, Rng& rng, int samples) {
  const unsigned long q = s.ctx->q();
  const long e = s.L.e();
  for (int k = 0; k < samples; ++k) {
    long v = 1 + k % (s.top + 2);
    FieldElement x = random_element(rng, s.L, v, s.L.default_precision());
    FieldElement y = apply_pi(*s.ctx, x);
    long t = v * static_cast<long>(q - 1);
    if (t == e) {
      rec.expect(y.val_floor() >= static_cast<long>(q) * v, "v([pi]x) < qv(x) on the boundary level", witness_of(x));
    } else {
      long want = t < e ? static_cast<long>(q) * v : v + e;
      rec.expect(!y.is_zero() && y.valuation() == want, "v([pi]x) != " + std::to_string(want), witness_of(x));
    }
  }
  rec.r.details["samples"] = samples;
}

void check_genlemgen(const Subject& s, Recorder& rec, Rng& rng, int samples) {
  const unsigned long q = s.ctx->q();
  const long e = s.L.e();
  for (int k = 0; k < samples; ++k) {
    int n = 1 + k % 2;
    FieldElement x = random_element(rng, s.L, pick(rng, 1, s.top + 1), s.L.default_precision());
    long qn = n == 1 ? static_cast<long>(q) : static_cast<long>(q * q);
    FieldElement d = iterate_pi(*s.ctx, x, n) - x.pow(qn);
    rec.expect(d.val_floor() * static_cast<long>(q - 1) > e, "[pi^n](x) - x^(q^n) lies outside the disc",
               witness_of(x));
  }
  rec.r.details["samples"] = samples;
}

long floor_log(unsigned long p, long n) {
  long k = 0;
  for (long m = n; m >= static_cast<long>(p); m /= static_cast<long>(p)) ++k;
  return k;
}

void check_wiles(const Subject& s, Recorder& rec, Rng& rng, int samples) {
  const LTContext& ctx = *s.ctx;
  const long e = s.L.e();
  long min_digits = s.L.default_precision();
  for (int k = 0; k < samples; ++k) {
    FieldElement x = random_element(rng, s.L, sample_level(s, k), s.L.default_precision());
    LogEvaluation ev = eval_log_detailed(ctx, x);
    const long digits = ev.value.precision();
    rec.expect(ev.value.is_zero() ? digits >= 1 : digits > ev.value.valuation(), "no certified digits", witness_of(x));
    // a deeper quotient [pi^m](x)/pi^m with its own error bound
    const long m = ev.wiles_depth + 2;
    FieldElement z = iterate_pi(ctx, x, static_cast<int>(m));
    FieldElement quot = z * ctx.pi().pow(-m);
    long bound = quot.precision();
    if (!z.is_zero()) {
      const long vz = z.valuation();
      long err = 2 * vz;
      for (long n = 2; n <= 4096; ++n) err = std::min(err, n * vz - e * floor_log(ctx.p(), n));
      bound = std::min(bound, err - m * e);
    }
    rec.expect(bound >= digits, "deeper quotient does not cover the certified digits", witness_of(x));
    rec.expect(ev.value.equals_mod(quot, std::min(bound, digits)), "log and the deeper Wiles quotient disagree",
               witness_of(x));
    min_digits = std::min(min_digits, digits);
  }
  rec.r.details["samples"] = samples;
  rec.r.details["min_certified_precision"] = min_digits;
}

void check_kernel(const Subject& s, Recorder& rec, Rng& rng, int samples) {
  const LTContext& ctx = *s.ctx;
  const long N = s.L.default_precision();
  std::optional<FieldElement> lambda;
  int n = 1;
  if (s.sets) {
    lambda = s.sets->torsion.lambda;
    n = s.torsion_level;
  } else if (!s.regularity.is_regular) {
    lambda = torsion_point(s.L, ctx, *s.regularity.witness, N);
    rec.expect(lambda->valuation() * static_cast<long>(ctx.q() - 1) == s.L.e(), "torsion point at the wrong level");
  }
  if (lambda) {
    rec.expect(iterate_pi(ctx, *lambda, n).is_zero(), "[pi^n](lambda) != 0", witness_of(*lambda));
    rec.expect(!iterate_pi(ctx, *lambda, n - 1).is_zero(), "[pi^(n-1)](lambda) == 0", witness_of(*lambda));
    FieldElement l = eval_log(ctx, *lambda);
    rec.expect(l.is_zero(), "log(lambda) != 0", witness_of(*lambda));
    for (int k = 0; k < samples; ++k) {
      FieldElement x = random_element(rng, s.L, sample_level(s, k), N);
      rec.expect(agree(eval_log(ctx, fgl_add(ctx, *lambda, x)), eval_log(ctx, x)), "log F(lambda, x) != log x",
                 witness_of(x));
    }
    rec.r.details["lambda"] = witness_of(*lambda);
    rec.r.details["log_lambda_precision"] = l.precision();
    rec.r.details["level"] = n;
  } else {
    // regular: log is injective, so distinct samples have distinct logs
    for (int k = 0; k < samples; ++k) {
      FieldElement x = random_element(rng, s.L, sample_level(s, k), N);
      FieldElement y = random_element(rng, s.L, sample_level(s, k + 1), N);
      FieldElement lx = eval_log(ctx, x);
      rec.expect(!lx.is_zero(), "log vanishes on a nonzero element of a regular field", witness_of(x));
      if (!x.equals_mod(y, N)) rec.expect(!agree(lx, eval_log(ctx, y)), "log is not injective", witness_of(x));
    }
    rec.r.details["injective_samples"] = samples;
  }
}

bool enumerable(const Subject& s) { return s.L.residue_field().size() <= 25; }

void check_induced(const Subject& s, Recorder& rec, const std::string& which) {
  const long q = static_cast<long>(s.ctx->q());
  const long e = s.L.e();
  std::vector<long> levels;
  if (which == "FV") {
    for (long i = 1; i * (q - 1) < e; ++i) levels.push_back(i);
  } else if (which == "regisolem") {
    levels.push_back(e / (q - 1));
  } else {
    for (long i = e / (q - 1) + 1; i <= e / (q - 1) + 3; ++i) levels.push_back(i);
  }
  Json rows = Json::array();
  for (long i : levels) {
    InducedMapReport m = induced_map_check(s.L, *s.ctx, i);
    std::string at = " at level " + std::to_string(i);
    long target = i * (q - 1) <= e ? q * i : i + e;
    rec.expect(m.target == target, "wrong target level" + at);
    rec.expect(m.well_defined, "[pi] is not well defined on classes" + at);
    rec.expect(m.homomorphism, "induced map is not additive" + at);
    if (which == "regisolem") {
      bool reg = s.regularity.is_regular;
      rec.expect(m.injective == reg && m.surjective == reg, "isomorphism" + at + " does not match regularity");
      if (m.kernel_witness) rec.r.details["kernel_witness"] = residue_json(*m.kernel_witness);
    } else {
      rec.expect(m.injective && m.surjective, "induced map is not bijective" + at);
    }
    rows.push_back(Json{{"level", i},
                        {"target", m.target},
                        {"classes", m.classes},
                        {"image_size", m.image_size},
                        {"injective", m.injective},
                        {"surjective", m.surjective}});
  }
  rec.r.details["levels"] = rows;
  rec.r.details["regular"] = s.regularity.is_regular;
}

Json expansions(const Subject& s, const GeneratingSet& gens, Recorder& rec, Rng& rng, int samples) {
  long min_prec = s.L.default_precision();
  int steps = 0;
  for (int k = 0; k < samples; ++k) {
    FieldElement x = random_element(rng, s.L, sample_level(s, k), s.L.default_precision());
    Expansion ex = expand_in_generators(x, gens, *s.ctx);
    FieldElement back = recombine(ex, gens, *s.ctx, ex.precision);
    rec.expect(back.equals_mod(x, ex.precision), "recombined expansion differs from x", witness_of(x));
    rec.expect(ex.precision > s.top, "expansion stops below the generator levels", witness_of(x));
    min_prec = std::min(min_prec, ex.precision);
    steps = std::max(steps, ex.steps);
  }
  return Json{{"samples", samples}, {"min_precision", min_prec}, {"max_steps", steps}};
}

bool nonzero_det(const std::vector<FieldElement>& gens, Json& out) {
  PadicScalar d = coordinate_determinant(gens);
  out = d.is_zero() ? Json(nullptr) : Json(d.valuation());
  return !d.is_zero();
}

void check_basisthm1(const Subject& s, Recorder& rec, Rng& rng, int samples) {
  GeneratingSet B = basis_BL(s.L, *s.ctx);
  rec.expect(static_cast<long>(B.size()) == s.L.degree(), "|B_L| != [L:K]");
  Json det;
  rec.expect(nonzero_det(log_of(B, *s.ctx).elements, det), "log B_L is linearly dependent");
  rec.r.details["size"] = B.size();
  rec.r.details["log_determinant_valuation"] = det;
  rec.r.details["expansions"] = expansions(s, B, rec, rng, samples);
}

void check_basisthm2(const Subject& s, Recorder& rec) {
  GeneratingSet LB = log_basis(s.L, *s.ctx);
  Json det;
  rec.expect(nonzero_det(LB.elements, det), "log basis is linearly dependent");
  const long q = static_cast<long>(s.ctx->q());
  const long N = s.L.default_precision();
  int solved = 0;
  for (long j = 1; j <= q * s.top; ++j)
    for (int i = 0; i < s.L.f(); ++i) {
      FieldElement g = FieldElement::teichmuller(s.L, i, N) * FieldElement::uniformizer(s.L, N).pow(j);
      SpanSolution sol = coords_in_span(eval_log(*s.ctx, g), LB.elements);
      rec.expect(sol.integral, "log(zeta_" + std::to_string(i) + " varpi^" + std::to_string(j) +
                                   ") has non-integral coordinates", witness_of(g));
      ++solved;
    }
  rec.r.details["size"] = LB.size();
  rec.r.details["log_determinant_valuation"] = det;
  rec.r.details["membership_checks"] = solved;
  rec.r.details["max_level"] = q * s.top;
}

void check_logval(const Subject& s, Recorder& rec, Rng& rng, int samples, bool regular) {
  int mismatches = 0, equal = 0;
  for (int k = 0; k < samples; ++k) {
    FieldElement x = random_element(rng, s.L, sample_level(s, k), s.L.default_precision());
    ValuationCertificate c = valuation_certificate(s.L, *s.ctx, x, regular);
    if (!c.holds) {
      ++mismatches;
      rec.fail(regular ? "v(log x) differs from the predicted value" : "v(log x) below the predicted bound",
               witness_of(x));
    }
    if (c.equality) ++equal;
  }
  rec.r.details["samples"] = samples;
  rec.r.details["mismatches"] = mismatches;
  rec.r.details["equalities"] = equal;
  rec.r.details["levels"] = Json::array({1, s.top});
}

void check_unitinv(const Subject& s, Recorder& rec, Rng& rng, int samples) {
  const long N = s.L.default_precision();
  for (int k = 0; k < samples; ++k) {
    FieldElement x = random_element(rng, s.L, sample_level(s, k), N);
    FieldElement u = random_element(rng, s.L, 0, N);
    FieldElement a = eval_log(*s.ctx, x), b = eval_log(*s.ctx, u * x);
    rec.expect(!a.is_zero() && !b.is_zero() && a.valuation() == b.valuation(), "v(log(ux)) != v(log x)",
               witness_of(x));
  }
  rec.r.details["samples"] = samples;
}

void check_minval(const Subject& s, Recorder& rec) {
  const long q = static_cast<long>(s.ctx->q());
  const long e = s.L.e();
  if (e < q - 1) {
    // log maps m_L onto itself
    GeneratingSet LB = log_basis(s.L, *s.ctx);
    long m = s.L.default_precision();
    for (const auto& y : LB.elements) m = std::min(m, y.val_floor());
    FieldElement lw = eval_log(*s.ctx, FieldElement::uniformizer(s.L, s.L.default_precision()));
    rec.expect(m == 1 && lw.valuation() == 1, "minimum of the log image is not 1");
    rec.r.details["value"] = m;
    rec.r.details["ratio_below_one"] = true;
    return;
  }
  MinValuation mv = min_valuation(s.L, *s.ctx);
  rec.expect(mv.formula == mv.log_varpi && !mv.log_varpi_zero, "q^gamma - gamma e != v(log varpi)");
  rec.expect(mv.formula == mv.sweep, "q^gamma - gamma e != basis-image minimum");
  rec.r.details["gamma"] = mv.gamma;
  rec.r.details["formula"] = mv.formula;
  rec.r.details["log_varpi"] = mv.log_varpi;
  rec.r.details["sweep"] = mv.sweep;
  rec.r.details["value"] = mv.value;
}

// Dropping gens at the top level should leave some input unreachable.
Json minimality_evidence(const Subject& s, const GeneratingSet& gens, long top, const FieldElement& probe) {
  GeneratingSet smaller = gens;
  smaller.elements.clear();
  smaller.levels.clear();
  smaller.indices.clear();
  for (size_t k = 0; k < gens.size(); ++k)
    if (gens.levels[k] != top) {
      smaller.elements.push_back(gens.elements[k]);
      smaller.levels.push_back(gens.levels[k]);
      smaller.indices.push_back(gens.indices[k]);
    }
  try {
    expand_in_generators(probe, smaller, *s.ctx);
    return Json{{"dropped_level", top}, {"stuck", false}};
  } catch (const Error& err) {
    if (err.code() != Errc::StuckLevel) throw;
    return Json{{"dropped_level", top}, {"stuck", true}};
  }
}

void check_genspan(const Subject& s, Recorder& rec, Rng& rng, int samples) {
  GeneratingSet S = spanning_SL(s.L, *s.ctx);
  rec.expect(static_cast<long>(S.size()) == s.L.degree() + s.L.f(), "|S_L| != [L:K] + f");
  rec.r.details["size"] = S.size();
  rec.r.details["expansions"] = expansions(s, S, rec, rng, samples);
  const long N = s.L.default_precision();
  const long top = s.top;
  FieldElement probe = FieldElement::uniformizer(s.L, N).pow(top);
  rec.r.details["totally_ramified"] = s.L.f() == 1;
  rec.r.details["minimality_evidence"] = minimality_evidence(s, S, top, probe);
}

void check_genval2(const Subject& s, Recorder& rec, Rng& rng, int samples) {
  check_logval(s, rec, rng, samples, false);
  // equality fails at a torsion point
  std::optional<FieldElement> lambda;
  if (s.sets)
    lambda = s.sets->torsion.lambda;
  else if (s.regularity.witness)
    lambda = torsion_point(s.L, *s.ctx, *s.regularity.witness, s.L.default_precision());
  if (lambda) {
    ValuationCertificate c = valuation_certificate(s.L, *s.ctx, *lambda, false);
    rec.expect(c.holds, "bound fails at the torsion point", witness_of(*lambda));
    rec.r.details["torsion_point"] = Json{{"predicted", c.predicted}, {"log_vanishes", !c.observed.has_value()}};
  }
}

void check_mincor(const Subject& s, Recorder& rec, Rng& rng, int samples) {
  const LTSets& sets = *s.sets;
  const long q = static_cast<long>(s.ctx->q());
  long qn = 1;
  for (int k = 0; k < s.torsion_level; ++k) qn *= q;
  rec.expect(static_cast<long>(sets.S.size()) == qn - qn / q + 1, "|S_n| != q^n - q^(n-1) + 1");
  rec.r.details["size"] = sets.S.size();
  rec.r.details["expansions"] = expansions(s, sets.S, rec, rng, samples);
  FieldElement probe = sets.torsion.lambda.pow(qn);
  rec.r.details["minimality_evidence"] = minimality_evidence(s, sets.S, qn, probe);
}

void check_ltbasis(const Subject& s, Recorder& rec, Rng& rng, int samples) {
  const LTSets& sets = *s.sets;
  const long q = static_cast<long>(s.ctx->q());
  long qn = 1;
  for (int k = 0; k < s.torsion_level; ++k) qn *= q;
  rec.expect(static_cast<long>(sets.B.size()) == qn - qn / q, "|B_n| != q^n - q^(n-1)");
  rec.expect(sets.log_lambda.is_zero(), "log(lambda) != 0");
  Json det;
  rec.expect(nonzero_det(sets.B.elements, det), "B_n is linearly dependent");
  for (long j = 1; j <= qn + q; ++j) {
    FieldElement t = eval_log(*s.ctx, sets.torsion.lambda.pow(j));
    SpanSolution sol = coords_in_span(t, sets.B.elements);
    rec.expect(sol.integral, "log(lambda^" + std::to_string(j) + ") has non-integral coordinates");
  }
  for (int k = 0; k < samples; ++k) {
    FieldElement x = random_element(rng, s.L, sample_level(s, k), s.L.default_precision());
    rec.expect(coords_in_span(eval_log(*s.ctx, x), sets.B.elements).integral,
               "log x has non-integral coordinates", witness_of(x));
  }
  rec.r.details["size"] = sets.B.size();
  rec.r.details["determinant_valuation"] = det;
  rec.r.details["max_power"] = qn + q;
}

// The worked examples always use the multiplicative series.
void check_example_p3(const SuiteConfig& cfg, Recorder& rec) {
  SuiteConfig c = cfg;
  c.series = "multiplicative";
  Context ctx = make_context(c, 3);
  LocalField L = make_tower(3, 1, 4, cfg.N);
  const long N = cfg.N;
  RegularityReport reg = regularity_check(L, *ctx);
  rec.expect(reg.is_regular && reg.ratio_integral, "Q_3(3^(1/4)) should be regular with integral ratio");
  MinValuation mv = min_valuation(L, *ctx);
  rec.expect(mv.gamma == 1, "gamma != 1");
  rec.expect(mv.value == -1 && mv.sweep == -1 && mv.log_varpi == -1, "minimum valuation != -1");
  FieldElement w = FieldElement::uniformizer(L, N);
  std::vector<FieldElement> lattice = {w.pow(2), w.inverse() - w, w.pow(3), w.pow(4)};
  GeneratingSet LB = log_basis(L, *ctx);
  rec.expect(LB.size() == 4, "log basis size != 4");
  rec.expect(same_lattice(LB.elements, lattice), "log basis and the explicit lattice differ");
  // log(1 +- varpi) and log(1 +- varpi^2) modulo varpi^3
  FieldElement lp = eval_log(*ctx, w), lm = eval_log(*ctx, -w);
  rec.expect(lp.equals_mod(w.inverse() - w - w.pow(2), 3), "log(1+varpi) congruence");
  rec.expect(lm.equals_mod(-w.inverse() + w - w.pow(2), 3), "log(1-varpi) congruence");
  rec.expect(eval_log(*ctx, w.pow(2)).equals_mod(-w.pow(2), 3), "log(1+varpi^2) congruence");
  rec.expect(eval_log(*ctx, -w.pow(2)).equals_mod(w.pow(2), 3), "log(1-varpi^2) congruence");
  rec.r.details = Json{{"regular", reg.is_regular}, {"gamma", mv.gamma}, {"min_valuation", mv.value},
                       {"basis_size", LB.size()}, {"lattice", "varpi^2, 1/varpi - varpi, varpi^3, varpi^4"}};
}

void check_example_p5(const SuiteConfig& cfg, Recorder& rec) {
  SuiteConfig c = cfg;
  c.series = "multiplicative";
  Context ctx = make_context(c, 5);
  LocalField L = make_tower(5, 1, 6, cfg.N);
  RegularityReport reg = regularity_check(L, *ctx);
  rec.expect(reg.is_regular && !reg.ratio_integral, "Q_5(5^(1/6)) should be regular with non-integral ratio");
  MinValuation mv = min_valuation(L, *ctx);
  rec.expect(mv.gamma == 1 && mv.value == -1 && mv.sweep == -1, "minimum valuation != -1");
  GeneratingSet B = basis_BL(L, *ctx);
  rec.expect(B.size() == 6, "basis size != 6");
  FieldElement w = FieldElement::uniformizer(L, cfg.N);
  std::vector<FieldElement> lattice = {w + w.inverse()};
  for (int j = 2; j <= 6; ++j) lattice.push_back(w.pow(j));
  rec.expect(same_lattice(log_of(B, *ctx).elements, lattice), "log basis and the explicit lattice differ");
  rec.r.details = Json{{"regular", reg.is_regular}, {"gamma", mv.gamma}, {"min_valuation", mv.value},
                       {"basis_size", B.size()}, {"lattice", "varpi + 1/varpi, varpi^2, ..., varpi^6"}};
}

void check_example_zetap(const SuiteConfig& cfg, unsigned long p, Recorder& rec) {
  SuiteConfig c = cfg;
  c.series = "multiplicative";
  Context ctx = make_context(c, p);
  LTSets sets = lt_sets(*ctx, 1, cfg.N);
  const LocalField& L = sets.torsion.field;
  const FieldElement& lambda = sets.torsion.lambda;
  rec.expect(lambda.valuation() == 1, "zeta_p - 1 is not a uniformiser");
  MinValuation mv = min_valuation(L, *ctx);
  rec.expect(mv.value == 2, "minimum valuation of the log image != 2");
  std::vector<FieldElement> m2;
  for (long j = 2; j <= static_cast<long>(p); ++j) {
    FieldElement lj = lambda.pow(j);
    m2.push_back(lj);
    rec.expect(eval_log(*ctx, lj).equals_mod(lj, j + 1),
               "log(1+(zeta_p-1)^" + std::to_string(j) + ") != (zeta_p-1)^" + std::to_string(j) + " mod m^" +
                   std::to_string(j + 1));
  }
  rec.expect(same_lattice(sets.B.elements, m2), "B does not span m^2");
  rec.r.details = Json{{"p", p}, {"min_valuation", mv.value}, {"basis_size", sets.B.size()}};
}

}  // namespace

std::vector<Suite::Task> Suite::tasks_for(const std::string& id) const {
  const auto& ids = theorem_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) raise(Errc::InvalidArgument, "unknown theorem id \"" + id + "\"");
  std::vector<Task> tasks;
  const SuiteConfig& cfg = cfg_;

  if (id == "ltseries" || id == "fgl" || id == "endo") {
    for (size_t k = 0; k < cfg.primes.size(); ++k) {
      Context ctx = contexts_[k];
      Check run;
      if (id == "ltseries") run = [ctx](Recorder& r, Rng&) { check_ltseries(*ctx, r); };
      if (id == "fgl") run = [ctx](Recorder& r, Rng&) { check_fgl(*ctx, r); };
      if (id == "endo") run = [ctx](Recorder& r, Rng& g) { check_endo(*ctx, r, g); };
      tasks.push_back({id, qp_field(cfg.primes[k], cfg.N), cfg.N, run});
    }
    return tasks;
  }
  if (id == "example-p3" || id == "example-p5") {
    unsigned long p = id == "example-p3" ? 3 : 5;
    LocalField L = make_tower(p, 1, p == 3 ? 4 : 6, cfg.N);
    Check run = p == 3 ? Check([&cfg](Recorder& r, Rng&) { check_example_p3(cfg, r); })
                       : Check([&cfg](Recorder& r, Rng&) { check_example_p5(cfg, r); });
    tasks.push_back({id, field_to_json(L), cfg.N, run});
    return tasks;
  }
  if (id == "example-zetap") {
    for (unsigned long p : {3UL, 5UL}) {
      Json field{{"p", p}, {"torsion_level", 1}, {"series", "multiplicative"}};
      tasks.push_back({id, field, cfg.N, [&cfg, p](Recorder& r, Rng&) { check_example_zetap(cfg, p, r); }});
    }
    return tasks;
  }

  for (const Subject& sref : subjects_) {
    const Subject* s = &sref;
    const bool regular = s->regularity.is_regular;
    const long q = static_cast<long>(s->ctx->q());
    const long e = s->L.e();
    const int samples = cfg.samples;
    Check run;
    if (id == "log-hom") {
      int n = cfg.pair_samples;
      run = [s, n](Recorder& r, Rng& g) { check_log_hom(*s, r, g, n); };
    } else if (id == "valpix") {
      run = [s, samples](Recorder& r, Rng& g) { check_valpix(*s, r, g, 2 * samples); };
    } else if (id == "genlemgen") {
      run = [s, samples](Recorder& r, Rng& g) { check_genlemgen(*s, r, g, samples); };
    } else if (id == "wiles") {
      run = [s, samples](Recorder& r, Rng& g) { check_wiles(*s, r, g, samples); };
    } else if (id == "kernel") {
      run = [s, samples](Recorder& r, Rng& g) { check_kernel(*s, r, g, samples); };
    } else if (id == "FV" || id == "regisolem" || id == "FV3") {
      if (!enumerable(*s)) continue;
      if (id == "FV" && e <= q - 1) continue;
      if (id == "regisolem" && e % (q - 1) != 0) continue;
      run = [s, id](Recorder& r, Rng&) { check_induced(*s, r, id); };
    } else if (id == "basisthm1" || id == "basisthm2" || id == "logval" || id == "unitinv" || id == "minval") {
      if (!regular) continue;
      int n = cfg.logval_samples;
      if (id == "basisthm1") run = [s, samples](Recorder& r, Rng& g) { check_basisthm1(*s, r, g, samples); };
      if (id == "basisthm2") run = [s](Recorder& r, Rng&) { check_basisthm2(*s, r); };
      if (id == "logval") run = [s, n](Recorder& r, Rng& g) { check_logval(*s, r, g, n, true); };
      if (id == "unitinv") run = [s, samples](Recorder& r, Rng& g) { check_unitinv(*s, r, g, samples); };
      if (id == "minval") run = [s](Recorder& r, Rng&) { check_minval(*s, r); };
    } else if (id == "genspan" || id == "genval2") {
      if (regular) continue;
      if (id == "genspan") run = [s, samples](Recorder& r, Rng& g) { check_genspan(*s, r, g, samples); };
      if (id == "genval2") run = [s, samples](Recorder& r, Rng& g) { check_genval2(*s, r, g, 4 * samples); };
    } else if (id == "mincor" || id == "ltbasis") {
      if (!s->sets) continue;
      if (id == "mincor") run = [s, samples](Recorder& r, Rng& g) { check_mincor(*s, r, g, samples); };
      if (id == "ltbasis") run = [s, samples](Recorder& r, Rng& g) { check_ltbasis(*s, r, g, samples); };
    }
    Json field = field_to_json(s->L);
    if (s->torsion_level) field["torsion_level"] = s->torsion_level;
    field["series"] = s->ctx->kind_name();
    tasks.push_back({id, field, s->L.default_precision(), run});
  }
  if (tasks.empty()) {
    tasks.push_back({id, nullptr, cfg.N, [](Recorder& r, Rng&) {
                       r.r.details["applies"] = false;
                       r.r.details["reason"] = "no field in the selection satisfies the hypotheses";
                     }});
  }
  return tasks;
}

}  // namespace ltforge
