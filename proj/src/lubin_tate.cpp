#include "ltforge/lubin_tate.hpp"

#include <algorithm>

namespace ltforge {

namespace {

void validate_lt(const Series1& s, unsigned long p) {
  if (s.degree() < static_cast<int>(p))
    raise(Errc::NotLubinTate, "series truncated below degree q");
  if (!s[0].is_zero()) raise(Errc::NotLubinTate, "nonzero constant term");
  if (s[1].is_zero() || s[1].valuation() != 1)
    raise(Errc::NotLubinTate, "linear coefficient is not a uniformiser of Z_p");
  for (int n = 0; n <= s.degree(); ++n)
    if (!s.coeffs()[static_cast<size_t>(n)].is_integral())
      raise(Errc::NonIntegralCoefficient, "coefficient of X^" + std::to_string(n) + " is not integral");
  for (int n = 2; n <= s.degree(); ++n) {
    const auto& c = s[n];
    if (n == static_cast<int>(p)) {
      if (!(c - PadicScalar::from_integer(p, 1, c.precision())).congruent(PadicScalar::zero(p, 1), 1))
        raise(Errc::NotLubinTate, "series is not X^q mod p");
    } else if (!c.is_zero() && c.valuation() < 1) {
      raise(Errc::NotLubinTate, "series is not X^q mod p (degree " + std::to_string(n) + ")");
    }
  }
}

// floor(log_p n) for n >= 1
long floor_log(unsigned long p, long n) {
  long k = 0;
  Integer t = p;
  while (t <= n) {
    t *= p;
    ++k;
  }
  return k;
}

}  // namespace

std::string LTContext::kind_name() const {
  switch (kind_) {
    case Kind::Basic: return "basic";
    case Kind::Multiplicative: return "multiplicative";
    case Kind::Custom: return "custom";
  }
  return "custom";
}

std::shared_ptr<const LTContext> LTContext::basic(unsigned long p, const ContextOptions& opts,
                                                  const Integer& unit) {
  if (!is_prime(p)) raise(Errc::BadPrime, std::to_string(p) + " is not prime");
  if (unit % p == 0) raise(Errc::NotLubinTate, "pi must be a unit multiple of p");
  std::shared_ptr<LTContext> c(new LTContext());
  c->kind_ = Kind::Basic;
  c->p_ = p;
  c->D_ = std::max<int>(opts.D, static_cast<int>(p));
  c->opts_ = opts;
  c->prec_ = opts.series_precision();
  c->polynomial_ = true;
  c->series_ = Series1(p, c->D_);
  c->series_[1] = PadicScalar::from_integer(p, unit * p, c->prec_);
  c->series_[static_cast<int>(p)] = PadicScalar::from_integer(p, 1, c->prec_);
  validate_lt(c->series_, p);
  c->build();
  return c;
}

std::shared_ptr<const LTContext> LTContext::multiplicative(unsigned long p, const ContextOptions& opts) {
  if (!is_prime(p)) raise(Errc::BadPrime, std::to_string(p) + " is not prime");
  std::shared_ptr<LTContext> c(new LTContext());
  c->kind_ = Kind::Multiplicative;
  c->p_ = p;
  c->D_ = std::max<int>(opts.D, static_cast<int>(p));
  c->opts_ = opts;
  c->prec_ = opts.series_precision();
  c->polynomial_ = true;
  c->series_ = Series1(p, c->D_);
  Integer b = 1;
  for (unsigned long n = 1; n <= p; ++n) {
    b = b * (p - n + 1) / n;
    c->series_[static_cast<int>(n)] = PadicScalar::from_integer(p, b, c->prec_);
  }
  validate_lt(c->series_, p);
  c->build();
  return c;
}

std::shared_ptr<const LTContext> LTContext::custom(const Series1& s, bool polynomial,
                                                   const ContextOptions& opts) {
  unsigned long p = s.prime();
  if (!is_prime(p)) raise(Errc::BadPrime, std::to_string(p) + " is not prime");
  std::shared_ptr<LTContext> c(new LTContext());
  c->kind_ = Kind::Custom;
  c->p_ = p;
  c->opts_ = opts;
  c->polynomial_ = polynomial;
  if (polynomial) {
    c->D_ = std::max({opts.D, static_cast<int>(p), s.support_degree()});
  } else {
    c->D_ = std::min(opts.D, s.degree());
  }
  c->prec_ = std::min(opts.series_precision(), s.min_precision());
  Series1 t = s.truncated(c->D_);
  for (int n = 0; n <= c->D_; ++n)
    if (!t[n].is_exact_zero()) t[n] = t[n].with_precision(c->prec_);
  c->series_ = t;
  validate_lt(c->series_, p);
  c->build();
  return c;
}

void LTContext::build() {
  pi_ = series_[1];
  powers_ = PowerTable(series_, D_);
  const unsigned long p = p_;

  // log([pi](X)) = pi log(X):  l_m (pi^m - pi) = -sum_{k<m} l_k (P^k)_m
  SolveOptions lax;
  lax.require_integral = false;
  Series1 lstart = Series1::identity(p, D_, prec_);
  log_ = solve_coefficientwise(lstart, 2, pi_, [&](const Series1& l, int m) {
    DotAccumulator acc(p);
    for (int k = 1; k < m; ++k) acc.sub(l[k] * powers_.power(k)[m]);
    return acc.result();
  }, lax);

  // exp(pi X) = [pi](exp X):  e_m (pi^m - pi) = sum_{n>=2} c_n (E^n)_m
  int K = std::min(D_, series_.support_degree());
  OnlinePowers ep(p, D_, K);
  Series1 estart = Series1::identity(p, D_, prec_);
  ep.set_linear(estart, 1);
  exp_ = solve_coefficientwise(estart, 2, pi_, [&](const Series1& E, int m) {
    ep.set_linear(E, m - 1);
    ep.advance(E, m);
    DotAccumulator acc(p);
    for (int n = 2; n <= std::min(K, m); ++n) acc.add_product(series_[n], ep.pow(n, m));
    return acc.result();
  }, lax);
}

namespace {

// F(P(X), P(Y)) = P(F(X, Y)), solved one total degree at a time.
Series2 solve_fgl(const Series1& P, const PowerTable& pw, const PadicScalar& pi, int D, long prec) {
  const unsigned long p = P.prime();
  const int K = std::min(D, P.support_degree());
  std::vector<Series2> fp(static_cast<size_t>(K + 1), Series2(p, D));
  // T[i][b] = sum_{j<=b} F_ij (P^j)_b, filled once degree i+b is final
  std::vector<std::vector<PadicScalar>> T(static_cast<size_t>(D + 1));
  for (int i = 0; i <= D; ++i)
    T[static_cast<size_t>(i)].assign(static_cast<size_t>(D - i + 1), PadicScalar::exact_zero(p));
  auto pcoef = [&](DotAccumulator& acc, const PadicScalar& a, int k, int m) { pw.accumulate(acc, a, k, m); };

  Series2 start = Series2::x_plus_y(p, D, prec);
  auto fill_T = [&](const Series2& F, int d) {
    DotAccumulator acc(p);
    for (int i = 0; i <= d; ++i) {
      int b = d - i;
      acc.reset();
      for (int j = 0; j <= b; ++j) pcoef(acc, F.at(i, j), j, b);
      T[static_cast<size_t>(i)][static_cast<size_t>(b)] = acc.result();
    }
  };
  fill_T(start, 0);
  fill_T(start, 1);

  auto residual = [&](const Series2& F, int m) {
    if (m >= 3) fill_T(F, m - 1);
    // degree-m coefficients of F^n, n >= 2, from F below degree m
    DotAccumulator acc(p);
    for (int n = 2; n <= std::min(K, m); ++n) {
      const Series2& prev = n == 2 ? F : fp[static_cast<size_t>(n - 1)];
      Series2& cur = fp[static_cast<size_t>(n)];
      for (int b = 0; b <= m; ++b) {
        int a = m - b;
        acc.reset();
        for (int i = 0; i <= a; ++i)
          for (int j = 0; j <= b; ++j) {
            int d = i + j;
            if (d == 0) continue;
            if (m - d < n - 1) break;
            acc.add_product(F.at(i, j), prev.at(a - i, b - j));
          }
        cur.at(a, b) = acc.result();
      }
    }
    std::vector<PadicScalar> out(static_cast<size_t>(m + 1));
    for (int b = 0; b <= m; ++b) {
      int a = m - b;
      acc.reset();
      for (int n = 2; n <= std::min(K, m); ++n) acc.add_product(P[n], fp[static_cast<size_t>(n)].at(a, b));
      DotAccumulator lhs(p);
      for (int i = 1; i < a; ++i) lhs.add_product(pw.power(i)[a], T[static_cast<size_t>(i)][static_cast<size_t>(b)]);
      DotAccumulator part(p);
      for (int j = 0; j < b; ++j) pcoef(part, F.at(a, j), j, b);
      if (a == 0) {
        lhs.add(part.result());
      } else {
        lhs.add_product(pw.power(a)[a], part.result());
      }
      acc.sub(lhs.result());
      out[static_cast<size_t>(b)] = acc.result();
    }
    return out;
  };
  return solve_coefficientwise2(start, 2, pi, residual, {});
}

// theta_1 = a, dst(theta) = theta(src): theta_m (pi^m - pi) = sum_{n>=2} d_n (Th^n)_m - sum_{k<m} theta_k (S^k)_m
Series1 solve_commuting(const Series1& dst, const PowerTable& src_pw, const PadicScalar& pi,
                        const PadicScalar& a, int D, long prec) {
  const unsigned long p = dst.prime();
  const int K = std::min(D, dst.support_degree());
  Series1 start(p, D);
  start[1] = a.with_precision(prec);
  OnlinePowers tp(p, D, K);
  tp.set_linear(start, 1);
  return solve_coefficientwise(start, 2, pi, [&](const Series1& th, int m) {
    tp.set_linear(th, m - 1);
    tp.advance(th, m);
    DotAccumulator acc(p);
    for (int n = 2; n <= std::min(K, m); ++n) acc.add_product(dst[n], tp.pow(n, m));
    for (int k = 1; k < m; ++k) acc.sub(th[k] * src_pw.power(k)[m]);
    return acc.result();
  }, {});
}

}  // namespace

const Series2& LTContext::fgl() const {
  std::call_once(fgl_once_, [this] { fgl_ = solve_fgl(series_, powers_, pi_, D_, prec_); });
  return fgl_;
}

Series1 LTContext::endo(const PadicScalar& a) const {
  if (!a.is_integral()) raise(Errc::NotIntegral, "endomorphisms are defined for a in Z_p only");
  PadicScalar key_a = a.with_precision(prec_);
  if (key_a.is_zero()) return Series1(p_, D_);
  std::string key = key_a.to_string();
  {
    std::lock_guard<std::mutex> g(endo_mu_);
    auto it = endo_cache_.find(key);
    if (it != endo_cache_.end()) return *it->second;
  }
  auto s = std::make_shared<const Series1>(solve_commuting(series_, powers_, pi_, key_a, D_, prec_));
  std::lock_guard<std::mutex> g(endo_mu_);
  return *endo_cache_.emplace(key, s).first->second;
}

Series1 LTContext::endo(long a) const { return endo(PadicScalar::from_integer(p_, a, prec_)); }

Series1 LTContext::iterate_pi(int n) const {
  if (n < 0) raise(Errc::InvalidArgument, "negative iterate");
  Series1 r = Series1::identity(p_, D_, prec_);
  for (int k = 0; k < n; ++k) r = compose1(series_, r);
  // [pi^n](X) = X^(q^n) + pi^n X mod pi X^2
  PadicScalar pin = pi_.pow(n == 0 ? 1 : n);
  if (n == 0) pin = PadicScalar::from_integer(p_, 1, prec_);
  if (!r[1].equals_at_precision(pin)) raise(Errc::InternalError, "iterate has the wrong linear term");
  Integer qn = 1;
  for (int k = 0; k < n; ++k) qn *= p_;
  for (int m = 2; m <= D_; ++m) {
    PadicScalar c = r[m];
    if (qn == m) c = c - PadicScalar::from_integer(p_, 1, c.precision());
    if (c.val_floor() < 1) {
      if (c.precision() < 1) raise(Errc::PrecisionExhausted, "iterate lost all precision");
      raise(Errc::InternalError, "iterate violates the congruence at degree " + std::to_string(m));
    }
  }
  return r;
}

Series1 build_lt_morphism(const LTContext& src, const LTContext& dst) {
  if (src.p() != dst.p()) raise(Errc::InvalidArgument, "contexts over different primes");
  if (!src.pi().equals_at_precision(dst.pi())) raise(Errc::InvalidArgument, "contexts have different pi");
  int D = std::min(src.degree(), dst.degree());
  long prec = std::min(src.precision(), dst.precision());
  PowerTable spw(src.lt_series().truncated(D), D);
  return solve_commuting(dst.lt_series().truncated(D), spw, src.pi(),
                         PadicScalar::from_integer(src.p(), 1, prec), D, prec);
}

FieldElement eval_series(const Series1& s, const FieldElement& x) {
  const LocalField& L = x.field();
  if (!s[0].is_zero()) raise(Errc::NonzeroConstantTerm, "series has a nonzero constant term");
  long v = x.val_floor();
  if (v < 1) raise(Errc::InvalidArgument, "argument is not in the maximal ideal");
  const int D = s.degree();
  const int top = s.support_degree();
  if (top < 1) return FieldElement::zero(L, x.precision());
  long vmax = 0;
  for (int n = 1; n <= top; ++n)
    if (!s[n].is_zero()) vmax = std::max(vmax, s[n].valuation());
  // no term is known beyond this
  long bound = x.precision() + top * v + L.e() * (vmax + 1);
  if (top == D) bound = std::min(bound, (D + 1) * v);
  FieldElement sum = FieldElement::zero(L, bound);
  FieldElement xn = x;
  for (int n = 1; n <= top; ++n) {
    if (n * v >= bound) break;
    if (n > 1) xn = xn * x;
    if (s[n].is_exact_zero()) continue;
    FieldElement t = xn * s[n];
    bound = std::min(bound, t.precision());
    sum = sum + t;
  }
  return sum.with_precision(bound);
}

FieldElement eval_series2(const Series2& F, const FieldElement& x, const FieldElement& y) {
  const LocalField& L = x.field();
  long vx = x.val_floor(), vy = y.val_floor();
  if (vx < 1 || vy < 1) raise(Errc::InvalidArgument, "argument is not in the maximal ideal");
  if (!F.at(0, 0).is_zero()) raise(Errc::NonzeroConstantTerm, "series has a nonzero constant term");
  const int D = F.degree();
  long bound = (D + 1) * std::min(vx, vy);
  FieldElement sum = FieldElement::zero(L, bound);
  std::vector<FieldElement> yp{FieldElement::one(L, bound + 1)};
  FieldElement xi = FieldElement::one(L, bound + 1);
  for (int i = 0; i <= D; ++i) {
    if (i * vx >= bound) break;
    if (i == 1) {
      xi = x;
    } else if (i > 1) {
      xi = xi * x;
    }
    FieldElement inner = FieldElement::zero(L, bound);
    bool any = false;
    for (int j = (i == 0 ? 1 : 0); j <= D - i; ++j) {
      if (i * vx + j * vy >= bound) break;
      while (static_cast<int>(yp.size()) <= j) yp.push_back(yp.size() == 1 ? y : yp.back() * y);
      const auto& c = F.at(i, j);
      if (c.is_exact_zero()) continue;
      FieldElement t = yp[static_cast<size_t>(j)] * c;
      inner = inner + t;
      any = true;
    }
    if (!any) continue;
    FieldElement t = i == 0 ? inner : inner * xi;
    bound = std::min(bound, t.precision());
    sum = sum + t;
  }
  return sum.with_precision(bound);
}

FieldElement apply_pi(const LTContext& ctx, const FieldElement& x) { return eval_series(ctx.lt_series(), x); }

FieldElement iterate_pi(const LTContext& ctx, const FieldElement& x, int n) {
  FieldElement r = x;
  for (int k = 0; k < n; ++k) r = apply_pi(ctx, r);
  return r;
}

FieldElement fgl_add(const LTContext& ctx, const FieldElement& x, const FieldElement& y) {
  return eval_series2(ctx.fgl(), x, y);
}

FieldElement endo_apply(const LTContext& ctx, const PadicScalar& a, const FieldElement& x) {
  return eval_series(ctx.endo(a), x);
}

long ell_closed_form(unsigned long q, long e, long v) {
  if (v < 1) raise(Errc::InvalidArgument, "valuation must be positive");
  long l = 0;
  Integer lhs = Integer(v) * (q - 1);
  while (lhs <= e) {
    lhs *= q;
    ++l;
  }
  return l;
}

bool in_disc(unsigned long q, long e, long v) { return Integer(v) * (q - 1) > e; }

namespace {

// min over n' >= n of n' v - e floor(log_p n'), given v(p-1) > e
long log_tail_min(unsigned long p, long e, long v, long n) {
  long k = floor_log(p, n);
  Integer next = 1;
  for (long i = 0; i <= k; ++i) next *= p;
  long g_n = n * v - e * k;
  if (next > kExactPrec / 4) return g_n;
  long g_next = next.get_si() * v - e * (k + 1);
  return std::min(g_n, g_next);
}

// a lower bound for the precision of log at an element known to be 0 mod varpi^k
long log_zero_bound(unsigned long q, long e, long k) {
  long best = kExactPrec / 8;
  long stop = std::max(k, e / static_cast<long>(q - 1) + 1);
  for (long v = k; v <= stop; ++v) {
    long l = ell_closed_form(q, e, v);
    Integer ql = 1;
    for (long i = 0; i < l; ++i) ql *= q;
    best = std::min(best, Integer(ql * v).get_si() - l * e);
  }
  return best;
}

}  // namespace

LogEvaluation eval_log_detailed(const LTContext& ctx, const FieldElement& x) {
  const LocalField& L = x.field();
  const unsigned long p = ctx.p();
  const long e = L.e();
  if (L.p() != p) raise(Errc::InvalidArgument, "field and context over different primes");
  LogEvaluation out;
  if (x.is_zero()) {
    long b = log_zero_bound(p, e, x.precision());
    if (b < 1) raise(Errc::PrecisionExhausted, "argument too imprecise for a certified logarithm");
    out.value = FieldElement::zero(L, b);
    out.series_precision = out.wiles_precision = b;
    return out;
  }
  long v = x.valuation();
  if (v < 1) raise(Errc::InvalidArgument, "log is defined on the maximal ideal only");
  long ell = ell_closed_form(p, e, v);
  out.ell = ell;
  FieldElement y = iterate_pi(ctx, x, static_cast<int>(ell));
  if (!y.is_zero() && !in_disc(p, e, y.valuation()))
    raise(Errc::InternalError, "closed-form iterate count does not reach the disc");
  if (ell > 0) {
    FieldElement z = iterate_pi(ctx, x, static_cast<int>(ell - 1));
    if (z.is_zero() || in_disc(p, e, z.valuation()))
      raise(Errc::InternalError, "closed-form iterate count is not minimal");
  }
  PadicScalar inv_pi_ell = ctx.pi().pow(-ell);

  // series route
  FieldElement series_value;
  long series_prec;
  if (y.is_zero()) {
    series_prec = y.precision() - e * ell;
    series_value = FieldElement::zero(L, std::max(series_prec, 1L));
  } else {
    long vy = y.valuation();
    const Series1& ls = ctx.log_series();
    const int D = ls.degree();
    long bound = y.precision();
    FieldElement sum = FieldElement::zero(L, bound);
    FieldElement yn = y;
    int n = 1;
    for (; n <= D; ++n) {
      if (log_tail_min(p, e, vy, n) >= bound) break;
      if (n > 1) yn = yn * y;
      const auto& c = ls[n];
      if (c.is_zero()) {
        bound = std::min(bound, yn.val_floor() + e * c.precision());
        continue;
      }
      if (c.valuation() < -floor_log(p, n))
        raise(Errc::TailBoundViolated, "log coefficient " + std::to_string(n) + " below the assumed bound");
      FieldElement t = yn * c;
      bound = std::min(bound, t.precision());
      sum = sum + t;
    }
    out.terms = n - 1;
    if (n > D) bound = std::min(bound, log_tail_min(p, e, vy, D + 1));
    series_prec = bound - e * ell;
    series_value = sum.with_precision(bound) * inv_pi_ell;
  }
  out.series_precision = series_prec;

  // quotient route [pi^m](x)/pi^m at two depths
  auto wiles = [&](long m, FieldElement& z) -> std::pair<FieldElement, long> {
    PadicScalar inv = ctx.pi().pow(-m);
    if (z.is_zero()) {
      long pr = z.precision() - e * m;
      return {FieldElement::zero(L, std::max(pr, 1L)), pr};
    }
    long vz = z.valuation();
    long err = std::min(2 * vz - (p == 2 ? e : 0), static_cast<long>(p) * vz - e) - m * e;
    FieldElement w = z * inv;
    long pr = std::min(w.precision(), err);
    return {w.with_precision(std::max(pr, 1L)), pr};
  };
  long m = std::max(ell, 1L);
  FieldElement z = iterate_pi(ctx, x, static_cast<int>(m));
  long cap = ell + 4 * (ctx.options().N + x.precision()) / e + 16;
  auto w1 = wiles(m, z);
  while (w1.second < series_prec && m < cap) {
    FieldElement z2 = apply_pi(ctx, z);
    auto w2 = wiles(m + 1, z2);
    if (w2.second <= w1.second && z2.is_zero()) break;
    z = z2;
    ++m;
    w1 = w2;
  }
  FieldElement z2 = apply_pi(ctx, z);
  auto w2 = wiles(m + 1, z2);
  out.wiles_depth = static_cast<int>(m);
  out.wiles_precision = std::min(w1.second, w2.second);

  long final_prec = std::min(series_prec, out.wiles_precision);
  if (!series_value.equals_mod(w1.first, final_prec) || !series_value.equals_mod(w2.first, final_prec))
    raise(Errc::InternalError, "series and quotient routes for log disagree");
  if (series_value.is_zero()) {
    if (final_prec < 1) raise(Errc::PrecisionExhausted, "log has no certified digits");
    out.value = FieldElement::zero(L, final_prec);
  } else {
    if (final_prec <= series_value.valuation())
      raise(Errc::PrecisionExhausted, "log has no certified digits");
    out.value = series_value.with_precision(final_prec);
  }
  return out;
}

FieldElement eval_log(const LTContext& ctx, const FieldElement& x) { return eval_log_detailed(ctx, x).value; }

FieldElement eval_exp(const LTContext& ctx, const FieldElement& x) {
  const LocalField& L = x.field();
  const unsigned long p = ctx.p();
  const long e = L.e();
  if (x.is_zero()) return FieldElement::zero(L, x.precision());
  long v = x.valuation();
  if (!in_disc(p, e, v)) raise(Errc::OutsideConvergenceDisc, "exp needs v(x)(q-1) > v(pi)");
  const Series1& es = ctx.exp_series();
  const int D = es.degree();
  const long pm1 = static_cast<long>(p - 1);
  auto h = [&](long n) { return n * v - e * ((n - 1) / pm1); };
  auto tail = [&](long n) {
    long r = h(n);
    for (long k = 1; k < pm1; ++k) r = std::min(r, h(n + k));
    return r;
  };
  long bound = x.precision();
  FieldElement sum = FieldElement::zero(L, bound);
  FieldElement xn = x;
  int n = 1;
  for (; n <= D; ++n) {
    if (tail(n) >= bound) break;
    if (n > 1) xn = xn * x;
    const auto& c = es[n];
    if (c.is_zero()) {
      bound = std::min(bound, xn.val_floor() + e * c.precision());
      continue;
    }
    if (c.valuation() < -((n - 1) / pm1))
      raise(Errc::TailBoundViolated, "exp coefficient " + std::to_string(n) + " below the assumed bound");
    FieldElement t = xn * c;
    bound = std::min(bound, t.precision());
    sum = sum + t;
  }
  if (n > D) bound = std::min(bound, tail(D + 1));
  return sum.with_precision(bound);
}

namespace {

using IPoly = std::vector<Integer>;

IPoly ipoly_mul(const IPoly& a, const IPoly& b) {
  IPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

IPoly ipoly_compose(const IPoly& outer, const IPoly& inner) {
  IPoly r{outer.back()};
  for (size_t k = outer.size() - 1; k-- > 0;) {
    r = ipoly_mul(r, inner);
    r[0] += outer[k];
  }
  return r;
}

}  // namespace

TorsionField torsion_field(const LTContext& ctx, int n, long N) {
  if (n < 1) raise(Errc::InvalidArgument, "torsion level must be at least 1");
  const unsigned long p = ctx.p();
  const Series1& s = ctx.lt_series();
  if (!ctx.is_polynomial() || s.support_degree() != static_cast<int>(p))
    raise(Errc::SeriesNotPolynomial, "torsion fields need [pi](X) to be a polynomial of degree q");
  IPoly P(p + 1);
  for (unsigned long k = 1; k <= p; ++k) P[k] = s[static_cast<int>(k)].is_zero() ? Integer(0) : s[static_cast<int>(k)].lift();
  IPoly R{0, 1};
  for (int k = 1; k < n; ++k) R = ipoly_compose(P, R);
  IPoly Q(P.begin() + 1, P.end());
  IPoly phi = ipoly_compose(Q, R);
  TowerSpec spec;
  spec.p = p;
  spec.f = 1;
  spec.e = static_cast<int>(phi.size()) - 1;
  spec.N = N;
  for (auto& c : phi) spec.eis.push_back(UVec{c});
  TorsionField T;
  T.level = n;
  T.field = make_tower(spec);
  T.lambda = FieldElement::uniformizer(T.field, N);
  if (!iterate_pi(ctx, T.lambda, n).is_zero() || iterate_pi(ctx, T.lambda, n - 1).is_zero())
    raise(Errc::InternalError, "uniformiser is not a primitive torsion point");
  return T;
}

TorsionField torsion_field_any(const LTContext& ctx, int n, long N) {
  if (ctx.is_polynomial() && ctx.lt_series().support_degree() == static_cast<int>(ctx.p()))
    return torsion_field(ctx, n, N);
  const PadicScalar& pi = ctx.pi();
  Integer unit = pi.unit();
  auto base = LTContext::basic(ctx.p(), ctx.options(), unit);
  TorsionField T = torsion_field(*base, n, N);
  Series1 theta = build_lt_morphism(*base, ctx);
  T.lambda = eval_series(theta, T.lambda);
  if (!iterate_pi(ctx, T.lambda, n).is_zero() || iterate_pi(ctx, T.lambda, n - 1).is_zero())
    raise(Errc::InternalError, "conjugated point is not a primitive torsion point");
  return T;
}

}  // namespace ltforge
