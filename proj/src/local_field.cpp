#include "ltforge/local_field.hpp"

#include <algorithm>
#include <sstream>

namespace ltforge {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

bool is_scalar_uvec(const UVec& a) {
  for (size_t i = 1; i < a.size(); ++i)
    if (a[i] != 0) return false;
  return true;
}

bool is_zero_uvec(const UVec& a) {
  for (const auto& c : a)
    if (c != 0) return false;
  return true;
}

UVec umul_raw(const Tower& t, const UVec& a, const UVec& b) {
  int f = t.f;
  if (f == 1) return {a[0] * b[0]};
  std::vector<Integer> q(2 * f - 1);
  for (int i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < f; ++j) {
      if (b[j] == 0) continue;
      mpz_addmul(q[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  for (int d = 2 * f - 2; d >= f; --d) {
    if (q[d] == 0) continue;
    for (int k = 0; k < f; ++k) {
      if (t.gtilde[k] != 0) mpz_submul(q[d - f + k].get_mpz_t(), q[d].get_mpz_t(), t.gtilde[k].get_mpz_t());
    }
    q[d] = 0;
  }
  q.resize(f);
  return q;
}

void ureduce(UVec& a, const Integer& m) {
  for (auto& c : a) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
}

ResidueField::Elem uvec_residue(const Tower& t, const UVec& a) {
  ResidueField::Elem r(t.f);
  for (int i = 0; i < t.f; ++i) {
    Integer m;
    mpz_fdiv_r_ui(m.get_mpz_t(), a[i].get_mpz_t(), t.p);
    r[i] = m.get_ui();
  }
  return r;
}

// Product of two coefficient arrays in Z[zeta][varpi]/(g~, E), exact.
std::vector<Integer> raw_mul(const Tower& t, const std::vector<Integer>& A,
                             const std::vector<Integer>& B) {
  const int e = t.e, f = t.f;
  const int W = 2 * f - 1;
  std::vector<Integer> Q(static_cast<size_t>((2 * e - 1) * W));
  for (int j1 = 0; j1 < e; ++j1) {
    for (int i1 = 0; i1 < f; ++i1) {
      const Integer& a = A[j1 * f + i1];
      if (a == 0) continue;
      for (int j2 = 0; j2 < e; ++j2) {
        for (int i2 = 0; i2 < f; ++i2) {
          const Integer& b = B[j2 * f + i2];
          if (b == 0) continue;
          mpz_addmul(Q[(j1 + j2) * W + i1 + i2].get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        }
      }
    }
  }
  if (f > 1) {
    for (int jj = 0; jj < 2 * e - 1; ++jj) {
      for (int d = 2 * f - 2; d >= f; --d) {
        Integer& c = Q[jj * W + d];
        if (c == 0) continue;
        for (int k = 0; k < f; ++k) {
          if (t.gtilde[k] != 0)
            mpz_submul(Q[jj * W + d - f + k].get_mpz_t(), c.get_mpz_t(), t.gtilde[k].get_mpz_t());
        }
        c = 0;
      }
    }
  }
  for (int jj = 2 * e - 2; jj >= e; --jj) {
    UVec C(Q.begin() + jj * W, Q.begin() + jj * W + f);
    if (is_zero_uvec(C)) continue;
    for (int k = 0; k < e; ++k) {
      if (!t.eis_nonzero[k]) continue;
      const UVec& a = t.eis[k];
      int target = jj - e + k;
      if (is_scalar_uvec(a)) {
        for (int i = 0; i < f; ++i)
          mpz_submul(Q[target * W + i].get_mpz_t(), C[i].get_mpz_t(), a[0].get_mpz_t());
      } else {
        UVec prod = umul_raw(t, C, a);
        for (int i = 0; i < f; ++i) Q[target * W + i] -= prod[i];
      }
    }
    for (int i = 0; i < f; ++i) Q[jj * W + i] = 0;
  }
  std::vector<Integer> R(static_cast<size_t>(e * f));
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i) R[j * f + i] = std::move(Q[j * W + i]);
  return R;
}

// Multiply by varpi once: shift slots up and fold slot e back with E.
void raw_mul_varpi(const Tower& t, std::vector<Integer>& A) {
  const int e = t.e, f = t.f;
  UVec top(A.begin() + (e - 1) * f, A.begin() + e * f);
  for (int j = e - 1; j >= 1; --j)
    for (int i = 0; i < f; ++i) A[j * f + i] = A[(j - 1) * f + i];
  for (int i = 0; i < f; ++i) A[i] = 0;
  if (is_zero_uvec(top)) return;
  for (int k = 0; k < e; ++k) {
    if (!t.eis_nonzero[k]) continue;
    UVec prod = umul_raw(t, top, t.eis[k]);
    for (int i = 0; i < f; ++i) A[k * f + i] -= prod[i];
  }
}

std::shared_ptr<const Tower> rebuild(const Tower& base, long N);

void compute_teichmuller(Tower& t) {
  t.teich.assign(t.f, UVec(t.f));
  t.teich[0][0] = 1;
  if (t.f == 1) return;
  long T = ceil_div(std::max(t.N, 1L), t.e) + 8;
  const Integer& mod = ppow(t.p, T);
  UVec z(t.f);
  z[1] = 1;
  Integer q = 1;
  for (int i = 0; i < t.f; ++i) q *= t.p;
  for (long it = 0; it <= T; ++it) {
    UVec r(t.f);
    r[0] = 1;
    UVec base = z;
    Integer n = q;
    while (n > 0) {
      if (mpz_odd_p(n.get_mpz_t())) {
        r = umul_raw(t, r, base);
        ureduce(r, mod);
      }
      n >>= 1;
      if (n > 0) {
        base = umul_raw(t, base, base);
        ureduce(base, mod);
      }
    }
    z = std::move(r);
  }
  UVec w = z;
  for (int i = 1; i < t.f; ++i) {
    t.teich[i] = w;
    w = umul_raw(t, w, z);
    ureduce(w, mod);
  }
}

std::shared_ptr<const Tower> rebuild(const Tower& base, long N) {
  auto t = std::make_shared<Tower>(base);
  t->N = N;
  compute_teichmuller(*t);
  return t;
}

}  // namespace

LocalField make_tower(const TowerSpec& spec) {
  if (!is_prime(spec.p) || spec.p >= (1UL << 31)) raise(Errc::BadPrime, std::to_string(spec.p) + " is not a supported prime");
  if (spec.f < 1 || spec.e < 1) raise(Errc::InvalidArgument, "tower degrees must be positive");
  if (spec.N < 1) raise(Errc::InvalidArgument, "precision must be positive");
  auto t = std::make_shared<Tower>();
  t->p = spec.p;
  t->f = spec.f;
  t->e = spec.e;
  t->N = spec.N;
  const unsigned long p = spec.p;

  if (spec.unram.empty()) {
    t->unram = default_modulus(p, spec.f);
  } else {
    FpPoly g = spec.unram;
    for (auto& c : g) c %= p;
    fp_trim(g);
    if (static_cast<int>(g.size()) != spec.f + 1 || g.back() != 1)
      raise(Errc::NotIrreducible, "unramified polynomial must be monic of degree f");
    if (!fp_is_irreducible(g, p)) raise(Errc::NotIrreducible, "unramified polynomial is reducible mod p");
    t->unram = g;
  }
  t->gtilde.assign(spec.f + 1, 0);
  for (int i = 0; i <= spec.f; ++i) t->gtilde[i] = t->unram[i];
  t->k = ResidueField(p, t->unram);

  const int e = spec.e, f = spec.f;
  if (spec.eis.empty()) {
    t->eis.assign(e + 1, UVec(f));
    t->eis[0][0] = -Integer(p);
    t->eis[e][0] = 1;
  } else {
    if (static_cast<int>(spec.eis.size()) != e + 1)
      raise(Errc::NotEisenstein, "Eisenstein polynomial must have e+1 coefficients");
    t->eis = spec.eis;
    for (auto& a : t->eis) {
      if (static_cast<int>(a.size()) > f) {
        // reduce modulo the lifted unramified polynomial
        UVec b(a.size());
        for (size_t i = 0; i < a.size(); ++i) b[i] = a[i];
        for (int d = static_cast<int>(b.size()) - 1; d >= f; --d) {
          for (int k = 0; k < f; ++k) b[d - f + k] -= b[d] * t->gtilde[k];
          b[d] = 0;
        }
        b.resize(f);
        a = b;
      }
      a.resize(f, 0);
    }
    ResidueField::Elem lead = uvec_residue(*t, t->eis[e]);
    if (t->k.is_zero(lead)) raise(Errc::NotEisenstein, "leading coefficient is not a unit");
    UVec one(f);
    one[0] = 1;
    if (t->eis[e] != one) {
      // make monic: multiply through by an inverse of the leading coefficient
      long T = ceil_div(4 * spec.N, e) + 32;
      const Integer& mod = ppow(p, T);
      ResidueField::Elem li = t->k.inv(lead);
      UVec y(f);
      for (int i = 0; i < f; ++i) y[i] = li[i];
      for (long prec = 1; prec < T; prec *= 2) {
        UVec ay = umul_raw(*t, t->eis[e], y);
        for (auto& c : ay) c = -c;
        ay[0] += 2;
        y = umul_raw(*t, y, ay);
        ureduce(y, mod);
      }
      for (int k = 0; k <= e; ++k) {
        t->eis[k] = umul_raw(*t, t->eis[k], y);
        ureduce(t->eis[k], mod);
        // keep lower coefficients' signs irrelevant: values are taken mod p^T
      }
      t->eis[e] = one;
    }
    for (int k = 0; k < e; ++k) {
      for (int i = 0; i < f; ++i) {
        if (!mpz_divisible_ui_p(t->eis[k][i].get_mpz_t(), p))
          raise(Errc::NotEisenstein, "coefficient of degree " + std::to_string(k) + " is not divisible by p");
      }
    }
  }
  UVec a0p(f);
  for (int i = 0; i < f; ++i) a0p[i] = -t->eis[0][i] / Integer(p);
  t->neg_a0_over_p = uvec_residue(*t, a0p);
  if (t->k.is_zero(t->neg_a0_over_p)) raise(Errc::NotEisenstein, "constant coefficient has valuation above 1");
  t->neg_a0_over_p_inv = t->k.inv(t->neg_a0_over_p);
  t->eis_nonzero.assign(e + 1, false);
  for (int k = 0; k <= e; ++k) t->eis_nonzero[k] = !is_zero_uvec(t->eis[k]);
  compute_teichmuller(*t);
  return LocalField(t);
}

LocalField make_tower(unsigned long p, int f, int e, long N) {
  TowerSpec s;
  s.p = p;
  s.f = f;
  s.e = e;
  s.N = N;
  return make_tower(s);
}

LocalField LocalField::with_precision(long N) const {
  if (N < 1) raise(Errc::InvalidArgument, "precision must be positive");
  if (N == t_->N) return *this;
  return LocalField(rebuild(*t_, N));
}

bool LocalField::same_field(const LocalField& o) const {
  if (t_ == o.t_) return true;
  if (!t_ || !o.t_) return false;
  return t_->p == o.t_->p && t_->f == o.t_->f && t_->e == o.t_->e && t_->unram == o.t_->unram &&
         t_->eis == o.t_->eis;
}

std::string LocalField::describe() const {
  std::ostringstream os;
  os << "Q_" << t_->p << "(f=" << t_->f << ", e=" << t_->e << ")";
  return os.str();
}

UVec LocalField::umul(const UVec& a, const UVec& b) const { return umul_raw(*t_, a, b); }

void LocalField::ureduce_mod(UVec& a, long k) const { ureduce(a, ppow(t_->p, k)); }

// ---------------------------------------------------------------------------

void FieldElement::normalize() {
  const Tower& t = F_.tower();
  const int e = t.e, f = t.f;
  c_.resize(static_cast<size_t>(e * f));
  long minv = kExactPrec;
  for (int j = 0; j < e; ++j) {
    long k = ceil_div(prec_ - j, e) - shift_;
    for (int i = 0; i < f; ++i) {
      Integer& c = c_[j * f + i];
      if (k <= 0) {
        c = 0;
        continue;
      }
      if (c == 0) continue;
      mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), ppow(t.p, k).get_mpz_t());
      if (c != 0) minv = std::min(minv, vp(c, t.p));
    }
  }
  if (minv == kExactPrec) {
    zero_ = true;
    shift_ = 0;
    val_ = prec_;
    return;
  }
  zero_ = false;
  if (minv > 0) {
    const Integer& d = ppow(t.p, minv);
    for (auto& c : c_)
      if (c != 0) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    shift_ += minv;
  }
  long v = kExactPrec;
  for (int j = 0; j < e; ++j) {
    long m = kExactPrec;
    for (int i = 0; i < f; ++i) {
      const Integer& c = c_[j * f + i];
      if (c != 0) m = std::min(m, vp(c, t.p));
    }
    if (m != kExactPrec) v = std::min(v, e * (shift_ + m) + j);
  }
  val_ = v;
}

FieldElement FieldElement::from_coeffs(const LocalField& F, long shift, std::vector<Integer> c,
                                       long prec) {
  if (prec >= kExactPrec / 4) raise(Errc::InvalidArgument, "element precision too large");
  FieldElement x;
  x.F_ = F;
  x.shift_ = shift;
  x.c_ = std::move(c);
  x.prec_ = prec;
  x.normalize();
  return x;
}

FieldElement FieldElement::zero(const LocalField& F, long prec) {
  return from_coeffs(F, 0, std::vector<Integer>(static_cast<size_t>(F.degree())), prec);
}

FieldElement FieldElement::one(const LocalField& F, long prec) { return from_integer(F, 1, prec); }

FieldElement FieldElement::from_integer(const LocalField& F, const Integer& n, long prec) {
  std::vector<Integer> c(static_cast<size_t>(F.degree()));
  c[0] = n;
  return from_coeffs(F, 0, std::move(c), prec);
}

FieldElement FieldElement::from_scalar(const LocalField& F, const PadicScalar& a, long prec) {
  long e = F.e();
  long pr = std::min(prec, a.precision() >= kExactPrec ? prec : e * a.precision());
  if (a.is_zero()) return zero(F, pr);
  std::vector<Integer> c(static_cast<size_t>(F.degree()));
  c[0] = a.unit();
  return from_coeffs(F, a.val_floor(), std::move(c), pr);
}

FieldElement FieldElement::uniformizer(const LocalField& F, long prec) {
  std::vector<Integer> c(static_cast<size_t>(F.degree()));
  if (F.e() > 1) {
    c[F.f()] = 1;
    return from_coeffs(F, 0, std::move(c), prec);
  }
  // e = 1: varpi = -a_0 = p * unit
  const UVec& a0 = F.tower().eis[0];
  for (int i = 0; i < F.f(); ++i) c[i] = -a0[i];
  return from_coeffs(F, 0, std::move(c), prec);
}

FieldElement FieldElement::generator(const LocalField& F, long prec) {
  std::vector<Integer> c(static_cast<size_t>(F.degree()));
  if (F.f() > 1) {
    c[1] = 1;
  } else {
    c[0] = -F.tower().gtilde[0];
  }
  return from_coeffs(F, 0, std::move(c), prec);
}

FieldElement FieldElement::teichmuller(const LocalField& F, int i, long prec) {
  if (i < 0 || i >= F.f()) raise(Errc::InvalidArgument, "Teichmuller index out of range");
  std::vector<Integer> c(static_cast<size_t>(F.degree()));
  for (int k = 0; k < F.f(); ++k) c[k] = F.tower().teich[i][k];
  return from_coeffs(F, 0, std::move(c), prec);
}

FieldElement FieldElement::from_coordinates(const LocalField& F, const std::vector<PadicScalar>& xs,
                                            long prec) {
  const int e = F.e(), f = F.f();
  if (static_cast<int>(xs.size()) != e * f) raise(Errc::InvalidArgument, "coordinate count mismatch");
  long s = kExactPrec;
  long pr = prec;
  for (int j = 0; j < e; ++j) {
    for (int i = 0; i < f; ++i) {
      const PadicScalar& a = xs[j * f + i];
      if (a.precision() < kExactPrec) pr = std::min(pr, e * a.precision() + j);
      if (!a.is_zero()) s = std::min(s, a.val_floor());
    }
  }
  if (s == kExactPrec) return zero(F, pr);
  std::vector<Integer> c(static_cast<size_t>(e * f));
  for (int k = 0; k < e * f; ++k) c[k] = xs[k].scaled(s);
  return from_coeffs(F, s, std::move(c), pr);
}

long FieldElement::valuation() const {
  if (zero_) raise(Errc::PrecisionExhausted, "element indistinguishable from zero");
  return val_;
}

PadicScalar FieldElement::coordinate(int i, int j) const {
  const int e = F_.e(), f = F_.f();
  long pr = ceil_div(prec_ - j, e);
  if (zero_) return PadicScalar::zero(F_.p(), pr);
  return PadicScalar::from_parts(F_.p(), shift_, c_[j * f + i], pr);
}

std::vector<PadicScalar> FieldElement::coordinates() const {
  std::vector<PadicScalar> r;
  r.reserve(c_.size());
  for (int j = 0; j < F_.e(); ++j)
    for (int i = 0; i < F_.f(); ++i) r.push_back(coordinate(i, j));
  return r;
}

FieldElement FieldElement::with_precision(long n) const {
  if (n >= prec_) return *this;
  return from_coeffs(F_, shift_, c_, n);
}

FieldElement FieldElement::lifted(long n) const { return from_coeffs(F_, shift_, c_, n); }

FieldElement FieldElement::operator-() const {
  std::vector<Integer> c = c_;
  for (auto& x : c) x = -x;
  return from_coeffs(F_, shift_, std::move(c), prec_);
}

FieldElement FieldElement::operator+(const FieldElement& y) const {
  long prec = std::min(prec_, y.prec_);
  if (zero_) return y.with_precision(prec);
  if (y.zero_) return with_precision(prec);
  long s = std::min(shift_, y.shift_);
  std::vector<Integer> c(c_.size());
  const unsigned long p = F_.p();
  for (size_t k = 0; k < c_.size(); ++k) {
    if (shift_ == s) {
      c[k] = c_[k];
    } else if (c_[k] != 0) {
      c[k] = c_[k] * ppow(p, shift_ - s);
    }
    if (y.shift_ == s) {
      c[k] += y.c_[k];
    } else if (y.c_[k] != 0) {
      mpz_addmul(c[k].get_mpz_t(), y.c_[k].get_mpz_t(), ppow(p, y.shift_ - s).get_mpz_t());
    }
  }
  return from_coeffs(F_, s, std::move(c), prec);
}

FieldElement FieldElement::operator-(const FieldElement& y) const { return *this + (-y); }

FieldElement FieldElement::operator*(const FieldElement& y) const {
  long prec = std::min(prec_ + y.val_, y.prec_ + val_);
  if (zero_ || y.zero_) return zero(F_, prec);
  return from_coeffs(F_, shift_ + y.shift_, raw_mul(F_.tower(), c_, y.c_), prec);
}

FieldElement FieldElement::operator*(const PadicScalar& a) const {
  const long e = F_.e();
  long aprec = a.precision() >= kExactPrec ? kExactPrec / 8 : e * a.precision();
  long prec = std::min(aprec + val_, prec_ + e * a.val_floor());
  if (a.is_exact_zero()) return zero(F_, prec_);
  if (zero_ || a.is_zero()) return zero(F_, prec);
  std::vector<Integer> c = c_;
  for (auto& x : c)
    if (x != 0) x *= a.unit();
  return from_coeffs(F_, shift_ + a.val_floor(), std::move(c), prec);
}

FieldElement FieldElement::operator*(const Integer& a) const {
  if (a == 0) return zero(F_, prec_);
  Integer u = a;
  long v = remove_p(u, F_.p());
  long prec = prec_ + F_.e() * v;
  if (zero_) return zero(F_, prec);
  std::vector<Integer> c = c_;
  for (auto& x : c)
    if (x != 0) x *= u;
  return from_coeffs(F_, shift_ + v, std::move(c), prec);
}

FieldElement FieldElement::mul_varpi_power(long k) const {
  if (k == 0) return *this;
  const Tower& t = F_.tower();
  if (zero_) return zero(F_, prec_ + k);
  if (k > 0) {
    std::vector<Integer> c = c_;
    for (long i = 0; i < k; ++i) raw_mul_varpi(t, c);
    return from_coeffs(F_, shift_, std::move(c), prec_ + k);
  }
  long m = -k;
  long q = ceil_div(m, t.e);
  // x varpi^(-m) = x varpi^(qe-m) u_E^(-q) p^(-q), where u_E = varpi^e / p
  FieldElement y = mul_varpi_power(q * t.e - m);
  std::vector<Integer> c(static_cast<size_t>(t.e * t.f));
  for (int j = 0; j < t.e; ++j)
    for (int i = 0; i < t.f; ++i) c[j * t.f + i] = -t.eis[j][i];
  FieldElement uE = from_coeffs(F_, -1, std::move(c), y.prec_ - y.val_ + 2);
  FieldElement uinv = uE.inverse();
  FieldElement w = y;
  for (long i = 0; i < q; ++i) w = w * uinv;
  return from_coeffs(F_, w.shift_ - q, w.c_, w.prec_ - q * t.e).with_precision(prec_ - m);
}

FieldElement FieldElement::inverse() const {
  if (zero_) raise(Errc::PrecisionExhausted, "inverse of an element indistinguishable from zero");
  const Tower& t = F_.tower();
  const int e = t.e, f = t.f;
  long v = val_;
  long r = v - e * shift_;
  long rel = prec_ - v;
  // w = C * varpi^(e-r) / p is a unit
  std::vector<Integer> c = c_;
  for (long i = 0; i < e - r; ++i) raw_mul_varpi(t, c);
  for (auto& x : c) {
    if (!mpz_divisible_ui_p(x.get_mpz_t(), t.p)) raise(Errc::InternalError, "unit normalization failed");
    mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), t.p);
  }
  FieldElement w = from_coeffs(F_, 0, c, rel);
  // residue inverse, then Newton
  ResidueField::Elem w0(f);
  for (int i = 0; i < f; ++i) {
    Integer m;
    mpz_fdiv_r_ui(m.get_mpz_t(), w.c_[i].get_mpz_t(), t.p);
    w0[i] = m.get_ui();
  }
  ResidueField::Elem y0 = t.k.inv(w0);
  std::vector<Integer> yc(static_cast<size_t>(e * f));
  for (int i = 0; i < f; ++i) yc[i] = y0[i];
  long have = 1;
  FieldElement y = from_coeffs(F_, 0, yc, std::max(have, 1L));
  FieldElement two = from_integer(F_, 2, rel);
  while (have < rel) {
    long next = std::min(2 * have, rel);
    FieldElement ye = y.lifted(next);
    FieldElement we = w.with_precision(next);
    FieldElement z = ye * (two.with_precision(next) - we * ye);
    y = z.lifted(next);
    have = next;
  }
  y = y.with_precision(rel);
  // x^{-1} = p^{-shift-1} varpi^{e-r} y
  std::vector<Integer> d = y.c_;
  long ys = y.shift_;
  for (long i = 0; i < e - r; ++i) raw_mul_varpi(t, d);
  return from_coeffs(F_, ys - shift_ - 1, std::move(d), prec_ - 2 * v);
}

FieldElement FieldElement::operator/(const FieldElement& y) const { return *this * y.inverse(); }

FieldElement FieldElement::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  if (n == 0) {
    long pr = zero_ ? 0 : prec_ - val_;
    return one(F_, pr);
  }
  FieldElement result;
  bool first = true;
  FieldElement base = *this;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

bool FieldElement::equals_mod(const FieldElement& y, long n) const {
  FieldElement d = *this - y;
  return d.val_floor() >= n;
}

bool FieldElement::operator==(const FieldElement& y) const {
  return F_.same_field(y.F_) && prec_ == y.prec_ && zero_ == y.zero_ && shift_ == y.shift_ &&
         c_ == y.c_;
}

std::string FieldElement::to_string() const {
  std::ostringstream os;
  const int e = F_.e(), f = F_.f();
  bool any = false;
  for (int j = 0; j < e && !zero_; ++j) {
    for (int i = 0; i < f; ++i) {
      const Integer& c = c_[j * f + i];
      if (c == 0) continue;
      if (any) os << " + ";
      any = true;
      os << c.get_str();
      if (shift_ != 0) os << "*p^" << shift_;
      if (i > 0) os << "*z^" << i;
      if (j > 0) os << "*w^" << j;
    }
  }
  if (!any) os << "0";
  os << " + O(w^" << prec_ << ")";
  return os.str();
}

ResidueField::Elem residue_decompose(const FieldElement& x, long j) {
  if (x.is_zero()) {
    if (x.precision() <= j) raise(Errc::PrecisionExhausted, "not enough precision to read level " + std::to_string(j));
    raise(Errc::WrongLevel, "element lies deeper than level " + std::to_string(j));
  }
  if (x.valuation() != j)
    raise(Errc::WrongLevel, "valuation " + std::to_string(x.valuation()) + " differs from level " + std::to_string(j));
  const Tower& t = x.field().tower();
  long r = j - t.e * x.shift();
  ResidueField::Elem c(t.f);
  for (int i = 0; i < t.f; ++i) {
    Integer m;
    mpz_fdiv_r_ui(m.get_mpz_t(), x.coeffs()[r * t.f + i].get_mpz_t(), t.p);
    c[i] = m.get_ui();
  }
  long s = x.shift();
  ResidueField::Elem factor =
      s >= 0 ? t.k.pow(t.neg_a0_over_p_inv, static_cast<unsigned long long>(s))
             : t.k.pow(t.neg_a0_over_p, static_cast<unsigned long long>(-s));
  return t.k.mul(c, factor);
}

ResidueField::Elem residue_at_level(const FieldElement& x, long j) {
  if (x.precision() <= j) raise(Errc::PrecisionExhausted, "not enough precision to read level " + std::to_string(j));
  if (x.is_zero() || x.valuation() > j) return x.field().residue_field().zero();
  return residue_decompose(x, j);
}

FieldElement lift_residue(const LocalField& F, const ResidueField::Elem& coords, long j, long prec) {
  long up = prec - j;
  FieldElement u = FieldElement::zero(F, up);
  for (int i = 0; i < F.f(); ++i) {
    if (coords[i] == 0) continue;
    u += FieldElement::teichmuller(F, i, up) * Integer(coords[i]);
  }
  return u.mul_varpi_power(j).with_precision(prec);
}

}  // namespace ltforge
