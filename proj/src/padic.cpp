#include "ltforge/padic.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace ltforge {

namespace {

long clamp_prec(long n) { return n >= kExactPrec ? kExactPrec : n; }

}  // namespace

const Integer& ppow(unsigned long p, long k) {
  if (k < 0) raise(Errc::InternalError, "negative power requested from ppow");
  if (k >= kExactPrec / 2) raise(Errc::InternalError, "power of p too large");
  thread_local std::map<unsigned long, std::deque<Integer>> cache;
  auto& v = cache[p];
  if (v.empty()) v.emplace_back(1);
  while (static_cast<long>(v.size()) <= k) {
    Integer next = v.back() * p;
    v.push_back(std::move(next));
  }
  return v[static_cast<size_t>(k)];
}

long remove_p(Integer& x, unsigned long p) {
  if (x == 0) return 0;
  if (p == 2) {
    mp_bitcnt_t s = mpz_scan1(x.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), s);
    return static_cast<long>(s);
  }
  if (!mpz_divisible_ui_p(x.get_mpz_t(), p)) return 0;
  Integer pp(p);
  return static_cast<long>(mpz_remove(x.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t()));
}

long vp(const Integer& x, unsigned long p) {
  if (x == 0) return kExactPrec;
  if (p == 2) return static_cast<long>(mpz_scan1(x.get_mpz_t(), 0));
  if (!mpz_divisible_ui_p(x.get_mpz_t(), p)) return 0;
  Integer y = x;
  return remove_p(y, p);
}

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  Integer n(p);
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

PadicScalar PadicScalar::zero(unsigned long p, long prec) {
  PadicScalar r;
  r.p_ = p;
  r.prec_ = clamp_prec(prec);
  r.val_ = r.prec_;
  r.unit_ = 0;
  return r;
}

PadicScalar PadicScalar::from_parts(unsigned long p, long val, Integer unit, long prec) {
  PadicScalar r;
  r.p_ = p;
  r.val_ = val;
  r.unit_ = std::move(unit);
  r.prec_ = clamp_prec(prec);
  r.normalize();
  return r;
}

PadicScalar PadicScalar::from_integer(unsigned long p, const Integer& n, long prec) {
  return from_parts(p, 0, n, prec);
}

PadicScalar PadicScalar::from_rational(unsigned long p, const Integer& num, const Integer& den,
                                       long prec) {
  if (den == 0) raise(Errc::InvalidArgument, "zero denominator");
  if (num == 0) return zero(p, prec);
  Integer d = den;
  long vd = remove_p(d, p);
  Integer n = num;
  long vn = remove_p(n, p);
  long val = vn - vd;
  if (val >= prec) return zero(p, prec);
  const Integer& m = ppow(p, prec - val);
  Integer inv;
  mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t());
  return from_parts(p, val, n * inv, prec);
}

void PadicScalar::normalize() {
  if (unit_ != 0) {
    val_ += remove_p(unit_, p_);
  }
  if (unit_ == 0 || val_ >= prec_) {
    unit_ = 0;
    val_ = prec_;
    return;
  }
  mpz_fdiv_r(unit_.get_mpz_t(), unit_.get_mpz_t(), ppow(p_, prec_ - val_).get_mpz_t());
}

long PadicScalar::valuation() const {
  if (is_zero()) raise(Errc::PrecisionExhausted, "scalar indistinguishable from zero");
  return val_;
}

PadicScalar PadicScalar::with_precision(long n) const {
  if (n >= prec_) return *this;
  return from_parts(p_, val_, unit_, n);
}

PadicScalar PadicScalar::lifted(long n) const {
  if (is_zero()) return zero(p_, n);
  return from_parts(p_, val_, unit_, n);
}

Integer PadicScalar::lift() const {
  if (is_zero()) return 0;
  if (val_ < 0) raise(Errc::NotIntegral, "scalar has negative valuation");
  return unit_ * ppow(p_, val_);
}

Integer PadicScalar::scaled(long k) const {
  if (is_zero()) return 0;
  if (val_ < k) raise(Errc::InternalError, "scaled() below valuation");
  return unit_ * ppow(p_, val_ - k);
}

bool PadicScalar::congruent(const PadicScalar& o, long n) const {
  PadicScalar d = (*this - o);
  return d.is_zero() || d.val_ >= n;
}

bool PadicScalar::equals_at_precision(const PadicScalar& o) const {
  PadicScalar d = (*this - o);
  return d.is_zero();
}

PadicScalar PadicScalar::operator-() const {
  PadicScalar r = *this;
  if (!is_zero()) {
    r.unit_ = ppow(p_, prec_ - val_) - unit_;
  }
  return r;
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
  long prec = std::min(prec_, o.prec_);
  if (is_zero() && o.is_zero()) return zero(p_, prec);
  if (is_zero() && o.val_ < prec_) return o.with_precision(prec);
  if (o.is_zero() && val_ < o.prec_) return with_precision(prec);
  long v = std::min(val_, o.val_);
  if (v >= prec) return zero(p_, prec);
  Integer s;
  if (val_ == v) {
    s = unit_;
  } else if (!is_zero()) {
    s = unit_ * ppow(p_, val_ - v);
  }
  if (o.val_ == v) {
    s += o.unit_;
  } else if (!o.is_zero()) {
    s += o.unit_ * ppow(p_, o.val_ - v);
  }
  return from_parts(p_, v, std::move(s), prec);
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const { return *this + (-o); }

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
  if (is_exact_zero() || o.is_exact_zero()) return exact_zero(p_);
  long prec = std::min(prec_ + o.val_, o.prec_ + val_);
  if (is_zero() || o.is_zero()) return zero(p_, prec);
  return from_parts(p_, val_ + o.val_, unit_ * o.unit_, prec);
}

PadicScalar PadicScalar::inverse() const {
  if (is_zero()) raise(Errc::PrecisionExhausted, "inverse of a scalar indistinguishable from zero");
  long rel = prec_ - val_;
  Integer inv;
  mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), ppow(p_, rel).get_mpz_t());
  return from_parts(p_, -val_, std::move(inv), -val_ + rel);
}

PadicScalar PadicScalar::operator/(const PadicScalar& o) const {
  if (o.is_zero()) raise(Errc::PrecisionExhausted, "division by a scalar indistinguishable from zero");
  if (is_exact_zero()) return exact_zero(p_);
  if (is_zero()) return zero(p_, prec_ - o.val_);
  long rel = std::min(prec_ - val_, o.prec_ - o.val_);
  long val = val_ - o.val_;
  Integer inv;
  mpz_invert(inv.get_mpz_t(), o.unit_.get_mpz_t(), ppow(p_, rel).get_mpz_t());
  return from_parts(p_, val, unit_ * inv, val + rel);
}

PadicScalar PadicScalar::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  if (n == 0) return from_integer(p_, 1, is_zero() ? 0 : prec_ - val_);
  PadicScalar result;
  PadicScalar base = *this;
  bool first = true;
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

std::string PadicScalar::to_string() const {
  if (is_zero()) return "O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
  return std::to_string(p_) + "^" + std::to_string(val_) + "*" + unit_.get_str() + " + O(" +
         std::to_string(p_) + "^" + std::to_string(prec_) + ")";
}

void DotAccumulator::reset() {
  acc_ = 0;
  base_ = kExactPrec;
  prec_ = kExactPrec;
  any_ = false;
}

void DotAccumulator::add_raw(const Integer& u, long val, bool negate) {
  if (!any_) {
    base_ = val;
    any_ = true;
  } else if (val < base_) {
    acc_ *= ppow(p_, base_ - val);
    base_ = val;
  }
  if (val == base_) {
    if (negate) {
      acc_ -= u;
    } else {
      acc_ += u;
    }
  } else if (negate) {
    mpz_submul(acc_.get_mpz_t(), u.get_mpz_t(), ppow(p_, val - base_).get_mpz_t());
  } else {
    mpz_addmul(acc_.get_mpz_t(), u.get_mpz_t(), ppow(p_, val - base_).get_mpz_t());
  }
}

void DotAccumulator::add_product(const PadicScalar& a, const PadicScalar& b) {
  if (a.is_exact_zero() || b.is_exact_zero()) return;
  long pr = std::min(a.precision() + b.val_floor(), b.precision() + a.val_floor());
  prec_ = std::min(prec_, pr);
  if (a.is_zero() || b.is_zero()) return;
  long val = a.val_floor() + b.val_floor();
  if (val >= prec_) return;
  if (!any_) {
    base_ = val;
    any_ = true;
    mpz_mul(acc_.get_mpz_t(), a.unit().get_mpz_t(), b.unit().get_mpz_t());
    return;
  }
  if (val < base_) {
    acc_ *= ppow(p_, base_ - val);
    base_ = val;
  }
  if (val == base_) {
    mpz_addmul(acc_.get_mpz_t(), a.unit().get_mpz_t(), b.unit().get_mpz_t());
  } else {
    mpz_mul(tmp_.get_mpz_t(), a.unit().get_mpz_t(), b.unit().get_mpz_t());
    mpz_addmul(acc_.get_mpz_t(), tmp_.get_mpz_t(), ppow(p_, val - base_).get_mpz_t());
  }
}

void DotAccumulator::add(const PadicScalar& a) {
  if (a.is_exact_zero()) return;
  prec_ = std::min(prec_, a.precision());
  if (a.is_zero()) return;
  add_raw(a.unit(), a.val_floor(), false);
}

void DotAccumulator::sub(const PadicScalar& a) {
  if (a.is_exact_zero()) return;
  prec_ = std::min(prec_, a.precision());
  if (a.is_zero()) return;
  add_raw(a.unit(), a.val_floor(), true);
}

PadicScalar DotAccumulator::result() const {
  if (!any_ || base_ >= prec_) return PadicScalar::zero(p_, prec_);
  return PadicScalar::from_parts(p_, base_, acc_, prec_);
}

}  // namespace ltforge
