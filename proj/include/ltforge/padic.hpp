#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "ltforge/error.hpp"

namespace ltforge {

using Integer = mpz_class;

// Precision carried by exact zeros (e.g. the coefficients of a polynomial
// past its degree). Nothing else ever reaches it.
inline constexpr long kExactPrec = 1L << 40;

const Integer& ppow(unsigned long p, long k);

// Strips factors of p from a nonzero x and returns how many were removed.
long remove_p(Integer& x, unsigned long p);
long vp(const Integer& x, unsigned long p);

bool is_prime(unsigned long p);

// An element of Q_p known modulo p^prec, stored as p^val * unit. The zero
// marker has unit 0 and val == prec.
class PadicScalar {
 public:
  PadicScalar() = default;

  static PadicScalar zero(unsigned long p, long prec);
  static PadicScalar exact_zero(unsigned long p) { return zero(p, kExactPrec); }
  static PadicScalar from_integer(unsigned long p, const Integer& n, long prec);
  static PadicScalar from_rational(unsigned long p, const Integer& num,
                                   const Integer& den, long prec);
  static PadicScalar from_parts(unsigned long p, long val, Integer unit, long prec);

  unsigned long prime() const { return p_; }
  bool is_zero() const { return unit_ == 0; }
  bool is_exact_zero() const { return is_zero() && prec_ >= kExactPrec; }
  long valuation() const;
  // valuation, or the precision for the zero marker
  long val_floor() const { return val_; }
  const Integer& unit() const { return unit_; }
  long precision() const { return prec_; }
  long relative_precision() const { return prec_ - val_; }

  bool is_integral() const { return val_ >= 0; }
  bool is_unit() const { return !is_zero() && val_ == 0; }

  PadicScalar with_precision(long n) const;
  // Treat the stored representative as exact and extend it to precision n.
  PadicScalar lifted(long n) const;

  // Representative p^val * unit as an integer; requires val >= 0.
  Integer lift() const;
  // The representative scaled by p^{-k}, i.e. the integer p^{val-k} * unit.
  Integer scaled(long k) const;

  bool congruent(const PadicScalar& o, long n) const;
  bool equals_at_precision(const PadicScalar& o) const;

  PadicScalar operator-() const;
  PadicScalar operator+(const PadicScalar& o) const;
  PadicScalar operator-(const PadicScalar& o) const;
  PadicScalar operator*(const PadicScalar& o) const;
  PadicScalar operator/(const PadicScalar& o) const;
  PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
  PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
  PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }
  PadicScalar pow(long n) const;
  PadicScalar inverse() const;

  // structural equality
  bool operator==(const PadicScalar& o) const {
    return p_ == o.p_ && val_ == o.val_ && prec_ == o.prec_ && unit_ == o.unit_;
  }
  bool operator!=(const PadicScalar& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  void normalize();

  unsigned long p_ = 0;
  long val_ = 0;
  Integer unit_;
  long prec_ = 0;
};

// Sum of products of p-adic scalars with one big-integer accumulator at a
// common power of p. Precision is the minimum over the contributing terms.
class DotAccumulator {
 public:
  explicit DotAccumulator(unsigned long p) : p_(p) {}

  void add_product(const PadicScalar& a, const PadicScalar& b);
  void add(const PadicScalar& a);
  void sub(const PadicScalar& a);
  void reset();
  PadicScalar result() const;

 private:
  void add_raw(const Integer& u, long val, bool negate);

  unsigned long p_;
  Integer acc_;
  Integer tmp_;
  long base_ = kExactPrec;
  long prec_ = kExactPrec;
  bool any_ = false;
};

}  // namespace ltforge
