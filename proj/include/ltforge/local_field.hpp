#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ltforge/padic.hpp"
#include "ltforge/residue.hpp"

namespace ltforge {

// Elements of the unramified ring Z[X]/(g~), constant term first, length f.
using UVec = std::vector<Integer>;

struct TowerSpec {
  unsigned long p = 0;
  int f = 1;
  int e = 1;
  FpPoly unram;                 // monic over F_p, degree f; empty selects default_modulus
  std::vector<UVec> eis;        // a_0..a_e over the unramified ring; empty selects X^e - p
  long N = 64;
};

struct Tower {
  unsigned long p;
  int f;
  int e;
  long N;
  FpPoly unram;
  UVec gtilde;                  // integer lift of unram, length f+1, monic
  std::vector<UVec> eis;        // monic, length e+1
  std::vector<bool> eis_nonzero;
  ResidueField k;
  std::vector<UVec> teich;      // Teichmuller lifts of 1, z, ..., z^(f-1)
  ResidueField::Elem neg_a0_over_p;  // residue of -a_0/p
  ResidueField::Elem neg_a0_over_p_inv;
};

class LocalField {
 public:
  LocalField() = default;
  explicit LocalField(std::shared_ptr<const Tower> t) : t_(std::move(t)) {}

  const Tower& tower() const { return *t_; }
  unsigned long p() const { return t_->p; }
  int f() const { return t_->f; }
  int e() const { return t_->e; }
  int degree() const { return t_->e * t_->f; }
  long default_precision() const { return t_->N; }
  const ResidueField& residue_field() const { return t_->k; }
  bool valid() const { return static_cast<bool>(t_); }

  LocalField with_precision(long N) const;
  bool same_field(const LocalField& o) const;
  std::string describe() const;

  // unramified ring arithmetic
  UVec umul(const UVec& a, const UVec& b) const;
  void ureduce_mod(UVec& a, long k) const;

 private:
  std::shared_ptr<const Tower> t_;
};

LocalField make_tower(const TowerSpec& spec);
LocalField make_tower(unsigned long p, int f, int e, long N = 64);

// x = p^shift * sum c[j*f+i] zeta^i varpi^j, known modulo varpi^prec.
class FieldElement {
 public:
  FieldElement() = default;

  static FieldElement zero(const LocalField& F, long prec);
  static FieldElement one(const LocalField& F, long prec);
  static FieldElement from_integer(const LocalField& F, const Integer& n, long prec);
  static FieldElement from_scalar(const LocalField& F, const PadicScalar& a, long prec);
  static FieldElement uniformizer(const LocalField& F, long prec);
  // the generator of the unramified ring, a root of the lifted modulus
  static FieldElement generator(const LocalField& F, long prec);
  // Teichmuller lift zeta_i of the i-th residue basis vector (i = 0..f-1)
  static FieldElement teichmuller(const LocalField& F, int i, long prec);
  static FieldElement from_coeffs(const LocalField& F, long shift, std::vector<Integer> c,
                                  long prec);
  static FieldElement from_coordinates(const LocalField& F, const std::vector<PadicScalar>& xs,
                                       long prec);

  const LocalField& field() const { return F_; }
  long precision() const { return prec_; }
  long shift() const { return shift_; }
  const std::vector<Integer>& coeffs() const { return c_; }

  bool is_zero() const { return zero_; }
  long valuation() const;
  // valuation, or the precision when indistinguishable from zero
  long val_floor() const { return val_; }

  // coordinate of zeta^i varpi^j as a p-adic scalar with its own precision
  PadicScalar coordinate(int i, int j) const;
  std::vector<PadicScalar> coordinates() const;

  FieldElement with_precision(long n) const;
  FieldElement lifted(long n) const;

  FieldElement operator-() const;
  FieldElement operator+(const FieldElement& y) const;
  FieldElement operator-(const FieldElement& y) const;
  FieldElement operator*(const FieldElement& y) const;
  FieldElement operator/(const FieldElement& y) const;
  FieldElement operator*(const PadicScalar& a) const;
  FieldElement operator*(const Integer& a) const;
  FieldElement& operator+=(const FieldElement& y) { return *this = *this + y; }
  FieldElement& operator-=(const FieldElement& y) { return *this = *this - y; }
  FieldElement& operator*=(const FieldElement& y) { return *this = *this * y; }

  FieldElement inverse() const;
  FieldElement pow(long n) const;
  FieldElement mul_varpi_power(long k) const;

  bool equals_mod(const FieldElement& y, long n) const;
  bool operator==(const FieldElement& y) const;
  bool operator!=(const FieldElement& y) const { return !(*this == y); }

  std::string to_string() const;

 private:
  void normalize();

  LocalField F_;
  long shift_ = 0;
  std::vector<Integer> c_;
  long prec_ = 0;
  long val_ = 0;
  bool zero_ = true;
};

// Coordinates (c_1..c_f) over F_p with x = sum c_i zeta_i varpi^j mod varpi^(j+1).
ResidueField::Elem residue_decompose(const FieldElement& x, long j);
// Like residue_decompose but returns zero when v(x) > j.
ResidueField::Elem residue_at_level(const FieldElement& x, long j);
FieldElement lift_residue(const LocalField& F, const ResidueField::Elem& coords, long j, long prec);

}  // namespace ltforge
