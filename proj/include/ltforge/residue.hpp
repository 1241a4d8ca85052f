#pragma once

#include <cstdint>
#include <vector>

namespace ltforge {

// Polynomials over F_p, constant term first.
using FpPoly = std::vector<unsigned long>;

void fp_trim(FpPoly& a);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b, unsigned long p);
FpPoly fp_mod(FpPoly a, const FpPoly& m, unsigned long p);
FpPoly fp_gcd(FpPoly a, FpPoly b, unsigned long p);
unsigned long fp_inv(unsigned long a, unsigned long p);
bool fp_is_irreducible(const FpPoly& g, unsigned long p);

// First monic irreducible of degree f, ordering by the coefficient vector read
// as a base-p integer with the constant term least significant.
FpPoly default_modulus(unsigned long p, int f);

// The finite field F_p[X]/(g); elements are coefficient vectors of length f.
class ResidueField {
 public:
  using Elem = std::vector<unsigned long>;

  ResidueField() = default;
  ResidueField(unsigned long p, FpPoly modulus);

  unsigned long p() const { return p_; }
  int degree() const { return f_; }
  unsigned long size() const { return size_; }
  const FpPoly& modulus() const { return g_; }

  Elem zero() const { return Elem(f_, 0); }
  Elem one() const;
  Elem gen() const;
  bool is_zero(const Elem& a) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem scale(const Elem& a, unsigned long c) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(Elem a, unsigned long long n) const;
  Elem inv(const Elem& a) const;

  // Elements in base-p order of their coordinate vectors.
  Elem from_index(unsigned long idx) const;
  unsigned long index(const Elem& a) const;

 private:
  unsigned long p_ = 0;
  int f_ = 0;
  unsigned long size_ = 0;
  FpPoly g_;
};

}  // namespace ltforge
