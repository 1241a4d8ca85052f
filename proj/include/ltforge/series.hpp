#pragma once

#include <functional>
#include <vector>

#include "ltforge/padic.hpp"

namespace ltforge {

// Truncated power series sum_{n<=D} c_n X^n over Q_p.
class Series1 {
 public:
  Series1() = default;
  Series1(unsigned long p, int D);  // all coefficients exact zeros
  Series1(unsigned long p, std::vector<PadicScalar> c);

  static Series1 identity(unsigned long p, int D, long prec);
  static Series1 monomial(unsigned long p, int D, int n, const PadicScalar& a);

  unsigned long prime() const { return p_; }
  int degree() const { return D_; }
  const PadicScalar& operator[](int n) const { return c_[static_cast<size_t>(n)]; }
  PadicScalar& operator[](int n) { return c_[static_cast<size_t>(n)]; }
  const std::vector<PadicScalar>& coeffs() const { return c_; }

  Series1 truncated(int D) const;
  // Highest index with a coefficient that is not an exact zero.
  int support_degree() const;
  long min_precision() const;
  bool is_integral() const;
  bool has_zero_constant() const;

  Series1 operator+(const Series1& o) const;
  Series1 operator-(const Series1& o) const;
  Series1 operator*(const Series1& o) const;
  Series1 operator*(const PadicScalar& a) const;
  Series1 operator-() const;

  bool equals_at_precision(const Series1& o) const;
  // First index where the two series differ at the available precision, or -1.
  int first_mismatch(const Series1& o) const;

 private:
  unsigned long p_ = 0;
  int D_ = 0;
  std::vector<PadicScalar> c_;
};

// Truncated series in X, Y, stored by total degree: index m(m+1)/2 + j for X^(m-j) Y^j.
class Series2 {
 public:
  Series2() = default;
  Series2(unsigned long p, int D);

  static size_t index(int i, int j) {
    size_t m = static_cast<size_t>(i + j);
    return m * (m + 1) / 2 + static_cast<size_t>(j);
  }
  static Series2 x_plus_y(unsigned long p, int D, long prec);

  unsigned long prime() const { return p_; }
  int degree() const { return D_; }
  const PadicScalar& at(int i, int j) const { return c_[index(i, j)]; }
  PadicScalar& at(int i, int j) { return c_[index(i, j)]; }
  const std::vector<PadicScalar>& coeffs() const { return c_; }
  std::vector<PadicScalar>& coeffs() { return c_; }

  Series2 truncated(int D) const;
  Series2 swapped() const;
  bool is_integral() const;
  long min_precision() const;

  Series2 operator+(const Series2& o) const;
  Series2 operator-(const Series2& o) const;
  Series2 operator*(const Series2& o) const;
  Series2 operator*(const PadicScalar& a) const;

  bool equals_at_precision(const Series2& o) const;

 private:
  unsigned long p_ = 0;
  int D_ = 0;
  std::vector<PadicScalar> c_;
};

// Table of powers P^1..P^K truncated at degree D; power k starts at degree k.
class PowerTable {
 public:
  PowerTable() = default;
  PowerTable(const Series1& s, int K);
  const Series1& power(int k) const { return pow_[static_cast<size_t>(k - 1)]; }
  int count() const { return static_cast<int>(pow_.size()); }
  // acc += a * (P^k)_m, with P^0 = 1
  void accumulate(DotAccumulator& acc, const PadicScalar& a, int k, int m) const;

 private:
  std::vector<Series1> pow_;
};

Series1 compose1(const Series1& outer, const Series1& inner);
Series1 substitute2(const Series2& F, const Series1& g, const Series1& h);
// F(g(X), h(Y))
Series2 substitute2_bivariate(const Series2& F, const Series1& g, const Series1& h);
// outer(F(X, Y))
Series2 compose_outer(const Series1& outer, const Series2& F);
// Smallest total degree <= D at which F(F(X,Y),Z) and F(X,F(Y,Z)) differ at the
// available precision, or -1 when they agree through degree D.
int associativity_defect(const Series2& F, int D);

struct SolveOptions {
  bool require_integral = true;
  long precision_floor = 8;
};

// Residual callback: given the coefficients solved so far and degree m, return the
// degree-m mismatch R_m; the solver sets c_m = R_m / (pi^m - pi).
using Residual1 = std::function<PadicScalar(const Series1&, int)>;
Series1 solve_coefficientwise(const Series1& start, int from, const PadicScalar& pi,
                              const Residual1& residual, const SolveOptions& opts);

// Bivariate version: the callback fills the whole degree-m slice (length m+1, by j).
using Residual2 = std::function<std::vector<PadicScalar>(const Series2&, int)>;
Series2 solve_coefficientwise2(const Series2& start, int from, const PadicScalar& pi,
                               const Residual2& residual, const SolveOptions& opts);

// Powers of a series computed one degree at a time, for solvers in which the series is
// only known up to the current degree. pow(n, m) is the X^m coefficient of S^n.
class OnlinePowers {
 public:
  OnlinePowers(unsigned long p, int D, int max_power);
  // Compute the degree-m coefficients of S^2..S^max from s_1..s_{m-1}.
  void advance(const Series1& s, int m);
  // Record s_m as the degree-m coefficient of S^1.
  void set_linear(const Series1& s, int m);
  const PadicScalar& pow(int n, int m) const { return table_[static_cast<size_t>(n)][static_cast<size_t>(m)]; }
  int max_power() const { return max_; }

 private:
  unsigned long p_;
  int D_;
  int max_;
  std::vector<std::vector<PadicScalar>> table_;
};

}  // namespace ltforge
