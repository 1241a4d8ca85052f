#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "ltforge/local_field.hpp"
#include "ltforge/series.hpp"

namespace ltforge {

struct ContextOptions {
  int D = 128;
  long N = 64;
  // p-adic digits carried by every series coefficient
  long series_precision() const { return N + D + 16; }
};

// A validated Lubin-Tate series [pi](X) over Z_p with its formal group, logarithm,
// exponential and endomorphisms, all truncated at degree D.
class LTContext {
 public:
  enum class Kind { Basic, Multiplicative, Custom };

  // X^p + pi X with pi = unit * p
  static std::shared_ptr<const LTContext> basic(unsigned long p, const ContextOptions& opts = {},
                                                const Integer& unit = 1);
  // (1+X)^p - 1, pi = p
  static std::shared_ptr<const LTContext> multiplicative(unsigned long p,
                                                         const ContextOptions& opts = {});
  // pi is read off the linear coefficient
  static std::shared_ptr<const LTContext> custom(const Series1& s, bool polynomial,
                                                 const ContextOptions& opts = {});

  Kind kind() const { return kind_; }
  std::string kind_name() const;
  unsigned long p() const { return p_; }
  unsigned long q() const { return p_; }
  int degree() const { return D_; }
  long precision() const { return prec_; }
  const ContextOptions& options() const { return opts_; }
  const PadicScalar& pi() const { return pi_; }
  bool is_polynomial() const { return polynomial_; }

  const Series1& lt_series() const { return series_; }
  const Series1& log_series() const { return log_; }
  const Series1& exp_series() const { return exp_; }
  // powers [pi](X)^k, k = 1..D
  const PowerTable& lt_powers() const { return powers_; }
  // F(X,Y), solved on first use
  const Series2& fgl() const;
  // [a](X) for a in Z_p, memoized
  Series1 endo(const PadicScalar& a) const;
  Series1 endo(long a) const;
  Series1 iterate_pi(int n) const;

 private:
  LTContext() = default;
  void build();

  Kind kind_ = Kind::Custom;
  unsigned long p_ = 0;
  int D_ = 0;
  long prec_ = 0;
  ContextOptions opts_;
  PadicScalar pi_;
  bool polynomial_ = false;
  Series1 series_;
  Series1 log_;
  Series1 exp_;
  PowerTable powers_;

  mutable std::once_flag fgl_once_;
  mutable Series2 fgl_;
  mutable std::mutex endo_mu_;
  mutable std::map<std::string, std::shared_ptr<const Series1>> endo_cache_;
};

using Context = std::shared_ptr<const LTContext>;

// The series theta with dst(theta(X)) = theta(src(X)) and theta = X + O(X^2).
Series1 build_lt_morphism(const LTContext& src, const LTContext& dst);

// Value of an integral series (zero constant term) at x in m_L.
FieldElement eval_series(const Series1& s, const FieldElement& x);
FieldElement eval_series2(const Series2& F, const FieldElement& x, const FieldElement& y);

FieldElement apply_pi(const LTContext& ctx, const FieldElement& x);
FieldElement iterate_pi(const LTContext& ctx, const FieldElement& x, int n);
FieldElement fgl_add(const LTContext& ctx, const FieldElement& x, const FieldElement& y);
FieldElement endo_apply(const LTContext& ctx, const PadicScalar& a, const FieldElement& x);

// Smallest l >= 0 with q^l * v * (q-1) > e, i.e. [pi^l](x) lands in the convergence disc.
long ell_closed_form(unsigned long q, long e, long v);
// x lies in the disc where log and exp converge: v(x)(q-1) > e
bool in_disc(unsigned long q, long e, long v);

struct LogEvaluation {
  FieldElement value;
  long ell = 0;
  long series_precision = 0;
  long wiles_precision = 0;
  int wiles_depth = 0;
  int terms = 0;
};

LogEvaluation eval_log_detailed(const LTContext& ctx, const FieldElement& x);
FieldElement eval_log(const LTContext& ctx, const FieldElement& x);
FieldElement eval_exp(const LTContext& ctx, const FieldElement& x);

struct TorsionField {
  int level = 0;
  LocalField field;
  FieldElement lambda;
};

// K_{pi^n} as the Eisenstein tower of Q([pi^(n-1)](X)) with Q = [pi](X)/X; lambda = varpi.
TorsionField torsion_field(const LTContext& ctx, int n, long N);
// For any context: the tower of the basic context with the same pi, and lambda = theta(varpi).
TorsionField torsion_field_any(const LTContext& ctx, int n, long N);

}  // namespace ltforge
