#include "ltforge/series.hpp"

#include <algorithm>

namespace ltforge {

namespace {

struct Term {
  int i;
  int j;
  const PadicScalar* c;
};

std::vector<Term> support1(const Series1& s) {
  std::vector<Term> out;
  for (int n = 0; n <= s.degree(); ++n)
    if (!s[n].is_exact_zero()) out.push_back({n, 0, &s[n]});
  return out;
}

std::vector<Term> support2(const Series2& s) {
  std::vector<Term> out;
  for (int m = 0; m <= s.degree(); ++m)
    for (int j = 0; j <= m; ++j)
      if (!s.at(m - j, j).is_exact_zero()) out.push_back({m - j, j, &s.at(m - j, j)});
  return out;
}

void check_prime(unsigned long a, unsigned long b) {
  if (a != b) raise(Errc::InvalidArgument, "series over different primes");
}

// A zero constant term, possibly an inexact zero, replaced by an exact one.
Series1 strip_constant(const Series1& s) {
  if (!s[0].is_zero()) raise(Errc::NonzeroConstantTerm, "inner series has a nonzero constant term");
  Series1 r = s;
  r[0] = PadicScalar::exact_zero(s.prime());
  return r;
}

}  // namespace

Series1::Series1(unsigned long p, int D)
    : p_(p), D_(D), c_(static_cast<size_t>(D + 1), PadicScalar::exact_zero(p)) {}

Series1::Series1(unsigned long p, std::vector<PadicScalar> c)
    : p_(p), D_(static_cast<int>(c.size()) - 1), c_(std::move(c)) {
  if (c_.empty()) raise(Errc::InvalidArgument, "empty series");
}

Series1 Series1::identity(unsigned long p, int D, long prec) {
  return monomial(p, D, 1, PadicScalar::from_integer(p, 1, prec));
}

Series1 Series1::monomial(unsigned long p, int D, int n, const PadicScalar& a) {
  Series1 s(p, D);
  if (n <= D) s[n] = a;
  return s;
}

Series1 Series1::truncated(int D) const {
  Series1 r(p_, D);
  for (int n = 0; n <= std::min(D, D_); ++n) r[n] = c_[static_cast<size_t>(n)];
  return r;
}

int Series1::support_degree() const {
  for (int n = D_; n >= 0; --n)
    if (!c_[static_cast<size_t>(n)].is_exact_zero()) return n;
  return -1;
}

long Series1::min_precision() const {
  long r = kExactPrec;
  for (const auto& c : c_) r = std::min(r, c.precision());
  return r;
}

bool Series1::is_integral() const {
  return std::all_of(c_.begin(), c_.end(), [](const PadicScalar& c) { return c.val_floor() >= 0; });
}

bool Series1::has_zero_constant() const { return c_[0].is_zero(); }

Series1 Series1::operator+(const Series1& o) const {
  check_prime(p_, o.p_);
  Series1 r(p_, std::min(D_, o.D_));
  for (int n = 0; n <= r.D_; ++n) r[n] = (*this)[n] + o[n];
  return r;
}

Series1 Series1::operator-(const Series1& o) const {
  check_prime(p_, o.p_);
  Series1 r(p_, std::min(D_, o.D_));
  for (int n = 0; n <= r.D_; ++n) r[n] = (*this)[n] - o[n];
  return r;
}

Series1 Series1::operator-() const {
  Series1 r(p_, D_);
  for (int n = 0; n <= D_; ++n) r[n] = -(*this)[n];
  return r;
}

Series1 Series1::operator*(const Series1& o) const {
  check_prime(p_, o.p_);
  int D = std::min(D_, o.D_);
  auto a = support1(*this);
  Series1 r(p_, D);
  DotAccumulator acc(p_);
  for (int m = 0; m <= D; ++m) {
    acc.reset();
    for (const auto& t : a) {
      if (t.i > m) break;
      acc.add_product(*t.c, o[m - t.i]);
    }
    r[m] = acc.result();
  }
  return r;
}

Series1 Series1::operator*(const PadicScalar& a) const {
  Series1 r(p_, D_);
  for (int n = 0; n <= D_; ++n)
    r[n] = (c_[static_cast<size_t>(n)].is_exact_zero() || a.is_exact_zero())
               ? PadicScalar::exact_zero(p_)
               : c_[static_cast<size_t>(n)] * a;
  return r;
}

bool Series1::equals_at_precision(const Series1& o) const { return first_mismatch(o) < 0; }

int Series1::first_mismatch(const Series1& o) const {
  int D = std::min(D_, o.D_);
  for (int n = 0; n <= D; ++n)
    if (!(*this)[n].equals_at_precision(o[n])) return n;
  return -1;
}

Series2::Series2(unsigned long p, int D)
    : p_(p), D_(D), c_(index(0, D + 1), PadicScalar::exact_zero(p)) {}

Series2 Series2::x_plus_y(unsigned long p, int D, long prec) {
  Series2 s(p, D);
  if (D >= 1) {
    s.at(1, 0) = PadicScalar::from_integer(p, 1, prec);
    s.at(0, 1) = PadicScalar::from_integer(p, 1, prec);
  }
  return s;
}

Series2 Series2::truncated(int D) const {
  Series2 r(p_, D);
  for (int m = 0; m <= std::min(D, D_); ++m)
    for (int j = 0; j <= m; ++j) r.at(m - j, j) = at(m - j, j);
  return r;
}

Series2 Series2::swapped() const {
  Series2 r(p_, D_);
  for (int m = 0; m <= D_; ++m)
    for (int j = 0; j <= m; ++j) r.at(j, m - j) = at(m - j, j);
  return r;
}

bool Series2::is_integral() const {
  return std::all_of(c_.begin(), c_.end(), [](const PadicScalar& c) { return c.val_floor() >= 0; });
}

long Series2::min_precision() const {
  long r = kExactPrec;
  for (const auto& c : c_) r = std::min(r, c.precision());
  return r;
}

Series2 Series2::operator+(const Series2& o) const {
  check_prime(p_, o.p_);
  Series2 r(p_, std::min(D_, o.D_));
  for (size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = c_[k] + o.c_[k];
  return r;
}

Series2 Series2::operator-(const Series2& o) const {
  check_prime(p_, o.p_);
  Series2 r(p_, std::min(D_, o.D_));
  for (size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = c_[k] - o.c_[k];
  return r;
}

Series2 Series2::operator*(const Series2& o) const {
  check_prime(p_, o.p_);
  int D = std::min(D_, o.D_);
  auto a = support2(*this);
  Series2 r(p_, D);
  DotAccumulator acc(p_);
  for (int m = 0; m <= D; ++m) {
    for (int j = 0; j <= m; ++j) {
      int i = m - j;
      acc.reset();
      for (const auto& t : a) {
        if (t.i + t.j > m) break;
        if (t.i > i || t.j > j) continue;
        acc.add_product(*t.c, o.at(i - t.i, j - t.j));
      }
      r.at(i, j) = acc.result();
    }
  }
  return r;
}

Series2 Series2::operator*(const PadicScalar& a) const {
  Series2 r(p_, D_);
  for (size_t k = 0; k < c_.size(); ++k)
    r.c_[k] = (c_[k].is_exact_zero() || a.is_exact_zero()) ? PadicScalar::exact_zero(p_) : c_[k] * a;
  return r;
}

bool Series2::equals_at_precision(const Series2& o) const {
  size_t n = std::min(c_.size(), o.c_.size());
  for (size_t k = 0; k < n; ++k)
    if (!c_[k].equals_at_precision(o.c_[k])) return false;
  return true;
}

PowerTable::PowerTable(const Series1& s, int K) {
  Series1 base = strip_constant(s);
  pow_.reserve(static_cast<size_t>(std::max(K, 0)));
  for (int k = 1; k <= K; ++k) pow_.push_back(k == 1 ? base : pow_.back() * base);
}

void PowerTable::accumulate(DotAccumulator& acc, const PadicScalar& a, int k, int m) const {
  if (k == 0) {
    if (m == 0) acc.add(a);
    return;
  }
  if (m >= k) acc.add_product(a, power(k)[m]);
}

Series1 compose1(const Series1& outer, const Series1& inner) {
  check_prime(outer.prime(), inner.prime());
  int D = std::min(outer.degree(), inner.degree());
  int K = std::min(D, outer.support_degree());
  Series1 r(outer.prime(), D);
  if (K < 0) return r;
  PowerTable pw(inner.truncated(D), K);
  DotAccumulator acc(outer.prime());
  for (int m = 0; m <= D; ++m) {
    acc.reset();
    for (int n = 0; n <= std::min(m, K); ++n) pw.accumulate(acc, outer[n], n, m);
    r[m] = acc.result();
  }
  return r;
}

Series1 substitute2(const Series2& F, const Series1& g, const Series1& h) {
  check_prime(F.prime(), g.prime());
  int D = std::min({F.degree(), g.degree(), h.degree()});
  unsigned long p = F.prime();
  PowerTable gp(g.truncated(D), D);
  PowerTable hp(h.truncated(D), D);
  Series1 r(p, D);
  DotAccumulator acc(p);
  // inner_i = sum_j F_ij h^j, then r = sum_i g^i inner_i
  for (int i = 0; i <= D; ++i) {
    Series1 inner(p, D - i);
    bool any = false;
    for (int m = 0; m <= D - i; ++m) {
      acc.reset();
      for (int j = 0; j <= std::min(m, D - i); ++j) hp.accumulate(acc, F.at(i, j), j, m);
      inner[m] = acc.result();
      any = any || !inner[m].is_exact_zero();
    }
    if (!any) continue;
    for (int m = i; m <= D; ++m) {
      acc.reset();
      for (int k = i; k <= m; ++k) {
        if (i == 0) {
          if (k == 0) acc.add(inner[m]);
        } else {
          acc.add_product(gp.power(i)[k], inner[m - k]);
        }
      }
      acc.add(r[m]);
      r[m] = acc.result();
    }
  }
  return r;
}

Series2 substitute2_bivariate(const Series2& F, const Series1& g, const Series1& h) {
  int D = std::min({F.degree(), g.degree(), h.degree()});
  unsigned long p = F.prime();
  PowerTable gp(g.truncated(D), D);
  PowerTable hp(h.truncated(D), D);
  // T[i][b] = sum_j F_ij (h^j)_b for i + b <= D
  std::vector<std::vector<PadicScalar>> T(static_cast<size_t>(D + 1));
  DotAccumulator acc(p);
  for (int i = 0; i <= D; ++i) {
    auto& row = T[static_cast<size_t>(i)];
    row.assign(static_cast<size_t>(D - i + 1), PadicScalar::exact_zero(p));
    for (int b = 0; b <= D - i; ++b) {
      acc.reset();
      for (int j = 0; j <= b; ++j) hp.accumulate(acc, F.at(i, j), j, b);
      row[static_cast<size_t>(b)] = acc.result();
    }
  }
  Series2 r(p, D);
  for (int m = 0; m <= D; ++m) {
    for (int b = 0; b <= m; ++b) {
      int a = m - b;
      acc.reset();
      for (int i = 0; i <= a; ++i) {
        const auto& t = T[static_cast<size_t>(i)][static_cast<size_t>(b)];
        if (i == 0) {
          if (a == 0) acc.add(t);
        } else {
          acc.add_product(gp.power(i)[a], t);
        }
      }
      r.at(a, b) = acc.result();
    }
  }
  return r;
}

Series2 compose_outer(const Series1& outer, const Series2& F) {
  int D = std::min(outer.degree(), F.degree());
  unsigned long p = F.prime();
  if (!F.at(0, 0).is_zero()) raise(Errc::NonzeroConstantTerm, "inner series has a nonzero constant term");
  Series2 base = F.truncated(D);
  base.at(0, 0) = PadicScalar::exact_zero(p);
  int K = std::min(D, outer.support_degree());
  Series2 r(p, D);
  if (K < 0) return r;
  r.at(0, 0) = outer[0];
  Series2 pw = base;
  for (int n = 1; n <= K; ++n) {
    if (n > 1) pw = pw * base;
    if (outer[n].is_exact_zero()) continue;
    r = r + pw * outer[n];
  }
  return r;
}

int associativity_defect(const Series2& F, int D) {
  D = std::min(D, F.degree());
  unsigned long p = F.prime();
  Series2 base = F.truncated(D);
  // powers of F(X,Y) as bivariate series
  std::vector<Series2> pw(1);
  for (int n = 1; n <= D; ++n) pw.push_back(n == 1 ? base : pw.back() * base);
  auto term = [&](DotAccumulator& acc, const PadicScalar& c, int n, int i, int j) {
    if (n == 0) {
      if (i == 0 && j == 0) acc.add(c);
    } else {
      acc.add_product(c, pw[static_cast<size_t>(n)].at(i, j));
    }
  };
  DotAccumulator lhs(p), rhs(p);
  for (int m = 0; m <= D; ++m) {
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; i + j <= m; ++j) {
        int k = m - i - j;
        // F(F(X,Y),Z): sum_a F_{a,k} (F^a)_{i,j};  F(X,F(Y,Z)): sum_b F_{i,b} (F^b)_{j,k}
        lhs.reset();
        rhs.reset();
        for (int a = 0; a <= i + j; ++a) term(lhs, base.at(a, k), a, i, j);
        for (int b = 0; b <= j + k; ++b) term(rhs, base.at(i, b), b, j, k);
        if (!lhs.result().equals_at_precision(rhs.result())) return m;
      }
    }
  }
  return -1;
}

namespace {

PadicScalar solve_step(const PadicScalar& R, const PadicScalar& pi, int m, const SolveOptions& opts,
                       const char* what) {
  PadicScalar denom = pi.pow(m) - pi;
  PadicScalar c = R / denom;
  if (c.is_zero()) {
    if (c.precision() < opts.precision_floor)
      raise(Errc::PrecisionExhausted, std::string(what) + ": precision exhausted at degree " + std::to_string(m));
    return c;
  }
  if (c.relative_precision() < opts.precision_floor)
    raise(Errc::PrecisionExhausted, std::string(what) + ": precision exhausted at degree " + std::to_string(m));
  if (opts.require_integral && c.valuation() < 0)
    raise(Errc::NonIntegralCoefficient,
          std::string(what) + ": non-integral coefficient at degree " + std::to_string(m));
  return c;
}

}  // namespace

Series1 solve_coefficientwise(const Series1& start, int from, const PadicScalar& pi,
                              const Residual1& residual, const SolveOptions& opts) {
  Series1 s = start;
  for (int m = std::max(from, 2); m <= s.degree(); ++m) s[m] = solve_step(residual(s, m), pi, m, opts, "series");
  return s;
}

Series2 solve_coefficientwise2(const Series2& start, int from, const PadicScalar& pi,
                               const Residual2& residual, const SolveOptions& opts) {
  Series2 s = start;
  for (int m = std::max(from, 2); m <= s.degree(); ++m) {
    auto R = residual(s, m);
    if (static_cast<int>(R.size()) != m + 1) raise(Errc::InternalError, "residual slice has the wrong length");
    for (int j = 0; j <= m; ++j) s.at(m - j, j) = solve_step(R[static_cast<size_t>(j)], pi, m, opts, "bivariate series");
  }
  return s;
}

OnlinePowers::OnlinePowers(unsigned long p, int D, int max_power)
    : p_(p), D_(D), max_(max_power),
      table_(static_cast<size_t>(max_power + 1),
             std::vector<PadicScalar>(static_cast<size_t>(D + 1), PadicScalar::exact_zero(p))) {
}

void OnlinePowers::advance(const Series1& s, int m) {
  DotAccumulator acc(p_);
  for (int n = 2; n <= std::min(max_, m); ++n) {
    acc.reset();
    for (int k = 1; k <= m - (n - 1); ++k)
      acc.add_product(s[k], table_[static_cast<size_t>(n - 1)][static_cast<size_t>(m - k)]);
    table_[static_cast<size_t>(n)][static_cast<size_t>(m)] = acc.result();
  }
}

void OnlinePowers::set_linear(const Series1& s, int m) {
  if (max_ >= 1) table_[1][static_cast<size_t>(m)] = s[m];
}

}  // namespace ltforge
