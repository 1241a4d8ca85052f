#include "ltforge/residue.hpp"

#include "ltforge/error.hpp"

namespace ltforge {

namespace {

using u128 = unsigned __int128;

unsigned long mulmod(unsigned long a, unsigned long b, unsigned long p) {
  return static_cast<unsigned long>((static_cast<u128>(a) * b) % p);
}

FpPoly fp_sub(FpPoly a, const FpPoly& b, unsigned long p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  fp_trim(a);
  return a;
}

FpPoly fp_powmod_x(unsigned long long n, const FpPoly& m, unsigned long p) {
  FpPoly result{1};
  FpPoly base{0, 1};
  base = fp_mod(base, m, p);
  while (n > 0) {
    if (n & 1) result = fp_mod(fp_mul(result, base, p), m, p);
    n >>= 1;
    if (n) base = fp_mod(fp_mul(base, base, p), m, p);
  }
  return result;
}

// X^(p^k) mod m by repeated p-th powering
FpPoly frobenius_power(int k, const FpPoly& m, unsigned long p) {
  FpPoly x = fp_powmod_x(1, m, p);
  for (int i = 0; i < k; ++i) {
    FpPoly r{1};
    FpPoly base = x;
    unsigned long long n = p;
    while (n > 0) {
      if (n & 1) r = fp_mod(fp_mul(r, base, p), m, p);
      n >>= 1;
      if (n) base = fp_mod(fp_mul(base, base, p), m, p);
    }
    x = r;
  }
  return x;
}

}  // namespace

void fp_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, unsigned long p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  fp_trim(r);
  return r;
}

unsigned long fp_inv(unsigned long a, unsigned long p) {
  a %= p;
  if (a == 0) raise(Errc::InternalError, "inverse of zero in F_p");
  unsigned long r = 1, base = a, n = p - 2;
  while (n > 0) {
    if (n & 1) r = mulmod(r, base, p);
    base = mulmod(base, base, p);
    n >>= 1;
  }
  return r;
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, unsigned long p) {
  FpPoly mm = m;
  fp_trim(mm);
  fp_trim(a);
  if (mm.empty()) raise(Errc::InternalError, "polynomial reduction by zero");
  unsigned long lead_inv = fp_inv(mm.back(), p);
  size_t dm = mm.size() - 1;
  while (a.size() > dm && !a.empty()) {
    unsigned long c = mulmod(a.back(), lead_inv, p);
    size_t shift = a.size() - 1 - dm;
    for (size_t i = 0; i <= dm; ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod(c, mm[i], p)) % p;
    }
    fp_trim(a);
  }
  return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, unsigned long p) {
  fp_trim(a);
  fp_trim(b);
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    unsigned long li = fp_inv(a.back(), p);
    for (auto& c : a) c = mulmod(c, li, p);
  }
  return a;
}

bool fp_is_irreducible(const FpPoly& g0, unsigned long p) {
  FpPoly g = g0;
  fp_trim(g);
  if (g.size() < 2) return false;
  int f = static_cast<int>(g.size()) - 1;
  if (f == 1) return true;
  // Rabin: X^(p^f) = X mod g and gcd(X^(p^(f/r)) - X, g) = 1 for primes r | f
  FpPoly x{0, 1};
  FpPoly xf = frobenius_power(f, g, p);
  if (fp_sub(xf, fp_mod(x, g, p), p).size() != 0) return false;
  int n = f;
  for (int r = 2; r <= n; ++r) {
    if (n % r) continue;
    while (n % r == 0) n /= r;
    FpPoly h = fp_sub(frobenius_power(f / r, g, p), fp_mod(x, g, p), p);
    FpPoly d = fp_gcd(g, h, p);
    if (d.size() != 1) return false;
  }
  return true;
}

FpPoly default_modulus(unsigned long p, int f) {
  if (f == 1) return {0, 1};
  for (unsigned long long idx = 0;; ++idx) {
    FpPoly g(f + 1, 0);
    g[f] = 1;
    unsigned long long t = idx;
    for (int i = 0; i < f; ++i) {
      g[i] = t % p;
      t /= p;
    }
    if (t != 0) break;
    if (fp_is_irreducible(g, p)) return g;
  }
  raise(Errc::InternalError, "no irreducible polynomial found");
}

ResidueField::ResidueField(unsigned long p, FpPoly modulus) : p_(p), g_(std::move(modulus)) {
  fp_trim(g_);
  f_ = static_cast<int>(g_.size()) - 1;
  size_ = 1;
  for (int i = 0; i < f_; ++i) size_ *= p_;
}

ResidueField::Elem ResidueField::one() const {
  Elem r(f_, 0);
  r[0] = 1;
  return r;
}

ResidueField::Elem ResidueField::gen() const {
  Elem r(f_, 0);
  if (f_ > 1) {
    r[1] = 1;
  } else {
    // F_p: the generator X is the root of X - c, i.e. c = -g_0
    r[0] = (p_ - g_[0] % p_) % p_;
  }
  return r;
}

bool ResidueField::is_zero(const Elem& a) const {
  for (auto c : a)
    if (c) return false;
  return true;
}

ResidueField::Elem ResidueField::add(const Elem& a, const Elem& b) const {
  Elem r(f_);
  for (int i = 0; i < f_; ++i) r[i] = (a[i] + b[i]) % p_;
  return r;
}

ResidueField::Elem ResidueField::sub(const Elem& a, const Elem& b) const {
  Elem r(f_);
  for (int i = 0; i < f_; ++i) r[i] = (a[i] + p_ - b[i]) % p_;
  return r;
}

ResidueField::Elem ResidueField::neg(const Elem& a) const {
  Elem r(f_);
  for (int i = 0; i < f_; ++i) r[i] = (p_ - a[i]) % p_;
  return r;
}

ResidueField::Elem ResidueField::scale(const Elem& a, unsigned long c) const {
  Elem r(f_);
  for (int i = 0; i < f_; ++i) r[i] = mulmod(a[i], c % p_, p_);
  return r;
}

ResidueField::Elem ResidueField::mul(const Elem& a, const Elem& b) const {
  FpPoly r = fp_mod(fp_mul(FpPoly(a.begin(), a.end()), FpPoly(b.begin(), b.end()), p_), g_, p_);
  r.resize(f_, 0);
  return r;
}

ResidueField::Elem ResidueField::pow(Elem a, unsigned long long n) const {
  Elem r = one();
  while (n > 0) {
    if (n & 1) r = mul(r, a);
    n >>= 1;
    if (n) a = mul(a, a);
  }
  return r;
}

ResidueField::Elem ResidueField::inv(const Elem& a) const {
  if (is_zero(a)) raise(Errc::InternalError, "inverse of zero residue");
  return pow(a, static_cast<unsigned long long>(size_) - 2);
}

ResidueField::Elem ResidueField::from_index(unsigned long idx) const {
  Elem r(f_, 0);
  for (int i = 0; i < f_; ++i) {
    r[i] = idx % p_;
    idx /= p_;
  }
  return r;
}

unsigned long ResidueField::index(const Elem& a) const {
  unsigned long idx = 0;
  for (int i = f_ - 1; i >= 0; --i) idx = idx * p_ + a[i];
  return idx;
}

}  // namespace ltforge
