#include "ltforge/module_structure.hpp"

#include <algorithm>

namespace ltforge {

namespace {

FieldElement level_generator(const LocalField& L, int i, long j, long prec) {
  return FieldElement::teichmuller(L, i, prec).mul_varpi_power(j).with_precision(prec);
}

Integer q_pow(unsigned long q, long k) {
  Integer r = 1;
  for (long i = 0; i < k; ++i) r *= q;
  return r;
}

// Solves A c = b over F_p (A given by columns), free variables zero and pivots
// taken left to right.
std::optional<std::vector<unsigned long>> fp_solve(const std::vector<ResidueField::Elem>& cols,
                                                   const ResidueField::Elem& b, unsigned long p) {
  const size_t rows = b.size(), m = cols.size();
  std::vector<std::vector<unsigned long>> M(rows, std::vector<unsigned long>(m + 1));
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < m; ++c) M[r][c] = cols[c][r] % p;
    M[r][m] = b[r] % p;
  }
  std::vector<long> pivot_row(m, -1);
  size_t row = 0;
  for (size_t c = 0; c < m && row < rows; ++c) {
    size_t r = row;
    while (r < rows && M[r][c] == 0) ++r;
    if (r == rows) continue;
    std::swap(M[r], M[row]);
    unsigned long inv = fp_inv(M[row][c], p);
    for (auto& x : M[row]) x = x * inv % p;
    for (size_t r2 = 0; r2 < rows; ++r2) {
      if (r2 == row || M[r2][c] == 0) continue;
      unsigned long k = M[r2][c];
      for (size_t c2 = 0; c2 <= m; ++c2) M[r2][c2] = (M[r2][c2] + (p - k) * M[row][c2]) % p;
    }
    pivot_row[c] = static_cast<long>(row);
    ++row;
  }
  for (size_t r = row; r < rows; ++r)
    if (M[r][m] != 0) return std::nullopt;
  std::vector<unsigned long> sol(m, 0);
  for (size_t c = 0; c < m; ++c)
    if (pivot_row[c] >= 0) sol[c] = M[pivot_row[c]][m];
  return sol;
}

struct Elimination {
  std::vector<PadicScalar> x;
  PadicScalar det;
};

// Full pivoting on the smallest valuation, over the coordinate space of L.
Elimination eliminate(const FieldElement& target, const std::vector<FieldElement>& gens) {
  if (gens.empty()) {
    if (!target.is_zero()) raise(Errc::NotInSpan, "target is nonzero and the generating list is empty");
    return {};
  }
  const unsigned long p = target.field().p();
  const size_t k = gens.size();
  std::vector<std::vector<PadicScalar>> M;
  {
    std::vector<std::vector<PadicScalar>> cols;
    for (const auto& g : gens) {
      if (!g.field().same_field(target.field())) raise(Errc::InvalidArgument, "generators live in a different field");
      cols.push_back(g.coordinates());
    }
    auto tc = target.coordinates();
    M.assign(tc.size(), std::vector<PadicScalar>(k + 1));
    for (size_t r = 0; r < tc.size(); ++r) {
      for (size_t c = 0; c < k; ++c) M[r][c] = cols[c][r];
      M[r][k] = tc[r];
    }
  }
  const size_t rows = M.size();
  if (k > rows) raise(Errc::RankDeficient, "more generators than the K-dimension of L");
  std::vector<size_t> colperm(k);
  for (size_t c = 0; c < k; ++c) colperm[c] = c;
  bool negate = false;
  PadicScalar det;
  for (size_t s = 0; s < k; ++s) {
    long best = 0;
    size_t br = rows, bc = k;
    for (size_t r = s; r < rows; ++r)
      for (size_t c = s; c < k; ++c) {
        if (M[r][c].is_zero()) continue;
        if (br == rows || M[r][c].valuation() < best) {
          best = M[r][c].valuation();
          br = r;
          bc = c;
        }
      }
    if (br == rows)
      raise(Errc::RankDeficient, "coordinate matrix has rank " + std::to_string(s) + " < " + std::to_string(k));
    if (br != s) {
      std::swap(M[br], M[s]);
      negate = !negate;
    }
    if (bc != s) {
      for (auto& row : M) std::swap(row[bc], row[s]);
      std::swap(colperm[bc], colperm[s]);
      negate = !negate;
    }
    det = s == 0 ? M[s][s] : det * M[s][s];
    for (size_t r = s + 1; r < rows; ++r) {
      if (M[r][s].is_zero()) continue;
      PadicScalar factor = M[r][s] / M[s][s];
      for (size_t c = s; c <= k; ++c) M[r][c] = M[r][c] - factor * M[s][c];
    }
  }
  for (size_t r = k; r < rows; ++r)
    if (!M[r][k].is_zero())
      raise(Errc::NotInSpan, "residual coordinate of valuation " + std::to_string(M[r][k].valuation()) +
                                 " outside the K-span");
  std::vector<PadicScalar> y(k);
  for (size_t s = k; s-- > 0;) {
    PadicScalar acc = M[s][k];
    for (size_t c = s + 1; c < k; ++c) acc = acc - M[s][c] * y[c];
    y[s] = acc / M[s][s];
  }
  Elimination out;
  out.x.resize(k);
  for (size_t s = 0; s < k; ++s) out.x[colperm[s]] = y[s];
  out.det = negate ? -det : det;
  (void)p;
  return out;
}

}  // namespace

RegularityReport regularity_check(const LocalField& L, const LTContext& ctx,
                                  const std::optional<FieldElement>& varpi) {
  if (L.p() != ctx.p()) raise(Errc::InvalidArgument, "field and context have different primes");
  const unsigned long q = ctx.q();
  const long e = L.e();
  const long prec = L.default_precision();
  FieldElement w = varpi ? *varpi : FieldElement::uniformizer(L, prec + e);
  if (!w.field().same_field(L)) raise(Errc::InvalidArgument, "uniformiser belongs to another field");
  if (w.is_zero() || w.valuation() != 1) raise(Errc::InvalidArgument, "uniformiser must have valuation 1");

  RegularityReport rep;
  rep.ratio_integral = e % static_cast<long>(q - 1) == 0;
  FieldElement pi = FieldElement::from_scalar(L, ctx.pi(), prec + e);
  rep.epsilon = pi / w.pow(e);
  rep.epsilon_bar = residue_decompose(rep.epsilon, 0);
  if (rep.ratio_integral) {
    const ResidueField& k = L.residue_field();
    for (unsigned long idx = 1; idx < k.size(); ++idx) {
      auto u = k.from_index(idx);
      if (k.is_zero(k.add(k.pow(u, q), k.mul(rep.epsilon_bar, u)))) {
        rep.witness = u;
        break;
      }
    }
  }
  rep.is_regular = !rep.witness.has_value();
  return rep;
}

InducedMapReport induced_map_check(const LocalField& L, const LTContext& ctx, long i) {
  if (i < 1) raise(Errc::InvalidArgument, "level must be at least 1");
  const unsigned long q = ctx.q();
  const long e = L.e();
  InducedMapReport rep;
  rep.level = i;
  rep.target = i * static_cast<long>(q - 1) <= e ? static_cast<long>(q) * i : i + e;
  const long prec = rep.target + e + 2;
  const ResidueField& k = L.residue_field();
  rep.classes = k.size();

  std::vector<FieldElement> lifts;
  FieldElement delta = level_generator(L, L.f() - 1, i + 1, prec) + FieldElement::uniformizer(L, prec).pow(i + 1);
  auto image_of = [&](const FieldElement& x) {
    FieldElement y = apply_pi(ctx, x);
    if (!y.is_zero() && y.valuation() < rep.target) rep.well_defined = false;
    return residue_at_level(y, rep.target);
  };
  for (unsigned long idx = 0; idx < rep.classes; ++idx) {
    FieldElement x = lift_residue(L, k.from_index(idx), i, prec);
    lifts.push_back(x);
    auto img = image_of(x);
    if (img != image_of(x + delta)) rep.well_defined = false;
    rep.images.push_back(img);
  }

  std::vector<unsigned long> partners;
  if (rep.classes <= 25) {
    for (unsigned long b = 0; b < rep.classes; ++b) partners.push_back(b);
  } else {
    for (int j = 0; j < L.f(); ++j) {
      ResidueField::Elem basis(L.f(), 0);
      basis[j] = 1;
      partners.push_back(k.index(basis));
    }
  }
  for (unsigned long a = 0; a < rep.classes && rep.homomorphism; ++a)
    for (unsigned long b : partners) {
      if (b < a && rep.classes <= 25) continue;
      auto img = residue_at_level(apply_pi(ctx, fgl_add(ctx, lifts[a], lifts[b])), rep.target);
      if (img != k.add(rep.images[a], rep.images[b])) {
        rep.homomorphism = false;
        break;
      }
    }

  std::vector<bool> seen(rep.classes, false);
  for (unsigned long idx = 0; idx < rep.classes; ++idx) {
    unsigned long j = k.index(rep.images[idx]);
    if (!seen[j]) ++rep.image_size;
    seen[j] = true;
    if (idx != 0 && k.is_zero(rep.images[idx]) && !rep.kernel_witness) rep.kernel_witness = k.from_index(idx);
  }
  rep.injective = !rep.kernel_witness.has_value();
  rep.surjective = rep.image_size == rep.classes;
  return rep;
}

GeneratingSet basis_BL(const LocalField& L, const LTContext& ctx) {
  if (!regularity_check(L, ctx).is_regular)
    raise(Errc::NotRegular, L.describe() + " contains nontrivial [pi]-torsion");
  const long q = static_cast<long>(ctx.q());
  const long top = q * L.e() / (q - 1);
  GeneratingSet g;
  g.kind = "B_L";
  g.claimed_rank = L.degree();
  for (long j = 1; j <= top; ++j) {
    if (j % q == 0) continue;
    for (int i = 0; i < L.f(); ++i) {
      g.elements.push_back(level_generator(L, i, j, L.default_precision()));
      g.levels.push_back(j);
      g.indices.push_back(i);
    }
  }
  return g;
}

GeneratingSet log_of(const GeneratingSet& g, const LTContext& ctx) {
  GeneratingSet out = g;
  out.kind = "log " + g.kind;
  for (auto& x : out.elements) x = eval_log(ctx, x);
  return out;
}

GeneratingSet log_basis(const LocalField& L, const LTContext& ctx) { return log_of(basis_BL(L, ctx), ctx); }

GeneratingSet spanning_SL(const LocalField& L, const LTContext& ctx) {
  if (regularity_check(L, ctx).is_regular)
    raise(Errc::RegularFieldGiven, L.describe() + " is regular; use the basis B_L");
  const long q = static_cast<long>(ctx.q());
  const long top = q * L.e() / (q - 1);  // exact: (q-1) | e here
  GeneratingSet g;
  g.kind = "S_L";
  g.claimed_rank = L.degree();
  for (long j = 1; j <= top; ++j) {
    if (j % q == 0 && j != top) continue;
    for (int i = 0; i < L.f(); ++i) {
      g.elements.push_back(level_generator(L, i, j, L.default_precision()));
      g.levels.push_back(j);
      g.indices.push_back(i);
    }
  }
  return g;
}

LTSets lt_sets(const LTContext& ctx, int n, long N) {
  if (n < 1) raise(Errc::InvalidArgument, "torsion level must be at least 1");
  LTSets out;
  out.torsion = torsion_field_any(ctx, n, N);
  const long q = static_cast<long>(ctx.q());
  const long qn = q_pow(ctx.q(), n).get_si();
  const FieldElement& lambda = out.torsion.lambda;
  out.S.kind = "S_n";
  out.B.kind = "B_n";
  out.S.claimed_rank = out.torsion.field.degree();
  out.B.claimed_rank = out.torsion.field.degree();
  FieldElement power = lambda;
  for (long j = 1; j <= qn; ++j) {
    if (j > 1) power = power * lambda;
    if (j % q == 0 && j != qn) continue;
    out.S.elements.push_back(power);
    out.S.levels.push_back(j);
    out.S.indices.push_back(0);
    FieldElement lg = eval_log(ctx, power);
    if (j == 1) {
      out.log_lambda = lg;
      continue;
    }
    out.B.elements.push_back(lg);
    out.B.levels.push_back(j);
    out.B.indices.push_back(0);
  }
  return out;
}

SpanSolution coords_in_span(const FieldElement& target, const std::vector<FieldElement>& gens) {
  auto el = eliminate(target, gens);
  SpanSolution s;
  s.coeffs = std::move(el.x);
  for (const auto& c : s.coeffs)
    if (!c.is_zero() && c.valuation() < 0) s.integral = false;
  if (gens.size() == static_cast<size_t>(target.field().degree())) s.determinant = el.det;
  return s;
}

PadicScalar coordinate_determinant(const std::vector<FieldElement>& gens) {
  if (gens.empty()) raise(Errc::InvalidArgument, "empty generating list");
  const LocalField& L = gens.front().field();
  if (gens.size() != static_cast<size_t>(L.degree()))
    raise(Errc::InvalidArgument, "determinant needs exactly [L:K] elements");
  return eliminate(FieldElement::zero(L, L.default_precision()), gens).det;
}

bool same_lattice(const std::vector<FieldElement>& a, const std::vector<FieldElement>& b) {
  auto inside = [](const std::vector<FieldElement>& xs, const std::vector<FieldElement>& gens) {
    for (const auto& x : xs) {
      try {
        if (!coords_in_span(x, gens).integral) return false;
      } catch (const Error& err) {
        if (err.code() == Errc::NotInSpan) return false;
        throw;
      }
    }
    return true;
  };
  return inside(a, b) && inside(b, a);
}

ValuationCertificate valuation_certificate(const LocalField& L, const LTContext& ctx,
                                           const FieldElement& x, bool regular) {
  if (x.is_zero() || x.valuation() < 1) raise(Errc::InvalidArgument, "x must be a nonzero element of m_L");
  ValuationCertificate c;
  c.x = x;
  c.regular = regular;
  const long v = x.valuation();
  c.ell = ell_closed_form(ctx.q(), L.e(), v);
  c.predicted = Integer(q_pow(ctx.q(), c.ell) * v - Integer(c.ell) * L.e()).get_si();
  FieldElement lg = eval_log(ctx, x);
  c.observed_floor = lg.val_floor();
  if (!lg.is_zero()) c.observed = lg.valuation();
  c.equality = c.observed && *c.observed == c.predicted;
  c.holds = c.observed_floor >= c.predicted && (!regular || c.equality);
  return c;
}

ValuationCertificate valuation_certificate(const LocalField& L, const LTContext& ctx,
                                           const FieldElement& x) {
  return valuation_certificate(L, ctx, x, regularity_check(L, ctx).is_regular);
}

long gamma_of(unsigned long q, long e) { return std::max(1L, ell_closed_form(q, e, 1)); }

MinValuation min_valuation(const LocalField& L, const LTContext& ctx) {
  const unsigned long q = ctx.q();
  const long e = L.e();
  if (e < static_cast<long>(q - 1))
    raise(Errc::RatioTooSmall, "v_L(pi) < q-1: the log image is m_L and the minimum is 1");
  MinValuation m;
  m.regular = regularity_check(L, ctx).is_regular;
  FieldElement lv = eval_log(ctx, FieldElement::uniformizer(L, L.default_precision()));
  m.log_varpi_zero = lv.is_zero();
  m.log_varpi = lv.val_floor();
  GeneratingSet logs = m.regular ? log_basis(L, ctx) : log_of(spanning_SL(L, ctx), ctx);
  bool any = false;
  for (const auto& y : logs.elements) {
    if (y.is_zero()) continue;
    m.sweep = any ? std::min(m.sweep, y.valuation()) : y.valuation();
    any = true;
  }
  if (!any) raise(Errc::PrecisionExhausted, "every generator has a vanishing log at working precision");
  if (m.regular) {
    m.gamma = gamma_of(q, e);
    m.formula = Integer(q_pow(q, m.gamma) - Integer(m.gamma) * e).get_si();
    m.value = m.formula;
  } else {
    m.value = m.sweep;
  }
  return m;
}

Expansion expand_in_generators(const FieldElement& x, const GeneratingSet& gens, const LTContext& ctx) {
  if (gens.elements.empty()) raise(Errc::InvalidArgument, "empty generating set");
  const LocalField& L = x.field();
  const unsigned long p = L.p();
  const long P = x.precision();
  if (!x.is_zero() && x.valuation() < 1) raise(Errc::InvalidArgument, "x must lie in m_L");

  struct Candidate {
    size_t gen;
    long t;
    FieldElement z;
  };
  std::vector<Candidate> cands;
  Expansion ex;
  ex.digits.assign(gens.size(), PadicScalar::exact_zero(p));
  std::vector<long> digit_prec(gens.size(), 0);
  for (size_t k = 0; k < gens.size(); ++k) {
    FieldElement z = gens.elements[k].with_precision(std::min(P, gens.elements[k].precision()));
    long t = 0;
    while (!z.is_zero() && z.valuation() < P) {
      cands.push_back({k, t, z});
      z = apply_pi(ctx, z);
      ++t;
    }
    digit_prec[k] = t;
  }

  const Series1 neg = ctx.endo(-1);
  FieldElement r = x;
  while (!r.is_zero() && r.valuation() < P) {
    const long v = r.valuation();
    std::vector<size_t> here;
    std::vector<ResidueField::Elem> cols;
    for (size_t c = 0; c < cands.size(); ++c)
      if (cands[c].z.valuation() == v) {
        here.push_back(c);
        cols.push_back(residue_decompose(cands[c].z, v));
      }
    auto sol = here.empty() ? std::nullopt : fp_solve(cols, residue_decompose(r, v), p);
    if (!sol) raise(Errc::StuckLevel, "no generator covers level " + std::to_string(v));
    FieldElement y = FieldElement::zero(L, P);
    bool first = true;
    for (size_t h = 0; h < here.size(); ++h) {
      unsigned long c = (*sol)[h];
      if (c == 0) continue;
      const Candidate& cd = cands[here[h]];
      FieldElement term = endo_apply(ctx, PadicScalar::from_integer(p, c, ctx.precision()), cd.z);
      y = first ? term : fgl_add(ctx, y, term);
      first = false;
      ex.digits[cd.gen] += PadicScalar::from_integer(p, c, ctx.precision()) * ctx.pi().pow(cd.t);
    }
    FieldElement next = fgl_add(ctx, r, eval_series(neg, y));
    if (!next.is_zero() && next.valuation() <= v)
      raise(Errc::InternalError, "remainder did not advance past level " + std::to_string(v));
    r = next;
    ++ex.steps;
  }
  ex.precision = std::min(P, r.val_floor());
  for (size_t k = 0; k < gens.size(); ++k) ex.digits[k] = ex.digits[k].with_precision(digit_prec[k]);
  return ex;
}

FieldElement recombine(const Expansion& ex, const GeneratingSet& gens, const LTContext& ctx, long prec) {
  const LocalField& L = gens.elements.front().field();
  const unsigned long p = L.p();
  FieldElement total = FieldElement::zero(L, prec);
  bool first = true;
  for (size_t k = 0; k < gens.size(); ++k) {
    PadicScalar a = ex.digits[k];
    FieldElement z = gens.elements[k].with_precision(std::min(prec, gens.elements[k].precision()));
    const long places = a.precision();
    for (long t = 0; t < places; ++t) {
      if (a.is_zero()) break;
      Integer d = a.lift();
      mpz_fdiv_r_ui(d.get_mpz_t(), d.get_mpz_t(), p);
      if (d != 0) {
        FieldElement term = endo_apply(ctx, PadicScalar::from_integer(p, d, ctx.precision()), z);
        total = first ? term : fgl_add(ctx, total, term);
        first = false;
      }
      a = (a - PadicScalar::from_integer(p, d, a.precision())) / ctx.pi();
      z = apply_pi(ctx, z);
    }
  }
  return total;
}

}  // namespace ltforge
