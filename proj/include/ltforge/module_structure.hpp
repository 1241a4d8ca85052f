#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltforge/lubin_tate.hpp"

namespace ltforge {

struct RegularityReport {
  bool is_regular = true;
  bool ratio_integral = false;  // (q-1) | v_L(pi)
  FieldElement epsilon;         // pi = epsilon * varpi^e
  ResidueField::Elem epsilon_bar;
  std::optional<ResidueField::Elem> witness;  // u != 0 with u^q + epsilon u = 0 in k_L
};

// varpi defaults to the tower's uniformiser; any other prime of L may be passed.
RegularityReport regularity_check(const LocalField& L, const LTContext& ctx,
                                  const std::optional<FieldElement>& varpi = std::nullopt);

struct InducedMapReport {
  long level = 0;
  long target = 0;  // qi when i <= e/(q-1), else i+e
  bool well_defined = true;
  bool homomorphism = true;
  bool injective = true;
  bool surjective = true;
  unsigned long classes = 0;
  unsigned long image_size = 0;
  std::optional<ResidueField::Elem> kernel_witness;
  // residue images of the classes in index order
  std::vector<ResidueField::Elem> images;
};

// Enumerates F(m^i)/F(m^(i+1)) and tabulates the map induced by [pi].
InducedMapReport induced_map_check(const LocalField& L, const LTContext& ctx, long i);

struct GeneratingSet {
  std::string kind;  // "B_L", "log B_L", "S_L", "log S_L", "S_n", "B_n"
  std::vector<FieldElement> elements;
  std::vector<long> levels;  // j of zeta_i varpi^j or lambda^j
  std::vector<int> indices;  // i of zeta_i, 0 for lambda powers
  long claimed_rank = 0;
  size_t size() const { return elements.size(); }
};

// {zeta_i varpi^j : 1 <= j <= qe/(q-1), q !| j}, ordered by j then i
GeneratingSet basis_BL(const LocalField& L, const LTContext& ctx);
GeneratingSet log_basis(const LocalField& L, const LTContext& ctx);
// basis_BL plus the level qe/(q-1), for L containing nontrivial [pi]-torsion
GeneratingSet spanning_SL(const LocalField& L, const LTContext& ctx);
GeneratingSet log_of(const GeneratingSet& g, const LTContext& ctx);

struct LTSets {
  TorsionField torsion;
  GeneratingSet S;  // lambda^j, j < q^n, q !| j, and lambda^(q^n)
  GeneratingSet B;  // logs of S without lambda
  FieldElement log_lambda;
};

LTSets lt_sets(const LTContext& ctx, int n, long N);

struct SpanSolution {
  std::vector<PadicScalar> coeffs;
  bool integral = true;
  std::optional<PadicScalar> determinant;  // for square systems
};

// target = sum c_k gens[k] over K. Raises RankDeficient or NotInSpan.
SpanSolution coords_in_span(const FieldElement& target, const std::vector<FieldElement>& gens);
// Valuation of the determinant of the coordinate matrix; gens must number [L:K].
PadicScalar coordinate_determinant(const std::vector<FieldElement>& gens);
// Every element of a lies in the O_K-span of b and vice versa.
bool same_lattice(const std::vector<FieldElement>& a, const std::vector<FieldElement>& b);

struct ValuationCertificate {
  FieldElement x;
  long ell = 0;
  long predicted = 0;
  std::optional<long> observed;  // empty when log(x) vanishes at working precision
  long observed_floor = 0;
  bool regular = true;
  bool equality = false;
  bool holds = false;  // observed >= predicted, with equality when regular
};

ValuationCertificate valuation_certificate(const LocalField& L, const LTContext& ctx,
                                           const FieldElement& x, bool regular);
ValuationCertificate valuation_certificate(const LocalField& L, const LTContext& ctx,
                                           const FieldElement& x);

struct MinValuation {
  bool regular = true;
  long gamma = 0;        // regular case only
  long formula = 0;      // q^gamma - gamma e, regular case only
  long log_varpi = 0;    // v(log varpi); log varpi may vanish in the torsion case
  bool log_varpi_zero = false;
  long sweep = 0;        // min over the log images of B_L or S_L
  long value = 0;
};

MinValuation min_valuation(const LocalField& L, const LTContext& ctx);
// Smallest gamma >= 1 with q^gamma (q-1) > e.
long gamma_of(unsigned long q, long e);

struct Expansion {
  std::vector<PadicScalar> digits;  // one per generator
  long precision = 0;               // x agrees with the F-sum modulo varpi^precision
  int steps = 0;
};

// Greedy digit expansion x = sum_F [a_k](g_k) level by level.
Expansion expand_in_generators(const FieldElement& x, const GeneratingSet& gens,
                               const LTContext& ctx);
// Recomputes sum_F [a_k](g_k) from the pi-adic digits of each a_k.
FieldElement recombine(const Expansion& ex, const GeneratingSet& gens, const LTContext& ctx,
                       long prec);

}  // namespace ltforge
