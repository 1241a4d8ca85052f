#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ltforge/json_io.hpp"
#include "ltforge/module_structure.hpp"

namespace ltforge {

struct SuiteConfig {
  std::vector<unsigned long> primes{2, 3, 5};
  int max_e = 8;
  int max_f = 2;
  int max_n = 2;
  long N = 64;
  int D = 128;
  int samples = 16;         // per field, for expansions and generic sweeps
  int logval_samples = 200; // per regular field, for valuation certificates
  int pair_samples = 24;    // per field, for the log homomorphism
  std::uint64_t seed = 1;
  std::string series = "multiplicative";  // basic | multiplicative | custom
  std::optional<Series1> custom_series;
  bool custom_polynomial = false;
  std::vector<TowerSpec> towers;  // explicit fields; empty selects the default grid
  std::optional<int> lt_level;    // restrict to the torsion field of this level
  unsigned threads = 0;           // 0 picks the hardware concurrency
};

struct CheckResult {
  std::string theorem;
  Json field;
  bool consistent = true;
  Json witness;  // null unless a counterexample was found
  long precision = 0;
  Json details = Json::object();

  Json to_json() const;
};

// A field to test together with the context acting on it.
struct Subject {
  LocalField L;
  Context ctx;
  RegularityReport regularity;
  long top = 0;           // floor(qe/(q-1)), the highest generator level
  int torsion_level = 0;  // n when L = K_{pi^n}
  std::optional<LTSets> sets;
};

// Hensel lift of a nonzero [pi]-torsion point of valuation e/(q-1) from the residue
// witness of a non-regular field.
FieldElement torsion_point(const LocalField& L, const LTContext& ctx, const ResidueField::Elem& u,
                           long prec);

const std::vector<std::string>& theorem_ids();

class Suite {
 public:
  explicit Suite(SuiteConfig cfg);

  const SuiteConfig& config() const { return cfg_; }
  Context context(unsigned long p) const;
  const std::vector<Subject>& subjects() const { return subjects_; }

  // Raises InvalidArgument on an unknown id.
  std::vector<CheckResult> run(const std::string& id) const;
  std::vector<CheckResult> run_all() const;

 private:
  struct Task;
  std::vector<Task> tasks_for(const std::string& id) const;
  std::vector<CheckResult> execute(std::vector<Task> tasks) const;

  SuiteConfig cfg_;
  std::vector<Context> contexts_;  // one per prime in cfg_.primes
  std::vector<Subject> subjects_;
};

ContextOptions options_of(const SuiteConfig& cfg);
Context make_context(const SuiteConfig& cfg, unsigned long p);

// Element of valuation exactly v with uniformly random digits below it.
FieldElement random_element(std::mt19937_64& rng, const LocalField& L, long v, long prec);
// Stable seed for the sample stream of one check.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& theorem, size_t task);

}  // namespace ltforge
