#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ltforge/expr.hpp"
#include "ltforge/json_io.hpp"
#include "ltforge/verify.hpp"

using namespace ltforge;

namespace {

struct Options {
  std::vector<std::string> towers;
  std::string eis;
  std::string unram;
  std::string series = "multiplicative";
  std::string series_json;
  bool polynomial = false;
  long N = 64;
  int D = 128;
  std::uint64_t seed = 1;
  std::optional<int> samples;
  std::vector<std::string> theorems;
  bool all = false;
  std::optional<int> lt_level;
  std::vector<unsigned long> primes;
  std::string element;
  unsigned threads = 0;
  std::string kind = "auto";
  std::vector<std::string> emit;
  std::string scalar = "2";
  int max_e = 8, max_f = 2, max_n = 2;
};

// Exit codes: 0 success, 1 theorem violation, 2 bad input, 3 computation failed.
int exit_code_of(Errc c) {
  switch (c) {
    case Errc::ParseError:
    case Errc::InvalidArgument:
    case Errc::BadPrime:
    case Errc::NotEisenstein:
    case Errc::NotIrreducible:
    case Errc::NotLubinTate:
    case Errc::NonzeroConstantTerm:
    case Errc::NonIntegralCoefficient:
    case Errc::SeriesNotPolynomial:
    case Errc::NotRegular:
    case Errc::RegularFieldGiven:
    case Errc::WrongLevel:
      return 2;
    default:
      return 3;
  }
}

void emit_line(const Json& j) { std::cout << j.dump() << '\n'; }

std::string slurp(const std::string& path_or_json) {
  if (!path_or_json.empty() && (path_or_json[0] == '{' || path_or_json[0] == '[')) return path_or_json;
  std::ifstream in(path_or_json);
  if (!in) raise(Errc::ParseError, "cannot read " + path_or_json);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    raise(Errc::ParseError, e.what());
  }
}

TowerSpec parse_tower(const std::string& text) {
  TowerSpec s;
  std::vector<long> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      size_t used = 0;
      v.push_back(std::stol(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      raise(Errc::ParseError, "tower must read p,f,e");
    }
  }
  if (v.size() != 3 || v[0] < 2 || v[1] < 1 || v[2] < 1) raise(Errc::ParseError, "tower must read p,f,e with p >= 2");
  s.p = static_cast<unsigned long>(v[0]);
  s.f = static_cast<int>(v[1]);
  s.e = static_cast<int>(v[2]);
  return s;
}

TowerSpec tower_spec(const Options& o, const std::string& text) {
  TowerSpec s = parse_tower(text);
  s.N = o.N;
  if (!o.unram.empty()) {
    Json j = parse_json(o.unram);
    if (!j.is_array()) raise(Errc::ParseError, "--unram takes a JSON array");
    for (const auto& c : j) {
      if (!c.is_number_integer()) raise(Errc::ParseError, "--unram entries must be integers");
      long p = static_cast<long>(s.p);
      s.unram.push_back(static_cast<unsigned long>(((c.get<long>() % p) + p) % p));
    }
  }
  if (!o.eis.empty()) {
    Json j = parse_json(o.eis);
    if (!j.is_array()) raise(Errc::ParseError, "--eis takes a JSON array");
    for (const auto& row : j) {
      UVec a;
      if (row.is_array())
        for (const auto& c : row) a.push_back(integer_from_json(c));
      else
        a.push_back(integer_from_json(row));
      s.eis.push_back(a);
    }
  }
  return s;
}

SuiteConfig suite_config(const Options& o) {
  SuiteConfig c;
  c.N = o.N;
  c.D = o.D;
  c.seed = o.seed;
  c.series = o.series;
  c.threads = o.threads;
  c.max_e = o.max_e;
  c.max_f = o.max_f;
  c.max_n = o.max_n;
  if (o.samples) {
    if (*o.samples < 1) raise(Errc::InvalidArgument, "--samples must be positive");
    c.samples = c.logval_samples = c.pair_samples = *o.samples;
  }
  if (!o.series_json.empty()) {
    c.series = "custom";
    c.custom_series = series1_from_json(parse_json(slurp(o.series_json)));
    c.custom_polynomial = o.polynomial;
  }
  if (!o.primes.empty()) c.primes = o.primes;
  if (!o.eis.empty() && o.towers.size() > 1) raise(Errc::InvalidArgument, "--eis needs exactly one --tower");
  for (const auto& t : o.towers) c.towers.push_back(tower_spec(o, t));
  c.lt_level = o.lt_level;
  return c;
}

unsigned long single_prime(const Options& o) {
  if (o.primes.size() != 1) raise(Errc::InvalidArgument, "give exactly one --p");
  return o.primes[0];
}

// The field named by --tower or --lt-level, with the context acting on it.
struct Setting {
  LocalField L;
  Context ctx;
  std::optional<FieldElement> lambda;
};

Setting setting(const Options& o, const std::optional<LocalField>& from_element = std::nullopt) {
  SuiteConfig c = suite_config(o);
  Setting s;
  if (o.lt_level) {
    unsigned long p = c.custom_series ? c.custom_series->prime() : single_prime(o);
    s.ctx = make_context(c, p);
    TorsionField t = torsion_field_any(*s.ctx, *o.lt_level, o.N);
    s.L = t.field;
    s.lambda = t.lambda;
    return s;
  }
  if (o.towers.size() == 1) {
    s.L = make_tower(tower_spec(o, o.towers[0]));
  } else if (from_element) {
    s.L = *from_element;
  } else {
    raise(Errc::InvalidArgument, "give one --tower, an --lt-level, or a JSON --element");
  }
  s.ctx = make_context(c, s.L.p());
  return s;
}

bool is_json_text(const std::string& t) {
  size_t k = t.find_first_not_of(" \t\n");
  return k != std::string::npos && t[k] == '{';
}

FieldElement read_element(const Options& o, const Setting& s) {
  if (o.element.empty()) raise(Errc::InvalidArgument, "--element is required");
  if (is_json_text(o.element)) return element_from_json(parse_json(o.element), s.L);
  return parse_element(o.element, s.L, o.N);
}

Json field_report(const Setting& s) {
  const LocalField& L = s.L;
  Json j{{"field", field_to_json(L)},
         {"degree", L.degree()},
         {"residue_size", L.residue_field().size()},
         {"uniformizer", element_to_json(FieldElement::uniformizer(L, L.default_precision()))},
         {"description", L.describe()}};
  if (s.lambda) j["lambda"] = element_to_json(*s.lambda);
  return j;
}

int cmd_field(const Options& o) {
  std::optional<LocalField> hint;
  if (is_json_text(o.element)) hint = element_from_json(parse_json(o.element)).field();
  emit_line(field_report(setting(o, hint)));
  return 0;
}

int cmd_ctx(const Options& o) {
  SuiteConfig c = suite_config(o);
  unsigned long p = c.custom_series ? c.custom_series->prime() : single_prime(o);
  Context ctx = make_context(c, p);
  Json j{{"p", ctx->p()},
         {"series", ctx->kind_name()},
         {"D", ctx->degree()},
         {"N", ctx->options().N},
         {"precision", ctx->precision()},
         {"pi", scalar_to_json(ctx->pi())},
         {"polynomial", ctx->is_polynomial()}};
  std::vector<std::string> emit = o.emit.empty() ? std::vector<std::string>{"lt"} : o.emit;
  for (const auto& what : emit) {
    if (what == "lt")
      j["lt_series"] = series_to_json(ctx->lt_series());
    else if (what == "log")
      j["log_series"] = series_to_json(ctx->log_series());
    else if (what == "exp")
      j["exp_series"] = series_to_json(ctx->exp_series());
    else if (what == "fgl")
      j["fgl"] = series_to_json(ctx->fgl());
    else if (what == "endo") {
      Integer a;
      if (a.set_str(o.scalar, 10) != 0) raise(Errc::ParseError, "--scalar must be an integer");
      j["endo"] = Json{{"a", o.scalar}, {"series", series_to_json(ctx->endo(PadicScalar::from_integer(p, a, ctx->precision())))}};
    } else {
      raise(Errc::InvalidArgument, "--emit takes lt, log, exp, fgl or endo");
    }
  }
  emit_line(j);
  return 0;
}

int cmd_log(const Options& o) {
  std::optional<LocalField> hint;
  if (is_json_text(o.element)) hint = element_from_json(parse_json(o.element)).field();
  Setting s = setting(o, hint);
  FieldElement x = read_element(o, s);
  if (!x.is_zero() && x.valuation() < 1) raise(Errc::InvalidArgument, "log needs an element of the maximal ideal");
  LogEvaluation ev = eval_log_detailed(*s.ctx, x);
  Json j = element_to_json(ev.value);
  j["input"] = element_to_json(x);
  j["expression"] = to_expression(ev.value);
  j["ell"] = ev.ell;
  j["series_precision"] = ev.series_precision;
  j["wiles_precision"] = ev.wiles_precision;
  j["wiles_depth"] = ev.wiles_depth;
  j["series"] = s.ctx->kind_name();
  emit_line(j);
  return 0;
}

int cmd_basis(const Options& o) {
  Setting s = setting(o);
  std::string kind = o.kind;
  GeneratingSet g;
  std::optional<FieldElement> log_lambda;
  if (o.lt_level && (kind == "auto" || kind == "Bn" || kind == "Sn")) {
    LTSets sets = lt_sets(*s.ctx, *o.lt_level, o.N);
    g = kind == "Sn" ? sets.S : sets.B;
    log_lambda = sets.log_lambda;
  } else {
    if (kind == "auto") kind = regularity_check(s.L, *s.ctx).is_regular ? "BL" : "SL";
    if (kind == "BL")
      g = basis_BL(s.L, *s.ctx);
    else if (kind == "logBL")
      g = log_basis(s.L, *s.ctx);
    else if (kind == "SL")
      g = spanning_SL(s.L, *s.ctx);
    else if (kind == "logSL")
      g = log_of(spanning_SL(s.L, *s.ctx), *s.ctx);
    else
      raise(Errc::InvalidArgument, "--kind takes auto, BL, logBL, SL, logSL, Sn or Bn");
  }
  Json elems = Json::array();
  for (size_t k = 0; k < g.size(); ++k)
    elems.push_back(Json{{"level", g.levels[k]},
                         {"index", g.indices[k]},
                         {"expression", to_expression(g.elements[k])},
                         {"element", element_to_json(g.elements[k])}});
  Json j{{"field", field_to_json(s.L)}, {"kind", g.kind}, {"size", g.size()}, {"claimed_rank", g.claimed_rank},
         {"elements", elems}};
  const bool square = static_cast<long>(g.size()) == s.L.degree();
  if (square && (g.kind.rfind("log", 0) == 0 || g.kind == "B_n")) {
    PadicScalar d = coordinate_determinant(g.elements);
    j["determinant_valuation"] = d.is_zero() ? Json(nullptr) : Json(d.valuation());
  }
  if (log_lambda) j["log_lambda_zero"] = log_lambda->is_zero();
  emit_line(j);
  return 0;
}

int cmd_regular(const Options& o) {
  Setting s = setting(o);
  RegularityReport r = regularity_check(s.L, *s.ctx);
  Json eps = Json::array();
  for (auto c : r.epsilon_bar) eps.push_back(c);
  Json j{{"field", field_to_json(s.L)},
         {"regular", r.is_regular},
         {"ratio_integral", r.ratio_integral},
         {"epsilon", element_to_json(r.epsilon)},
         {"epsilon_bar", eps},
         {"witness", nullptr}};
  if (r.witness) {
    Json w = Json::array();
    for (auto c : *r.witness) w.push_back(c);
    j["witness"] = w;
  }
  emit_line(j);
  return 0;
}

int cmd_minval(const Options& o) {
  Setting s = setting(o);
  const long q = static_cast<long>(s.ctx->q());
  Json j{{"field", field_to_json(s.L)}};
  bool regular = regularity_check(s.L, *s.ctx).is_regular;
  if (regular && s.L.e() < q - 1) {
    // log maps m_L isomorphically onto itself
    long m = s.L.default_precision();
    for (const auto& y : log_basis(s.L, *s.ctx).elements) m = std::min(m, y.val_floor());
    j["regular"] = true;
    j["ratio_below_one"] = true;
    j["sweep"] = m;
    j["value"] = m;
  } else {
    MinValuation mv = min_valuation(s.L, *s.ctx);
    j["regular"] = mv.regular;
    if (mv.regular) {
      j["gamma"] = mv.gamma;
      j["formula"] = mv.formula;
    }
    j["log_varpi"] = mv.log_varpi_zero ? Json(nullptr) : Json(mv.log_varpi);
    j["sweep"] = mv.sweep;
    j["value"] = mv.value;
  }
  emit_line(j);
  return 0;
}

int cmd_verify(const Options& o) {
  if (!o.all && o.theorems.empty()) raise(Errc::InvalidArgument, "give --theorem <id> or --all");
  SuiteConfig c = suite_config(o);
  if (o.lt_level && o.primes.empty() && !c.custom_series) raise(Errc::InvalidArgument, "--lt-level needs --p");
  Suite suite(c);
  std::vector<CheckResult> results;
  if (o.all) {
    results = suite.run_all();
  } else {
    for (const auto& id : o.theorems) {
      auto r = suite.run(id);
      std::move(r.begin(), r.end(), std::back_inserter(results));
    }
  }
  bool ok = true;
  for (const auto& r : results) {
    emit_line(r.to_json());
    ok = ok && r.consistent;
  }
  return ok ? 0 : 1;
}

void add_field_options(CLI::App* sub, Options& o, bool multi_tower) {
  if (multi_tower)
    sub->add_option("--tower", o.towers, "Field as p,f,e (repeatable)");
  else
    sub->add_option("--tower", o.towers, "Field as p,f,e")->expected(1);
  sub->add_option("--eis", o.eis, "Eisenstein coefficients a_0..a_e as a JSON array of rows over the unramified ring");
  sub->add_option("--unram", o.unram, "Monic modulus of the residue field as a JSON array, constant term first");
  sub->add_option("--lt-level", o.lt_level, "Use the torsion field of level n");
  sub->add_option("--p", o.primes, "Prime(s)")->delimiter(',');
}

void add_series_options(CLI::App* sub, Options& o) {
  sub->add_option("--series", o.series, "Lubin-Tate series: basic, multiplicative or custom")
      ->check(CLI::IsMember({"basic", "multiplicative", "custom"}));
  sub->add_option("--series-json", o.series_json, "Custom series as JSON text or a file path");
  sub->add_flag("--polynomial", o.polynomial, "The custom series is a polynomial");
  sub->add_option("-D,--degree", o.D, "Truncation degree")->check(CLI::Range(8, 4096));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact arithmetic in Lubin-Tate formal groups over extensions of Q_p"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--precision", o.N, "Precision N in uniformiser digits")
      ->envname("LT_FORGE_PRECISION")
      ->check(CLI::Range(4L, 100000L));

  auto* field = app.add_subcommand("field", "Describe a field");
  add_field_options(field, o, false);
  add_series_options(field, o);
  field->add_option("--element", o.element, "Element JSON whose field to describe");

  auto* ctx = app.add_subcommand("ctx", "Build a Lubin-Tate context and print its series");
  add_series_options(ctx, o);
  ctx->add_option("--p", o.primes, "Prime")->delimiter(',');
  ctx->add_option("--emit", o.emit, "Series to print: lt, log, exp, fgl, endo")->delimiter(',');
  ctx->add_option("--scalar", o.scalar, "Integer a for --emit endo");

  auto* log = app.add_subcommand("log", "Evaluate the formal logarithm at an element");
  add_field_options(log, o, false);
  add_series_options(log, o);
  log->add_option("--element", o.element, "Element as JSON or an expression")->required();

  auto* basis = app.add_subcommand("basis", "Generators of F(m_L) or of its log image");
  add_field_options(basis, o, false);
  add_series_options(basis, o);
  basis->add_option("--kind", o.kind, "auto, BL, logBL, SL, logSL, Sn or Bn");

  auto* regular = app.add_subcommand("regular", "Test pi-regularity");
  add_field_options(regular, o, false);
  add_series_options(regular, o);

  auto* minval = app.add_subcommand("minval", "Minimal valuation of the log image");
  add_field_options(minval, o, false);
  add_series_options(minval, o);

  auto* verify = app.add_subcommand("verify", "Run theorem checks");
  add_field_options(verify, o, true);
  add_series_options(verify, o);
  verify->add_option("--theorem", o.theorems, "Theorem id (repeatable)");
  verify->add_flag("--all", o.all, "Run every check");
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_option("--samples", o.samples, "Samples per field for every sampled check");
  verify->add_option("--threads", o.threads, "Worker threads, 0 for the hardware count");
  verify->add_option("--max-e", o.max_e, "Largest ramification index in the default grid");
  verify->add_option("--max-f", o.max_f, "Largest residue degree in the default grid");
  verify->add_option("--max-n", o.max_n, "Largest torsion level in the default grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*field) return cmd_field(o);
    if (*ctx) return cmd_ctx(o);
    if (*log) return cmd_log(o);
    if (*basis) return cmd_basis(o);
    if (*regular) return cmd_regular(o);
    if (*minval) return cmd_minval(o);
    if (*verify) return cmd_verify(o);
  } catch (const Error& e) {
    emit_line(Json{{"error", errc_name(e.code())}, {"message", e.what()}});
    return exit_code_of(e.code());
  }
  return 2;
}
