#include "ltforge/json_io.hpp"

namespace ltforge {

namespace {

long ceil_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a > 0) == (b > 0))) ++q;
  return q;
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) raise(Errc::ParseError, std::string("missing key \"") + key + "\"");
  return j.at(key);
}

long need_long(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_number_integer()) raise(Errc::ParseError, std::string("\"") + key + "\" must be an integer");
  return v.get<long>();
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    raise(Errc::ParseError, e.what());
  }
}

Json precision_to_json(const PadicScalar& a) {
  if (a.is_exact_zero()) return nullptr;
  return a.precision();
}

long precision_from_json(const Json& j) {
  if (j.is_null()) return kExactPrec;
  if (!j.is_number_integer()) raise(Errc::ParseError, "precision must be an integer or null");
  return j.get<long>();
}

}  // namespace

Json scalar_to_json(const PadicScalar& a) {
  if (a.is_zero()) return Json::array({nullptr, "0"});
  return Json::array({a.valuation(), a.unit().get_str(16)});
}

PadicScalar scalar_from_json(unsigned long p, const Json& j, long prec) {
  return guarded([&] {
    if (!j.is_array() || j.size() != 2 || !j[1].is_string())
      raise(Errc::ParseError, "scalar must be [valuation, \"hex\"]");
    Integer u;
    if (u.set_str(j[1].get<std::string>(), 16) != 0) raise(Errc::ParseError, "bad hex mantissa");
    if (j[0].is_null()) {
      if (u != 0) raise(Errc::ParseError, "null valuation with a nonzero mantissa");
      return PadicScalar::zero(p, prec);
    }
    if (!j[0].is_number_integer()) raise(Errc::ParseError, "valuation must be an integer");
    if (u == 0) raise(Errc::ParseError, "zero mantissa needs a null valuation");
    if (prec >= kExactPrec) raise(Errc::ParseError, "nonzero scalar needs a finite precision");
    return PadicScalar::from_parts(p, j[0].get<long>(), u, prec);
  });
}

Json integer_to_json(const Integer& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long>()));
  if (j.is_string()) {
    Integer n;
    if (n.set_str(j.get<std::string>(), 10) != 0) raise(Errc::ParseError, "bad integer string");
    return n;
  }
  raise(Errc::ParseError, "integer expected");
}

Json field_to_json(const LocalField& F) {
  const Tower& t = F.tower();
  Json unram = Json::array();
  for (auto c : t.unram) unram.push_back(c);
  Json eis = Json::array();
  for (const auto& a : t.eis) {
    Json row = Json::array();
    for (const auto& c : a) row.push_back(integer_to_json(c));
    eis.push_back(row);
  }
  return Json{{"p", t.p}, {"f", t.f}, {"e", t.e}, {"unram", unram}, {"eis", eis}, {"N", t.N}};
}

LocalField field_from_json(const Json& j) {
  return guarded([&] {
    TowerSpec s;
    long p = need_long(j, "p");
    if (p < 2) raise(Errc::BadPrime, "prime must be at least 2");
    s.p = static_cast<unsigned long>(p);
    s.f = static_cast<int>(j.contains("f") ? need_long(j, "f") : 1);
    s.e = static_cast<int>(j.contains("e") ? need_long(j, "e") : 1);
    s.N = j.contains("N") ? need_long(j, "N") : 64;
    if (j.contains("unram") && !j.at("unram").is_null()) {
      for (const auto& c : j.at("unram")) {
        if (!c.is_number_integer()) raise(Errc::ParseError, "unram coefficients must be integers");
        long v = c.get<long>();
        s.unram.push_back(static_cast<unsigned long>(((v % p) + p) % p));
      }
    }
    if (j.contains("eis") && !j.at("eis").is_null()) {
      for (const auto& row : j.at("eis")) {
        UVec a;
        if (row.is_array()) {
          for (const auto& c : row) a.push_back(integer_from_json(c));
        } else {
          a.push_back(integer_from_json(row));
        }
        s.eis.push_back(a);
      }
    }
    return make_tower(s);
  });
}

Json element_to_json(const FieldElement& x) {
  const LocalField& F = x.field();
  Json coeffs = Json::array();
  for (int i = 0; i < F.f(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < F.e(); ++j) row.push_back(scalar_to_json(x.coordinate(i, j)));
    coeffs.push_back(row);
  }
  Json v = x.is_zero() ? Json(nullptr) : Json(x.valuation());
  return Json{{"field", field_to_json(F)}, {"coeffs", coeffs}, {"prec", x.precision()}, {"valuation", v}};
}

FieldElement element_from_json(const Json& j, const LocalField& F) {
  return guarded([&] {
    if (j.contains("field") && !field_from_json(j.at("field")).same_field(F))
      raise(Errc::ParseError, "element belongs to a different field");
    long prec = need_long(j, "prec");
    const Json& c = need(j, "coeffs");
    if (!c.is_array() || static_cast<int>(c.size()) != F.f()) raise(Errc::ParseError, "coeffs must have f rows");
    std::vector<PadicScalar> xs(static_cast<size_t>(F.e() * F.f()));
    for (int i = 0; i < F.f(); ++i) {
      if (!c[i].is_array() || static_cast<int>(c[i].size()) != F.e())
        raise(Errc::ParseError, "each coeffs row must have e entries");
      for (int k = 0; k < F.e(); ++k)
        xs[k * F.f() + i] = scalar_from_json(F.p(), c[i][k], ceil_div(prec - k, F.e()));
    }
    return FieldElement::from_coordinates(F, xs, prec);
  });
}

FieldElement element_from_json(const Json& j) {
  return guarded([&] { return element_from_json(j, field_from_json(need(j, "field"))); });
}

Json series_to_json(const Series1& s) {
  Json c = Json::array(), pr = Json::array();
  for (const auto& a : s.coeffs()) {
    c.push_back(scalar_to_json(a));
    pr.push_back(precision_to_json(a));
  }
  return Json{{"vars", 1}, {"p", s.prime()}, {"D", s.degree()}, {"coeffs", c}, {"prec", pr}};
}

Json series_to_json(const Series2& s) {
  Json c = Json::array(), pr = Json::array();
  for (int i = 0; i <= s.degree(); ++i) {
    Json row = Json::array(), prow = Json::array();
    for (int j = 0; i + j <= s.degree(); ++j) {
      row.push_back(scalar_to_json(s.at(i, j)));
      prow.push_back(precision_to_json(s.at(i, j)));
    }
    c.push_back(row);
    pr.push_back(prow);
  }
  return Json{{"vars", 2}, {"p", s.prime()}, {"D", s.degree()}, {"coeffs", c}, {"prec", pr}};
}

Series1 series1_from_json(const Json& j) {
  return guarded([&] {
    if (need_long(j, "vars") != 1) raise(Errc::ParseError, "expected a one-variable series");
    unsigned long p = static_cast<unsigned long>(need_long(j, "p"));
    int D = static_cast<int>(need_long(j, "D"));
    const Json& c = need(j, "coeffs");
    const Json& pr = need(j, "prec");
    if (D < 1 || c.size() != static_cast<size_t>(D + 1) || pr.size() != c.size())
      raise(Errc::ParseError, "coefficient list must have D+1 entries");
    Series1 s(p, D);
    for (int n = 0; n <= D; ++n) s[n] = scalar_from_json(p, c[n], precision_from_json(pr[n]));
    return s;
  });
}

Series2 series2_from_json(const Json& j) {
  return guarded([&] {
    if (need_long(j, "vars") != 2) raise(Errc::ParseError, "expected a two-variable series");
    unsigned long p = static_cast<unsigned long>(need_long(j, "p"));
    int D = static_cast<int>(need_long(j, "D"));
    const Json& c = need(j, "coeffs");
    const Json& pr = need(j, "prec");
    if (D < 1 || c.size() != static_cast<size_t>(D + 1) || pr.size() != c.size())
      raise(Errc::ParseError, "coefficient rows must number D+1");
    Series2 s(p, D);
    for (int i = 0; i <= D; ++i) {
      if (c[i].size() != static_cast<size_t>(D - i + 1) || pr[i].size() != c[i].size())
        raise(Errc::ParseError, "row " + std::to_string(i) + " must have D-i+1 entries");
      for (int k = 0; i + k <= D; ++k) s.at(i, k) = scalar_from_json(p, c[i][k], precision_from_json(pr[i][k]));
    }
    return s;
  });
}

}  // namespace ltforge
