#include "ltforge/expr.hpp"

#include <cctype>
#include <sstream>

namespace ltforge {

namespace {

struct Token {
  enum Kind { Num, Atom, Op, Sup, End } kind;
  Integer num;
  char ch = 0;    // atom name p/w/z, or operator character
  long sup = 0;   // superscript exponent
  size_t pos = 0;
};

bool take(const std::string& s, size_t& i, const char* utf8) {
  size_t n = std::char_traits<char>::length(utf8);
  if (s.compare(i, n, utf8) != 0) return false;
  i += n;
  return true;
}

int superscript_digit(const std::string& s, size_t& i) {
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴",
                                 "⁵", "⁶", "⁷", "⁸", "⁹"};
  for (int d = 0; d < 10; ++d)
    if (take(s, i, digits[d])) return d;
  return -1;
}

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    const size_t start = i;
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isdigit(c)) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      Token t{Token::Num, Integer(s.substr(start, i - start)), 0, 0, start};
      out.push_back(t);
      continue;
    }
    if (c == 'p' || c == 'w' || c == 'z') {
      out.push_back({Token::Atom, 0, static_cast<char>(c), 0, start});
      ++i;
      continue;
    }
    if (take(s, i, "ϖ")) {
      out.push_back({Token::Atom, 0, 'w', 0, start});
      continue;
    }
    if (take(s, i, "ζ")) {
      out.push_back({Token::Atom, 0, 'z', 0, start});
      continue;
    }
    if (std::string("+-*/^()").find(static_cast<char>(c)) != std::string::npos) {
      out.push_back({Token::Op, 0, static_cast<char>(c), 0, start});
      ++i;
      continue;
    }
    bool negative = take(s, i, "⁻");
    long value = 0;
    int digits = 0;
    for (int d; (d = superscript_digit(s, i)) >= 0; ++digits) value = value * 10 + d;
    if (digits > 0) {
      out.push_back({Token::Sup, 0, 0, negative ? -value : value, start});
      continue;
    }
    raise(Errc::ParseError, "unexpected character at offset " + std::to_string(start));
  }
  out.push_back({Token::End, 0, 0, 0, s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const LocalField& F, long prec) : t_(std::move(toks)), F_(F), prec_(prec) {}

  FieldElement parse() {
    FieldElement x = expr();
    if (peek().kind != Token::End) fail("trailing input");
    return x;
  }

 private:
  const Token& peek() const { return t_[i_]; }
  bool is_op(char c) const { return peek().kind == Token::Op && peek().ch == c; }
  [[noreturn]] void fail(const std::string& msg) const {
    raise(Errc::ParseError, msg + " at offset " + std::to_string(peek().pos));
  }

  FieldElement expr() {
    FieldElement x = term();
    while (is_op('+') || is_op('-')) {
      char op = t_[i_++].ch;
      FieldElement y = term();
      x = op == '+' ? x + y : x - y;
    }
    return x;
  }

  bool starts_atom() const {
    const Token& t = peek();
    return t.kind == Token::Num || t.kind == Token::Atom || (t.kind == Token::Op && t.ch == '(');
  }

  FieldElement term() {
    FieldElement x = unary();
    while (true) {
      if (is_op('*') || is_op('/')) {
        char op = t_[i_++].ch;
        FieldElement y = unary();
        if (op == '/') {
          if (y.is_zero()) fail("division by zero");
          x = x / y;
        } else {
          x = x * y;
        }
      } else if (starts_atom()) {
        x = x * power();
      } else {
        return x;
      }
    }
  }

  FieldElement unary() {
    if (is_op('-')) {
      ++i_;
      return -unary();
    }
    return power();
  }

  long exponent() {
    bool neg = false;
    if (is_op('-')) {
      ++i_;
      neg = true;
    }
    long n;
    if (is_op('(')) {
      ++i_;
      n = exponent();
      if (!is_op(')')) fail("expected ')'");
      ++i_;
    } else if (peek().kind == Token::Num) {
      if (!peek().num.fits_slong_p()) fail("exponent too large");
      n = peek().num.get_si();
      ++i_;
    } else {
      fail("integer exponent expected");
    }
    return neg ? -n : n;
  }

  FieldElement raise_to(const FieldElement& x, long n) {
    if (n >= 0) return x.pow(n);
    if (x.is_zero()) fail("negative power of zero");
    return x.inverse().pow(-n);
  }

  FieldElement power() {
    FieldElement x = atom();
    if (is_op('^')) {
      ++i_;
      return raise_to(x, exponent());
    }
    if (peek().kind == Token::Sup) return raise_to(x, t_[i_++].sup);
    return x;
  }

  FieldElement atom() {
    const Token& t = peek();
    if (t.kind == Token::Num) {
      ++i_;
      return FieldElement::from_integer(F_, t.num, prec_);
    }
    if (t.kind == Token::Atom) {
      ++i_;
      switch (t.ch) {
        case 'p':
          return FieldElement::from_integer(F_, F_.p(), prec_);
        case 'w':
          return FieldElement::uniformizer(F_, prec_);
        default:
          return FieldElement::generator(F_, prec_);
      }
    }
    if (is_op('(')) {
      ++i_;
      FieldElement x = expr();
      if (!is_op(')')) fail("expected ')'");
      ++i_;
      return x;
    }
    fail("unexpected token");
  }

  std::vector<Token> t_;
  size_t i_ = 0;
  const LocalField& F_;
  long prec_;
};

}  // namespace

FieldElement parse_element(const std::string& text, const LocalField& F, long prec) {
  // evaluate with guard digits so that divisions do not eat into the requested precision
  const long guard = prec + 16L * F.e();
  FieldElement x = Parser(tokenize(text), F, prec + guard).parse();
  return x.with_precision(prec);
}

std::string to_expression(const FieldElement& x) {
  if (x.is_zero()) return "0";
  const LocalField& F = x.field();
  std::ostringstream os;
  bool first = true;
  for (int j = 0; j < F.e(); ++j)
    for (int i = 0; i < F.f(); ++i) {
      Integer c = x.coeffs()[static_cast<size_t>(j * F.f() + i)];
      if (c == 0) continue;
      if (c < 0) {
        os << (first ? "-" : " - ");
        c = -c;
      } else if (!first) {
        os << " + ";
      }
      first = false;
      os << c.get_str();
      if (x.shift() != 0) os << "*p^" << (x.shift() < 0 ? "(" + std::to_string(x.shift()) + ")" : std::to_string(x.shift()));
      if (i > 0) os << "*z^" << i;
      if (j > 0) os << "*w^" << j;
    }
  return os.str();
}

}  // namespace ltforge
