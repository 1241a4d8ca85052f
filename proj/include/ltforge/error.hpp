#pragma once

#include <stdexcept>
#include <string>

namespace ltforge {

enum class Errc {
  BadPrime,
  NotEisenstein,
  NotIrreducible,
  PrecisionExhausted,
  WrongLevel,
  NonzeroConstantTerm,
  NonIntegralCoefficient,
  NotLubinTate,
  NotIntegral,
  TailBoundViolated,
  OutsideConvergenceDisc,
  SeriesNotPolynomial,
  NotRegular,
  RegularFieldGiven,
  NotInSpan,
  RankDeficient,
  RatioTooSmall,
  StuckLevel,
  ParseError,
  InvalidArgument,
  InternalError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& what);

}  // namespace ltforge
