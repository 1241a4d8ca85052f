#include "ltforge/error.hpp"

namespace ltforge {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::BadPrime: return "BadPrime";
    case Errc::NotEisenstein: return "NotEisenstein";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::WrongLevel: return "WrongLevel";
    case Errc::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case Errc::NonIntegralCoefficient: return "NonIntegralCoefficient";
    case Errc::NotLubinTate: return "NotLubinTate";
    case Errc::NotIntegral: return "NotIntegral";
    case Errc::TailBoundViolated: return "TailBoundViolated";
    case Errc::OutsideConvergenceDisc: return "OutsideConvergenceDisc";
    case Errc::SeriesNotPolynomial: return "SeriesNotPolynomial";
    case Errc::NotRegular: return "NotRegular";
    case Errc::RegularFieldGiven: return "RegularFieldGiven";
    case Errc::NotInSpan: return "NotInSpan";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::RatioTooSmall: return "RatioTooSmall";
    case Errc::StuckLevel: return "StuckLevel";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InternalError: return "InternalError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ltforge
