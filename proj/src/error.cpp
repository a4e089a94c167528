#include "sizax/error.hpp"

namespace sizax {

std::string SourceLoc::str() const {
  if (!valid()) return "<unknown>";
  return std::to_string(line) + ":" + std::to_string(column);
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::WellFormedness: return "WellFormedness";
    case ErrorKind::UnboundSymbol: return "UnboundSymbol";
    case ErrorKind::SkeletonMismatch: return "SkeletonMismatch";
    case ErrorKind::MatchFailure: return "MatchFailure";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NonCanonicalDeclaration: return "NonCanonicalDeclaration";
    case ErrorKind::PatternNotBase: return "PatternNotBase";
    case ErrorKind::GeneralisationViolation: return "GeneralisationViolation";
    case ErrorKind::SubtypeFailure: return "SubtypeFailure";
    case ErrorKind::UnsupportedRank: return "UnsupportedRank";
    case ErrorKind::StuckTerm: return "StuckTerm";
    case ErrorKind::NotData: return "NotData";
    case ErrorKind::Unsolved: return "Unsolved";
    case ErrorKind::AmbiguousInstantiation: return "AmbiguousInstantiation";
    case ErrorKind::Usage: return "UsageError";
  }
  return "Error";
}

static std::string format(ErrorKind kind, const std::string& message, SourceLoc loc) {
  std::string out = to_string(kind);
  if (loc.valid()) out += " at " + loc.str();
  return out + ": " + message;
}

Error::Error(ErrorKind kind, const std::string& message, SourceLoc loc)
    : std::runtime_error(format(kind, message, loc)), kind_(kind), loc_(loc) {}

}  // namespace sizax
