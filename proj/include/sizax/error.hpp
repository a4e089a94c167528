#pragma once

#include <stdexcept>
#include <string>

namespace sizax {

struct SourceLoc {
  int line = 0;
  int column = 0;

  bool valid() const { return line > 0; }
  std::string str() const;
};

enum class ErrorKind {
  Syntax,
  UnknownIdentifier,
  Unsupported,
  TypeMismatch,
  WellFormedness,
  UnboundSymbol,
  SkeletonMismatch,
  MatchFailure,
  ArityMismatch,
  NonCanonicalDeclaration,
  PatternNotBase,
  GeneralisationViolation,
  SubtypeFailure,
  UnsupportedRank,
  StuckTerm,
  NotData,
  Unsolved,
  AmbiguousInstantiation,
  Usage,
};

const char* to_string(ErrorKind kind);

// Every stage reports failures through this type; `loc` is optional.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message, SourceLoc loc = {});

  ErrorKind kind() const { return kind_; }
  SourceLoc loc() const { return loc_; }

private:
  ErrorKind kind_;
  SourceLoc loc_;
};

}  // namespace sizax
