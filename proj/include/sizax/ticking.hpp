#pragma once

#include <map>
#include <optional>
#include <string>

#include "sizax/ast.hpp"
#include "sizax/index.hpp"
#include "sizax/sized_type.hpp"

namespace sizax {

struct TickConfig {
  // Use a dedicated clock type `C#` (constructors `Z#`, `T#`) instead of Nat.
  bool freshClock = false;
};

struct ClockType {
  SimpleType type;
  std::string zero;
  std::string tick;
};

ClockType clock_type(const TickConfig& cfg = {});

// <B> = B, <a x b> = <a> x <b>, <a -> b> = <a> -> C -> (<b> x C).
SimpleType tick_type(const SimpleType& t, const SimpleType& clock = builtin::nat());

struct TickedProgram {
  Program program;
  std::map<std::string, std::string> names;  // original function -> ticked function
  ClockType clock;
};

// Name of the ticked counterpart of `f`.
std::string ticked_name(const std::string& f);

// Every equation f p1..pk = r becomes f# p1..pk c = R[r](tick c), threading
// the clock through saturated calls left to right. Sequencing goes through
// cost-free auxiliary functions with pair patterns; partial applications go
// through cost-free wrappers. Requires a simply typed program; the result is
// simply typed as well.
TickedProgram tick_program(const Program& p, const TickConfig& cfg = {});

// Index of the clock component of a ticked function's result, with the
// incoming clock set to zero: the runtime bound in terms of the argument
// size variables.
std::optional<IndexTerm> clock_bound(const SizedType& tickedType);

}  // namespace sizax
