#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sizax/ast.hpp"
#include "sizax/index.hpp"
#include "sizax/typecheck.hpp"

namespace sizax {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

// A constructor applied to values, or a function (or constructor) applied to
// fewer values than its arity.
struct Value {
  enum class Kind { Data, Partial };

  Kind kind = Kind::Data;
  std::string name;
  std::vector<ValuePtr> args;

  static ValuePtr data(std::string name, std::vector<ValuePtr> args = {});
  static ValuePtr partial(std::string name, std::vector<ValuePtr> args = {});
  static ValuePtr nat(unsigned n);
  static ValuePtr list(const std::vector<ValuePtr>& elements);
  static ValuePtr pair(ValuePtr a, ValuePtr b);
};

bool operator==(const Value& a, const Value& b);
std::string to_string(const Value& v);
std::string to_string(const ValuePtr& v);

// Values to closed terms and back (constructor terms only for the latter).
TermPtr to_term(const ValuePtr& v);
ValuePtr to_value(const TermPtr& t);

enum class EvalStatus { Finished, FuelExhausted };

struct EvalResult {
  ValuePtr value;
  std::uint64_t steps = 0;  // equation firings of functions that are not cost-free
  EvalStatus status = EvalStatus::Finished;
};

inline constexpr std::uint64_t kDefaultFuel = 1000000;

// Call-by-value, arguments left to right, on an explicit stack. Fuel limits
// the number of equation firings. Throws StuckTerm when no equation matches.
EvalResult evaluate(const Program& p, const TermPtr& t, std::uint64_t fuel = kDefaultFuel);
EvalResult call(const Program& p, const std::string& f, const std::vector<ValuePtr>& args,
                std::uint64_t fuel = kDefaultFuel);

// Size of a data value under the given measure; throws NotData on partial
// applications and pairs.
std::uint64_t size(const Program& p, const ValuePtr& v, SizeMeasure measure = SizeMeasure::Natural);

// A random data value of simple type `t` whose size is exactly `n`, if one
// exists. Sizeless parts (list elements, atoms) are drawn with sizes up to
// `elementBudget`.
std::optional<ValuePtr> generate_value(const Program& p, const SimpleType& t, unsigned n, std::mt19937_64& rng,
                                       SizeMeasure measure = SizeMeasure::Natural, unsigned elementBudget = 5);

struct InputTuple {
  std::vector<ValuePtr> args;
  std::vector<unsigned> sizes;
};

// Inputs for a first-order function whose arguments are all of base type:
// every size tuple within the budget when there are at most two arguments,
// `samples` random tuples otherwise.
std::vector<InputTuple> generate_inputs(const Program& p, const std::vector<SimpleType>& argTypes, unsigned budget,
                                        std::uint64_t seed, SizeMeasure measure = SizeMeasure::Natural,
                                        unsigned samples = 200);

// Argument and result types of a first-order function with base-typed
// arguments and result, or nothing.
std::optional<std::pair<std::vector<SimpleType>, SimpleType>> first_order_signature(const FunctionDef& f);

struct BoundCheck {
  InputTuple input;
  std::optional<std::uint64_t> observed;  // absent when inconclusive
  std::uint64_t predicted = 0;
  std::uint64_t steps = 0;
  std::string note;

  bool violation() const { return observed && *observed > predicted; }
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  size_t violations = 0;
  size_t inconclusive = 0;
};

// Runs `entry` on every input and compares the output size with the result
// index of `type` evaluated at the input sizes.
BoundReport check_bound(const Program& p, const SizedType& type, const Interpretation& interp,
                        const std::string& entry, const std::vector<InputTuple>& inputs,
                        std::uint64_t fuel = kDefaultFuel, SizeMeasure measure = SizeMeasure::Natural);

}  // namespace sizax
