#pragma once

#include <string>

#include "sizax/ast.hpp"
#include "sizax/index.hpp"
#include "sizax/simple_type.hpp"
#include "sizax/sized_type.hpp"

namespace sizax {

// Parses a whole program. Lambdas are lifted to top-level functions named
// `<enclosing>_l<n>`; their captured variables become leading parameters.
Program parse_program(const std::string& source);

SimpleType parse_simple_type(const std::string& text);
SizedType parse_sized_type(const std::string& text);
IndexTerm parse_index_term(const std::string& text);

// A closed constructor term such as `[1,2,3]` or `(Succ 0, [])`.
TermPtr parse_value(const std::string& text, const Program& context);

// A closed term that may also mention the program's functions.
TermPtr parse_expression(const std::string& text, const Program& context);

}  // namespace sizax
