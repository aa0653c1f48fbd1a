#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tabulog/errors.hpp"
#include "tabulog/program.hpp"
#include "tabulog/term.hpp"

namespace tabulog {

// Parses program text: clauses, facts, `:- table name/arity.` directives and
// % comments. Any other directive is rejected. Throws parse_error with a
// 1-based source location.
program parse_program(std::string_view text);

struct query {
  std::vector<term> goals;
  // Named variables in first-occurrence order ('_' occurrences excluded).
  std::vector<std::pair<std::string, term>> vars;
};

// Parses one query, e.g. "p(X, Y)." - a goal or comma conjunction ended by
// a dot. Terms are built in the given store.
query parse_query(std::string_view text, term_store& st);

}  // namespace tabulog
