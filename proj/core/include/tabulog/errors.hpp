#pragma once

#include <stdexcept>
#include <string>

namespace tabulog {

// Base class for all errors raised by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Source text could not be parsed. Carries a 1-based location.
struct parse_error : error {
  parse_error(std::string msg, int line, int column)
      : error(msg + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line(line),
        column(column) {}
  int line;
  int column;
};

// A goal referred to a predicate with no clauses and no table declaration.
struct existence_error : error {
  using error::error;
};

// A goal was semantically ill-formed at call time: an unbound variable or a
// non-callable term where a goal was expected, or a non-evaluable expression
// under arithmetic.
struct type_error : error {
  using error::error;
};

// An arithmetic argument was insufficiently instantiated.
struct instantiation_error : error {
  using error::error;
};

// A configured resource limit (derivation step cap) was exceeded.
struct resource_error : error {
  using error::error;
};

}  // namespace tabulog
