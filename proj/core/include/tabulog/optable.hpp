#pragma once

#include "tabulog/symbols.hpp"

namespace tabulog {

// The fixed operator table shared by the parser and the writer. Lower
// priority binds tighter.
enum class op_type : std::uint8_t { xfx, xfy, yfx, fy };

struct op_info {
  int priority;
  op_type type;
};

const op_info* infix_op(symbol_id s);
const op_info* prefix_op(symbol_id s);

}  // namespace tabulog
