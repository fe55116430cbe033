#pragma once

#include <string>
#include <string_view>

#include "tkc/context.hpp"

namespace tkc {

struct ParsedProblem {
  FormulaId formula;  // conjunction of all asserts
  AtomSet atoms;      // first-occurrence order
};

/// Parses the QF_LRA subset: declare-fun/declare-const of Real and Bool,
/// assert over and/or/not/=>/xor/iff/ite/= with <=,<,>=,>,= on linear terms.
/// Throws ParseError carrying line and column.
ParsedProblem parseSmt2(Context& ctx, std::string_view text);

/// Prints a T-formula as a self-contained script that parseSmt2 reads back
/// to the same handle.
std::string printSmt2(const Context& ctx, FormulaId f);

}  // namespace tkc
