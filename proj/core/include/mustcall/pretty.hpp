#ifndef MUSTCALL_PRETTY_HPP
#define MUSTCALL_PRETTY_HPP

#include <string>

#include "mustcall/ast.hpp"

namespace mustcall {

/// Renders a unit back to parseable source text. parse(pretty_print(ast)) is
/// structurally identical to ast (spans differ).
std::string pretty_print(const CompilationUnit& unit);

std::string pretty_print(const Stmt& stmt, int indent = 0);
std::string pretty_print(const Expr& expr);

} // namespace mustcall

#endif
