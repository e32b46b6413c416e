#ifndef MUSTCALL_PARSER_HPP
#define MUSTCALL_PARSER_HPP

#include <memory>

#include "mustcall/ast.hpp"
#include "mustcall/lexer.hpp"

namespace mustcall {

/// Parses one unit into its declaration tree. Throws ParseError at the first
/// syntax error (message names the expected token). Attribute arity and
/// placement are validated here as well.
std::unique_ptr<CompilationUnit> parse_unit(const SourceUnit& unit);

/// Convenience overload for pre-lexed tokens.
std::unique_ptr<CompilationUnit> parse_tokens(const std::string& path,
                                              const std::vector<Token>& tokens);

} // namespace mustcall

#endif
