#ifndef MUSTCALL_LEXER_HPP
#define MUSTCALL_LEXER_HPP

#include <vector>

#include "mustcall/source.hpp"
#include "mustcall/token.hpp"

namespace mustcall {

/// Tokenizes a unit. The final token is always Eof. Throws ParseError on an
/// unrecognized character. `//` and `/* */` comments are skipped; `...` is a
/// single token (the opaque/nondeterministic expression).
std::vector<Token> lex(const SourceUnit& unit);

} // namespace mustcall

#endif
