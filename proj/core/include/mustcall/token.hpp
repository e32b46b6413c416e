#ifndef MUSTCALL_TOKEN_HPP
#define MUSTCALL_TOKEN_HPP

#include <string>
#include <vector>

#include "mustcall/source.hpp"

namespace mustcall {

enum class TokenKind {
    Ident,
    IntLit,
    // keywords
    KwClass,
    KwNew,
    KwNull,
    KwIf,
    KwElse,
    KwWhile,
    KwTry,
    KwCatch,
    KwFinally,
    KwUsing,
    KwReturn,
    KwThrow,
    KwStatic,
    KwReadonly,
    KwVar,
    KwThis,
    // punctuation
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Dot,
    Assign,
    EqEq,
    NotEq,
    Lt,
    Gt,
    Plus,
    Minus,
    Star,
    Slash,
    Colon,
    Ellipsis,
    Eof,
};

const char* token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::string text;
    Span span;
};

} // namespace mustcall

#endif
