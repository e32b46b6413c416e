#include "mustcall/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace mustcall {

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::IntLit: return "integer";
    case TokenKind::KwClass: return "'class'";
    case TokenKind::KwNew: return "'new'";
    case TokenKind::KwNull: return "'null'";
    case TokenKind::KwIf: return "'if'";
    case TokenKind::KwElse: return "'else'";
    case TokenKind::KwWhile: return "'while'";
    case TokenKind::KwTry: return "'try'";
    case TokenKind::KwCatch: return "'catch'";
    case TokenKind::KwFinally: return "'finally'";
    case TokenKind::KwUsing: return "'using'";
    case TokenKind::KwReturn: return "'return'";
    case TokenKind::KwThrow: return "'throw'";
    case TokenKind::KwStatic: return "'static'";
    case TokenKind::KwReadonly: return "'readonly'";
    case TokenKind::KwVar: return "'var'";
    case TokenKind::KwThis: return "'this'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::Semi: return "';'";
    case TokenKind::Comma: return "','";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Assign: return "'='";
    case TokenKind::EqEq: return "'=='";
    case TokenKind::NotEq: return "'!='";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Gt: return "'>'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Ellipsis: return "'...'";
    case TokenKind::Eof: return "end of file";
    }
    return "?";
}

namespace {

const std::unordered_map<std::string, TokenKind>& keyword_table() {
    static const std::unordered_map<std::string, TokenKind> table = {
        {"class", TokenKind::KwClass},       {"new", TokenKind::KwNew},
        {"null", TokenKind::KwNull},         {"if", TokenKind::KwIf},
        {"else", TokenKind::KwElse},         {"while", TokenKind::KwWhile},
        {"try", TokenKind::KwTry},           {"catch", TokenKind::KwCatch},
        {"finally", TokenKind::KwFinally},   {"using", TokenKind::KwUsing},
        {"return", TokenKind::KwReturn},     {"throw", TokenKind::KwThrow},
        {"static", TokenKind::KwStatic},     {"readonly", TokenKind::KwReadonly},
        {"var", TokenKind::KwVar},           {"this", TokenKind::KwThis},
    };
    return table;
}

class Lexer {
  public:
    explicit Lexer(const SourceUnit& unit) : unit_(unit) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        for (;;) {
            skip_trivia();
            Span at = here();
            if (eof()) {
                tokens.push_back({TokenKind::Eof, "", at});
                return tokens;
            }
            char c = peek();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                tokens.push_back(lex_word(at));
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                tokens.push_back(lex_number(at));
            } else {
                tokens.push_back(lex_punct(at));
            }
        }
    }

  private:
    bool eof() const { return pos_ >= unit_.text.size(); }
    char peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < unit_.text.size() ? unit_.text[i] : '\0';
    }
    char advance() {
        char c = unit_.text[pos_++];
        if (c == '\n') {
            line_++;
            column_ = 1;
        } else {
            column_++;
        }
        return c;
    }
    Span here() const { return Span{unit_.path, line_, column_}; }

    [[noreturn]] void fail(const Span& at, const std::string& msg) {
        throw ParseError(Diagnostic{at.file, at.line, at.column, msg});
    }

    void skip_trivia() {
        for (;;) {
            if (eof()) return;
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!eof() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                Span at = here();
                advance();
                advance();
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (eof()) fail(at, "unterminated block comment");
                    advance();
                }
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    Token lex_word(Span at) {
        std::string text;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            text.push_back(advance());
        }
        auto it = keyword_table().find(text);
        if (it != keyword_table().end()) return {it->second, text, at};
        return {TokenKind::Ident, text, at};
    }

    Token lex_number(Span at) {
        std::string text;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            text.push_back(advance());
        }
        return {TokenKind::IntLit, text, at};
    }

    Token lex_punct(Span at) {
        char c = advance();
        switch (c) {
        case '{': return {TokenKind::LBrace, "{", at};
        case '}': return {TokenKind::RBrace, "}", at};
        case '(': return {TokenKind::LParen, "(", at};
        case ')': return {TokenKind::RParen, ")", at};
        case '[': return {TokenKind::LBracket, "[", at};
        case ']': return {TokenKind::RBracket, "]", at};
        case ';': return {TokenKind::Semi, ";", at};
        case ',': return {TokenKind::Comma, ",", at};
        case '+': return {TokenKind::Plus, "+", at};
        case '-': return {TokenKind::Minus, "-", at};
        case '*': return {TokenKind::Star, "*", at};
        case '/': return {TokenKind::Slash, "/", at};
        case ':': return {TokenKind::Colon, ":", at};
        case '<': return {TokenKind::Lt, "<", at};
        case '>': return {TokenKind::Gt, ">", at};
        case '=':
            if (peek() == '=') {
                advance();
                return {TokenKind::EqEq, "==", at};
            }
            return {TokenKind::Assign, "=", at};
        case '!':
            if (peek() == '=') {
                advance();
                return {TokenKind::NotEq, "!=", at};
            }
            fail(at, "unrecognized character '!'");
        case '.':
            if (peek() == '.') {
                advance();
                if (peek() == '.') {
                    advance();
                    return {TokenKind::Ellipsis, "...", at};
                }
                fail(at, "unrecognized token '..'");
            }
            return {TokenKind::Dot, ".", at};
        default:
            fail(at, std::string("unrecognized character '") + c + "'");
        }
    }

    const SourceUnit& unit_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

} // namespace

std::vector<Token> lex(const SourceUnit& unit) { return Lexer(unit).run(); }

} // namespace mustcall
