#include "mustcall/parser.hpp"

#include <cassert>

namespace mustcall {

namespace {

// Access modifiers are accepted and discarded; they carry no meaning here.
bool is_access_modifier(const Token& tok) {
    return tok.kind == TokenKind::Ident &&
           (tok.text == "public" || tok.text == "private" || tok.text == "protected" ||
            tok.text == "internal");
}

class Parser {
  public:
    Parser(std::string path, const std::vector<Token>& tokens)
        : path_(std::move(path)), tokens_(tokens) {}

    std::unique_ptr<CompilationUnit> run() {
        auto unit = std::make_unique<CompilationUnit>();
        unit->path = path_;
        while (!check(TokenKind::Eof)) {
            unit->classes.push_back(parse_class());
        }
        return unit;
    }

  private:
    // --- token plumbing ---

    const Token& peek(size_t ahead = 0) const {
        size_t i = idx_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool check(TokenKind kind) const { return peek().kind == kind; }
    const Token& advance() { return tokens_[idx_ < tokens_.size() - 1 ? idx_++ : idx_]; }
    bool match(TokenKind kind) {
        if (!check(kind)) return false;
        advance();
        return true;
    }
    const Token& expect(TokenKind kind, const char* context) {
        if (!check(kind)) {
            fail(peek().span, std::string("expected ") + token_kind_name(kind) + " in " +
                                  context + ", found '" + describe(peek()) + "'");
        }
        return advance();
    }
    static std::string describe(const Token& tok) {
        return tok.kind == TokenKind::Eof ? "end of file" : tok.text;
    }
    [[noreturn]] void fail(const Span& at, const std::string& msg) const {
        throw ParseError(Diagnostic{at.file, at.line, at.column, msg});
    }

    // --- attributes ---

    AttributeSpec parse_attribute() {
        Span at = peek().span;
        expect(TokenKind::LBracket, "attribute");
        const Token& name = expect(TokenKind::Ident, "attribute");
        auto kind = attribute_kind_from_name(name.text);
        if (!kind) fail(name.span, "unknown attribute '" + name.text + "'");
        AttributeSpec spec;
        spec.kind = *kind;
        spec.span = at;
        if (match(TokenKind::LParen)) {
            if (!check(TokenKind::RParen)) {
                spec.args.push_back(expect(TokenKind::Ident, "attribute arguments").text);
                while (match(TokenKind::Comma)) {
                    spec.args.push_back(expect(TokenKind::Ident, "attribute arguments").text);
                }
            }
            expect(TokenKind::RParen, "attribute arguments");
        }
        expect(TokenKind::RBracket, "attribute");
        int want = attribute_arity(spec.kind);
        if (static_cast<int>(spec.args.size()) != want) {
            fail(at, std::string(attribute_kind_name(spec.kind)) + " takes " +
                         std::to_string(want) + " argument(s), got " +
                         std::to_string(spec.args.size()));
        }
        return spec;
    }

    std::vector<AttributeSpec> parse_attribute_list() {
        std::vector<AttributeSpec> attrs;
        while (check(TokenKind::LBracket)) attrs.push_back(parse_attribute());
        return attrs;
    }

    void reject_attr(const AttributeSpec& attr, const char* where) const {
        fail(attr.span, std::string("attribute ") + attribute_kind_name(attr.kind) +
                            " is not allowed on " + where);
    }

    // --- types ---

    std::string parse_type_name() {
        const Token& base = expect(TokenKind::Ident, "type");
        std::string name = base.text;
        if (match(TokenKind::Lt)) {
            name += "<" + parse_type_name() + ">";
            expect(TokenKind::Gt, "type arguments");
        }
        return name;
    }

    // --- declarations ---

    ClassDecl parse_class() {
        ClassDecl decl;
        auto attrs = parse_attribute_list();
        for (const auto& a : attrs) {
            if (a.kind != AttributeKind::MustCall) reject_attr(a, "a class declaration");
        }
        if (attrs.size() > 1) fail(attrs[1].span, "at most one MustCall per class");
        decl.attributes = std::move(attrs);
        while (is_access_modifier(peek())) advance();
        decl.span = peek().span;
        expect(TokenKind::KwClass, "class declaration");
        decl.name = expect(TokenKind::Ident, "class declaration").text;
        // tolerated C#-ism: empty parens after the class name
        if (match(TokenKind::LParen)) expect(TokenKind::RParen, "class declaration");
        if (match(TokenKind::Colon)) {
            decl.heritage = expect(TokenKind::Ident, "class heritage").text;
        }
        expect(TokenKind::LBrace, "class body");
        while (!check(TokenKind::RBrace) && !check(TokenKind::Eof)) {
            parse_member(decl);
        }
        expect(TokenKind::RBrace, "class body");
        return decl;
    }

    void parse_member(ClassDecl& cls) {
        auto attrs = parse_attribute_list();
        bool is_static = false;
        bool readonly = false;
        for (;;) {
            if (is_access_modifier(peek())) {
                advance();
            } else if (check(TokenKind::KwStatic)) {
                advance();
                is_static = true;
            } else if (check(TokenKind::KwReadonly)) {
                advance();
                readonly = true;
            } else {
                break;
            }
        }

        // constructor: ClassName '('
        if (check(TokenKind::Ident) && peek().text == cls.name &&
            peek(1).kind == TokenKind::LParen) {
            Span at = peek().span;
            advance();
            MethodDecl ctor = parse_method_rest(cls.name, cls.name, attrs, at);
            ctor.is_constructor = true;
            ctor.is_static = is_static;
            if (readonly) fail(ctor.span, "readonly is not allowed on a constructor");
            cls.methods.push_back(std::move(ctor));
            return;
        }

        Span at = peek().span;
        std::string type = parse_type_name();
        const Token& name = expect(TokenKind::Ident, "member declaration");

        if (check(TokenKind::LParen)) {
            MethodDecl method = parse_method_rest(name.text, type, attrs, at);
            method.is_static = is_static;
            if (readonly) fail(method.span, "readonly is not allowed on a method");
            cls.methods.push_back(std::move(method));
            return;
        }

        // field
        for (const auto& a : attrs) {
            if (a.kind != AttributeKind::Owning) reject_attr(a, "a field declaration");
        }
        FieldDecl field;
        field.type_name = type;
        field.name = name.text;
        field.readonly = readonly;
        field.attributes = std::move(attrs);
        field.span = name.span;
        expect(TokenKind::Semi, "field declaration");
        cls.fields.push_back(std::move(field));
    }

    MethodDecl parse_method_rest(const std::string& name, const std::string& return_type,
                                 std::vector<AttributeSpec>& attrs, Span at) {
        MethodDecl method;
        method.name = name;
        method.return_type = return_type;
        method.span = at;
        for (auto& a : attrs) {
            switch (a.kind) {
            case AttributeKind::Owning:
            case AttributeKind::MustCallAlias:
                method.return_attributes.push_back(a);
                break;
            case AttributeKind::EnsuresCalledMethods:
                if (has_attribute(method.method_attributes, AttributeKind::EnsuresCalledMethods))
                    fail(a.span, "at most one EnsuresCalledMethods per method");
                method.method_attributes.push_back(a);
                break;
            case AttributeKind::CreateMustCallFor:
                if (has_attribute(method.method_attributes, AttributeKind::CreateMustCallFor))
                    fail(a.span, "at most one CreateMustCallFor per method");
                method.method_attributes.push_back(a);
                break;
            case AttributeKind::MustCall:
                reject_attr(a, "a method declaration");
            }
        }
        expect(TokenKind::LParen, "parameter list");
        if (!check(TokenKind::RParen)) {
            method.params.push_back(parse_param());
            while (match(TokenKind::Comma)) method.params.push_back(parse_param());
        }
        expect(TokenKind::RParen, "parameter list");
        method.body = parse_block();
        return method;
    }

    ParamDecl parse_param() {
        ParamDecl param;
        param.attributes = parse_attribute_list();
        for (const auto& a : param.attributes) {
            if (a.kind != AttributeKind::Owning && a.kind != AttributeKind::MustCallAlias) {
                reject_attr(a, "a parameter");
            }
        }
        param.span = peek().span;
        param.type_name = parse_type_name();
        const Token& name = expect(TokenKind::Ident, "parameter");
        param.name = name.text;
        param.span = name.span;
        return param;
    }

    // --- statements ---

    std::unique_ptr<BlockStmt> parse_block() {
        Span at = peek().span;
        expect(TokenKind::LBrace, "block");
        auto block = std::make_unique<BlockStmt>(at);
        while (!check(TokenKind::RBrace) && !check(TokenKind::Eof)) {
            block->statements.push_back(parse_stmt());
        }
        expect(TokenKind::RBrace, "block");
        return block;
    }

    StmtPtr parse_stmt() {
        Span at = peek().span;
        switch (peek().kind) {
        case TokenKind::LBrace: return parse_block();
        case TokenKind::KwIf: return parse_if();
        case TokenKind::KwWhile: return parse_while();
        case TokenKind::KwTry: return parse_try();
        case TokenKind::KwUsing: return parse_using();
        case TokenKind::KwReturn: {
            advance();
            auto stmt = std::make_unique<ReturnStmt>(at);
            if (!check(TokenKind::Semi)) stmt->value = parse_expr();
            expect(TokenKind::Semi, "return statement");
            return stmt;
        }
        case TokenKind::KwThrow: {
            advance();
            auto stmt = std::make_unique<ThrowStmt>(at);
            if (!check(TokenKind::Semi)) {
                stmt->value = parse_expr();
            } else if (catch_depth_ == 0) {
                fail(at, "bare 'throw;' is only allowed inside a catch block");
            }
            expect(TokenKind::Semi, "throw statement");
            return stmt;
        }
        case TokenKind::KwVar: {
            advance();
            const Token& name = expect(TokenKind::Ident, "variable declaration");
            auto stmt = std::make_unique<VarDeclStmt>("var", name.text, at);
            expect(TokenKind::Assign, "variable declaration");
            stmt->init = parse_expr();
            expect(TokenKind::Semi, "variable declaration");
            return stmt;
        }
        default: break;
        }

        // `Type name [= init];` — backtrack to an expression statement otherwise.
        if (check(TokenKind::Ident)) {
            size_t save = idx_;
            std::string type = try_parse_type_name();
            if (!type.empty() && check(TokenKind::Ident)) {
                const Token& name = advance();
                auto stmt = std::make_unique<VarDeclStmt>(type, name.text, at);
                if (match(TokenKind::Assign)) stmt->init = parse_expr();
                expect(TokenKind::Semi, "variable declaration");
                return stmt;
            }
            idx_ = save;
        }

        ExprPtr expr = parse_expr();
        if (match(TokenKind::Assign)) {
            if (expr->kind != ExprKind::Name && expr->kind != ExprKind::FieldAccess) {
                fail(at, "assignment target must be a local or a field access");
            }
            ExprPtr value = parse_expr();
            expect(TokenKind::Semi, "assignment");
            return std::make_unique<AssignStmt>(std::move(expr), std::move(value), at);
        }
        expect(TokenKind::Semi, "expression statement");
        return std::make_unique<ExprStmt>(std::move(expr), at);
    }

    // Returns "" (with the cursor restored) if the tokens do not form a type.
    std::string try_parse_type_name() {
        size_t save = idx_;
        if (!check(TokenKind::Ident)) return "";
        std::string name = advance().text;
        if (check(TokenKind::Lt)) {
            advance();
            if (!check(TokenKind::Ident)) {
                idx_ = save;
                return "";
            }
            std::string inner = try_parse_type_name();
            if (inner.empty() || !match(TokenKind::Gt)) {
                idx_ = save;
                return "";
            }
            name += "<" + inner + ">";
        }
        return name;
    }

    StmtPtr parse_if() {
        Span at = peek().span;
        expect(TokenKind::KwIf, "if statement");
        auto stmt = std::make_unique<IfStmt>(at);
        expect(TokenKind::LParen, "if condition");
        stmt->condition = parse_condition();
        expect(TokenKind::RParen, "if condition");
        stmt->then_branch = parse_stmt();
        if (match(TokenKind::KwElse)) stmt->else_branch = parse_stmt();
        return stmt;
    }

    StmtPtr parse_while() {
        Span at = peek().span;
        expect(TokenKind::KwWhile, "while statement");
        auto stmt = std::make_unique<WhileStmt>(at);
        expect(TokenKind::LParen, "while condition");
        stmt->condition = parse_condition();
        expect(TokenKind::RParen, "while condition");
        stmt->body = parse_stmt();
        return stmt;
    }

    StmtPtr parse_try() {
        Span at = peek().span;
        expect(TokenKind::KwTry, "try statement");
        auto stmt = std::make_unique<TryStmt>(at);
        stmt->body = parse_block();
        while (check(TokenKind::KwCatch)) {
            CatchClause clause;
            clause.span = peek().span;
            advance();
            if (match(TokenKind::LParen)) {
                if (match(TokenKind::Ellipsis)) {
                    clause.exception_type = "...";
                } else if (check(TokenKind::Ident)) {
                    clause.exception_type = advance().text;
                    if (check(TokenKind::Ident)) clause.binding = advance().text;
                }
                expect(TokenKind::RParen, "catch clause");
            }
            catch_depth_++;
            clause.body = parse_block();
            catch_depth_--;
            stmt->catches.push_back(std::move(clause));
        }
        if (match(TokenKind::KwFinally)) stmt->finally_block = parse_block();
        if (stmt->catches.empty() && !stmt->finally_block) {
            fail(at, "try statement requires at least one catch or a finally");
        }
        return stmt;
    }

    StmtPtr parse_using() {
        Span at = peek().span;
        expect(TokenKind::KwUsing, "using statement");
        auto stmt = std::make_unique<UsingStmt>(at);
        expect(TokenKind::LParen, "using declaration");
        if (match(TokenKind::KwVar)) {
            stmt->type_name = "var";
        } else {
            stmt->type_name = parse_type_name();
        }
        stmt->name = expect(TokenKind::Ident, "using declaration").text;
        expect(TokenKind::Assign, "using declaration");
        stmt->init = parse_expr();
        expect(TokenKind::RParen, "using declaration");
        stmt->body = parse_stmt();
        return stmt;
    }

    // --- expressions ---

    ExprPtr parse_condition() {
        ExprPtr expr = parse_expr();
        if (check(TokenKind::EqEq) || check(TokenKind::NotEq)) {
            bool is_equal = advance().kind == TokenKind::EqEq;
            Span at = expr->span;
            expect(TokenKind::KwNull, "null comparison");
            if (expr->kind != ExprKind::Name && expr->kind != ExprKind::FieldAccess) {
                fail(at, "null comparison operand must be a local or a field access");
            }
            return std::make_unique<NullComparisonExpr>(std::move(expr), is_equal, at);
        }
        return expr;
    }

    bool at_arith_op() const {
        return check(TokenKind::Plus) || check(TokenKind::Minus) || check(TokenKind::Star) ||
               check(TokenKind::Slash);
    }

    ExprPtr parse_expr() {
        Span at = peek().span;
        ExprPtr first = parse_postfix();
        if (!at_arith_op()) return first;
        // Scalar arithmetic folds into one opaque expression.
        std::string text = opaque_operand_text(*first);
        while (at_arith_op()) {
            text += " " + advance().text + " ";
            Span opat = peek().span;
            ExprPtr operand = parse_postfix();
            text += opaque_operand_text(*operand, &opat);
        }
        return std::make_unique<OpaqueExpr>(text, at);
    }

    std::string opaque_operand_text(const Expr& expr, const Span* at = nullptr) const {
        if (expr.kind == ExprKind::Name) return static_cast<const NameExpr&>(expr).name;
        if (expr.kind == ExprKind::Opaque) return static_cast<const OpaqueExpr&>(expr).text;
        fail(at ? *at : expr.span,
             "arithmetic operands must be identifiers or integer literals");
    }

    ExprPtr parse_postfix() {
        ExprPtr expr = parse_primary();
        while (check(TokenKind::Dot)) {
            advance();
            const Token& name = expect(TokenKind::Ident, "member access");
            if (check(TokenKind::LParen)) {
                auto call = std::make_unique<CallExpr>(name.text, expr->span);
                call->receiver = std::move(expr);
                call->args = parse_args();
                expr = std::move(call);
            } else {
                expr = std::make_unique<FieldAccessExpr>(std::move(expr), name.text, name.span);
            }
        }
        return expr;
    }

    std::vector<ExprPtr> parse_args() {
        std::vector<ExprPtr> args;
        expect(TokenKind::LParen, "argument list");
        if (!check(TokenKind::RParen)) {
            args.push_back(parse_expr());
            while (match(TokenKind::Comma)) args.push_back(parse_expr());
        }
        expect(TokenKind::RParen, "argument list");
        return args;
    }

    ExprPtr parse_primary() {
        Span at = peek().span;
        switch (peek().kind) {
        case TokenKind::KwNew: {
            advance();
            std::string type = parse_type_name();
            auto expr = std::make_unique<ObjectCreationExpr>(type, at);
            expr->args = parse_args();
            return expr;
        }
        case TokenKind::Ident: {
            const Token& name = advance();
            if (check(TokenKind::LParen)) {
                auto call = std::make_unique<CallExpr>(name.text, at);
                call->args = parse_args();
                return call;
            }
            return std::make_unique<NameExpr>(name.text, at);
        }
        case TokenKind::KwThis:
            advance();
            return std::make_unique<ThisExpr>(at);
        case TokenKind::KwNull:
            advance();
            return std::make_unique<NullLiteralExpr>(at);
        case TokenKind::IntLit:
            return std::make_unique<OpaqueExpr>(advance().text, at);
        case TokenKind::Ellipsis:
            advance();
            return std::make_unique<OpaqueExpr>("...", at);
        default:
            fail(at, std::string("expected an expression, found '") + describe(peek()) + "'");
        }
    }

    std::string path_;
    const std::vector<Token>& tokens_;
    size_t idx_ = 0;
    int catch_depth_ = 0;
};

} // namespace

std::unique_ptr<CompilationUnit> parse_tokens(const std::string& path,
                                              const std::vector<Token>& tokens) {
    return Parser(path, tokens).run();
}

std::unique_ptr<CompilationUnit> parse_unit(const SourceUnit& unit) {
    auto tokens = lex(unit);
    return parse_tokens(unit.path, tokens);
}

} // namespace mustcall
