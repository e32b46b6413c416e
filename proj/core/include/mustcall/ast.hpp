#ifndef MUSTCALL_AST_HPP
#define MUSTCALL_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mustcall/attributes.hpp"
#include "mustcall/source.hpp"

namespace mustcall {

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class ExprKind {
    ObjectCreation, // new T(args)
    Call,           // recv.name(args) or name(args)
    FieldAccess,    // recv.name (recv may be ThisExpr or omitted via NameExpr)
    Name,           // bare identifier; binds to a local or an implicit-this field
    This,
    NullLiteral,
    NullComparison, // operand == null / operand != null
    Opaque,         // scalar arithmetic, int literals, `...`; carries no resource
};

struct Expr {
    ExprKind kind;
    Span span;

    explicit Expr(ExprKind k, Span s) : kind(k), span(std::move(s)) {}
    virtual ~Expr() = default;
    virtual std::unique_ptr<Expr> clone() const = 0;
};

using ExprPtr = std::unique_ptr<Expr>;

struct ObjectCreationExpr : Expr {
    std::string type_name; // may be a collection instantiation, e.g. List<Socket>
    std::vector<ExprPtr> args;

    ObjectCreationExpr(std::string type, Span s)
        : Expr(ExprKind::ObjectCreation, std::move(s)), type_name(std::move(type)) {}
    ExprPtr clone() const override;
};

struct CallExpr : Expr {
    ExprPtr receiver; // null for receiverless calls within the enclosing class
    std::string callee;
    std::vector<ExprPtr> args;
    bool synthesized_using = false; // Dispose injected by using-block desugaring

    CallExpr(std::string name, Span s)
        : Expr(ExprKind::Call, std::move(s)), callee(std::move(name)) {}
    ExprPtr clone() const override;
};

struct FieldAccessExpr : Expr {
    ExprPtr receiver; // ThisExpr, NameExpr, or a nested FieldAccessExpr
    std::string field;

    FieldAccessExpr(ExprPtr recv, std::string name, Span s)
        : Expr(ExprKind::FieldAccess, std::move(s)), receiver(std::move(recv)),
          field(std::move(name)) {}
    ExprPtr clone() const override;
};

struct NameExpr : Expr {
    std::string name;

    NameExpr(std::string n, Span s) : Expr(ExprKind::Name, std::move(s)), name(std::move(n)) {}
    ExprPtr clone() const override;
};

struct ThisExpr : Expr {
    explicit ThisExpr(Span s) : Expr(ExprKind::This, std::move(s)) {}
    ExprPtr clone() const override;
};

struct NullLiteralExpr : Expr {
    explicit NullLiteralExpr(Span s) : Expr(ExprKind::NullLiteral, std::move(s)) {}
    ExprPtr clone() const override;
};

struct NullComparisonExpr : Expr {
    ExprPtr operand; // NameExpr or FieldAccessExpr
    bool is_equal;   // true: operand == null, false: operand != null

    NullComparisonExpr(ExprPtr op, bool eq, Span s)
        : Expr(ExprKind::NullComparison, std::move(s)), operand(std::move(op)), is_equal(eq) {}
    ExprPtr clone() const override;
};

/// Scalar arithmetic, integer literals and the `...` placeholder. The text is
/// kept verbatim for pretty-printing; opaque expressions never hold resources.
struct OpaqueExpr : Expr {
    std::string text;

    OpaqueExpr(std::string t, Span s) : Expr(ExprKind::Opaque, std::move(s)), text(std::move(t)) {}
    ExprPtr clone() const override;
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StmtKind {
    VarDecl,
    Assign,
    ExprStmt,
    If,
    While,
    Try,
    Using,
    Return,
    Throw,
    Block,
};

struct Stmt {
    StmtKind kind;
    Span span;

    explicit Stmt(StmtKind k, Span s) : kind(k), span(std::move(s)) {}
    virtual ~Stmt() = default;
    virtual std::unique_ptr<Stmt> clone() const = 0;
};

using StmtPtr = std::unique_ptr<Stmt>;

struct BlockStmt : Stmt {
    std::vector<StmtPtr> statements;

    explicit BlockStmt(Span s) : Stmt(StmtKind::Block, std::move(s)) {}
    StmtPtr clone() const override;
    std::unique_ptr<BlockStmt> clone_block() const;
};

struct VarDeclStmt : Stmt {
    std::string type_name; // "var" when inferred
    std::string name;
    ExprPtr init; // may be null

    VarDeclStmt(std::string type, std::string n, Span s)
        : Stmt(StmtKind::VarDecl, std::move(s)), type_name(std::move(type)), name(std::move(n)) {}
    StmtPtr clone() const override;
};

struct AssignStmt : Stmt {
    ExprPtr target; // NameExpr or FieldAccessExpr
    ExprPtr value;

    AssignStmt(ExprPtr t, ExprPtr v, Span s)
        : Stmt(StmtKind::Assign, std::move(s)), target(std::move(t)), value(std::move(v)) {}
    StmtPtr clone() const override;
};

struct ExprStmt : Stmt {
    ExprPtr expr;

    ExprStmt(ExprPtr e, Span s) : Stmt(StmtKind::ExprStmt, std::move(s)), expr(std::move(e)) {}
    StmtPtr clone() const override;
};

struct IfStmt : Stmt {
    ExprPtr condition;
    StmtPtr then_branch;
    StmtPtr else_branch; // may be null

    IfStmt(Span s) : Stmt(StmtKind::If, std::move(s)) {}
    StmtPtr clone() const override;
};

struct WhileStmt : Stmt {
    ExprPtr condition;
    StmtPtr body;

    WhileStmt(Span s) : Stmt(StmtKind::While, std::move(s)) {}
    StmtPtr clone() const override;
};

struct CatchClause {
    std::string exception_type; // may be empty or "..."
    std::string binding;        // optional exception variable
    std::unique_ptr<BlockStmt> body;
    Span span;

    CatchClause clone() const;
};

struct TryStmt : Stmt {
    std::unique_ptr<BlockStmt> body;
    std::vector<CatchClause> catches;
    std::unique_ptr<BlockStmt> finally_block; // may be null

    TryStmt(Span s) : Stmt(StmtKind::Try, std::move(s)) {}
    StmtPtr clone() const override;
};

struct UsingStmt : Stmt {
    std::string type_name; // "var" allowed
    std::string name;
    ExprPtr init; // exactly one initializer expression
    StmtPtr body;

    UsingStmt(Span s) : Stmt(StmtKind::Using, std::move(s)) {}
    StmtPtr clone() const override;
};

struct ReturnStmt : Stmt {
    ExprPtr value; // may be null

    ReturnStmt(Span s) : Stmt(StmtKind::Return, std::move(s)) {}
    StmtPtr clone() const override;
};

struct ThrowStmt : Stmt {
    ExprPtr value; // null for bare rethrow (only valid inside catch)

    ThrowStmt(Span s) : Stmt(StmtKind::Throw, std::move(s)) {}
    StmtPtr clone() const override;
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct ParamDecl {
    std::string type_name;
    std::string name;
    std::vector<AttributeSpec> attributes; // Owning / MustCallAlias
    Span span;

    ParamDecl clone() const;
};

struct FieldDecl {
    std::string type_name;
    std::string name;
    bool readonly = false;
    std::vector<AttributeSpec> attributes; // Owning
    Span span;

    FieldDecl clone() const;
};

struct MethodDecl {
    std::string name;
    bool is_static = false;
    bool is_constructor = false;
    std::string return_type; // "void" for none; constructors use the class name
    std::vector<AttributeSpec> return_attributes; // Owning / MustCallAlias
    std::vector<AttributeSpec> method_attributes; // EnsuresCalledMethods / CreateMustCallFor
    std::vector<ParamDecl> params;
    std::unique_ptr<BlockStmt> body;
    Span span;

    MethodDecl clone() const;
};

struct ClassDecl {
    std::string name;
    std::string heritage; // supertype name or "IDisposable"; empty if none
    std::vector<AttributeSpec> attributes; // MustCall
    std::vector<FieldDecl> fields;
    std::vector<MethodDecl> methods; // constructors included, is_constructor set
    Span span;

    ClassDecl clone() const;
};

struct CompilationUnit {
    std::string path;
    std::vector<ClassDecl> classes;

    std::unique_ptr<CompilationUnit> clone() const;
};

// ---------------------------------------------------------------------------
// Structural equality (span-insensitive) — used by the parse/print round-trip
// property and by mutation tests.
// ---------------------------------------------------------------------------

bool ast_equal(const Expr& a, const Expr& b);
bool ast_equal(const Stmt& a, const Stmt& b);
bool ast_equal(const CompilationUnit& a, const CompilationUnit& b);

} // namespace mustcall

#endif
