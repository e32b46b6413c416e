#include "mustcall/ast.hpp"

namespace mustcall {

// --- attributes -------------------------------------------------------------

const char* attribute_kind_name(AttributeKind kind) {
    switch (kind) {
    case AttributeKind::MustCall: return "MustCall";
    case AttributeKind::Owning: return "Owning";
    case AttributeKind::MustCallAlias: return "MustCallAlias";
    case AttributeKind::EnsuresCalledMethods: return "EnsuresCalledMethods";
    case AttributeKind::CreateMustCallFor: return "CreateMustCallFor";
    }
    return "?";
}

std::optional<AttributeKind> attribute_kind_from_name(const std::string& name) {
    if (name == "MustCall") return AttributeKind::MustCall;
    if (name == "Owning") return AttributeKind::Owning;
    if (name == "MustCallAlias") return AttributeKind::MustCallAlias;
    if (name == "EnsuresCalledMethods") return AttributeKind::EnsuresCalledMethods;
    if (name == "CreateMustCallFor") return AttributeKind::CreateMustCallFor;
    return std::nullopt;
}

int attribute_arity(AttributeKind kind) {
    switch (kind) {
    case AttributeKind::MustCall: return 1;
    case AttributeKind::Owning: return 0;
    case AttributeKind::MustCallAlias: return 0;
    case AttributeKind::EnsuresCalledMethods: return 2;
    case AttributeKind::CreateMustCallFor: return 1;
    }
    return 0;
}

bool has_attribute(const std::vector<AttributeSpec>& attrs, AttributeKind kind) {
    return find_attribute(attrs, kind) != nullptr;
}

const AttributeSpec* find_attribute(const std::vector<AttributeSpec>& attrs,
                                    AttributeKind kind) {
    for (const auto& a : attrs) {
        if (a.kind == kind) return &a;
    }
    return nullptr;
}

// --- clone ------------------------------------------------------------------

static ExprPtr clone_opt(const ExprPtr& e) { return e ? e->clone() : nullptr; }
static StmtPtr clone_opt(const StmtPtr& s) { return s ? s->clone() : nullptr; }

static std::vector<ExprPtr> clone_all(const std::vector<ExprPtr>& exprs) {
    std::vector<ExprPtr> out;
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(e->clone());
    return out;
}

ExprPtr ObjectCreationExpr::clone() const {
    auto copy = std::make_unique<ObjectCreationExpr>(type_name, span);
    copy->args = clone_all(args);
    return copy;
}

ExprPtr CallExpr::clone() const {
    auto copy = std::make_unique<CallExpr>(callee, span);
    copy->receiver = clone_opt(receiver);
    copy->args = clone_all(args);
    copy->synthesized_using = synthesized_using;
    return copy;
}

ExprPtr FieldAccessExpr::clone() const {
    return std::make_unique<FieldAccessExpr>(receiver->clone(), field, span);
}

ExprPtr NameExpr::clone() const { return std::make_unique<NameExpr>(name, span); }
ExprPtr ThisExpr::clone() const { return std::make_unique<ThisExpr>(span); }
ExprPtr NullLiteralExpr::clone() const { return std::make_unique<NullLiteralExpr>(span); }

ExprPtr NullComparisonExpr::clone() const {
    return std::make_unique<NullComparisonExpr>(operand->clone(), is_equal, span);
}

ExprPtr OpaqueExpr::clone() const { return std::make_unique<OpaqueExpr>(text, span); }

StmtPtr BlockStmt::clone() const { return clone_block(); }

std::unique_ptr<BlockStmt> BlockStmt::clone_block() const {
    auto copy = std::make_unique<BlockStmt>(span);
    copy->statements.reserve(statements.size());
    for (const auto& s : statements) copy->statements.push_back(s->clone());
    return copy;
}

StmtPtr VarDeclStmt::clone() const {
    auto copy = std::make_unique<VarDeclStmt>(type_name, name, span);
    copy->init = clone_opt(init);
    return copy;
}

StmtPtr AssignStmt::clone() const {
    return std::make_unique<AssignStmt>(target->clone(), value->clone(), span);
}

StmtPtr ExprStmt::clone() const { return std::make_unique<ExprStmt>(expr->clone(), span); }

StmtPtr IfStmt::clone() const {
    auto copy = std::make_unique<IfStmt>(span);
    copy->condition = condition->clone();
    copy->then_branch = then_branch->clone();
    copy->else_branch = clone_opt(else_branch);
    return copy;
}

StmtPtr WhileStmt::clone() const {
    auto copy = std::make_unique<WhileStmt>(span);
    copy->condition = condition->clone();
    copy->body = body->clone();
    return copy;
}

CatchClause CatchClause::clone() const {
    CatchClause copy;
    copy.exception_type = exception_type;
    copy.binding = binding;
    copy.body = body->clone_block();
    copy.span = span;
    return copy;
}

StmtPtr TryStmt::clone() const {
    auto copy = std::make_unique<TryStmt>(span);
    copy->body = body->clone_block();
    for (const auto& c : catches) copy->catches.push_back(c.clone());
    if (finally_block) copy->finally_block = finally_block->clone_block();
    return copy;
}

StmtPtr UsingStmt::clone() const {
    auto copy = std::make_unique<UsingStmt>(span);
    copy->type_name = type_name;
    copy->name = name;
    copy->init = init->clone();
    copy->body = body->clone();
    return copy;
}

StmtPtr ReturnStmt::clone() const {
    auto copy = std::make_unique<ReturnStmt>(span);
    copy->value = clone_opt(value);
    return copy;
}

StmtPtr ThrowStmt::clone() const {
    auto copy = std::make_unique<ThrowStmt>(span);
    copy->value = clone_opt(value);
    return copy;
}

ParamDecl ParamDecl::clone() const { return *this; }
FieldDecl FieldDecl::clone() const { return *this; }

MethodDecl MethodDecl::clone() const {
    MethodDecl copy;
    copy.name = name;
    copy.is_static = is_static;
    copy.is_constructor = is_constructor;
    copy.return_type = return_type;
    copy.return_attributes = return_attributes;
    copy.method_attributes = method_attributes;
    copy.params = params;
    if (body) copy.body = body->clone_block();
    copy.span = span;
    return copy;
}

ClassDecl ClassDecl::clone() const {
    ClassDecl copy;
    copy.name = name;
    copy.heritage = heritage;
    copy.attributes = attributes;
    copy.fields = fields;
    for (const auto& m : methods) copy.methods.push_back(m.clone());
    copy.span = span;
    return copy;
}

std::unique_ptr<CompilationUnit> CompilationUnit::clone() const {
    auto copy = std::make_unique<CompilationUnit>();
    copy->path = path;
    for (const auto& c : classes) copy->classes.push_back(c.clone());
    return copy;
}

// --- structural equality ----------------------------------------------------

static bool attrs_equal(const std::vector<AttributeSpec>& a,
                        const std::vector<AttributeSpec>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); i++) {
        if (a[i].kind != b[i].kind || a[i].args != b[i].args) return false;
    }
    return true;
}

static bool expr_equal_opt(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return ast_equal(*a, *b);
}

bool ast_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case ExprKind::ObjectCreation: {
        const auto& x = static_cast<const ObjectCreationExpr&>(a);
        const auto& y = static_cast<const ObjectCreationExpr&>(b);
        if (x.type_name != y.type_name || x.args.size() != y.args.size()) return false;
        for (size_t i = 0; i < x.args.size(); i++) {
            if (!ast_equal(*x.args[i], *y.args[i])) return false;
        }
        return true;
    }
    case ExprKind::Call: {
        const auto& x = static_cast<const CallExpr&>(a);
        const auto& y = static_cast<const CallExpr&>(b);
        if (x.callee != y.callee || x.args.size() != y.args.size()) return false;
        if (!expr_equal_opt(x.receiver, y.receiver)) return false;
        for (size_t i = 0; i < x.args.size(); i++) {
            if (!ast_equal(*x.args[i], *y.args[i])) return false;
        }
        return x.synthesized_using == y.synthesized_using;
    }
    case ExprKind::FieldAccess: {
        const auto& x = static_cast<const FieldAccessExpr&>(a);
        const auto& y = static_cast<const FieldAccessExpr&>(b);
        return x.field == y.field && ast_equal(*x.receiver, *y.receiver);
    }
    case ExprKind::Name:
        return static_cast<const NameExpr&>(a).name == static_cast<const NameExpr&>(b).name;
    case ExprKind::This:
    case ExprKind::NullLiteral:
        return true;
    case ExprKind::NullComparison: {
        const auto& x = static_cast<const NullComparisonExpr&>(a);
        const auto& y = static_cast<const NullComparisonExpr&>(b);
        return x.is_equal == y.is_equal && ast_equal(*x.operand, *y.operand);
    }
    case ExprKind::Opaque:
        return static_cast<const OpaqueExpr&>(a).text == static_cast<const OpaqueExpr&>(b).text;
    }
    return false;
}

static bool stmt_equal_opt(const StmtPtr& a, const StmtPtr& b) {
    if (!a || !b) return !a && !b;
    return ast_equal(*a, *b);
}

bool ast_equal(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case StmtKind::Block: {
        const auto& x = static_cast<const BlockStmt&>(a);
        const auto& y = static_cast<const BlockStmt&>(b);
        if (x.statements.size() != y.statements.size()) return false;
        for (size_t i = 0; i < x.statements.size(); i++) {
            if (!ast_equal(*x.statements[i], *y.statements[i])) return false;
        }
        return true;
    }
    case StmtKind::VarDecl: {
        const auto& x = static_cast<const VarDeclStmt&>(a);
        const auto& y = static_cast<const VarDeclStmt&>(b);
        return x.type_name == y.type_name && x.name == y.name && expr_equal_opt(x.init, y.init);
    }
    case StmtKind::Assign: {
        const auto& x = static_cast<const AssignStmt&>(a);
        const auto& y = static_cast<const AssignStmt&>(b);
        return ast_equal(*x.target, *y.target) && ast_equal(*x.value, *y.value);
    }
    case StmtKind::ExprStmt:
        return ast_equal(*static_cast<const ExprStmt&>(a).expr,
                         *static_cast<const ExprStmt&>(b).expr);
    case StmtKind::If: {
        const auto& x = static_cast<const IfStmt&>(a);
        const auto& y = static_cast<const IfStmt&>(b);
        return ast_equal(*x.condition, *y.condition) &&
               ast_equal(*x.then_branch, *y.then_branch) &&
               stmt_equal_opt(x.else_branch, y.else_branch);
    }
    case StmtKind::While: {
        const auto& x = static_cast<const WhileStmt&>(a);
        const auto& y = static_cast<const WhileStmt&>(b);
        return ast_equal(*x.condition, *y.condition) && ast_equal(*x.body, *y.body);
    }
    case StmtKind::Try: {
        const auto& x = static_cast<const TryStmt&>(a);
        const auto& y = static_cast<const TryStmt&>(b);
        if (x.catches.size() != y.catches.size()) return false;
        if (!ast_equal(*x.body, *y.body)) return false;
        for (size_t i = 0; i < x.catches.size(); i++) {
            if (x.catches[i].exception_type != y.catches[i].exception_type ||
                x.catches[i].binding != y.catches[i].binding ||
                !ast_equal(*x.catches[i].body, *y.catches[i].body)) {
                return false;
            }
        }
        if (!x.finally_block || !y.finally_block) {
            return !x.finally_block && !y.finally_block;
        }
        return ast_equal(*x.finally_block, *y.finally_block);
    }
    case StmtKind::Using: {
        const auto& x = static_cast<const UsingStmt&>(a);
        const auto& y = static_cast<const UsingStmt&>(b);
        return x.type_name == y.type_name && x.name == y.name &&
               ast_equal(*x.init, *y.init) && ast_equal(*x.body, *y.body);
    }
    case StmtKind::Return:
        return expr_equal_opt(static_cast<const ReturnStmt&>(a).value,
                              static_cast<const ReturnStmt&>(b).value);
    case StmtKind::Throw:
        return expr_equal_opt(static_cast<const ThrowStmt&>(a).value,
                              static_cast<const ThrowStmt&>(b).value);
    }
    return false;
}

bool ast_equal(const CompilationUnit& a, const CompilationUnit& b) {
    if (a.classes.size() != b.classes.size()) return false;
    for (size_t i = 0; i < a.classes.size(); i++) {
        const ClassDecl& x = a.classes[i];
        const ClassDecl& y = b.classes[i];
        if (x.name != y.name || x.heritage != y.heritage) return false;
        if (!attrs_equal(x.attributes, y.attributes)) return false;
        if (x.fields.size() != y.fields.size() || x.methods.size() != y.methods.size()) {
            return false;
        }
        for (size_t f = 0; f < x.fields.size(); f++) {
            const FieldDecl& fx = x.fields[f];
            const FieldDecl& fy = y.fields[f];
            if (fx.type_name != fy.type_name || fx.name != fy.name ||
                fx.readonly != fy.readonly || !attrs_equal(fx.attributes, fy.attributes)) {
                return false;
            }
        }
        for (size_t m = 0; m < x.methods.size(); m++) {
            const MethodDecl& mx = x.methods[m];
            const MethodDecl& my = y.methods[m];
            if (mx.name != my.name || mx.is_static != my.is_static ||
                mx.is_constructor != my.is_constructor || mx.return_type != my.return_type ||
                !attrs_equal(mx.return_attributes, my.return_attributes) ||
                !attrs_equal(mx.method_attributes, my.method_attributes)) {
                return false;
            }
            if (mx.params.size() != my.params.size()) return false;
            for (size_t p = 0; p < mx.params.size(); p++) {
                if (mx.params[p].type_name != my.params[p].type_name ||
                    mx.params[p].name != my.params[p].name ||
                    !attrs_equal(mx.params[p].attributes, my.params[p].attributes)) {
                    return false;
                }
            }
            if (!mx.body || !my.body) {
                if (mx.body || my.body) return false;
            } else if (!ast_equal(*mx.body, *my.body)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace mustcall
