#include "mustcall/pretty.hpp"

#include <sstream>

namespace mustcall {

namespace {

std::string indent_of(int indent) { return std::string(static_cast<size_t>(indent) * 4, ' '); }

std::string attr_text(const AttributeSpec& attr) {
    std::string out = "[";
    out += attribute_kind_name(attr.kind);
    if (!attr.args.empty()) {
        out += "(";
        for (size_t i = 0; i < attr.args.size(); i++) {
            if (i) out += ", ";
            out += attr.args[i];
        }
        out += ")";
    }
    out += "]";
    return out;
}

void print_expr(std::ostream& os, const Expr& expr) {
    switch (expr.kind) {
    case ExprKind::ObjectCreation: {
        const auto& e = static_cast<const ObjectCreationExpr&>(expr);
        os << "new " << e.type_name << "(";
        for (size_t i = 0; i < e.args.size(); i++) {
            if (i) os << ", ";
            print_expr(os, *e.args[i]);
        }
        os << ")";
        break;
    }
    case ExprKind::Call: {
        const auto& e = static_cast<const CallExpr&>(expr);
        if (e.receiver) {
            print_expr(os, *e.receiver);
            os << ".";
        }
        os << e.callee << "(";
        for (size_t i = 0; i < e.args.size(); i++) {
            if (i) os << ", ";
            print_expr(os, *e.args[i]);
        }
        os << ")";
        break;
    }
    case ExprKind::FieldAccess: {
        const auto& e = static_cast<const FieldAccessExpr&>(expr);
        print_expr(os, *e.receiver);
        os << "." << e.field;
        break;
    }
    case ExprKind::Name:
        os << static_cast<const NameExpr&>(expr).name;
        break;
    case ExprKind::This:
        os << "this";
        break;
    case ExprKind::NullLiteral:
        os << "null";
        break;
    case ExprKind::NullComparison: {
        const auto& e = static_cast<const NullComparisonExpr&>(expr);
        print_expr(os, *e.operand);
        os << (e.is_equal ? " == null" : " != null");
        break;
    }
    case ExprKind::Opaque:
        os << static_cast<const OpaqueExpr&>(expr).text;
        break;
    }
}

void print_stmt(std::ostream& os, const Stmt& stmt, int indent) {
    const std::string pad = indent_of(indent);
    switch (stmt.kind) {
    case StmtKind::Block: {
        const auto& s = static_cast<const BlockStmt&>(stmt);
        os << pad << "{\n";
        for (const auto& child : s.statements) print_stmt(os, *child, indent + 1);
        os << pad << "}\n";
        break;
    }
    case StmtKind::VarDecl: {
        const auto& s = static_cast<const VarDeclStmt&>(stmt);
        os << pad << s.type_name << " " << s.name;
        if (s.init) {
            os << " = ";
            print_expr(os, *s.init);
        }
        os << ";\n";
        break;
    }
    case StmtKind::Assign: {
        const auto& s = static_cast<const AssignStmt&>(stmt);
        os << pad;
        print_expr(os, *s.target);
        os << " = ";
        print_expr(os, *s.value);
        os << ";\n";
        break;
    }
    case StmtKind::ExprStmt: {
        os << pad;
        print_expr(os, *static_cast<const ExprStmt&>(stmt).expr);
        os << ";\n";
        break;
    }
    case StmtKind::If: {
        const auto& s = static_cast<const IfStmt&>(stmt);
        os << pad << "if (";
        print_expr(os, *s.condition);
        os << ")\n";
        print_stmt(os, *s.then_branch, indent);
        if (s.else_branch) {
            os << pad << "else\n";
            print_stmt(os, *s.else_branch, indent);
        }
        break;
    }
    case StmtKind::While: {
        const auto& s = static_cast<const WhileStmt&>(stmt);
        os << pad << "while (";
        print_expr(os, *s.condition);
        os << ")\n";
        print_stmt(os, *s.body, indent);
        break;
    }
    case StmtKind::Try: {
        const auto& s = static_cast<const TryStmt&>(stmt);
        os << pad << "try\n";
        print_stmt(os, *s.body, indent);
        for (const auto& clause : s.catches) {
            os << pad << "catch";
            if (!clause.exception_type.empty() || !clause.binding.empty()) {
                os << " (" << clause.exception_type;
                if (!clause.binding.empty()) os << " " << clause.binding;
                os << ")";
            }
            os << "\n";
            print_stmt(os, *clause.body, indent);
        }
        if (s.finally_block) {
            os << pad << "finally\n";
            print_stmt(os, *s.finally_block, indent);
        }
        break;
    }
    case StmtKind::Using: {
        const auto& s = static_cast<const UsingStmt&>(stmt);
        os << pad << "using (" << s.type_name << " " << s.name << " = ";
        print_expr(os, *s.init);
        os << ")\n";
        print_stmt(os, *s.body, indent);
        break;
    }
    case StmtKind::Return: {
        const auto& s = static_cast<const ReturnStmt&>(stmt);
        os << pad << "return";
        if (s.value) {
            os << " ";
            print_expr(os, *s.value);
        }
        os << ";\n";
        break;
    }
    case StmtKind::Throw: {
        const auto& s = static_cast<const ThrowStmt&>(stmt);
        os << pad << "throw";
        if (s.value) {
            os << " ";
            print_expr(os, *s.value);
        }
        os << ";\n";
        break;
    }
    }
}

} // namespace

std::string pretty_print(const Expr& expr) {
    std::ostringstream os;
    print_expr(os, expr);
    return os.str();
}

std::string pretty_print(const Stmt& stmt, int indent) {
    std::ostringstream os;
    print_stmt(os, stmt, indent);
    return os.str();
}

std::string pretty_print(const CompilationUnit& unit) {
    std::ostringstream os;
    for (const auto& cls : unit.classes) {
        for (const auto& attr : cls.attributes) os << attr_text(attr) << "\n";
        os << "class " << cls.name;
        if (!cls.heritage.empty()) os << " : " << cls.heritage;
        os << " {\n";
        for (const auto& field : cls.fields) {
            for (const auto& attr : field.attributes) os << indent_of(1) << attr_text(attr) << "\n";
            os << indent_of(1);
            if (field.readonly) os << "readonly ";
            os << field.type_name << " " << field.name << ";\n";
        }
        for (const auto& method : cls.methods) {
            for (const auto& attr : method.return_attributes)
                os << indent_of(1) << attr_text(attr) << "\n";
            for (const auto& attr : method.method_attributes)
                os << indent_of(1) << attr_text(attr) << "\n";
            os << indent_of(1);
            if (method.is_static) os << "static ";
            if (!method.is_constructor) os << method.return_type << " ";
            os << method.name << "(";
            for (size_t i = 0; i < method.params.size(); i++) {
                if (i) os << ", ";
                const ParamDecl& p = method.params[i];
                for (const auto& attr : p.attributes) os << attr_text(attr) << " ";
                os << p.type_name << " " << p.name;
            }
            os << ")\n";
            if (method.body) print_stmt(os, *method.body, 1);
        }
        os << "}\n";
    }
    return os.str();
}

} // namespace mustcall
