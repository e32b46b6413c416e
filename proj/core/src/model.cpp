#include "mustcall/model.hpp"

#include <algorithm>
#include <cassert>

#include "mustcall/cfg.hpp"

namespace mustcall {

// --- small accessors ---------------------------------------------------------

const FieldInfo* TypeInfo::find_field(const std::string& field_name) const {
    for (const auto& f : fields) {
        if (f.name == field_name) return &f;
    }
    return nullptr;
}

const MethodInfo* TypeInfo::find_method(const std::string& method_name) const {
    for (const auto& m : methods) {
        if (!m->is_constructor && m->name == method_name) return m.get();
    }
    return nullptr;
}

std::vector<const MethodInfo*> TypeInfo::constructors() const {
    std::vector<const MethodInfo*> out;
    for (const auto& m : methods) {
        if (m->is_constructor) out.push_back(m.get());
    }
    return out;
}

const FieldInfo* MethodBinding::field_of(const Expr* expr) const {
    auto fa = field_accesses.find(expr);
    if (fa != field_accesses.end()) return fa->second;
    auto nm = names.find(expr);
    if (nm != names.end() && nm->second.kind == RefKind::Field) return nm->second.field;
    return nullptr;
}

std::string MethodBinding::type_of(const Expr* expr) const {
    auto it = expr_types.find(expr);
    return it == expr_types.end() ? std::string() : it->second;
}

std::vector<const MethodInfo*> MethodBinding::targets_of(const Expr* expr) const {
    auto it = call_targets.find(expr);
    return it == call_targets.end() ? std::vector<const MethodInfo*>{} : it->second;
}

// --- SemanticModel queries -----------------------------------------------------

const TypeInfo* SemanticModel::find_type(const std::string& name) const {
    auto it = type_index_.find(name);
    return it == type_index_.end() ? nullptr : types_[it->second].get();
}

TypeInfo* SemanticModel::find_type_mut(const std::string& name) {
    auto it = type_index_.find(name);
    return it == type_index_.end() ? nullptr : types_[it->second].get();
}

std::vector<const TypeInfo*> SemanticModel::user_types() const {
    std::vector<const TypeInfo*> out;
    for (const auto& t : types_) {
        if (!t->is_builtin && !t->is_scalar) out.push_back(t.get());
    }
    return out;
}

std::vector<const MethodInfo*> SemanticModel::analyzable_methods() const {
    std::vector<const MethodInfo*> out;
    for (const auto& t : types_) {
        for (const auto& m : t->methods) {
            if (m->has_body()) out.push_back(m.get());
        }
    }
    return out;
}

bool SemanticModel::is_disposable(const std::string& type_name) const {
    std::set<std::string> seen;
    std::string cur = type_name;
    while (!cur.empty() && seen.insert(cur).second) {
        const TypeInfo* t = find_type(cur);
        if (!t) return false;
        if (t->implements_disposable) return true;
        cur = t->declared_supertype;
    }
    return false;
}

std::string SemanticModel::release_method(const std::string& type_name) const {
    std::set<std::string> seen;
    std::string cur = type_name;
    while (!cur.empty() && seen.insert(cur).second) {
        const TypeInfo* t = find_type(cur);
        if (!t && cur.rfind("List<", 0) == 0 && cur.back() == '>') {
            cur = cur.substr(5, cur.size() - 6);
            continue;
        }
        if (!t) return "";
        if (const AttributeSpec* mc = find_attribute(t->attributes, AttributeKind::MustCall)) {
            return mc->args[0];
        }
        if (t->implements_disposable) return "Dispose";
        if (!t->collection_element.empty()) return release_method(t->collection_element);
        cur = t->declared_supertype;
    }
    return "";
}

std::vector<std::string> SemanticModel::transitive_subtypes(const std::string& type_name) const {
    std::vector<std::string> out;
    for (const auto& name : type_order_) {
        if (name == type_name) continue;
        std::set<std::string> seen;
        std::string cur = find_type(name)->declared_supertype;
        while (!cur.empty() && seen.insert(cur).second) {
            if (cur == type_name) {
                out.push_back(name);
                break;
            }
            const TypeInfo* t = find_type(cur);
            cur = t ? t->declared_supertype : "";
        }
    }
    return out;
}

std::vector<const MethodInfo*> SemanticModel::resolve_call(const std::string& receiver_type,
                                                           const std::string& name) const {
    std::vector<const MethodInfo*> out;
    // static target: first definition on the supertype chain
    std::set<std::string> seen;
    std::string cur = receiver_type;
    const MethodInfo* static_target = nullptr;
    while (!cur.empty() && seen.insert(cur).second) {
        const TypeInfo* t = find_type(cur);
        if (!t) break;
        if (const MethodInfo* m = t->find_method(name)) {
            static_target = m;
            break;
        }
        cur = t->declared_supertype;
    }
    if (!static_target) return out;
    out.push_back(static_target);
    // every override in transitive subtypes of the receiver's static type
    for (const auto& sub : transitive_subtypes(receiver_type)) {
        const TypeInfo* t = find_type(sub);
        if (const MethodInfo* m = t->find_method(name)) {
            if (m != static_target) out.push_back(m);
        }
    }
    return out;
}

std::vector<const MethodInfo*> SemanticModel::resolve_ctor(const std::string& type_name) const {
    const TypeInfo* t = find_type(type_name);
    if (!t) return {};
    return t->constructors();
}

const FieldInfo* SemanticModel::resolve_field(const std::string& type_name,
                                              const std::string& field_name) const {
    std::set<std::string> seen;
    std::string cur = type_name;
    while (!cur.empty() && seen.insert(cur).second) {
        const TypeInfo* t = find_type(cur);
        if (!t) return nullptr;
        if (const FieldInfo* f = t->find_field(field_name)) return f;
        cur = t->declared_supertype;
    }
    return nullptr;
}

std::set<std::string> SemanticModel::compute_rtype() const {
    std::set<std::string> result;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : types_) {
            if (result.count(t->name)) continue;
            bool in = false;
            if (t->implements_disposable) in = true;
            if (!in) {
                for (const auto& f : t->fields) {
                    if (f.is_owning()) {
                        in = true;
                        break;
                    }
                }
            }
            if (!in && has_attribute(t->attributes, AttributeKind::MustCall)) in = true;
            if (!in && !t->collection_element.empty() && result.count(t->collection_element))
                in = true;
            if (!in && !t->declared_supertype.empty() && result.count(t->declared_supertype))
                in = true;
            if (in) {
                result.insert(t->name);
                changed = true;
            }
        }
    }
    return result;
}

std::map<std::string, int> SemanticModel::attribute_stats() const {
    std::map<std::string, int> stats;
    for (AttributeKind k :
         {AttributeKind::MustCall, AttributeKind::Owning, AttributeKind::MustCallAlias,
          AttributeKind::EnsuresCalledMethods, AttributeKind::CreateMustCallFor}) {
        stats[attribute_kind_name(k)] = 0;
    }
    auto count = [&](const std::vector<AttributeSpec>& attrs) {
        for (const auto& a : attrs) {
            if (a.provenance != AttributeProvenance::Builtin) {
                stats[attribute_kind_name(a.kind)]++;
            }
        }
    };
    for (const auto& t : types_) {
        if (t->is_builtin || t->is_scalar) continue;
        count(t->attributes);
        for (const auto& f : t->fields) count(f.attributes);
        for (const auto& m : t->methods) {
            count(m->return_attributes);
            count(m->method_attributes);
            for (const auto& p : m->params) count(p.attributes);
        }
    }
    return stats;
}

// --- collection instantiation ----------------------------------------------------

static void add_implicit_ctor(TypeInfo& type) {
    auto ctor = std::make_unique<MethodInfo>();
    ctor->name = type.name;
    ctor->owner = type.name;
    ctor->is_constructor = true;
    ctor->is_builtin = true;
    ctor->return_type = type.name;
    ctor->span = type.span;
    type.methods.push_back(std::move(ctor));
}

TypeInfo* SemanticModel::ensure_collection(const std::string& name) {
    if (TypeInfo* existing = find_type_mut(name)) return existing;
    assert(name.rfind("List<", 0) == 0 && name.back() == '>');
    std::string element = name.substr(5, name.size() - 6);
    auto type = std::make_unique<TypeInfo>();
    type->name = name;
    type->collection_element = element;
    type->is_builtin = true;
    add_implicit_ctor(*type);
    TypeInfo* out = type.get();
    type_index_[name] = types_.size();
    types_.push_back(std::move(type));
    type_order_.push_back(name);
    return out;
}

// --- model building ----------------------------------------------------------------

namespace {

AttributeSpec builtin_attr(AttributeKind kind, std::vector<std::string> args = {}) {
    AttributeSpec spec;
    spec.kind = kind;
    spec.args = std::move(args);
    spec.provenance = AttributeProvenance::Builtin;
    return spec;
}

} // namespace

/// Resolves names, fields and call targets inside analysis bodies, collecting
/// resolution errors and inferring `var` types along the way.
class Binder {
  public:
    Binder(SemanticModel& model, MethodInfo& method) : model_(model), method_(method) {}

    void run() {
        for (const auto& p : method_.params) {
            declare_local(p.name, p.type, p.span);
        }
        predeclare(*method_.analysis_body);
        walk_stmt(*method_.analysis_body);
        method_.binding.locals = locals_;
    }

  private:
    void error(const Span& at, const std::string& msg) {
        model_.errors_.push_back(Diagnostic{at.file, at.line, at.column, msg});
    }

    void declare_local(const std::string& name, const std::string& type, const Span& at) {
        if (locals_.count(name)) {
            error(at, "duplicate local '" + name + "' in " + method_.qualified_name());
            return;
        }
        if (type != "var") check_type_ref(type, at);
        locals_[name] = type == "var" ? "" : type;
    }

    void check_type_ref(const std::string& name, const Span& at) {
        if (name.empty() || name == "void") return;
        if (model_.find_type(name)) return;
        if (name.rfind("List<", 0) == 0 && name.back() == '>') {
            check_type_ref(name.substr(5, name.size() - 6), at);
            model_.ensure_collection(name);
            return;
        }
        error(at, "unknown type '" + name + "'");
    }

    // Locals are method-scoped; collect every declaration up front.
    void predeclare(const Stmt& stmt) {
        switch (stmt.kind) {
        case StmtKind::Block:
            for (const auto& s : static_cast<const BlockStmt&>(stmt).statements) predeclare(*s);
            break;
        case StmtKind::VarDecl: {
            const auto& s = static_cast<const VarDeclStmt&>(stmt);
            declare_local(s.name, s.type_name, s.span);
            break;
        }
        case StmtKind::If: {
            const auto& s = static_cast<const IfStmt&>(stmt);
            predeclare(*s.then_branch);
            if (s.else_branch) predeclare(*s.else_branch);
            break;
        }
        case StmtKind::While:
            predeclare(*static_cast<const WhileStmt&>(stmt).body);
            break;
        case StmtKind::Try: {
            const auto& s = static_cast<const TryStmt&>(stmt);
            predeclare(*s.body);
            for (const auto& c : s.catches) {
                if (!c.binding.empty()) declare_local(c.binding, c.exception_type, c.span);
                predeclare(*c.body);
            }
            if (s.finally_block) predeclare(*s.finally_block);
            break;
        }
        default:
            break;
        }
    }

    void walk_stmt(const Stmt& stmt) {
        switch (stmt.kind) {
        case StmtKind::Block:
            for (const auto& s : static_cast<const BlockStmt&>(stmt).statements) walk_stmt(*s);
            break;
        case StmtKind::VarDecl: {
            const auto& s = static_cast<const VarDeclStmt&>(stmt);
            if (s.init) {
                std::string t = walk_expr(*s.init);
                if (s.type_name == "var") locals_[s.name] = t;
            }
            break;
        }
        case StmtKind::Assign: {
            const auto& s = static_cast<const AssignStmt&>(stmt);
            walk_expr(*s.value);
            walk_expr(*s.target);
            break;
        }
        case StmtKind::ExprStmt:
            walk_expr(*static_cast<const ExprStmt&>(stmt).expr);
            break;
        case StmtKind::If: {
            const auto& s = static_cast<const IfStmt&>(stmt);
            walk_expr(*s.condition);
            walk_stmt(*s.then_branch);
            if (s.else_branch) walk_stmt(*s.else_branch);
            break;
        }
        case StmtKind::While: {
            const auto& s = static_cast<const WhileStmt&>(stmt);
            walk_expr(*s.condition);
            walk_stmt(*s.body);
            break;
        }
        case StmtKind::Try: {
            const auto& s = static_cast<const TryStmt&>(stmt);
            walk_stmt(*s.body);
            for (const auto& c : s.catches) walk_stmt(*c.body);
            if (s.finally_block) walk_stmt(*s.finally_block);
            break;
        }
        case StmtKind::Return: {
            const auto& s = static_cast<const ReturnStmt&>(stmt);
            if (s.value) walk_expr(*s.value);
            break;
        }
        case StmtKind::Throw: {
            const auto& s = static_cast<const ThrowStmt&>(stmt);
            if (s.value) walk_expr(*s.value);
            break;
        }
        case StmtKind::Using:
            assert(false && "analysis bodies are desugared");
            break;
        }
    }

    std::string walk_expr(const Expr& expr) {
        std::string type;
        switch (expr.kind) {
        case ExprKind::ObjectCreation: {
            const auto& e = static_cast<const ObjectCreationExpr&>(expr);
            for (const auto& a : e.args) walk_expr(*a);
            check_type_ref(e.type_name, e.span);
            auto targets = model_.resolve_ctor(e.type_name);
            method_.binding.call_targets[&expr] = targets;
            type = e.type_name;
            break;
        }
        case ExprKind::Call: {
            const auto& e = static_cast<const CallExpr&>(expr);
            std::string recv_type = method_.owner;
            if (e.receiver) recv_type = walk_expr(*e.receiver);
            for (const auto& a : e.args) walk_expr(*a);
            std::vector<const MethodInfo*> targets;
            if (!recv_type.empty()) targets = model_.resolve_call(recv_type, e.callee);
            if (targets.empty()) {
                error(e.span, "unresolved method '" + e.callee + "' on " +
                                  (recv_type.empty() ? std::string("<unknown>") : recv_type));
            } else {
                type = targets.front()->return_type;
            }
            method_.binding.call_targets[&expr] = targets;
            break;
        }
        case ExprKind::FieldAccess: {
            const auto& e = static_cast<const FieldAccessExpr&>(expr);
            std::string recv_type = walk_expr(*e.receiver);
            const FieldInfo* field = nullptr;
            if (!recv_type.empty()) field = model_.resolve_field(recv_type, e.field);
            if (!field) {
                error(e.span, "unresolved field '" + e.field + "' on " +
                                  (recv_type.empty() ? std::string("<unknown>") : recv_type));
            } else {
                method_.binding.field_accesses[&expr] = field;
                type = field->type;
            }
            break;
        }
        case ExprKind::Name: {
            const auto& e = static_cast<const NameExpr&>(expr);
            NameResolution res;
            auto local = locals_.find(e.name);
            if (local != locals_.end()) {
                res.kind = RefKind::Local;
                res.type = local->second;
            } else if (const FieldInfo* field = model_.resolve_field(method_.owner, e.name)) {
                res.kind = RefKind::Field;
                res.field = field;
                res.type = field->type;
            } else {
                error(e.span, "unresolved name '" + e.name + "' in " + method_.qualified_name());
            }
            type = res.type;
            method_.binding.names[&expr] = res;
            break;
        }
        case ExprKind::This:
            type = method_.owner;
            break;
        case ExprKind::NullComparison:
            walk_expr(*static_cast<const NullComparisonExpr&>(expr).operand);
            break;
        case ExprKind::NullLiteral:
            break;
        case ExprKind::Opaque:
            type = "int";
            break;
        }
        method_.binding.expr_types[&expr] = type;
        return type;
    }

    SemanticModel& model_;
    MethodInfo& method_;
    std::map<std::string, std::string> locals_;
};

namespace {

void register_builtin_types(SemanticModel& model, std::vector<std::unique_ptr<TypeInfo>>& types,
                            std::map<std::string, size_t>& index,
                            std::vector<std::string>& order) {
    auto add_type = [&](std::unique_ptr<TypeInfo> t) -> TypeInfo* {
        TypeInfo* out = t.get();
        index[t->name] = types.size();
        order.push_back(t->name);
        types.push_back(std::move(t));
        return out;
    };
    auto make = [](const std::string& name) {
        auto t = std::make_unique<TypeInfo>();
        t->name = name;
        t->is_builtin = true;
        return t;
    };
    auto add_release_methods = [](TypeInfo& t) {
        for (const char* name : {"Dispose", "Close"}) {
            auto m = std::make_unique<MethodInfo>();
            m->name = name;
            m->owner = t.name;
            m->is_builtin = true;
            m->return_type = "void";
            t.methods.push_back(std::move(m));
        }
    };

    // scalar int
    {
        auto t = make("int");
        t->is_scalar = true;
        add_type(std::move(t));
    }
    // plain library exception type
    {
        auto t = make("Exception");
        add_implicit_ctor(*t);
        add_type(std::move(t));
    }
    // disposable library types
    for (const char* name : {"Socket", "Stream", "SqlDataReader", "SqlConnection"}) {
        auto t = make(name);
        t->implements_disposable = true;
        add_release_methods(*t);
        add_implicit_ctor(*t);
        add_type(std::move(t));
    }
    // StreamReader wraps a Stream: its constructor propagates the obligation.
    {
        auto t = make("StreamReader");
        t->implements_disposable = true;
        add_release_methods(*t);
        auto ctor = std::make_unique<MethodInfo>();
        ctor->name = "StreamReader";
        ctor->owner = "StreamReader";
        ctor->is_constructor = true;
        ctor->is_builtin = true;
        ctor->return_type = "StreamReader";
        ctor->return_attributes.push_back(builtin_attr(AttributeKind::MustCallAlias));
        ParamInfo p;
        p.name = "stream";
        p.type = "Stream";
        p.attributes.push_back(builtin_attr(AttributeKind::MustCallAlias));
        ctor->params.push_back(std::move(p));
        t->methods.push_back(std::move(ctor));
        add_type(std::move(t));
    }
    // SqlCommand allocates readers and holds a connection.
    {
        auto t = make("SqlCommand");
        t->implements_disposable = true;
        add_release_methods(*t);
        add_implicit_ctor(*t);
        FieldInfo conn;
        conn.name = "Connection";
        conn.type = "SqlConnection";
        conn.owner = "SqlCommand";
        t->fields.push_back(std::move(conn));
        auto m = std::make_unique<MethodInfo>();
        m->name = "ExecuteReader";
        m->owner = "SqlCommand";
        m->is_builtin = true;
        m->return_type = "SqlDataReader";
        m->return_attributes.push_back(builtin_attr(AttributeKind::Owning));
        ParamInfo behavior;
        behavior.name = "behavior";
        behavior.type = "int";
        m->params.push_back(std::move(behavior));
        t->methods.push_back(std::move(m));
        add_type(std::move(t));
    }
    (void)model;
}

} // namespace

SemanticModel build_model(std::vector<std::unique_ptr<CompilationUnit>> units) {
    SemanticModel model;
    model.units_ = std::move(units);

    register_builtin_types(model, model.types_, model.type_index_, model.type_order_);

    // pass 1: register user types
    for (const auto& unit : model.units_) {
        for (const auto& cls : unit->classes) {
            if (model.type_index_.count(cls.name)) {
                model.errors_.push_back(Diagnostic{cls.span.file, cls.span.line, cls.span.column,
                                                   "duplicate type name '" + cls.name + "'"});
                continue;
            }
            auto type = std::make_unique<TypeInfo>();
            type->name = cls.name;
            type->span = cls.span;
            type->attributes = cls.attributes;
            if (cls.heritage == "IDisposable") {
                type->implements_disposable = true;
            } else {
                type->declared_supertype = cls.heritage;
            }
            model.type_index_[cls.name] = model.types_.size();
            model.types_.push_back(std::move(type));
            model.type_order_.push_back(cls.name);
        }
    }

    // pass 2: supertype resolution and cycle detection
    for (const auto& unit : model.units_) {
        for (const auto& cls : unit->classes) {
            TypeInfo* type = model.find_type_mut(cls.name);
            if (!type || type->span != cls.span) continue; // duplicate, skipped
            if (!type->declared_supertype.empty() &&
                !model.find_type(type->declared_supertype)) {
                model.errors_.push_back(
                    Diagnostic{cls.span.file, cls.span.line, cls.span.column,
                               "unknown supertype '" + type->declared_supertype + "'"});
                type->declared_supertype.clear();
            }
        }
    }
    for (const auto& name : model.type_order_) {
        TypeInfo* type = model.find_type_mut(name);
        std::set<std::string> seen{name};
        std::string cur = type->declared_supertype;
        while (!cur.empty()) {
            if (!seen.insert(cur).second) {
                model.errors_.push_back(Diagnostic{type->span.file, type->span.line,
                                                   type->span.column,
                                                   "type '" + name + "' is its own supertype"});
                type->declared_supertype.clear();
                break;
            }
            const TypeInfo* t = model.find_type(cur);
            cur = t ? t->declared_supertype : "";
        }
    }

    // pass 3: fields and method signatures
    for (const auto& unit : model.units_) {
        for (const auto& cls : unit->classes) {
            TypeInfo* type = model.find_type_mut(cls.name);
            if (!type || type->span != cls.span) continue;
            for (const auto& fd : cls.fields) {
                if (type->find_field(fd.name)) {
                    model.errors_.push_back(Diagnostic{fd.span.file, fd.span.line, fd.span.column,
                                                       "duplicate field '" + fd.name + "' in " +
                                                           cls.name});
                    continue;
                }
                FieldInfo field;
                field.name = fd.name;
                field.type = fd.type_name;
                field.owner = cls.name;
                field.readonly = fd.readonly;
                field.attributes = fd.attributes;
                field.span = fd.span;
                type->fields.push_back(std::move(field));
            }
            for (const auto& md : cls.methods) {
                bool duplicate = false;
                for (const auto& existing : type->methods) {
                    if (existing->name == md.name &&
                        existing->is_constructor == md.is_constructor) {
                        duplicate = true;
                    }
                }
                if (duplicate) {
                    model.errors_.push_back(Diagnostic{md.span.file, md.span.line, md.span.column,
                                                       "duplicate method '" + md.name + "' in " +
                                                           cls.name});
                    continue;
                }
                auto method = std::make_unique<MethodInfo>();
                method->name = md.name;
                method->owner = cls.name;
                method->is_constructor = md.is_constructor;
                method->is_static = md.is_static;
                method->return_type = md.is_constructor ? cls.name : md.return_type;
                method->return_attributes = md.return_attributes;
                method->method_attributes = md.method_attributes;
                method->span = md.span;
                method->decl = &md;
                for (const auto& pd : md.params) {
                    ParamInfo p;
                    p.name = pd.name;
                    p.type = pd.type_name;
                    p.attributes = pd.attributes;
                    p.span = pd.span;
                    method->params.push_back(std::move(p));
                }
                if (md.body) method->analysis_body = desugar_body(*md.body);
                type->methods.push_back(std::move(method));
            }
            bool has_ctor = false;
            for (const auto& m : type->methods) has_ctor |= m->is_constructor;
            if (!has_ctor) add_implicit_ctor(*type);
        }
    }

    // pass 4: validate declared type references
    for (const auto& unit : model.units_) {
        for (const auto& cls : unit->classes) {
            TypeInfo* type = model.find_type_mut(cls.name);
            if (!type || type->span != cls.span) continue;
            auto check = [&](const std::string& name, const Span& at) {
                if (name.empty() || name == "void" || model.find_type(name)) return;
                if (name.rfind("List<", 0) == 0 && name.back() == '>') {
                    std::string elem = name.substr(5, name.size() - 6);
                    if (model.find_type(elem)) {
                        model.ensure_collection(name);
                        return;
                    }
                }
                model.errors_.push_back(Diagnostic{at.file, at.line, at.column,
                                                   "unknown type '" + name + "'"});
            };
            for (const auto& f : type->fields) check(f.type, f.span);
            for (const auto& m : type->methods) {
                if (m->is_builtin) continue;
                if (!m->is_constructor) check(m->return_type, m->span);
                for (const auto& p : m->params) check(p.type, p.span);
                for (const auto& attr : m->method_attributes) {
                    if (attr.kind != AttributeKind::EnsuresCalledMethods &&
                        attr.kind != AttributeKind::CreateMustCallFor) {
                        continue;
                    }
                    if (!model.resolve_field(cls.name, attr.args[0])) {
                        model.errors_.push_back(
                            Diagnostic{m->span.file, m->span.line, m->span.column,
                                       std::string(attribute_kind_name(attr.kind)) +
                                           " names unknown field '" + attr.args[0] + "' on " +
                                           m->qualified_name()});
                    }
                }
            }
        }
    }

    // pass 5: bind bodies
    for (const auto& t : model.types_) {
        for (const auto& m : t->methods) {
            if (m->has_body()) Binder(model, *m).run();
        }
    }

    model.recompute_rtype();
    return model;
}

// --- overlay application -----------------------------------------------------------

namespace {

// fileName clauses match the unit path exactly or as a whole-component suffix,
// so overlays keep working when sources are addressed by relative paths
bool overlay_file_matches(const std::string& unit_path, const std::string& entry_file) {
    if (unit_path == entry_file) return true;
    if (unit_path.size() <= entry_file.size()) return false;
    return unit_path.compare(unit_path.size() - entry_file.size(), entry_file.size(),
                             entry_file) == 0 &&
           unit_path[unit_path.size() - entry_file.size() - 1] == '/';
}

} // namespace

std::vector<Diagnostic> SemanticModel::apply_overlay(const std::vector<OverlayEntry>& entries) {
    std::vector<Diagnostic> problems;
    auto entry_error = [&](const OverlayEntry& e, const std::string& msg) {
        problems.push_back(Diagnostic{e.file_name, e.line_no, 0,
                                      "overlay entry (line " + std::to_string(e.source_line) +
                                          "): " + msg});
    };

    for (const auto& entry : entries) {
        AttributeSpec attr;
        attr.kind = entry.annotation;
        attr.args = entry.annotation_args;
        attr.provenance = AttributeProvenance::Overlay;

        bool bound = false;
        for (auto& type : types_) {
            if (type->is_builtin || type->is_scalar) continue;
            if (!overlay_file_matches(type->span.file, entry.file_name)) continue;

            switch (entry.element_type) {
            case OverlayElement::Type:
                if (type->span.line == entry.line_no && type->name == entry.element_name) {
                    if (entry.annotation != AttributeKind::MustCall) {
                        entry_error(entry, "only MustCall applies to a type");
                    } else {
                        attr.span = type->span;
                        type->attributes.push_back(attr);
                        overlay_provenance_.push_back("type " + type->name + ": " +
                                                      attribute_kind_name(attr.kind));
                    }
                    bound = true;
                }
                break;
            case OverlayElement::Field:
                for (auto& field : type->fields) {
                    if (field.span.line == entry.line_no && field.name == entry.element_name) {
                        if (entry.annotation != AttributeKind::Owning) {
                            entry_error(entry, "only Owning applies to a field");
                        } else {
                            attr.span = field.span;
                            field.attributes.push_back(attr);
                            overlay_provenance_.push_back("field " + type->name + "." +
                                                          field.name + ": " +
                                                          attribute_kind_name(attr.kind));
                        }
                        bound = true;
                    }
                }
                break;
            case OverlayElement::Method:
            case OverlayElement::ReturnType:
                for (auto& method : type->methods) {
                    if (method->is_builtin) continue;
                    if (method->span.line != entry.line_no || method->name != entry.element_name)
                        continue;
                    if (entry.element_type == OverlayElement::ReturnType) {
                        if (entry.annotation != AttributeKind::Owning &&
                            entry.annotation != AttributeKind::MustCallAlias) {
                            entry_error(entry, "only Owning or MustCallAlias applies to a "
                                               "return position");
                        } else {
                            attr.span = method->span;
                            method->return_attributes.push_back(attr);
                            overlay_provenance_.push_back(
                                "return of " + method->qualified_name() + ": " +
                                attribute_kind_name(attr.kind));
                        }
                    } else {
                        if (entry.annotation != AttributeKind::EnsuresCalledMethods &&
                            entry.annotation != AttributeKind::CreateMustCallFor) {
                            entry_error(entry, "only EnsuresCalledMethods or CreateMustCallFor "
                                               "applies to a method");
                        } else {
                            attr.span = method->span;
                            method->method_attributes.push_back(attr);
                            overlay_provenance_.push_back("method " + method->qualified_name() +
                                                          ": " + attribute_kind_name(attr.kind));
                        }
                    }
                    bound = true;
                }
                break;
            case OverlayElement::Parameter:
                for (auto& method : type->methods) {
                    if (method->is_builtin) continue;
                    for (auto& param : method->params) {
                        if (param.span.line == entry.line_no &&
                            param.name == entry.element_name) {
                            if (entry.annotation != AttributeKind::Owning &&
                                entry.annotation != AttributeKind::MustCallAlias) {
                                entry_error(entry,
                                            "only Owning or MustCallAlias applies to a parameter");
                            } else {
                                attr.span = param.span;
                                param.attributes.push_back(attr);
                                overlay_provenance_.push_back(
                                    "parameter " + param.name + " of " +
                                    method->qualified_name() + ": " +
                                    attribute_kind_name(attr.kind));
                            }
                            bound = true;
                        }
                    }
                }
                break;
            }
        }
        if (!bound) {
            entry_error(entry, "no " + std::string(overlay_element_name(entry.element_type)) +
                                   " named '" + entry.element_name + "' at " + entry.file_name +
                                   ":" + std::to_string(entry.line_no));
        }
    }

    recompute_rtype();
    return problems;
}

} // namespace mustcall
