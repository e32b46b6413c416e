#ifndef MUSTCALL_MODEL_HPP
#define MUSTCALL_MODEL_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mustcall/ast.hpp"
#include "mustcall/overlay.hpp"
#include "mustcall/source.hpp"

namespace mustcall {

struct TypeInfo;
struct MethodInfo;

struct ParamInfo {
    std::string name;
    std::string type;
    std::vector<AttributeSpec> attributes;
    Span span;
};

struct FieldInfo {
    std::string name;
    std::string type;
    std::string owner; // declaring type
    bool readonly = false;
    std::vector<AttributeSpec> attributes;
    Span span;

    bool is_owning() const { return has_attribute(attributes, AttributeKind::Owning); }
};

/// How a bare identifier resolved inside a method body.
enum class RefKind { Local, Field, Unresolved };

struct NameResolution {
    RefKind kind = RefKind::Unresolved;
    std::string type;                // static type ("" when unknown)
    const FieldInfo* field = nullptr; // set when kind == Field
};

/// Per-method name/type/call resolution over the analysis (desugared) body.
/// Keys are AST node addresses inside MethodInfo::analysis_body.
struct MethodBinding {
    std::map<const Expr*, NameResolution> names;
    std::map<const Expr*, const FieldInfo*> field_accesses;
    std::map<const Expr*, std::vector<const MethodInfo*>> call_targets;
    std::map<const Expr*, std::string> expr_types;
    std::map<std::string, std::string> locals; // declared or inferred local types

    const FieldInfo* field_of(const Expr* expr) const;
    std::string type_of(const Expr* expr) const;
    std::vector<const MethodInfo*> targets_of(const Expr* expr) const;
};

struct MethodInfo {
    std::string name;
    std::string owner;
    bool is_constructor = false;
    bool is_static = false;
    bool is_builtin = false;
    std::string return_type;
    std::vector<AttributeSpec> return_attributes;
    std::vector<AttributeSpec> method_attributes;
    std::vector<ParamInfo> params;
    Span span;

    const MethodDecl* decl = nullptr;          // null for built-ins
    std::unique_ptr<BlockStmt> analysis_body;  // desugared body, null for built-ins
    MethodBinding binding;

    bool has_body() const { return analysis_body != nullptr; }
    std::string qualified_name() const { return owner + "." + name; }

    const AttributeSpec* ensures_called() const {
        return find_attribute(method_attributes, AttributeKind::EnsuresCalledMethods);
    }
    const AttributeSpec* create_must_call_for() const {
        return find_attribute(method_attributes, AttributeKind::CreateMustCallFor);
    }
    bool owning_return() const { return has_attribute(return_attributes, AttributeKind::Owning); }
    bool must_call_alias_return() const {
        return has_attribute(return_attributes, AttributeKind::MustCallAlias);
    }
};

struct TypeInfo {
    std::string name;
    std::string declared_supertype;  // empty when none
    bool implements_disposable = false;
    std::string collection_element;  // set for List<T>
    bool is_builtin = false;
    bool is_scalar = false;
    std::vector<FieldInfo> fields;
    std::vector<std::unique_ptr<MethodInfo>> methods;
    std::vector<AttributeSpec> attributes;
    Span span;

    const FieldInfo* find_field(const std::string& field_name) const;
    const MethodInfo* find_method(const std::string& method_name) const;
    std::vector<const MethodInfo*> constructors() const;
};

/// The resolved program: every declared and built-in type, the resource-type
/// set RType, and per-method bindings. Immutable once overlay application (if
/// any) has finished.
class SemanticModel {
  public:
    const TypeInfo* find_type(const std::string& name) const;
    const std::vector<std::string>& type_order() const { return type_order_; }

    /// User-declared types in declaration order.
    std::vector<const TypeInfo*> user_types() const;

    /// All user methods with bodies, in declaration order.
    std::vector<const MethodInfo*> analyzable_methods() const;

    const std::set<std::string>& rtype() const { return rtype_; }

    /// Recomputes the RType fixpoint from scratch (used by stability checks
    /// and when attributes change).
    std::set<std::string> compute_rtype() const;

    /// Static target of `receiver_type.name(...)` plus every override in the
    /// transitive subtypes of receiver_type. Empty when the name does not
    /// resolve anywhere on the chain.
    std::vector<const MethodInfo*> resolve_call(const std::string& receiver_type,
                                                const std::string& name) const;

    /// Constructor targets of `new type_name(...)`.
    std::vector<const MethodInfo*> resolve_ctor(const std::string& type_name) const;

    /// Field lookup through the declared-supertype chain.
    const FieldInfo* resolve_field(const std::string& type_name,
                                   const std::string& field_name) const;

    /// True when the type (or a transitive supertype) implements IDisposable.
    bool is_disposable(const std::string& type_name) const;

    /// The release method instances of this type must call: the MustCall
    /// argument when annotated, Dispose for disposable types, or the element
    /// type's release method for collections. Empty when none applies.
    std::string release_method(const std::string& type_name) const;

    std::vector<std::string> transitive_subtypes(const std::string& type_name) const;

    /// Attaches overlay attributes to the elements they name. Returns binding
    /// errors for entries that match nothing. Recomputes RType.
    std::vector<Diagnostic> apply_overlay(const std::vector<OverlayEntry>& entries);

    /// Attribute instances by kind, source + overlay (built-ins excluded).
    std::map<std::string, int> attribute_stats() const;

    /// Elements that received attributes from the overlay rather than source.
    const std::vector<std::string>& overlay_provenance() const { return overlay_provenance_; }

    const std::vector<Diagnostic>& errors() const { return errors_; }

  private:
    friend SemanticModel build_model(std::vector<std::unique_ptr<CompilationUnit>> units);
    friend class Binder;

    TypeInfo* find_type_mut(const std::string& name);
    TypeInfo* ensure_collection(const std::string& name); // lazily registers List<T>
    void recompute_rtype() { rtype_ = compute_rtype(); }

    std::vector<std::unique_ptr<CompilationUnit>> units_;
    std::vector<std::unique_ptr<TypeInfo>> types_;
    std::map<std::string, size_t> type_index_;
    std::vector<std::string> type_order_;
    std::set<std::string> rtype_;
    std::vector<Diagnostic> errors_;
    std::vector<std::string> overlay_provenance_;
};

/// Builds the semantic model from parsed units: registers built-in library
/// types, resolves declarations, desugars bodies, binds names and call
/// targets, and computes RType. Resolution problems land in model.errors().
SemanticModel build_model(std::vector<std::unique_ptr<CompilationUnit>> units);

} // namespace mustcall

#endif
