#ifndef MUSTCALL_ATTRIBUTES_HPP
#define MUSTCALL_ATTRIBUTES_HPP

#include <optional>
#include <string>
#include <vector>

#include "mustcall/source.hpp"

namespace mustcall {

/// The five resource-management attributes. Names are case-sensitive and
/// spelled exactly as they appear in source between square brackets.
enum class AttributeKind {
    MustCall,             // on a type: the method every instance must call
    Owning,               // on a field, parameter, or return position
    MustCallAlias,        // on a parameter and return position (wrappers)
    EnsuresCalledMethods, // on a method: postcondition "calls f.m()"
    CreateMustCallFor,    // on a method: reassigns owning field f
};

const char* attribute_kind_name(AttributeKind kind);
std::optional<AttributeKind> attribute_kind_from_name(const std::string& name);

/// Expected argument count for each attribute kind.
int attribute_arity(AttributeKind kind);

/// Where an attribute instance came from. Built-in library specifications are
/// excluded from user-facing attribute statistics.
enum class AttributeProvenance { Source, Overlay, Builtin };

struct AttributeSpec {
    AttributeKind kind;
    std::vector<std::string> args;
    Span span;
    AttributeProvenance provenance = AttributeProvenance::Source;

    bool is(AttributeKind k) const { return kind == k; }
};

/// True if `attrs` contains an attribute of the given kind.
bool has_attribute(const std::vector<AttributeSpec>& attrs, AttributeKind kind);

/// First attribute of the given kind, or nullptr.
const AttributeSpec* find_attribute(const std::vector<AttributeSpec>& attrs,
                                    AttributeKind kind);

} // namespace mustcall

#endif
