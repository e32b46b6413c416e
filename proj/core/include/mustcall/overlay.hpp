#ifndef MUSTCALL_OVERLAY_HPP
#define MUSTCALL_OVERLAY_HPP

#include <string>
#include <vector>

#include "mustcall/attributes.hpp"
#include "mustcall/source.hpp"

namespace mustcall {

enum class OverlayElement { Parameter, ReturnType, Field, Method, Type };

const char* overlay_element_name(OverlayElement kind);

/// One overlay line: an attribute applied externally to the program element
/// identified by (file, line, element kind, element name).
struct OverlayEntry {
    std::string file_name;
    int line_no = 0;
    OverlayElement element_type = OverlayElement::Parameter;
    std::string element_name;
    AttributeKind annotation = AttributeKind::Owning;
    std::vector<std::string> annotation_args;
    int source_line = 0; // line within the overlay file, for diagnostics
};

struct OverlayParseResult {
    std::vector<OverlayEntry> entries;
    std::vector<Diagnostic> errors;
};

/// Parses overlay text. One entry per line:
///   fileName="<path>" and lineNo="<n>" and elementType="<kind>" and
///   elementName="<id>" and annotation="<Attr>" [and args="<id1,id2>"]
/// Blank lines and lines starting with '#' are ignored.
OverlayParseResult parse_overlay(const std::string& text,
                                 const std::string& overlay_path = "<overlay>");

} // namespace mustcall

#endif
