#include "mustcall/overlay.hpp"

#include <map>
#include <optional>
#include <sstream>

namespace mustcall {

const char* overlay_element_name(OverlayElement kind) {
    switch (kind) {
    case OverlayElement::Parameter: return "Parameter";
    case OverlayElement::ReturnType: return "ReturnType";
    case OverlayElement::Field: return "Field";
    case OverlayElement::Method: return "Method";
    case OverlayElement::Type: return "Type";
    }
    return "?";
}

namespace {

std::optional<OverlayElement> element_from_name(const std::string& name) {
    if (name == "Parameter") return OverlayElement::Parameter;
    if (name == "ReturnType") return OverlayElement::ReturnType;
    if (name == "Field") return OverlayElement::Field;
    if (name == "Method") return OverlayElement::Method;
    if (name == "Type") return OverlayElement::Type;
    return std::nullopt;
}

std::string trim(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// splits on the literal word `and` between clauses
std::vector<std::string> split_clauses(const std::string& line) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos < line.size()) {
        size_t next = line.find(" and ", pos);
        if (next == std::string::npos) {
            out.push_back(trim(line.substr(pos)));
            break;
        }
        out.push_back(trim(line.substr(pos, next - pos)));
        pos = next + 5;
    }
    return out;
}

} // namespace

OverlayParseResult parse_overlay(const std::string& text, const std::string& overlay_path) {
    OverlayParseResult result;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;

        auto fail = [&](const std::string& msg) {
            result.errors.push_back(Diagnostic{overlay_path, line_no, 1, msg});
        };

        std::map<std::string, std::string> clauses;
        bool malformed = false;
        for (const auto& clause : split_clauses(body)) {
            size_t eq = clause.find('=');
            if (eq == std::string::npos) {
                fail("malformed clause '" + clause + "' (expected key=\"value\")");
                malformed = true;
                break;
            }
            std::string key = trim(clause.substr(0, eq));
            std::string value = trim(clause.substr(eq + 1));
            if (value.size() < 2 || value.front() != '"' || value.back() != '"') {
                fail("value for '" + key + "' must be double-quoted");
                malformed = true;
                break;
            }
            value = value.substr(1, value.size() - 2);
            if (clauses.count(key)) {
                fail("duplicate clause '" + key + "'");
                malformed = true;
                break;
            }
            clauses[key] = value;
        }
        if (malformed) continue;

        bool missing = false;
        for (const char* key : {"fileName", "lineNo", "elementType", "elementName", "annotation"}) {
            if (!clauses.count(key)) {
                fail(std::string("missing clause '") + key + "'");
                missing = true;
            }
        }
        if (missing) continue;

        OverlayEntry entry;
        entry.source_line = line_no;
        entry.file_name = clauses["fileName"];

        try {
            entry.line_no = std::stoi(clauses["lineNo"]);
        } catch (...) {
            entry.line_no = 0;
        }
        if (entry.line_no <= 0) {
            fail("lineNo must be a positive integer");
            continue;
        }

        auto element = element_from_name(clauses["elementType"]);
        if (!element) {
            fail("unknown elementType '" + clauses["elementType"] + "'");
            continue;
        }
        entry.element_type = *element;
        entry.element_name = clauses["elementName"];

        auto annotation = attribute_kind_from_name(clauses["annotation"]);
        if (!annotation) {
            fail("unknown annotation '" + clauses["annotation"] + "'");
            continue;
        }
        entry.annotation = *annotation;

        if (clauses.count("args")) {
            std::string args = clauses["args"];
            size_t pos = 0;
            while (pos <= args.size() && !args.empty()) {
                size_t comma = args.find(',', pos);
                std::string piece = trim(comma == std::string::npos
                                             ? args.substr(pos)
                                             : args.substr(pos, comma - pos));
                if (!piece.empty()) entry.annotation_args.push_back(piece);
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        }
        int want = attribute_arity(entry.annotation);
        if (static_cast<int>(entry.annotation_args.size()) != want) {
            fail(std::string(attribute_kind_name(entry.annotation)) + " takes " +
                 std::to_string(want) + " argument(s), got " +
                 std::to_string(entry.annotation_args.size()));
            continue;
        }

        result.entries.push_back(std::move(entry));
    }
    return result;
}

} // namespace mustcall
