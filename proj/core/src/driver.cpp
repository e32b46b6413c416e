#include "mustcall/driver.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mustcall/overlay.hpp"
#include "mustcall/parser.hpp"

namespace mustcall {

RunResult run_on_sources(const std::vector<SourceUnit>& sources, const std::string& overlay_text,
                         bool naive, bool dump_cfg, bool dump_aliases) {
    RunResult result;
    std::ostringstream debug;

    std::vector<std::unique_ptr<CompilationUnit>> units;
    for (const auto& source : sources) {
        try {
            units.push_back(parse_unit(source));
        } catch (const ParseError& err) {
            result.errors.push_back(err.diag());
        }
    }

    SemanticModel model = build_model(std::move(units));
    for (const auto& diag : model.errors()) result.errors.push_back(diag);

    if (!overlay_text.empty()) {
        OverlayParseResult overlay = parse_overlay(overlay_text);
        for (const auto& diag : overlay.errors) result.errors.push_back(diag);
        for (const auto& diag : model.apply_overlay(overlay.entries)) {
            result.errors.push_back(diag);
        }
    }

    for (const auto& [kind, count] : model.attribute_stats()) {
        result.stats.attributes[kind] = count;
    }

    for (const MethodInfo* method : model.analyzable_methods()) {
        MethodAnalysis analysis(model, *method, naive);
        result.stats.sources += static_cast<int>(analysis.sources().size());
        result.stats.sinks += static_cast<int>(analysis.sinks().size());
        for (auto& report : analysis.check()) result.reports.push_back(std::move(report));
        for (auto& report : analysis.check_create_must_call_for()) {
            result.reports.push_back(std::move(report));
        }
        if (dump_cfg) debug << analysis.cfg().to_dot(method->qualified_name());
        if (dump_aliases) {
            debug << "== aliases of " << method->qualified_name() << "\n" << analysis.aliases().dump();
        }
    }

    if (!naive) {
        for (const TypeInfo* type : model.user_types()) {
            for (auto& report : check_owning_field(model, *type)) {
                result.reports.push_back(std::move(report));
            }
        }
    }

    std::sort(result.reports.begin(), result.reports.end(), report_less);
    result.debug_output = debug.str();
    return result;
}

RunResult run(const RunConfig& config) {
    RunResult result;
    if (config.files.empty()) {
        result.usage_error = true;
        result.errors.push_back(Diagnostic{"", 0, 0, "no input files"});
        return result;
    }

    std::vector<SourceUnit> sources;
    for (const auto& path : config.files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            result.usage_error = true;
            result.errors.push_back(Diagnostic{path, 0, 0, "cannot open input file"});
            return result;
        }
        std::ostringstream text;
        text << in.rdbuf();
        sources.push_back(SourceUnit{path, text.str()});
    }

    std::string overlay_text;
    if (!config.overlay_path.empty()) {
        std::ifstream in(config.overlay_path, std::ios::binary);
        if (!in) {
            result.usage_error = true;
            result.errors.push_back(Diagnostic{config.overlay_path, 0, 0,
                                               "cannot open overlay file"});
            return result;
        }
        std::ostringstream text;
        text << in.rdbuf();
        overlay_text = text.str();
        if (overlay_text.empty()) overlay_text = "\n";
    }

    return run_on_sources(sources, overlay_text, config.naive, config.dump_cfg,
                          config.dump_aliases);
}

std::string render_text(const RunResult& result, bool color) {
    const char* warn_on = color ? "\x1b[1;33m" : "";
    const char* off = color ? "\x1b[0m" : "";
    std::ostringstream os;
    for (const auto& report : result.reports) {
        os << report.file << ":" << report.line << ": " << warn_on << "warning" << off
           << "[resource-leak/" << report.kind << "]: " << report.message << "\n";
    }
    os << result.reports.size() << (result.reports.size() == 1 ? " warning" : " warnings")
       << "\n";
    if (!result.errors.empty()) {
        os << result.errors.size() << (result.errors.size() == 1 ? " error" : " errors") << "\n";
    }
    return os.str();
}

std::string render_json(const RunResult& result) {
    nlohmann::ordered_json doc;
    doc["version"] = 1;
    doc["reports"] = nlohmann::ordered_json::array();
    for (const auto& report : result.reports) {
        nlohmann::ordered_json entry;
        entry["file"] = report.file;
        entry["line"] = report.line;
        entry["kind"] = report.kind;
        entry["message"] = report.message;
        if (!report.witness.empty()) entry["witness"] = report.witness;
        doc["reports"].push_back(std::move(entry));
    }
    doc["stats"]["sources"] = result.stats.sources;
    doc["stats"]["sinks"] = result.stats.sinks;
    doc["stats"]["attributes"] = nlohmann::ordered_json::object();
    for (const auto& [kind, count] : result.stats.attributes) {
        doc["stats"]["attributes"][kind] = count;
    }
    return doc.dump(2) + "\n";
}

int exit_code(const RunResult& result, bool strict) {
    if (result.usage_error) return 2;
    if (strict && !result.errors.empty()) return 2;
    return result.reports.empty() ? 0 : 1;
}

} // namespace mustcall
