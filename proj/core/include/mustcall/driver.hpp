#ifndef MUSTCALL_DRIVER_HPP
#define MUSTCALL_DRIVER_HPP

#include <map>
#include <string>
#include <vector>

#include "mustcall/leakcheck.hpp"
#include "mustcall/source.hpp"

namespace mustcall {

struct RunConfig {
    std::vector<std::string> files;
    std::string overlay_path; // empty when none
    bool naive = false;
    bool strict = false;
    bool dump_cfg = false;
    bool dump_aliases = false;
};

struct RunStats {
    int sources = 0;
    int sinks = 0;
    std::map<std::string, int> attributes; // all five kinds, zeros included

    bool operator==(const RunStats&) const = default;
};

struct RunResult {
    std::vector<LeakReport> reports; // sorted by (file, line, kind, message)
    std::vector<Diagnostic> errors;
    RunStats stats;
    bool usage_error = false;
    std::string debug_output; // --dump-cfg / --dump-aliases text
};

/// Full pipeline over in-memory sources: parse, model, overlay, per-method
/// checks, class checks, sorted reports. Analysis findings never abort the
/// run; parse/resolution problems are collected into errors.
RunResult run_on_sources(const std::vector<SourceUnit>& sources,
                         const std::string& overlay_text = "", bool naive = false,
                         bool dump_cfg = false, bool dump_aliases = false);

/// File-reading front door for the CLI.
RunResult run(const RunConfig& config);

/// `<file>:<line>: warning[resource-leak/<kind>]: <message>` per report plus a
/// summary footer. Deterministic; color is opt-in.
std::string render_text(const RunResult& result, bool color = false);

/// Stable-key-order JSON: {"version":1,"reports":[...],"stats":{...}}.
/// Byte-identical across runs on identical input.
std::string render_json(const RunResult& result);

/// 0 = clean, 1 = at least one report, 2 = usage error or strict-mode
/// parse/resolution error.
int exit_code(const RunResult& result, bool strict);

} // namespace mustcall

#endif
