#ifndef MUSTCALL_CORPUS_HPP
#define MUSTCALL_CORPUS_HPP

#include <string>
#include <vector>

#include "mustcall/source.hpp"

namespace mustcall {

struct ExpectedReport {
    std::string file;
    int line = 0;
    std::string kind;

    auto operator<=>(const ExpectedReport&) const = default;
};

struct CorpusCase {
    std::string name;
    std::vector<SourceUnit> files;
    std::string overlay_text; // empty when none
    std::vector<ExpectedReport> expected;
    bool naive_mode = false;
};

struct CaseResult {
    std::string name;
    bool passed = false;
    bool load_error = false;
    std::vector<std::string> diffs;
};

struct CorpusSummary {
    std::vector<CaseResult> cases;

    bool all_passed() const;
    std::string format() const;
};

/// Reads one case directory: every *.moo file (sorted, unit path = file name),
/// an optional *.rmspec overlay, and expected.json:
///   {"reports":[{"file":...,"line":...,"kind":...}],"mode":"full"|"naive"}
/// Throws std::runtime_error when expected.json is missing or malformed.
CorpusCase load_case(const std::string& case_dir);

/// Runs the pipeline on a case and diffs actual vs expected (file, line, kind)
/// triples.
CaseResult run_case(const CorpusCase& corpus_case);

/// Runs every subdirectory of `directory` as a case, ordered by name.
CorpusSummary run_corpus(const std::string& directory);

} // namespace mustcall

#endif
