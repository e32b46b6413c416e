#include "mustcall/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mustcall/driver.hpp"

namespace fs = std::filesystem;

namespace mustcall {

bool CorpusSummary::all_passed() const {
    return std::all_of(cases.begin(), cases.end(),
                       [](const CaseResult& c) { return c.passed; });
}

std::string CorpusSummary::format() const {
    std::ostringstream os;
    int passed = 0;
    for (const auto& result : cases) {
        if (result.passed) {
            passed++;
            os << "PASS " << result.name << "\n";
        } else {
            os << "FAIL " << result.name << "\n";
            for (const auto& diff : result.diffs) os << "     " << diff << "\n";
        }
    }
    os << passed << "/" << cases.size() << " cases passed\n";
    return os.str();
}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

} // namespace

CorpusCase load_case(const std::string& case_dir) {
    CorpusCase out;
    fs::path dir(case_dir);
    out.name = dir.filename().string();

    fs::path expected_path = dir / "expected.json";
    if (!fs::exists(expected_path)) {
        throw std::runtime_error("missing expected.json in " + case_dir);
    }

    std::vector<fs::path> moo_files, spec_files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() == ".moo") moo_files.push_back(entry.path());
        if (entry.path().extension() == ".rmspec") spec_files.push_back(entry.path());
    }
    std::sort(moo_files.begin(), moo_files.end());
    std::sort(spec_files.begin(), spec_files.end());

    for (const auto& path : moo_files) {
        out.files.push_back(SourceUnit{path.filename().string(), read_file(path)});
    }
    if (!spec_files.empty()) out.overlay_text = read_file(spec_files.front());

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(expected_path));
    } catch (const std::exception& err) {
        throw std::runtime_error("malformed expected.json in " + case_dir + ": " + err.what());
    }
    out.naive_mode = doc.value("mode", "full") == "naive";
    for (const auto& entry : doc.value("reports", nlohmann::json::array())) {
        ExpectedReport report;
        report.file = entry.at("file").get<std::string>();
        report.line = entry.at("line").get<int>();
        report.kind = entry.at("kind").get<std::string>();
        out.expected.push_back(std::move(report));
    }
    return out;
}

CaseResult run_case(const CorpusCase& corpus_case) {
    CaseResult result;
    result.name = corpus_case.name;

    RunResult run = run_on_sources(corpus_case.files, corpus_case.overlay_text,
                                   corpus_case.naive_mode);
    for (const auto& err : run.errors) {
        result.diffs.push_back("error: " + err.str());
    }

    std::vector<ExpectedReport> actual;
    for (const auto& report : run.reports) {
        actual.push_back(ExpectedReport{report.file, report.line, report.kind});
    }
    std::vector<ExpectedReport> expected = corpus_case.expected;
    std::sort(actual.begin(), actual.end());
    std::sort(expected.begin(), expected.end());

    auto describe = [](const ExpectedReport& r) {
        return r.file + ":" + std::to_string(r.line) + " " + r.kind;
    };
    for (const auto& r : expected) {
        if (!std::binary_search(actual.begin(), actual.end(), r)) {
            result.diffs.push_back("missing report: " + describe(r));
        }
    }
    for (const auto& r : actual) {
        if (!std::binary_search(expected.begin(), expected.end(), r)) {
            result.diffs.push_back("unexpected report: " + describe(r));
        }
    }
    // exact multiset match
    if (result.diffs.empty() && actual != expected) {
        result.diffs.push_back("report multiplicities differ");
    }
    result.passed = result.diffs.empty();
    return result;
}

CorpusSummary run_corpus(const std::string& directory) {
    CorpusSummary summary;
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.is_directory()) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        try {
            summary.cases.push_back(run_case(load_case(dir.string())));
        } catch (const std::exception& err) {
            CaseResult result;
            result.name = dir.filename().string();
            result.load_error = true;
            result.diffs.push_back(err.what());
            summary.cases.push_back(std::move(result));
        }
    }
    return summary;
}

} // namespace mustcall
