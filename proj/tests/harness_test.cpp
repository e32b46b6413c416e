#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "mustcall/corpus.hpp"
#include "mustcall/leakcheck.hpp"
#include "mustcall/path_oracle.hpp"
#include "mustcall/random_programs.hpp"

#include "test_util.hpp"

using namespace mustcall;
using mustcall::test::model_of;

namespace {

struct Checked {
    SemanticModel model;
    std::unique_ptr<MethodAnalysis> analysis;
};

Checked analyze(const std::string& text, const std::string& type, const std::string& name) {
    Checked out{model_of(text), nullptr};
    const TypeInfo* t = out.model.find_type(type);
    REQUIRE(t != nullptr);
    const MethodInfo* method = t->find_method(name);
    REQUIRE(method != nullptr);
    out.analysis = std::make_unique<MethodAnalysis>(out.model, *method);
    return out;
}

} // namespace

TEST_CASE("oracle: the branch example leaks along the release-free path") {
    std::string fig1 = "class Fig1 { static void run() { Socket a = new Socket(...);\n"
                       "        if (...) {\n"
                       "            ...;\n"
                       "        } else {\n"
                       "            a.Close();\n"
                       "        }\n"
                       "    }\n"
                       "}\n";
    Checked c = analyze(fig1, "Fig1", "run");
    REQUIRE(c.analysis->sources().size() == 1);
    OracleVerdict verdict = path_oracle(*c.analysis, c.analysis->sources()[0]);
    CHECK(verdict.leaking);
    CHECK(verdict.paths_enumerated == 2);
    REQUIRE(!verdict.witness.empty());
    // the witness is the then-branch path: it avoids the Close node
    std::set<int> nodes, edges;
    c.analysis->discharge_sets(c.analysis->sources()[0], nodes, edges);
    for (int node : verdict.witness) CHECK(nodes.count(node) == 0);
}

TEST_CASE("oracle: a directly released instance does not leak") {
    std::string direct = "[MustCall(Dispose)]\n"
                         "class Container : IDisposable {\n"
                         "    public void Dispose() { ...; }\n"
                         "    public static void Main() {\n"
                         "        Container c = new Container();\n"
                         "        ...;\n"
                         "        c.Dispose();\n"
                         "    }\n"
                         "}\n";
    Checked c = analyze(direct, "Container", "Main");
    REQUIRE(c.analysis->sources().size() == 1);
    OracleVerdict verdict = path_oracle(*c.analysis, c.analysis->sources()[0]);
    CHECK(!verdict.leaking);
    CHECK(verdict.paths_enumerated == 1);
}

TEST_CASE("oracle: straight-line allocation plus release is a single clean path") {
    std::string text = "class T { void run() { Socket s = new Socket(...); s.Dispose(); } }";
    Checked c = analyze(text, "T", "run");
    REQUIRE(c.analysis->sources().size() == 1);
    OracleVerdict verdict = path_oracle(*c.analysis, c.analysis->sources()[0]);
    CHECK(!verdict.leaking);
    CHECK(verdict.paths_enumerated == 1);
}

TEST_CASE("oracle: loops are enumerated with each back edge at most once") {
    std::string text = "class T {\n"
                       "    void run() {\n"
                       "        Socket s = new Socket(...);\n"
                       "        while (...) {\n"
                       "            ...;\n"
                       "        }\n"
                       "        s.Dispose();\n"
                       "    }\n"
                       "}\n";
    Checked c = analyze(text, "T", "run");
    REQUIRE(c.analysis->sources().size() == 1);
    OracleVerdict verdict = path_oracle(*c.analysis, c.analysis->sources()[0]);
    CHECK(!verdict.leaking);
    CHECK(verdict.paths_enumerated == 2); // skip the loop, or take it once
    CHECK(!c.analysis->not_disposed(c.analysis->sources()[0]));
}

TEST_CASE("oracle: a release inside a loop body does not cover the zero-trip path") {
    std::string text = "class T {\n"
                       "    void run() {\n"
                       "        Socket s = new Socket(...);\n"
                       "        while (...) {\n"
                       "            s.Dispose();\n"
                       "        }\n"
                       "    }\n"
                       "}\n";
    Checked c = analyze(text, "T", "run");
    REQUIRE(c.analysis->sources().size() == 1);
    OracleVerdict verdict = path_oracle(*c.analysis, c.analysis->sources()[0]);
    CHECK(verdict.leaking);
    CHECK(c.analysis->not_disposed(c.analysis->sources()[0]));
}

TEST_CASE("the oracle respects tiny path caps") {
    std::string text = "class T { void run() { Socket s = new Socket(...); "
                       "if (...) { ...; } if (...) { ...; } if (...) { ...; } } }";
    Checked c = analyze(text, "T", "run");
    OracleVerdict verdict = path_oracle(*c.analysis, c.analysis->sources()[0], /*path_cap=*/3);
    CHECK(verdict.inapplicable);
}

TEST_CASE("program generation is deterministic") {
    auto first = generate_random_programs(1, 1);
    auto second = generate_random_programs(1, 1);
    REQUIRE(first.size() == 1);
    REQUIRE(second.size() == 1);
    CHECK(first[0].files[0].text == second[0].files[0].text);
    CHECK(first[0].expected == second[0].expected);
}

TEST_CASE("generated programs agree with the engine") {
    auto cases = generate_random_programs(7, 60);
    int with_loops = 0, with_try = 0;
    for (const auto& corpus_case : cases) {
        if (corpus_case.files[0].text.find("while") != std::string::npos) with_loops++;
        if (corpus_case.files[0].text.find("try") != std::string::npos) with_try++;
        CaseResult result = run_case(corpus_case);
        CHECK_MESSAGE(result.passed, "disagreement on:\n", corpus_case.files[0].text);
    }
    CHECK(with_loops >= 10);
    CHECK(with_try >= 10);
}

TEST_CASE("the corpus runner diffs expected and actual reports") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "mustcall_corpus_test";
    fs::remove_all(dir);
    fs::create_directories(dir / "stale");
    {
        std::ofstream prog(dir / "stale" / "prog.moo");
        prog << "class T { void run() { Socket s = new Socket(...); s.Dispose(); } }\n";
        std::ofstream expected(dir / "stale" / "expected.json");
        expected << R"({"mode":"full","reports":[{"file":"prog.moo","line":1,)"
                 << R"("kind":"ObjectCreation"}]})" << "\n";
    }
    fs::create_directories(dir / "noexpect");
    {
        std::ofstream prog(dir / "noexpect" / "prog.moo");
        prog << "class T { }\n";
    }

    CorpusSummary summary = run_corpus(dir.string());
    REQUIRE(summary.cases.size() == 2);
    CHECK(!summary.all_passed());
    const CaseResult& missing = summary.cases[0]; // "noexpect" sorts first
    CHECK(missing.load_error);
    const CaseResult& stale = summary.cases[1];
    CHECK(!stale.passed);
    REQUIRE(!stale.diffs.empty());
    CHECK(stale.diffs[0].find("missing report") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("the golden corpus passes end to end") {
    CorpusSummary summary = run_corpus(MUSTCALL_CORPUS_DIR);
    CHECK(summary.cases.size() >= 30);
    CHECK_MESSAGE(summary.all_passed(), summary.format());
}
