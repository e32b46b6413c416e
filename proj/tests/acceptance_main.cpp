// Acceptance gate: runs every release criterion and prints one PASS/FAIL line
// per criterion. Exits nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "mustcall/corpus.hpp"
#include "mustcall/driver.hpp"
#include "mustcall/leakcheck.hpp"
#include "mustcall/parser.hpp"
#include "mustcall/pretty.hpp"
#include "mustcall/random_programs.hpp"

using namespace mustcall;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::vector<std::string> notes;

void verdict(const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) failures++;
}

std::string corpus_path(const std::string& name) {
    return std::string(MUSTCALL_CORPUS_DIR) + "/" + name;
}

RunResult run_case_files(const std::string& name, bool naive) {
    CorpusCase corpus_case = load_case(corpus_path(name));
    return run_on_sources(corpus_case.files, corpus_case.overlay_text, naive);
}

using Multiset = std::map<std::pair<std::string, std::string>, int>;

Multiset report_signature(const RunResult& result) {
    Multiset out;
    for (const auto& report : result.reports) out[{report.kind, report.message}]++;
    return out;
}

bool superset_of(const Multiset& big, const Multiset& small) {
    for (const auto& [key, count] : small) {
        auto it = big.find(key);
        if (it == big.end() || it->second < count) return false;
    }
    return true;
}

// --- criterion 1: golden corpus -----------------------------------------------

void criterion_corpus() {
    const std::vector<std::string> required = {
        "fig1",
        "ex2_2_dispose_direct",
        "ex2_3_owning_transfer",
        "ex2_4_owning_field",
        "ex2_5_create_must_call_for",
        "ex2_6_must_call_alias",
        "ex2_7_wrapper",
        "ex3_1_try_catch_leak",
        "ex3_1_catch_dispose",
        "ex3_3_unchecked_unsound",
        "ex4_1_wrapper_alias",
        "ex4_5_field_alias",
        "lucene_inform",
        "executer_with_retry",
    };

    auto start = std::chrono::steady_clock::now();
    CorpusSummary summary = run_corpus(MUSTCALL_CORPUS_DIR);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool ok = summary.all_passed();
    std::set<std::string> names;
    for (const auto& c : summary.cases) names.insert(c.name);
    for (const auto& name : required) {
        if (!names.count(name)) {
            ok = false;
            notes.push_back("missing required case " + name);
        }
    }
    if (!ok) notes.push_back(summary.format());
    if (seconds >= 5.0) {
        ok = false;
        notes.push_back("corpus run took " + std::to_string(seconds) + "s");
    }
    std::ostringstream detail;
    detail << summary.cases.size() << " cases, " << seconds << "s";
    verdict("criterion-1 golden-corpus-verdicts", ok, detail.str());
}

// --- criterion 2: oracle equivalence --------------------------------------------

void criterion_differential() {
    auto start = std::chrono::steady_clock::now();
    auto cases = generate_random_programs(2026, 520);
    int loops = 0, trys = 0, agreed = 0;
    for (const auto& corpus_case : cases) {
        const std::string& text = corpus_case.files[0].text;
        if (text.find("while") != std::string::npos) loops++;
        if (text.find("try") != std::string::npos) trys++;
        CaseResult result = run_case(corpus_case);
        if (result.passed) {
            agreed++;
        } else {
            notes.push_back("oracle disagreement on " + corpus_case.name);
        }
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool ok = cases.size() >= 500 && agreed == static_cast<int>(cases.size()) && loops >= 100 &&
              trys >= 100 && seconds < 60.0;
    std::ostringstream detail;
    detail << agreed << "/" << cases.size() << " agree, " << loops << " with loops, " << trys
           << " with try/catch, " << seconds << "s";
    verdict("criterion-2 oracle-equivalence", ok, detail.str());
}

// --- criterion 3: metamorphic suite ----------------------------------------------

// deep copy of a unit without the statement at `target` (span identity)
StmtPtr filter_stmt(const Stmt& stmt, const Span& target);

std::unique_ptr<BlockStmt> filter_block(const BlockStmt& block, const Span& target) {
    auto out = std::make_unique<BlockStmt>(block.span);
    for (const auto& child : block.statements) {
        if (child->span == target) continue;
        out->statements.push_back(filter_stmt(*child, target));
    }
    return out;
}

StmtPtr filter_stmt(const Stmt& stmt, const Span& target) {
    switch (stmt.kind) {
    case StmtKind::Block:
        return filter_block(static_cast<const BlockStmt&>(stmt), target);
    case StmtKind::If: {
        const auto& s = static_cast<const IfStmt&>(stmt);
        auto out = std::make_unique<IfStmt>(s.span);
        out->condition = s.condition->clone();
        out->then_branch = s.then_branch->span == target
                               ? std::make_unique<BlockStmt>(s.span)
                               : filter_stmt(*s.then_branch, target);
        if (s.else_branch && !(s.else_branch->span == target)) {
            out->else_branch = filter_stmt(*s.else_branch, target);
        }
        return out;
    }
    case StmtKind::While: {
        const auto& s = static_cast<const WhileStmt&>(stmt);
        auto out = std::make_unique<WhileStmt>(s.span);
        out->condition = s.condition->clone();
        out->body = filter_stmt(*s.body, target);
        return out;
    }
    case StmtKind::Try: {
        const auto& s = static_cast<const TryStmt&>(stmt);
        auto out = std::make_unique<TryStmt>(s.span);
        out->body = filter_block(*s.body, target);
        for (const auto& c : s.catches) {
            CatchClause clause;
            clause.exception_type = c.exception_type;
            clause.binding = c.binding;
            clause.span = c.span;
            clause.body = filter_block(*c.body, target);
            out->catches.push_back(std::move(clause));
        }
        if (s.finally_block) out->finally_block = filter_block(*s.finally_block, target);
        return out;
    }
    case StmtKind::Using: {
        const auto& s = static_cast<const UsingStmt&>(stmt);
        auto out = std::make_unique<UsingStmt>(s.span);
        out->type_name = s.type_name;
        out->name = s.name;
        out->init = s.init->clone();
        out->body = filter_stmt(*s.body, target);
        return out;
    }
    default:
        return stmt.clone();
    }
}

// sink-bearing expression statements that carry no source themselves
std::vector<Span> deletable_sink_spans(const SemanticModel& model) {
    std::vector<Span> out;
    for (const MethodInfo* method : model.analyzable_methods()) {
        MethodAnalysis analysis(model, *method);
        std::set<std::pair<int, int>> source_stmts;
        for (const auto& src : analysis.sources()) {
            const CfgNode& node = analysis.cfg().node(src.cfg_node);
            if (node.stmt) source_stmts.insert({node.stmt->span.line, node.stmt->span.column});
        }
        std::set<std::string> seen;
        for (const auto& sink : analysis.sinks()) {
            if (sink.kind != SinkKind::CloseDisposeCall &&
                sink.kind != SinkKind::OwningArgumentCall &&
                sink.kind != SinkKind::EnsuresCalledMethodsCall) {
                continue;
            }
            const CfgNode& node = analysis.cfg().node(sink.cfg_node);
            if (!node.stmt || node.stmt->kind != StmtKind::ExprStmt) continue;
            const Span& span = node.stmt->span;
            if (source_stmts.count({span.line, span.column})) continue;
            if (!seen.insert(span.str()).second) continue;
            out.push_back(span);
        }
    }
    return out;
}

void criterion_metamorphic() {
    bool ok = true;

    // (a) deleting any single sink never shrinks the report multiset
    int mutants = 0;
    int grew = 0;
    for (const auto& entry : fs::directory_iterator(MUSTCALL_CORPUS_DIR)) {
        if (!entry.is_directory()) continue;
        CorpusCase corpus_case = load_case(entry.path().string());
        if (corpus_case.naive_mode || !corpus_case.overlay_text.empty()) continue;

        RunResult baseline = run_on_sources(corpus_case.files);
        Multiset base_sig = report_signature(baseline);

        std::vector<std::unique_ptr<CompilationUnit>> units;
        for (const auto& file : corpus_case.files) units.push_back(parse_unit(file));
        SemanticModel model = build_model(std::move(units));

        for (const Span& span : deletable_sink_spans(model)) {
            std::vector<SourceUnit> mutated;
            bool applied = false;
            for (const auto& file : corpus_case.files) {
                if (file.path != span.file) {
                    mutated.push_back(file);
                    continue;
                }
                auto tree = parse_unit(file);
                auto copy = std::make_unique<CompilationUnit>();
                copy->path = tree->path;
                for (const auto& cls : tree->classes) {
                    ClassDecl cloned = cls.clone();
                    for (auto& method : cloned.methods) {
                        if (method.body) method.body = filter_block(*method.body, span);
                    }
                    copy->classes.push_back(std::move(cloned));
                }
                mutated.push_back(SourceUnit{file.path, pretty_print(*copy)});
                applied = true;
            }
            if (!applied) continue;
            mutants++;
            RunResult after = run_on_sources(mutated);
            Multiset after_sig = report_signature(after);
            if (!superset_of(after_sig, base_sig)) {
                ok = false;
                notes.push_back("sink deletion at " + span.str() + " in " + corpus_case.name +
                                " removed a report");
            }
            if (after.reports.size() > baseline.reports.size()) grew++;
        }
    }
    if (mutants < 15 || grew < 8) {
        ok = false;
        notes.push_back("sink-deletion sweep looks vacuous: " + std::to_string(mutants) +
                        " mutants, " + std::to_string(grew) + " grew");
    }

    // (b) adding a release on the leaking path removes exactly that report
    {
        CorpusCase fig1 = load_case(corpus_path("fig1"));
        RunResult before = run_on_sources(fig1.files);
        auto tree = parse_unit(fig1.files[0]);
        // append `a.Close();` to the then-branch of the if
        BlockStmt* then_block = nullptr;
        std::function<void(Stmt&)> find = [&](Stmt& stmt) {
            if (stmt.kind == StmtKind::Block) {
                for (auto& child : static_cast<BlockStmt&>(stmt).statements) find(*child);
            } else if (stmt.kind == StmtKind::If) {
                auto& s = static_cast<IfStmt&>(stmt);
                if (!then_block && s.then_branch->kind == StmtKind::Block) {
                    then_block = static_cast<BlockStmt*>(s.then_branch.get());
                }
            }
        };
        for (auto& cls : tree->classes) {
            for (auto& method : cls.methods) {
                if (method.body) find(*method.body);
            }
        }
        bool fixed_clean = false;
        if (then_block) {
            Span at = then_block->span;
            auto call = std::make_unique<CallExpr>("Close", at);
            call->receiver = std::make_unique<NameExpr>("a", at);
            then_block->statements.push_back(std::make_unique<ExprStmt>(std::move(call), at));
            RunResult after =
                run_on_sources({SourceUnit{fig1.files[0].path, pretty_print(*tree)}});
            fixed_clean = after.reports.empty();
        }
        if (before.reports.size() != 1 || !fixed_clean) {
            ok = false;
            notes.push_back("full-path release on fig1 did not remove exactly its report");
        }

        RunResult leak = run_case_files("ex3_1_try_catch_leak", false);
        RunResult fixed = run_case_files("ex3_1_catch_dispose", false);
        if (leak.reports.size() != 1 || !fixed.reports.empty()) {
            ok = false;
            notes.push_back("catch-release variant did not remove exactly the try/catch report");
        }
    }

    // (c) using-block and its manual desugaring produce byte-identical JSON
    {
        RunResult sugar = run_case_files("using_leak", false);
        RunResult manual = run_case_files("tryfinally_leak", false);
        if (render_json(sugar) != render_json(manual)) {
            ok = false;
            notes.push_back("using vs try/finally JSON mismatch");
        }
    }

    // (d) overlay annotations behave exactly like inline attributes
    {
        RunResult inline_lucene = run_case_files("lucene_inform", false);
        RunResult overlay_lucene = run_case_files("lucene_inform_overlay", false);
        RunResult inline_transfer = run_case_files("ex2_3_owning_transfer", false);
        RunResult overlay_transfer = run_case_files("ex2_3_overlay", false);
        if (render_json(inline_lucene) != render_json(overlay_lucene) ||
            !(inline_transfer.reports == overlay_transfer.reports)) {
            ok = false;
            notes.push_back("overlay vs inline attribute mismatch");
        }
    }

    std::ostringstream detail;
    detail << mutants << " sink-deletion mutants, " << grew << " added reports";
    verdict("criterion-3 metamorphic-suite", ok, detail.str());
}

// --- criterion 4: naive-mode direction --------------------------------------------

void criterion_naive_direction() {
    bool ok = true;
    for (const std::string name : {"ex2_3_owning_transfer", "ex2_4_owning_field",
                                   "ex2_6_must_call_alias", "ex2_7_wrapper"}) {
        RunResult full = run_case_files(name, false);
        RunResult naive = run_case_files(name, true);
        if (!full.reports.empty() || naive.reports.empty()) {
            ok = false;
            notes.push_back("naive direction violated on " + name);
        }
    }

    // full mode catches the mutated reset obligation, naive mode misses it
    RunResult full = run_case_files("ex2_5_missing_dispose", false);
    RunResult naive = run_case_files("ex2_5_missing_dispose", true);
    bool full_catches = false;
    for (const auto& report : full.reports) {
        if (report.kind == "CreateMustCallForCall") full_catches = true;
    }
    bool naive_misses = true;
    for (const auto& report : naive.reports) {
        if (report.kind == "CreateMustCallForCall" || report.line == 22) naive_misses = false;
    }
    if (!full_catches || !naive_misses) {
        ok = false;
        notes.push_back("CreateMustCallFor mutation direction violated");
    }
    verdict("criterion-4 naive-mode-direction", ok);
}

// --- criterion 5: fixpoint and closure properties -----------------------------------

// one application of the five membership rules, written independently of
// SemanticModel::compute_rtype
std::set<std::string> apply_rtype_rules_once(const SemanticModel& model,
                                             const std::set<std::string>& in) {
    std::set<std::string> out = in;
    for (const auto& name : model.type_order()) {
        const TypeInfo* t = model.find_type(name);
        bool member = t->implements_disposable;
        for (const auto& f : t->fields) member |= f.is_owning();
        member |= has_attribute(t->attributes, AttributeKind::MustCall);
        if (!t->collection_element.empty() && in.count(t->collection_element)) member = true;
        if (!t->declared_supertype.empty() && in.count(t->declared_supertype)) member = true;
        if (member) out.insert(name);
    }
    return out;
}

void criterion_fixpoint() {
    bool ok = true;
    int methods = 0, types = 0;
    for (const auto& entry : fs::directory_iterator(MUSTCALL_CORPUS_DIR)) {
        if (!entry.is_directory()) continue;
        CorpusCase corpus_case = load_case(entry.path().string());

        std::vector<std::unique_ptr<CompilationUnit>> units;
        for (const auto& file : corpus_case.files) units.push_back(parse_unit(file));
        SemanticModel model = build_model(std::move(units));
        if (!corpus_case.overlay_text.empty()) {
            auto parsed = parse_overlay(corpus_case.overlay_text);
            model.apply_overlay(parsed.entries);
        }
        types += static_cast<int>(model.type_order().size());

        // RType stability: one more rule application adds nothing
        if (apply_rtype_rules_once(model, model.rtype()) != model.rtype()) {
            ok = false;
            notes.push_back("RType not stable in " + corpus_case.name);
        }
        if (model.compute_rtype() != model.rtype()) {
            ok = false;
            notes.push_back("RType recomputation differs in " + corpus_case.name);
        }

        for (const MethodInfo* method : model.analyzable_methods()) {
            MethodAnalysis analysis(model, *method, corpus_case.naive_mode);
            methods++;

            // CFG transpose consistency
            const Cfg& cfg = analysis.cfg();
            for (const auto& edge : cfg.edges()) {
                auto succ = cfg.successor_edges(edge.from);
                auto pred = cfg.predecessor_edges(edge.to);
                if (std::count(succ.begin(), succ.end(), edge.id) != 1 ||
                    std::count(pred.begin(), pred.end(), edge.id) != 1) {
                    ok = false;
                    notes.push_back("transpose violation in " + corpus_case.name);
                }
            }

            // alias closure idempotence
            auto pairs = analysis.aliases().relation_pairs();
            std::set<std::pair<int, int>> set(pairs.begin(), pairs.end());
            std::map<int, std::vector<int>> forward;
            for (const auto& [a, b] : pairs) forward[a].push_back(b);
            for (const auto& [a, b] : pairs) {
                for (int c : forward[b]) {
                    if (!set.count({a, c})) {
                        ok = false;
                        notes.push_back("alias closure not idempotent in " + corpus_case.name);
                    }
                }
            }
        }
    }
    std::ostringstream detail;
    detail << types << " types, " << methods << " methods";
    verdict("criterion-5 fixpoint-closure-properties", ok, detail.str());
}

// --- criterion 6: determinism and exit codes -----------------------------------------

struct ProcessResult {
    std::string output;
    int exit_code = -1;
};

ProcessResult run_process(const std::string& command) {
    ProcessResult result;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) return result;
    char buffer[4096];
    size_t n;
    while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, n);
    }
    int status = pclose(pipe);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

void criterion_determinism() {
    bool ok = true;
    std::string bin = MUSTCALL_CHECK_BIN;

    std::string program = corpus_path("ex2_5_create_must_call_for") + "/prog.moo";
    ProcessResult first = run_process(bin + " --format json " + program);
    ProcessResult second = run_process(bin + " --format json " + program);
    if (first.output.empty() || first.output != second.output) {
        ok = false;
        notes.push_back("json output not byte-identical across runs");
    }

    ProcessResult clean = run_process(bin + " " + corpus_path("ex2_7_wrapper") + "/prog.moo");
    ProcessResult leaky = run_process(bin + " " + corpus_path("fig1") + "/fig1.moo");
    ProcessResult missing = run_process(bin + " no/such/file.moo");
    if (clean.exit_code != 0) {
        ok = false;
        notes.push_back("clean input exited " + std::to_string(clean.exit_code));
    }
    if (leaky.exit_code != 1) {
        ok = false;
        notes.push_back("leaking input exited " + std::to_string(leaky.exit_code));
    }
    if (missing.exit_code != 2) {
        ok = false;
        notes.push_back("missing input exited " + std::to_string(missing.exit_code));
    }
    verdict("criterion-6 determinism-and-exit-codes", ok);
}

} // namespace

int main() {
    criterion_corpus();
    criterion_differential();
    criterion_metamorphic();
    criterion_naive_direction();
    criterion_fixpoint();
    criterion_determinism();

    for (const auto& note : notes) std::cout << "note: " << note << "\n";
    if (failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << failures << " acceptance criteria failed\n";
    return 1;
}
