#include "mustcall/random_programs.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "mustcall/model.hpp"
#include "mustcall/parser.hpp"
#include "mustcall/path_oracle.hpp"

namespace mustcall {

namespace {

// mt19937_64 is specified bit-exactly, so generated bytes are stable across
// platforms for a given seed.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    int next(int bound) { return static_cast<int>(gen_() % static_cast<uint64_t>(bound)); }
    bool chance(int percent) { return next(100) < percent; }

  private:
    std::mt19937_64 gen_;
};

constexpr int kVarCount = 3;

class ProgramWriter {
  public:
    ProgramWriter(Rng& rng, bool force_loop, bool force_try)
        : rng_(rng), force_loop_(force_loop), force_try_(force_try) {}

    std::string write() {
        out_ << "class Gen {\n";
        out_ << "    static void run() {\n";
        for (int v = 0; v < kVarCount; v++) {
            line(2, "Socket s" + std::to_string(v) + " = null;");
        }
        int statements = 4 + rng_.next(6);
        if (force_loop_) emit_while(2, 2);
        if (force_try_) emit_try(2, 2);
        for (int i = 0; i < statements && budget_ > 0; i++) {
            emit_stmt(2, 1);
        }
        out_ << "    }\n";
        out_ << "}\n";
        return out_.str();
    }

  private:
    void line(int indent, const std::string& text) {
        out_ << std::string(static_cast<size_t>(indent) * 4, ' ') << text << "\n";
    }

    std::string var() { return "s" + std::to_string(rng_.next(kVarCount)); }

    void emit_simple(int indent) {
        budget_--;
        switch (rng_.next(6)) {
        case 0:
        case 1:
            line(indent, var() + " = new Socket(...);");
            break;
        case 2:
            line(indent, var() + (rng_.chance(50) ? ".Dispose();" : ".Close();"));
            break;
        case 3:
            line(indent, "...;");
            break;
        case 4:
            line(indent, var() + " = null;");
            break;
        default:
            line(indent, "throw ...;");
            break;
        }
    }

    void emit_block(int indent, int depth, int max_statements) {
        int count = 1 + rng_.next(max_statements);
        for (int i = 0; i < count && budget_ > 0; i++) emit_stmt(indent, depth);
    }

    void emit_stmt(int indent, int depth) {
        if (budget_ <= 0) return;
        if (depth >= 3) {
            emit_simple(indent);
            return;
        }
        int roll = rng_.next(100);
        if (roll < 38) {
            emit_simple(indent);
        } else if (roll < 53) {
            // allocation with an unconditional release right after it
            budget_ -= 2;
            std::string v = var();
            line(indent, v + " = new Socket(...);");
            line(indent, v + (rng_.chance(50) ? ".Dispose();" : ".Close();"));
        } else if (roll < 63) {
            // release guarded by a null check
            budget_ -= 2;
            std::string v = var();
            line(indent, "if (" + v + " != null) {");
            line(indent + 1, v + ".Dispose();");
            line(indent, "}");
        } else if (roll < 73) {
            emit_if(indent, depth);
        } else if (roll < 81) {
            emit_while(indent, depth);
        } else if (roll < 90) {
            emit_try(indent, depth);
        } else if (roll < 95) {
            emit_using(indent, depth);
        } else {
            budget_--;
            line(indent, "if (" + var() + " == null) {");
            line(indent + 1, "return;");
            line(indent, "}");
        }
    }

    void emit_if(int indent, int depth) {
        budget_--;
        bool guard = rng_.chance(40);
        if (guard) {
            line(indent, "if (" + var() + (rng_.chance(50) ? " != null" : " == null") + ") {");
        } else {
            line(indent, "if (...) {");
        }
        emit_block(indent + 1, depth + 1, 2);
        if (rng_.chance(50)) {
            line(indent, "} else {");
            emit_block(indent + 1, depth + 1, 2);
        }
        line(indent, "}");
    }

    void emit_while(int indent, int depth) {
        budget_--;
        line(indent, "while (...) {");
        emit_block(indent + 1, depth + 1, 2);
        line(indent, "}");
    }

    void emit_try(int indent, int depth) {
        budget_--;
        line(indent, "try {");
        emit_block(indent + 1, depth + 1, 2);
        int shape = rng_.next(100);
        if (shape < 55) {
            line(indent, "} catch (...) {");
            if (rng_.chance(60)) emit_block(indent + 1, depth + 1, 2);
            line(indent, "}");
        } else if (shape < 70) {
            line(indent, "} catch (Exception) {");
            if (rng_.chance(60)) emit_block(indent + 1, depth + 1, 2);
            line(indent, "} catch (...) {");
            line(indent, "}");
        } else if (shape < 85) {
            line(indent, "} catch (...) {");
            if (rng_.chance(60)) emit_block(indent + 1, depth + 1, 2);
            line(indent, "} finally {");
            emit_block(indent + 1, depth + 1, 1);
            line(indent, "}");
        } else {
            line(indent, "} finally {");
            emit_block(indent + 1, depth + 1, 1);
            line(indent, "}");
        }
    }

    void emit_using(int indent, int depth) {
        budget_--;
        std::string name = "u" + std::to_string(using_counter_++);
        line(indent, "using (Socket " + name + " = new Socket(...)) {");
        emit_block(indent + 1, depth + 1, 2);
        line(indent, "}");
    }

    Rng& rng_;
    bool force_loop_;
    bool force_try_;
    std::ostringstream out_;
    int budget_ = 12;
    int using_counter_ = 0;
};

} // namespace

std::vector<CorpusCase> generate_random_programs(uint64_t seed, int count) {
    std::vector<CorpusCase> cases;
    Rng rng(seed);
    for (int i = 0; i < count; i++) {
        ProgramWriter writer(rng, i % 3 == 1, i % 3 == 2);
        std::string text = writer.write();
        std::string file = "gen_" + std::to_string(i) + ".moo";

        CorpusCase corpus_case;
        corpus_case.name = "gen_" + std::to_string(seed) + "_" + std::to_string(i);
        corpus_case.files.push_back(SourceUnit{file, text});

        // expected verdicts from the path-enumeration oracle
        std::vector<std::unique_ptr<CompilationUnit>> units;
        units.push_back(parse_unit(corpus_case.files.front()));
        SemanticModel model = build_model(std::move(units));
        bool inapplicable = false;
        for (const MethodInfo* method : model.analyzable_methods()) {
            MethodAnalysis analysis(model, *method);
            for (const auto& source : analysis.sources()) {
                OracleVerdict verdict = path_oracle(analysis, source);
                if (verdict.inapplicable) {
                    inapplicable = true;
                    break;
                }
                if (verdict.leaking) {
                    ExpectedReport report{file, source.span.line,
                                          source_kind_name(source.kind)};
                    if (std::find(corpus_case.expected.begin(), corpus_case.expected.end(),
                                  report) == corpus_case.expected.end()) {
                        corpus_case.expected.push_back(std::move(report));
                    }
                }
            }
            if (inapplicable) break;
        }
        if (inapplicable) continue; // oversized case, skip rather than guess
        std::sort(corpus_case.expected.begin(), corpus_case.expected.end());
        cases.push_back(std::move(corpus_case));
    }
    return cases;
}

} // namespace mustcall
