// mustcall-corpus: golden-corpus runner and randomized differential tester.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "mustcall/corpus.hpp"
#include "mustcall/random_programs.hpp"

int main(int argc, char** argv) {
    CLI::App app{"golden-corpus runner for mustcall-check"};
    app.name("mustcall-corpus");

    std::string directory;
    uint64_t seed = 0;
    int random_count = 0;
    app.add_option("dir", directory, "corpus directory (one case per subdirectory)")
        ->required();
    app.add_option("--seed", seed, "seed for generated differential cases");
    app.add_option("--random-count", random_count,
                   "additionally run N generated programs against the oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    bool ok = true;

    mustcall::CorpusSummary summary = mustcall::run_corpus(directory);
    std::cout << summary.format();
    ok &= summary.all_passed();

    if (random_count > 0) {
        int passed = 0;
        auto cases = mustcall::generate_random_programs(seed, random_count);
        for (const auto& corpus_case : cases) {
            mustcall::CaseResult result = mustcall::run_case(corpus_case);
            if (result.passed) {
                passed++;
            } else {
                ok = false;
                std::cout << "FAIL " << result.name << "\n";
                for (const auto& diff : result.diffs) std::cout << "     " << diff << "\n";
                std::cout << "--- program ---\n" << corpus_case.files.front().text;
            }
        }
        std::cout << passed << "/" << cases.size() << " generated cases agree with the oracle\n";
    }

    return ok ? 0 : 1;
}
