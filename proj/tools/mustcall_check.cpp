// mustcall-check: static resource-leak checker for MiniOO sources.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"

#include "mustcall/driver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"must-call resource-leak checker for MiniOO (.moo) sources"};
    app.name("mustcall-check");

    mustcall::RunConfig config;
    std::string format = "text";
    app.add_option("--specs", config.overlay_path,
                   "overlay annotation file (.rmspec) applied before checking");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--naive", config.naive,
                 "attribute-blind baseline: allocations vs direct Close/Dispose only");
    app.add_flag("--dump-cfg", config.dump_cfg, "print every method CFG in DOT format");
    app.add_flag("--dump-aliases", config.dump_aliases, "print computed alias pairs");
    app.add_flag("--strict", config.strict, "exit 2 on parse or resolution errors");
    app.add_option("files", config.files, "MiniOO source files")->expected(-1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    mustcall::RunResult result = mustcall::run(config);

    if (!result.debug_output.empty()) std::cout << result.debug_output;

    bool color = isatty(fileno(stdout)) && std::getenv("MUSTCALL_NO_COLOR") == nullptr;
    if (format == "json") {
        std::cout << mustcall::render_json(result);
    } else {
        std::cout << mustcall::render_text(result, color);
    }
    for (const auto& err : result.errors) std::cerr << err.str() << "\n";

    return mustcall::exit_code(result, config.strict);
}
