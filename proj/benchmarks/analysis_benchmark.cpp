#include <benchmark/benchmark.h>

#include <sstream>

#include "mustcall/driver.hpp"
#include "mustcall/leakcheck.hpp"
#include "mustcall/parser.hpp"
#include "mustcall/random_programs.hpp"

namespace {

const char* kContainer = R"([MustCall(Dispose)]
class Container {
    [Owning]
    private Socket socket;
    public Container() {
        socket = new Socket(...);
    }
    [EnsuresCalledMethods(socket, Dispose)]
    public void Dispose() {
        socket.Dispose();
    }
    [CreateMustCallFor(socket)]
    public void reset() {
        if (socket != null) {
            socket.Dispose();
        }
        socket = new Socket(...);
    }
    public static void Main() {
        Container c = new Container();
        c.reset();
        c.Dispose();
    }
}
)";

// a long straight-line method with interleaved allocations and releases
std::string wide_method(int statements) {
    std::ostringstream os;
    os << "class Wide {\n    static void run() {\n";
    for (int i = 0; i < statements; i++) {
        os << "        Socket s" << i << " = new Socket(...);\n";
        os << "        s" << i << ".Dispose();\n";
    }
    os << "    }\n}\n";
    return os.str();
}

void BM_Parse(benchmark::State& state) {
    mustcall::SourceUnit unit{"bench.moo", kContainer};
    for (auto _ : state) {
        auto tree = mustcall::parse_unit(unit);
        benchmark::DoNotOptimize(tree);
    }
}
BENCHMARK(BM_Parse);

void BM_FullPipeline(benchmark::State& state) {
    std::vector<mustcall::SourceUnit> sources{{"bench.moo", kContainer}};
    for (auto _ : state) {
        auto result = mustcall::run_on_sources(sources);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_FullPipeline);

void BM_MethodAnalysis(benchmark::State& state) {
    std::string text = wide_method(static_cast<int>(state.range(0)));
    std::vector<std::unique_ptr<mustcall::CompilationUnit>> units;
    units.push_back(mustcall::parse_unit({"bench.moo", text}));
    mustcall::SemanticModel model = mustcall::build_model(std::move(units));
    const mustcall::MethodInfo* method = model.analyzable_methods().front();
    for (auto _ : state) {
        mustcall::MethodAnalysis analysis(model, *method);
        benchmark::DoNotOptimize(analysis.check());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MethodAnalysis)->Range(4, 64)->Complexity();

void BM_GenerateAndCheck(benchmark::State& state) {
    for (auto _ : state) {
        auto cases = mustcall::generate_random_programs(11, 10);
        benchmark::DoNotOptimize(cases);
    }
}
BENCHMARK(BM_GenerateAndCheck);

} // namespace

BENCHMARK_MAIN();
