#include "mustcall/path_oracle.hpp"

#include <functional>

namespace mustcall {

namespace {

// back edges under DFS from entry, in successor-edge order
std::vector<bool> find_back_edges(const Cfg& cfg) {
    std::vector<bool> back(cfg.edges().size(), false);
    std::vector<int> state(cfg.nodes().size(), 0); // 0 unvisited, 1 on stack, 2 done
    std::function<void(int)> dfs = [&](int node) {
        state[node] = 1;
        for (int eid : cfg.successor_edges(node)) {
            int to = cfg.edge(eid).to;
            if (state[to] == 1) {
                back[eid] = true;
            } else if (state[to] == 0) {
                dfs(to);
            }
        }
        state[node] = 2;
    };
    dfs(cfg.entry());
    return back;
}

} // namespace

OracleVerdict path_oracle(const MethodAnalysis& analysis, const SourceObligation& source,
                          long path_cap) {
    const Cfg& cfg = analysis.cfg();
    OracleVerdict verdict;
    verdict.source_location = source.span;

    std::set<int> removed_nodes, removed_edges;
    analysis.discharge_sets(source, removed_nodes, removed_edges);

    std::vector<bool> back = find_back_edges(cfg);
    std::vector<int> uses(cfg.edges().size(), 0);
    std::vector<int> path_edges;
    bool aborted = false;

    auto process_path = [&]() {
        verdict.paths_enumerated++;
        // node sequence of this path
        std::vector<int> seq{cfg.entry()};
        for (int eid : path_edges) seq.push_back(cfg.edge(eid).to);
        // suffix from the last occurrence of the source node
        int start = -1;
        for (int i = static_cast<int>(seq.size()) - 1; i >= 0; i--) {
            if (seq[i] == source.cfg_node) {
                start = i;
                break;
            }
        }
        if (start < 0) return;
        bool discharged = false;
        for (size_t i = static_cast<size_t>(start); i < seq.size() && !discharged; i++) {
            if (removed_nodes.count(seq[i])) discharged = true;
        }
        for (size_t i = static_cast<size_t>(start); i + 1 < seq.size() && !discharged; i++) {
            if (removed_edges.count(path_edges[i])) discharged = true;
        }
        if (!discharged && !verdict.leaking) {
            verdict.leaking = true;
            verdict.witness.assign(seq.begin() + start, seq.end());
        }
    };

    std::function<void(int)> enumerate = [&](int node) {
        if (aborted) return;
        if (verdict.paths_enumerated >= path_cap) {
            aborted = true;
            return;
        }
        if (node == cfg.exit()) {
            process_path();
            return;
        }
        for (int eid : cfg.successor_edges(node)) {
            if (back[eid] && uses[eid] >= 1) continue;
            uses[eid]++;
            path_edges.push_back(eid);
            enumerate(cfg.edge(eid).to);
            path_edges.pop_back();
            uses[eid]--;
            if (aborted) return;
        }
    };
    enumerate(cfg.entry());

    if (aborted) {
        verdict.inapplicable = true;
        verdict.leaking = false;
        verdict.witness.clear();
    }
    return verdict;
}

} // namespace mustcall
