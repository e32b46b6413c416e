#include "mustcall/cfg.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>

namespace mustcall {

// --- desugaring ---------------------------------------------------------------

static StmtPtr desugar_stmt(const Stmt& stmt);

static std::unique_ptr<BlockStmt> desugar_block(const BlockStmt& block) {
    auto out = std::make_unique<BlockStmt>(block.span);
    for (const auto& s : block.statements) out->statements.push_back(desugar_stmt(*s));
    return out;
}

static std::unique_ptr<BlockStmt> as_block(StmtPtr stmt, const Span& span) {
    if (stmt->kind == StmtKind::Block) {
        return std::unique_ptr<BlockStmt>(static_cast<BlockStmt*>(stmt.release()));
    }
    auto block = std::make_unique<BlockStmt>(span);
    block->statements.push_back(std::move(stmt));
    return block;
}

StmtPtr desugar_using(const UsingStmt& stmt) {
    auto wrapper = std::make_unique<BlockStmt>(stmt.span);

    auto decl = std::make_unique<VarDeclStmt>(stmt.type_name, stmt.name, stmt.span);
    decl->init = stmt.init->clone();
    wrapper->statements.push_back(std::move(decl));

    auto guarded = std::make_unique<TryStmt>(stmt.span);
    guarded->body = as_block(desugar_stmt(*stmt.body), stmt.span);

    auto dispose = std::make_unique<CallExpr>("Dispose", stmt.span);
    dispose->receiver = std::make_unique<NameExpr>(stmt.name, stmt.span);
    dispose->synthesized_using = true;
    auto fin = std::make_unique<BlockStmt>(stmt.span);
    fin->statements.push_back(std::make_unique<ExprStmt>(std::move(dispose), stmt.span));
    guarded->finally_block = std::move(fin);

    wrapper->statements.push_back(std::move(guarded));
    return wrapper;
}

static StmtPtr desugar_stmt(const Stmt& stmt) {
    switch (stmt.kind) {
    case StmtKind::Using:
        return desugar_using(static_cast<const UsingStmt&>(stmt));
    case StmtKind::Block:
        return desugar_block(static_cast<const BlockStmt&>(stmt));
    case StmtKind::If: {
        const auto& s = static_cast<const IfStmt&>(stmt);
        auto out = std::make_unique<IfStmt>(s.span);
        out->condition = s.condition->clone();
        out->then_branch = desugar_stmt(*s.then_branch);
        if (s.else_branch) out->else_branch = desugar_stmt(*s.else_branch);
        return out;
    }
    case StmtKind::While: {
        const auto& s = static_cast<const WhileStmt&>(stmt);
        auto out = std::make_unique<WhileStmt>(s.span);
        out->condition = s.condition->clone();
        out->body = desugar_stmt(*s.body);
        return out;
    }
    case StmtKind::Try: {
        const auto& s = static_cast<const TryStmt&>(stmt);
        auto out = std::make_unique<TryStmt>(s.span);
        out->body = desugar_block(*s.body);
        for (const auto& c : s.catches) {
            CatchClause clause;
            clause.exception_type = c.exception_type;
            clause.binding = c.binding;
            clause.span = c.span;
            clause.body = desugar_block(*c.body);
            out->catches.push_back(std::move(clause));
        }
        if (s.finally_block) out->finally_block = desugar_block(*s.finally_block);
        return out;
    }
    default:
        return stmt.clone();
    }
}

std::unique_ptr<BlockStmt> desugar_body(const BlockStmt& body) { return desugar_block(body); }

// --- Cfg accessors --------------------------------------------------------------

std::vector<int> Cfg::successors(int node) const {
    std::vector<int> out;
    for (int e : succ_[node]) out.push_back(edges_[e].to);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> Cfg::predecessors(int node) const {
    assert(node >= 0 && node < static_cast<int>(nodes_.size()) && "foreign node");
    std::vector<int> out;
    for (int e : pred_[node]) out.push_back(edges_[e].from);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> Cfg::nodes_for_stmt(const Stmt* stmt) const {
    auto it = stmt_nodes_.find(stmt);
    return it == stmt_nodes_.end() ? std::vector<int>{} : it->second;
}

int Cfg::node_for_stmt(const Stmt* stmt) const {
    auto it = stmt_nodes_.find(stmt);
    return it == stmt_nodes_.end() || it->second.empty() ? -1 : it->second.front();
}

std::vector<int> Cfg::nodes_for_cond(const Expr* cond) const {
    auto it = cond_nodes_.find(cond);
    return it == cond_nodes_.end() ? std::vector<int>{} : it->second;
}

int Cfg::node_for_cond(const Expr* cond) const {
    auto it = cond_nodes_.find(cond);
    return it == cond_nodes_.end() || it->second.empty() ? -1 : it->second.front();
}

bool Cfg::reaches(int from, int to) const {
    if (from == to) return true;
    std::vector<bool> seen(nodes_.size(), false);
    std::deque<int> work{from};
    seen[from] = true;
    while (!work.empty()) {
        int n = work.front();
        work.pop_front();
        for (int e : succ_[n]) {
            int next = edges_[e].to;
            if (next == to) return true;
            if (!seen[next]) {
                seen[next] = true;
                work.push_back(next);
            }
        }
    }
    return false;
}

std::string Cfg::to_dot(const std::string& title) const {
    std::ostringstream os;
    os << "digraph \"" << title << "\" {\n";
    os << "  node [shape=box, fontname=\"monospace\"];\n";
    for (const auto& n : nodes_) {
        os << "  n" << n.id << " [label=\"" << n.id << ": " << n.label;
        if (n.kind != CfgNodeKind::Entry && n.kind != CfgNodeKind::Exit) {
            os << "\\n" << n.span.line << ":" << n.span.column;
        }
        os << "\"];\n";
    }
    for (const auto& e : edges_) {
        os << "  n" << e.from << " -> n" << e.to;
        std::string extras;
        if (e.kind == EdgeKind::Exceptional) extras += "style=dashed";
        if (e.branch == BranchKind::True) extras += std::string(extras.empty() ? "" : ", ") + "label=\"T\"";
        if (e.branch == BranchKind::False) extras += std::string(extras.empty() ? "" : ", ") + "label=\"F\"";
        if (!extras.empty()) os << " [" << extras << "]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

// --- builder --------------------------------------------------------------------

class CfgBuilder {
  public:
    explicit CfgBuilder(const BlockStmt& body) : body_(body) {}

    struct Dangling {
        int node;
        BranchKind branch;
    };

    struct TryLevel {
        const TryStmt* stmt;
        bool catches_active = true;
        std::vector<int> catch_entries;
    };

    Cfg run() {
        entry_ = add_node(CfgNodeKind::Entry, nullptr, nullptr, body_.span, "entry");
        exit_ = add_node(CfgNodeKind::Exit, nullptr, nullptr, body_.span, "exit");
        auto frontier = build_block(body_, {{entry_, BranchKind::None}});
        connect(frontier, exit_, EdgeKind::Normal);
        return finish();
    }

  private:
    int add_node(CfgNodeKind kind, const Stmt* stmt, const Expr* cond, Span span,
                 std::string label, FinallyRoute route = FinallyRoute::None) {
        CfgNode node;
        node.id = static_cast<int>(nodes_.size());
        node.kind = kind;
        node.stmt = stmt;
        node.cond = cond;
        node.span = std::move(span);
        node.route = route;
        node.label = std::move(label);
        nodes_.push_back(std::move(node));
        return nodes_.back().id;
    }

    void add_edge(int from, int to, EdgeKind kind, BranchKind branch) {
        for (const auto& e : edges_) {
            if (e.from == from && e.to == to && e.kind == kind && e.branch == branch) return;
        }
        CfgEdge edge;
        edge.id = static_cast<int>(edges_.size());
        edge.from = from;
        edge.to = to;
        edge.kind = kind;
        edge.branch = branch;
        edges_.push_back(edge);
    }

    void connect(const std::vector<Dangling>& frontier, int to, EdgeKind kind) {
        for (const auto& d : frontier) add_edge(d.node, to, kind, d.branch);
    }

    // Exception propagation targets for a fault raised while `levels` deep in
    // the current try stack (level == stack size means "from the innermost").
    // May build exceptional finally copies along the way.
    std::vector<int> exceptional_targets(int level) {
        if (level <= 0) return {exit_};
        TryLevel& t = stack_[static_cast<size_t>(level) - 1];
        if (t.catches_active && !t.catch_entries.empty()) return t.catch_entries;
        if (t.stmt->finally_block) {
            return {finally_copy(level - 1, t.stmt, FinallyRoute::Exceptional)};
        }
        return exceptional_targets(level - 1);
    }

    // Entry node of the return route starting at the given level; exit when no
    // enclosing finally remains.
    int return_continuation(int level) {
        if (level <= 0) return exit_;
        TryLevel& t = stack_[static_cast<size_t>(level) - 1];
        if (t.stmt->finally_block) return finally_copy(level - 1, t.stmt, FinallyRoute::Return);
        return return_continuation(level - 1);
    }

    // Builds (once per route) an inlined copy of a try's finally body. The
    // copy is built in the context surrounding the try: exceptions inside a
    // finally propagate outward. `outer_level` is the stack depth outside the
    // owning try.
    int finally_copy(int outer_level, const TryStmt* owner, FinallyRoute route) {
        auto key = std::make_pair(owner, route);
        auto it = finally_memo_.find(key);
        if (it != finally_memo_.end()) return it->second;

        const char* tag = route == FinallyRoute::Normal      ? "finally"
                          : route == FinallyRoute::Exceptional ? "finally (exceptional)"
                                                               : "finally (return)";
        int marker = add_node(CfgNodeKind::Statement, owner->finally_block.get(), nullptr,
                              owner->finally_block->span, tag, route);
        finally_memo_[key] = marker;

        std::vector<TryLevel> saved(stack_.begin() + outer_level, stack_.end());
        stack_.resize(static_cast<size_t>(outer_level));
        route_ctx_.push_back(route);
        auto frontier =
            build_block(*owner->finally_block, {{marker, BranchKind::None}});
        route_ctx_.pop_back();
        stack_.insert(stack_.end(), saved.begin(), saved.end());

        switch (route) {
        case FinallyRoute::Normal:
            // wired by the try construction site
            pending_normal_exits_[key] = frontier;
            break;
        case FinallyRoute::Exceptional: {
            std::vector<TryLevel> saved2(stack_.begin() + outer_level, stack_.end());
            stack_.resize(static_cast<size_t>(outer_level));
            auto targets = exceptional_targets(outer_level);
            stack_.insert(stack_.end(), saved2.begin(), saved2.end());
            for (int target : targets) connect(frontier, target, EdgeKind::Exceptional);
            break;
        }
        case FinallyRoute::Return: {
            std::vector<TryLevel> saved2(stack_.begin() + outer_level, stack_.end());
            stack_.resize(static_cast<size_t>(outer_level));
            int target = return_continuation(outer_level);
            stack_.insert(stack_.end(), saved2.begin(), saved2.end());
            connect(frontier, target, EdgeKind::Normal);
            break;
        }
        case FinallyRoute::None:
            break;
        }
        return marker;
    }

    // Adds exceptional edges for a node lexically inside try blocks. Faults
    // with no enclosing handler or finally are deliberately not modeled.
    void add_fault_edges(int node) {
        if (stack_.empty()) return;
        auto targets = exceptional_targets(static_cast<int>(stack_.size()));
        if (targets.size() == 1 && targets[0] == exit_) return; // unmanaged
        for (int t : targets) add_edge(node, t, EdgeKind::Exceptional, BranchKind::None);
    }

    FinallyRoute current_route() const {
        return route_ctx_.empty() ? FinallyRoute::None : route_ctx_.back();
    }

    int stmt_node(const Stmt& stmt, const char* label) {
        int id = add_node(CfgNodeKind::Statement, &stmt, nullptr, stmt.span, label,
                          current_route());
        stmt_anchor_[&stmt].push_back(id);
        return id;
    }

    int cond_node(const Expr& cond, const Stmt& owner) {
        int id = add_node(CfgNodeKind::Expression, &owner, &cond, cond.span, "cond",
                          current_route());
        cond_anchor_all_[&cond].push_back(id);
        return id;
    }

    std::vector<Dangling> build_block(const BlockStmt& block, std::vector<Dangling> in) {
        for (const auto& stmt : block.statements) {
            in = build_stmt(*stmt, std::move(in));
        }
        return in;
    }

    std::vector<Dangling> build_stmt(const Stmt& stmt, std::vector<Dangling> in) {
        switch (stmt.kind) {
        case StmtKind::Block:
            return build_block(static_cast<const BlockStmt&>(stmt), std::move(in));
        case StmtKind::VarDecl:
        case StmtKind::Assign:
        case StmtKind::ExprStmt: {
            const char* label = stmt.kind == StmtKind::VarDecl ? "decl"
                               : stmt.kind == StmtKind::Assign ? "assign"
                                                               : "expr";
            int n = stmt_node(stmt, label);
            connect(in, n, EdgeKind::Normal);
            add_fault_edges(n);
            return {{n, BranchKind::None}};
        }
        case StmtKind::If: {
            const auto& s = static_cast<const IfStmt&>(stmt);
            int c = cond_node(*s.condition, s);
            connect(in, c, EdgeKind::Normal);
            add_fault_edges(c);
            auto out = build_stmt(*s.then_branch, {{c, BranchKind::True}});
            if (s.else_branch) {
                auto other = build_stmt(*s.else_branch, {{c, BranchKind::False}});
                out.insert(out.end(), other.begin(), other.end());
            } else {
                out.push_back({c, BranchKind::False});
            }
            return out;
        }
        case StmtKind::While: {
            const auto& s = static_cast<const WhileStmt&>(stmt);
            int c = cond_node(*s.condition, s);
            connect(in, c, EdgeKind::Normal);
            add_fault_edges(c);
            auto body_out = build_stmt(*s.body, {{c, BranchKind::True}});
            connect(body_out, c, EdgeKind::Normal); // back edge
            return {{c, BranchKind::False}};
        }
        case StmtKind::Return: {
            const auto& s = static_cast<const ReturnStmt&>(stmt);
            int n = stmt_node(s, "return");
            connect(in, n, EdgeKind::Normal);
            add_fault_edges(n);
            int target = return_continuation(static_cast<int>(stack_.size()));
            add_edge(n, target, EdgeKind::Normal, BranchKind::None);
            return {};
        }
        case StmtKind::Throw: {
            const auto& s = static_cast<const ThrowStmt&>(stmt);
            int n = stmt_node(s, "throw");
            connect(in, n, EdgeKind::Normal);
            for (int t : exceptional_targets(static_cast<int>(stack_.size()))) {
                add_edge(n, t, EdgeKind::Exceptional, BranchKind::None);
            }
            return {};
        }
        case StmtKind::Try:
            return build_try(static_cast<const TryStmt&>(stmt), std::move(in));
        case StmtKind::Using:
            // bodies are desugared before CFG construction
            assert(false && "using-block must be desugared before build_cfg");
            return in;
        }
        return in;
    }

    std::vector<Dangling> build_try(const TryStmt& stmt, std::vector<Dangling> in) {
        TryLevel level;
        level.stmt = &stmt;
        for (const auto& clause : stmt.catches) {
            int entry = add_node(CfgNodeKind::Statement, clause.body.get(), nullptr,
                                 clause.span, "catch", current_route());
            stmt_anchor_[clause.body.get()].push_back(entry);
            level.catch_entries.push_back(entry);
        }
        stack_.push_back(level);

        auto normal_exits = build_block(*stmt.body, std::move(in));

        stack_.back().catches_active = false;
        for (size_t i = 0; i < stmt.catches.size(); i++) {
            auto catch_out = build_block(*stmt.catches[i].body,
                                         {{stack_.back().catch_entries[i], BranchKind::None}});
            normal_exits.insert(normal_exits.end(), catch_out.begin(), catch_out.end());
        }
        stack_.pop_back();

        if (!stmt.finally_block) return normal_exits;

        int marker = finally_copy(static_cast<int>(stack_.size()), &stmt, FinallyRoute::Normal);
        connect(normal_exits, marker, EdgeKind::Normal);
        auto key = std::make_pair(&stmt, FinallyRoute::Normal);
        return pending_normal_exits_[key];
    }

    Cfg finish() {
        // prune nodes unreachable from entry, renumber densely
        std::vector<std::vector<int>> succ(nodes_.size());
        for (const auto& e : edges_) succ[e.from].push_back(e.id);

        std::vector<bool> reachable(nodes_.size(), false);
        std::deque<int> work{entry_};
        reachable[entry_] = true;
        while (!work.empty()) {
            int n = work.front();
            work.pop_front();
            for (int eid : succ[n]) {
                int to = edges_[eid].to;
                if (!reachable[to]) {
                    reachable[to] = true;
                    work.push_back(to);
                }
            }
        }
        reachable[exit_] = true; // exit always kept

        std::vector<int> remap(nodes_.size(), -1);
        Cfg cfg;
        for (const auto& n : nodes_) {
            if (!reachable[n.id]) continue;
            CfgNode copy = n;
            copy.id = static_cast<int>(cfg.nodes_.size());
            remap[n.id] = copy.id;
            cfg.nodes_.push_back(std::move(copy));
        }
        cfg.entry_ = remap[entry_];
        cfg.exit_ = remap[exit_];
        for (const auto& e : edges_) {
            if (remap[e.from] < 0 || remap[e.to] < 0) continue;
            CfgEdge copy = e;
            copy.id = static_cast<int>(cfg.edges_.size());
            copy.from = remap[e.from];
            copy.to = remap[e.to];
            cfg.edges_.push_back(copy);
        }
        cfg.succ_.assign(cfg.nodes_.size(), {});
        cfg.pred_.assign(cfg.nodes_.size(), {});
        for (const auto& e : cfg.edges_) {
            cfg.succ_[e.from].push_back(e.id);
            cfg.pred_[e.to].push_back(e.id);
        }
        for (const auto& [stmt, ids] : stmt_anchor_) {
            for (int id : ids) {
                if (remap[id] >= 0) cfg.stmt_nodes_[stmt].push_back(remap[id]);
            }
        }
        for (const auto& [cond, ids] : cond_anchor_all_) {
            for (int id : ids) {
                if (remap[id] >= 0) cfg.cond_nodes_[cond].push_back(remap[id]);
            }
        }
        return cfg;
    }

    const BlockStmt& body_;
    int entry_ = 0;
    int exit_ = 0;
    std::vector<CfgNode> nodes_;
    std::vector<CfgEdge> edges_;
    std::vector<TryLevel> stack_;
    std::vector<FinallyRoute> route_ctx_;
    std::map<std::pair<const TryStmt*, FinallyRoute>, int> finally_memo_;
    std::map<std::pair<const TryStmt*, FinallyRoute>, std::vector<Dangling>> pending_normal_exits_;
    std::map<const Stmt*, std::vector<int>> stmt_anchor_;
    std::map<const Expr*, std::vector<int>> cond_anchor_all_;
};

Cfg build_cfg(const BlockStmt& body) { return CfgBuilder(body).run(); }

} // namespace mustcall
