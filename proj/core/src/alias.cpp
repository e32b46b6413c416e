#include "mustcall/alias.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>

namespace mustcall {

AliasAnalysis::AliasAnalysis(const SemanticModel& model, const MethodInfo& method, const Cfg& cfg)
    : model_(model), method_(method), cfg_(cfg) {
    // CFG reachability closure (reflexive), used by field aliasing and use-use flow
    size_t n = cfg_.nodes().size();
    cfg_reach_.assign(n, std::vector<bool>(n, false));
    for (size_t start = 0; start < n; start++) {
        auto& row = cfg_reach_[start];
        row[start] = true;
        std::deque<int> work{static_cast<int>(start)};
        while (!work.empty()) {
            int cur = work.front();
            work.pop_front();
            for (int eid : cfg_.successor_edges(cur)) {
                int to = cfg_.edge(eid).to;
                if (!row[to]) {
                    row[to] = true;
                    work.push_back(to);
                }
            }
        }
    }

    collect_flow_nodes(method);
    compute_reaching_definitions();
    build_edges();
    close();
}

bool AliasAnalysis::cfg_reach(int node_from, int node_to) const {
    return cfg_reach_[node_from][node_to];
}

int AliasAnalysis::node_for(const Expr* expr) const {
    auto it = by_expr_.find(expr);
    return it == by_expr_.end() ? -1 : it->second;
}

int AliasAnalysis::param_node(const std::string& name) const {
    auto it = param_nodes_.find(name);
    return it == param_nodes_.end() ? -1 : it->second;
}

// --- flow-node collection ------------------------------------------------------

int AliasAnalysis::add_expr_node(const Expr& expr, FlowNodeKind kind, std::vector<int> anchors) {
    FlowNode node;
    node.id = static_cast<int>(nodes_.size());
    node.kind = kind;
    node.expr = &expr;
    node.anchors = std::move(anchors);
    node.span = expr.span;
    node.type = method_.binding.type_of(&expr);
    if (kind == FlowNodeKind::LocalRead) {
        node.var = static_cast<const NameExpr&>(expr).name;
    }
    if (kind == FlowNodeKind::FieldRead || kind == FlowNodeKind::FieldWrite) {
        node.field = method_.binding.field_of(&expr);
    }
    nodes_.push_back(std::move(node));
    by_expr_[&expr] = nodes_.back().id;
    return nodes_.back().id;
}

void AliasAnalysis::collect_expr(const Expr& expr, const std::vector<int>& anchors) {
    if (anchors.empty()) return; // unreachable code carries no obligations
    switch (expr.kind) {
    case ExprKind::ObjectCreation: {
        const auto& e = static_cast<const ObjectCreationExpr&>(expr);
        for (const auto& a : e.args) collect_expr(*a, anchors);
        add_expr_node(expr, FlowNodeKind::Creation, anchors);
        break;
    }
    case ExprKind::Call: {
        const auto& e = static_cast<const CallExpr&>(expr);
        if (e.receiver) collect_expr(*e.receiver, anchors);
        for (const auto& a : e.args) collect_expr(*a, anchors);
        add_expr_node(expr, FlowNodeKind::Call, anchors);
        break;
    }
    case ExprKind::FieldAccess: {
        const auto& e = static_cast<const FieldAccessExpr&>(expr);
        collect_expr(*e.receiver, anchors);
        if (method_.binding.field_of(&expr)) {
            add_expr_node(expr, FlowNodeKind::FieldRead, anchors);
        }
        break;
    }
    case ExprKind::Name: {
        auto it = method_.binding.names.find(&expr);
        if (it == method_.binding.names.end()) break;
        if (it->second.kind == RefKind::Local) {
            add_expr_node(expr, FlowNodeKind::LocalRead, anchors);
        } else if (it->second.kind == RefKind::Field) {
            add_expr_node(expr, FlowNodeKind::FieldRead, anchors);
        }
        break;
    }
    case ExprKind::NullComparison:
        collect_expr(*static_cast<const NullComparisonExpr&>(expr).operand, anchors);
        break;
    case ExprKind::This:
    case ExprKind::NullLiteral:
    case ExprKind::Opaque:
        break;
    }
}

void AliasAnalysis::collect_from_stmt(const Stmt& stmt) {
    switch (stmt.kind) {
    case StmtKind::Block:
        for (const auto& s : static_cast<const BlockStmt&>(stmt).statements) {
            collect_from_stmt(*s);
        }
        break;
    case StmtKind::VarDecl: {
        const auto& s = static_cast<const VarDeclStmt&>(stmt);
        auto anchors = cfg_.nodes_for_stmt(&stmt);
        if (anchors.empty()) break;
        int value = -1;
        if (s.init) {
            collect_expr(*s.init, anchors);
            value = node_for(s.init.get());
        }
        if (s.init) {
            defs_.push_back({static_cast<int>(defs_.size()), s.name, value, anchors});
        }
        break;
    }
    case StmtKind::Assign: {
        const auto& s = static_cast<const AssignStmt&>(stmt);
        auto anchors = cfg_.nodes_for_stmt(&stmt);
        if (anchors.empty()) break;
        collect_expr(*s.value, anchors);
        int value = node_for(s.value.get());
        if (s.target->kind == ExprKind::Name) {
            auto it = method_.binding.names.find(s.target.get());
            if (it != method_.binding.names.end() && it->second.kind == RefKind::Local) {
                defs_.push_back({static_cast<int>(defs_.size()),
                                 static_cast<const NameExpr&>(*s.target).name, value, anchors});
                break;
            }
            if (it != method_.binding.names.end() && it->second.kind == RefKind::Field) {
                int write = add_expr_node(*s.target, FlowNodeKind::FieldWrite, anchors);
                if (value >= 0) store_edges_.push_back({value, write});
            }
            break;
        }
        if (s.target->kind == ExprKind::FieldAccess) {
            const auto& fa = static_cast<const FieldAccessExpr&>(*s.target);
            collect_expr(*fa.receiver, anchors);
            if (method_.binding.field_of(s.target.get())) {
                int write = add_expr_node(*s.target, FlowNodeKind::FieldWrite, anchors);
                if (value >= 0) store_edges_.push_back({value, write});
            }
        }
        break;
    }
    case StmtKind::ExprStmt: {
        auto anchors = cfg_.nodes_for_stmt(&stmt);
        if (anchors.empty()) break;
        collect_expr(*static_cast<const ExprStmt&>(stmt).expr, anchors);
        break;
    }
    case StmtKind::If: {
        const auto& s = static_cast<const IfStmt&>(stmt);
        collect_expr(*s.condition, cfg_.nodes_for_cond(s.condition.get()));
        collect_from_stmt(*s.then_branch);
        if (s.else_branch) collect_from_stmt(*s.else_branch);
        break;
    }
    case StmtKind::While: {
        const auto& s = static_cast<const WhileStmt&>(stmt);
        collect_expr(*s.condition, cfg_.nodes_for_cond(s.condition.get()));
        collect_from_stmt(*s.body);
        break;
    }
    case StmtKind::Try: {
        const auto& s = static_cast<const TryStmt&>(stmt);
        collect_from_stmt(*s.body);
        for (const auto& c : s.catches) {
            if (!c.binding.empty()) {
                auto anchors = cfg_.nodes_for_stmt(c.body.get());
                if (!anchors.empty()) {
                    defs_.push_back({static_cast<int>(defs_.size()), c.binding, -1, anchors});
                }
            }
            collect_from_stmt(*c.body);
        }
        if (s.finally_block) collect_from_stmt(*s.finally_block);
        break;
    }
    case StmtKind::Return: {
        const auto& s = static_cast<const ReturnStmt&>(stmt);
        auto anchors = cfg_.nodes_for_stmt(&stmt);
        if (anchors.empty()) break;
        if (s.value) collect_expr(*s.value, anchors);
        break;
    }
    case StmtKind::Throw: {
        const auto& s = static_cast<const ThrowStmt&>(stmt);
        auto anchors = cfg_.nodes_for_stmt(&stmt);
        if (anchors.empty()) break;
        if (s.value) collect_expr(*s.value, anchors);
        break;
    }
    case StmtKind::Using:
        assert(false && "analysis bodies are desugared");
        break;
    }
}

void AliasAnalysis::collect_flow_nodes(const MethodInfo& method) {
    for (const auto& p : method.params) {
        FlowNode node;
        node.id = static_cast<int>(nodes_.size());
        node.kind = FlowNodeKind::Param;
        node.var = p.name;
        node.anchors = {cfg_.entry()};
        node.span = p.span;
        node.type = p.type;
        nodes_.push_back(std::move(node));
        param_nodes_[p.name] = nodes_.back().id;
        defs_.push_back({static_cast<int>(defs_.size()), p.name, nodes_.back().id,
                         {cfg_.entry()}});
    }
    collect_from_stmt(*method.analysis_body);
}

// --- reaching definitions ------------------------------------------------------

void AliasAnalysis::compute_reaching_definitions() {
    size_t n = cfg_.nodes().size();
    size_t d = defs_.size();
    std::vector<std::vector<int>> gen(n);
    for (const auto& def : defs_) {
        for (int a : def.anchors) gen[a].push_back(def.id);
    }

    def_in_.assign(n, std::vector<bool>(d, false));
    std::vector<std::vector<bool>> def_out(n, std::vector<bool>(d, false));

    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t node = 0; node < n; node++) {
            std::vector<bool> in(d, false);
            for (int eid : cfg_.predecessor_edges(static_cast<int>(node))) {
                const auto& out = def_out[cfg_.edge(eid).from];
                for (size_t i = 0; i < d; i++) {
                    if (out[i]) in[i] = true;
                }
            }
            std::vector<bool> out = in;
            for (int g : gen[node]) {
                for (const auto& other : defs_) {
                    if (other.var == defs_[g].var && other.id != g) out[other.id] = false;
                }
            }
            for (int g : gen[node]) out[g] = true;
            if (in != def_in_[node] || out != def_out[node]) {
                def_in_[node] = std::move(in);
                def_out[node] = std::move(out);
                changed = true;
            }
        }
    }
}

// --- edges and closure ----------------------------------------------------------

void AliasAnalysis::build_edges() {
    size_t n = nodes_.size();
    local_adj_.assign(n, {});
    full_adj_.assign(n, {});

    auto reaching = [&](const FlowNode& read) {
        std::vector<int> out;
        for (const auto& def : defs_) {
            if (def.var != read.var) continue;
            bool reaches = false;
            for (int a : read.anchors) {
                if (def_in_[a][def.id]) {
                    reaches = true;
                    break;
                }
            }
            if (reaches) out.push_back(def.id);
        }
        return out;
    };

    // def-use
    for (const auto& node : nodes_) {
        if (node.kind != FlowNodeKind::LocalRead) continue;
        for (int did : reaching(node)) {
            int value = defs_[did].value_node;
            if (value >= 0) local_adj_[value].push_back(node.id);
        }
    }

    // use-use: two reads of the same variable joined by a shared definition and
    // CFG order
    for (const auto& a : nodes_) {
        if (a.kind != FlowNodeKind::LocalRead) continue;
        auto defs_a = reaching(a);
        for (const auto& b : nodes_) {
            if (b.kind != FlowNodeKind::LocalRead || a.id == b.id || a.var != b.var) continue;
            auto defs_b = reaching(b);
            bool shared = false;
            for (int da : defs_a) {
                if (std::find(defs_b.begin(), defs_b.end(), da) != defs_b.end()) {
                    shared = true;
                    break;
                }
            }
            if (!shared) continue;
            bool ordered = false;
            for (int na : a.anchors) {
                for (int nb : b.anchors) {
                    if (cfg_reach_[na][nb]) {
                        ordered = true;
                        break;
                    }
                }
                if (ordered) break;
            }
            if (ordered) local_adj_[a.id].push_back(b.id);
        }
    }

    // assignment flow into field writes
    for (const auto& [value, write] : store_edges_) {
        local_adj_[value].push_back(write);
    }

    // resource aliases declared by MustCallAlias at method boundaries
    for (const auto& node : nodes_) {
        if (node.kind != FlowNodeKind::Creation && node.kind != FlowNodeKind::Call) continue;
        const std::vector<ExprPtr>* args = nullptr;
        if (node.kind == FlowNodeKind::Creation) {
            args = &static_cast<const ObjectCreationExpr*>(node.expr)->args;
        } else {
            args = &static_cast<const CallExpr*>(node.expr)->args;
        }
        for (const MethodInfo* target : method_.binding.targets_of(node.expr)) {
            if (!target->must_call_alias_return()) continue;
            for (size_t i = 0; i < target->params.size() && i < args->size(); i++) {
                if (!has_attribute(target->params[i].attributes, AttributeKind::MustCallAlias))
                    continue;
                int arg = node_for((*args)[i].get());
                if (arg >= 0) {
                    full_adj_[arg].push_back(node.id);
                    resource_pairs_.push_back({arg, node.id});
                }
            }
        }
    }

    // field aliases: a write reaching a read of the same declared field
    for (const auto& w : nodes_) {
        if (w.kind != FlowNodeKind::FieldWrite || !w.field) continue;
        for (const auto& r : nodes_) {
            if (r.kind != FlowNodeKind::FieldRead || r.field != w.field) continue;
            bool ordered = false;
            for (int nw : w.anchors) {
                for (int nr : r.anchors) {
                    if (cfg_reach_[nw][nr]) {
                        ordered = true;
                        break;
                    }
                }
                if (ordered) break;
            }
            if (ordered) {
                full_adj_[w.id].push_back(r.id);
                field_pairs_.push_back({w.id, r.id});
            }
        }
    }

    // the full relation contains every local edge
    for (size_t i = 0; i < n; i++) {
        for (int to : local_adj_[i]) full_adj_[i].push_back(to);
    }
}

void AliasAnalysis::close() {
    size_t n = nodes_.size();
    auto closure = [&](const std::vector<std::vector<int>>& adj) {
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
        for (size_t start = 0; start < n; start++) {
            auto& row = reach[start];
            row[start] = true;
            std::deque<int> work{static_cast<int>(start)};
            while (!work.empty()) {
                int cur = work.front();
                work.pop_front();
                for (int to : adj[cur]) {
                    if (!row[to]) {
                        row[to] = true;
                        work.push_back(to);
                    }
                }
            }
        }
        return reach;
    };
    local_reach_ = closure(local_adj_);
    full_reach_ = closure(full_adj_);
}

bool AliasAnalysis::local_flow(int from, int to) const {
    assert(from >= 0 && to >= 0 && from < static_cast<int>(nodes_.size()) &&
           to < static_cast<int>(nodes_.size()));
    return local_reach_[from][to];
}

bool AliasAnalysis::is_resource_alias(int from, int to) const {
    return std::find(resource_pairs_.begin(), resource_pairs_.end(),
                     std::make_pair(from, to)) != resource_pairs_.end();
}

bool AliasAnalysis::is_field_alias(int from, int to) const {
    return std::find(field_pairs_.begin(), field_pairs_.end(), std::make_pair(from, to)) !=
           field_pairs_.end();
}

bool AliasAnalysis::alias(int from, int to) const {
    assert(from >= 0 && to >= 0 && from < static_cast<int>(nodes_.size()) &&
           to < static_cast<int>(nodes_.size()));
    return full_reach_[from][to];
}

std::vector<std::pair<int, int>> AliasAnalysis::relation_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (size_t a = 0; a < nodes_.size(); a++) {
        for (size_t b = 0; b < nodes_.size(); b++) {
            if (full_reach_[a][b]) out.push_back({static_cast<int>(a), static_cast<int>(b)});
        }
    }
    return out;
}

namespace {

const char* flow_kind_name(FlowNodeKind kind) {
    switch (kind) {
    case FlowNodeKind::Creation: return "new";
    case FlowNodeKind::Call: return "call";
    case FlowNodeKind::LocalRead: return "read";
    case FlowNodeKind::FieldRead: return "field-read";
    case FlowNodeKind::FieldWrite: return "field-write";
    case FlowNodeKind::Param: return "param";
    }
    return "?";
}

} // namespace

std::string AliasAnalysis::dump() const {
    struct Line {
        Span a;
        Span b;
        std::string text;
    };
    std::vector<Line> lines;
    for (const auto& [a, b] : relation_pairs()) {
        if (a == b) continue;
        const FlowNode& na = nodes_[a];
        const FlowNode& nb = nodes_[b];
        std::ostringstream os;
        os << na.span.str() << " [" << flow_kind_name(na.kind)
           << (na.var.empty() ? "" : " " + na.var)
           << (na.field ? " " + na.field->name : "") << "] ~> " << nb.span.str() << " ["
           << flow_kind_name(nb.kind) << (nb.var.empty() ? "" : " " + nb.var)
           << (nb.field ? " " + nb.field->name : "") << "]";
        lines.push_back({na.span, nb.span, os.str()});
    }
    std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
        auto key = [](const Span& s) { return std::make_tuple(s.file, s.line, s.column); };
        return std::make_pair(key(x.a), key(x.b)) < std::make_pair(key(y.a), key(y.b));
    });
    std::ostringstream os;
    for (const auto& line : lines) os << line.text << "\n";
    return os.str();
}

} // namespace mustcall
