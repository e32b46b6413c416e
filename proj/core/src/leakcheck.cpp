#include "mustcall/leakcheck.hpp"

#include <algorithm>
#include <deque>

namespace mustcall {

const char* source_kind_name(SourceKind kind) {
    switch (kind) {
    case SourceKind::ObjectCreation: return "ObjectCreation";
    case SourceKind::OwningReturnCall: return "OwningReturnCall";
    case SourceKind::CreateMustCallForCall: return "CreateMustCallForCall";
    case SourceKind::OwningParameter: return "OwningParameter";
    }
    return "?";
}

const char* sink_kind_name(SinkKind kind) {
    switch (kind) {
    case SinkKind::CloseDisposeCall: return "CloseDisposeCall";
    case SinkKind::OwningReturnExpr: return "OwningReturnExpr";
    case SinkKind::OwningArgumentCall: return "OwningArgumentCall";
    case SinkKind::EnsuresCalledMethodsCall: return "EnsuresCalledMethodsCall";
    case SinkKind::UsingDispose: return "UsingDispose";
    case SinkKind::NullDischarge: return "NullDischarge";
    case SinkKind::OwningFieldStore: return "OwningFieldStore";
    }
    return "?";
}

bool report_less(const LeakReport& a, const LeakReport& b) {
    return std::tie(a.file, a.line, a.kind, a.message) <
           std::tie(b.file, b.line, b.kind, b.message);
}

// --- pruned-graph reachability ---------------------------------------------------

bool reaches_avoiding(const Cfg& cfg, int from, int to, const std::set<int>& removed_nodes,
                      const std::set<int>& removed_edges) {
    return !path_avoiding(cfg, from, to, removed_nodes, removed_edges).empty();
}

std::vector<int> path_avoiding(const Cfg& cfg, int from, int to,
                               const std::set<int>& removed_nodes,
                               const std::set<int>& removed_edges) {
    if (removed_nodes.count(from)) return {};
    if (from == to) return {from};
    std::vector<int> parent(cfg.nodes().size(), -1);
    std::vector<bool> seen(cfg.nodes().size(), false);
    std::deque<int> work{from};
    seen[from] = true;
    while (!work.empty()) {
        int cur = work.front();
        work.pop_front();
        for (int eid : cfg.successor_edges(cur)) {
            if (removed_edges.count(eid)) continue;
            int next = cfg.edge(eid).to;
            if (seen[next]) continue;
            if (next != to && removed_nodes.count(next)) continue;
            seen[next] = true;
            parent[next] = cur;
            if (next == to) {
                std::vector<int> path{to};
                for (int p = cur; p != -1; p = parent[p]) path.push_back(p);
                std::reverse(path.begin(), path.end());
                return path;
            }
            work.push_back(next);
        }
    }
    return {};
}

// --- helpers over one method's CFG + binding ---------------------------------------

namespace {

// Statement nodes that invoke `release` on a read of `field`.
std::set<int> release_nodes(const Cfg& cfg, const MethodBinding& binding,
                            const FieldInfo* field, const std::string& release) {
    std::set<int> out;
    if (release.empty()) return out;
    for (const auto& node : cfg.nodes()) {
        if (!node.stmt || node.stmt->kind != StmtKind::ExprStmt) continue;
        const auto& expr = *static_cast<const ExprStmt*>(node.stmt)->expr;
        if (expr.kind != ExprKind::Call) continue;
        const auto& call = static_cast<const CallExpr&>(expr);
        if (call.callee != release || !call.receiver) continue;
        if (binding.field_of(call.receiver.get()) == field) out.insert(node.id);
    }
    return out;
}

// Statement nodes assigning null to `field`.
std::set<int> null_assign_nodes(const Cfg& cfg, const MethodBinding& binding,
                                const FieldInfo* field) {
    std::set<int> out;
    for (const auto& node : cfg.nodes()) {
        if (!node.stmt || node.stmt->kind != StmtKind::Assign) continue;
        const auto& assign = *static_cast<const AssignStmt*>(node.stmt);
        if (assign.value->kind != ExprKind::NullLiteral) continue;
        if (binding.field_of(assign.target.get()) == field) out.insert(node.id);
    }
    return out;
}

// Branch edges on which `field` is established to be null.
std::set<int> null_edges_for_field(const Cfg& cfg, const MethodBinding& binding,
                                   const FieldInfo* field) {
    std::set<int> out;
    for (const auto& node : cfg.nodes()) {
        if (!node.cond || node.cond->kind != ExprKind::NullComparison) continue;
        const auto& cmp = static_cast<const NullComparisonExpr&>(*node.cond);
        if (binding.field_of(cmp.operand.get()) != field) continue;
        BranchKind null_branch = cmp.is_equal ? BranchKind::True : BranchKind::False;
        for (int eid : cfg.successor_edges(node.id)) {
            if (cfg.edge(eid).branch == null_branch) out.insert(eid);
        }
    }
    return out;
}

} // namespace

// --- MethodAnalysis -----------------------------------------------------------------

MethodAnalysis::MethodAnalysis(const SemanticModel& model, const MethodInfo& method, bool naive)
    : model_(model), method_(method), naive_(naive), cfg_(build_cfg(*method.analysis_body)),
      aliases_(model, method, cfg_) {
    classify_sources();
    classify_sinks();
}

bool MethodAnalysis::alias_query(int from, int to) const {
    return naive_ ? aliases_.local_flow(from, to) : aliases_.alias(from, to);
}

namespace {

// A MustCallAlias call merges its argument's obligation into the result
// instead of opening a new one (wrapper constructors and alias-returning
// methods).
bool is_alias_merging_call(const MethodBinding& binding, const Expr* expr) {
    for (const MethodInfo* target : binding.targets_of(expr)) {
        if (!target->must_call_alias_return()) continue;
        for (const auto& p : target->params) {
            if (has_attribute(p.attributes, AttributeKind::MustCallAlias)) return true;
        }
    }
    return false;
}

} // namespace

void MethodAnalysis::classify_sources() {
    for (const auto& node : aliases_.nodes()) {
        switch (node.kind) {
        case FlowNodeKind::Creation: {
            bool resource = naive_ ? model_.is_disposable(node.type)
                                   : model_.rtype().count(node.type) > 0;
            if (!resource) break;
            if (!naive_ && is_alias_merging_call(method_.binding, node.expr)) break;
            for (int anchor : node.anchors) {
                SourceObligation src;
                src.kind = SourceKind::ObjectCreation;
                src.flow_node = node.id;
                src.cfg_node = anchor;
                src.span = node.span;
                src.resource_type = node.type;
                src.release_method = model_.release_method(node.type);
                src.name = node.type;
                sources_.push_back(std::move(src));
            }
            break;
        }
        case FlowNodeKind::Call: {
            if (naive_) break;
            const auto& call = *static_cast<const CallExpr*>(node.expr);
            auto targets = method_.binding.targets_of(node.expr);
            bool owning_return = false;
            const AttributeSpec* cmcf = nullptr;
            for (const MethodInfo* t : targets) {
                owning_return |= t->owning_return();
                if (!cmcf) cmcf = t->create_must_call_for();
            }
            if (owning_return && !is_alias_merging_call(method_.binding, node.expr)) {
                for (int anchor : node.anchors) {
                    SourceObligation src;
                    src.kind = SourceKind::OwningReturnCall;
                    src.flow_node = node.id;
                    src.cfg_node = anchor;
                    src.span = node.span;
                    src.resource_type = node.type;
                    src.release_method = model_.release_method(node.type);
                    src.name = call.callee;
                    sources_.push_back(std::move(src));
                }
            }
            if (cmcf) {
                int receiver = call.receiver ? aliases_.node_for(call.receiver.get()) : -1;
                if (receiver >= 0) {
                    const FieldInfo* field =
                        model_.resolve_field(targets.front()->owner, cmcf->args[0]);
                    for (int anchor : node.anchors) {
                        SourceObligation src;
                        src.kind = SourceKind::CreateMustCallForCall;
                        src.flow_node = receiver;
                        src.cfg_node = anchor;
                        src.span = node.span;
                        src.resource_type = field ? field->type : "";
                        src.release_method = field ? model_.release_method(field->type) : "";
                        src.field = cmcf->args[0];
                        src.name = call.callee;
                        sources_.push_back(std::move(src));
                    }
                }
            }
            break;
        }
        case FlowNodeKind::Param: {
            if (naive_) break;
            for (const auto& p : method_.params) {
                if (p.name != node.var) continue;
                if (!has_attribute(p.attributes, AttributeKind::Owning)) continue;
                SourceObligation src;
                src.kind = SourceKind::OwningParameter;
                src.flow_node = node.id;
                src.cfg_node = cfg_.entry();
                src.span = p.span;
                src.resource_type = p.type;
                src.release_method = model_.release_method(p.type);
                src.name = p.name;
                sources_.push_back(std::move(src));
            }
            break;
        }
        default:
            break;
        }
    }
    std::sort(sources_.begin(), sources_.end(),
              [](const SourceObligation& a, const SourceObligation& b) {
                  return std::tie(a.span.file, a.span.line, a.span.column, a.kind, a.cfg_node) <
                         std::tie(b.span.file, b.span.line, b.span.column, b.kind, b.cfg_node);
              });
}

void MethodAnalysis::classify_sinks() {
    for (const auto& node : aliases_.nodes()) {
        if (node.kind == FlowNodeKind::Call) {
            const auto& call = *static_cast<const CallExpr*>(node.expr);
            int receiver = call.receiver ? aliases_.node_for(call.receiver.get()) : -1;

            if ((call.callee == "Close" || call.callee == "Dispose") && receiver >= 0) {
                for (int anchor : node.anchors) {
                    SinkDischarge sink;
                    sink.kind = call.synthesized_using ? SinkKind::UsingDispose
                                                       : SinkKind::CloseDisposeCall;
                    sink.flow_node = receiver;
                    sink.cfg_node = anchor;
                    sink.span = node.span;
                    sinks_.push_back(std::move(sink));
                }
            }
            if (naive_) continue;

            auto targets = method_.binding.targets_of(node.expr);
            for (const MethodInfo* t : targets) {
                if (const AttributeSpec* ecm = t->ensures_called()) {
                    if (receiver >= 0) {
                        for (int anchor : node.anchors) {
                            SinkDischarge sink;
                            sink.kind = SinkKind::EnsuresCalledMethodsCall;
                            sink.flow_node = receiver;
                            sink.cfg_node = anchor;
                            sink.field = ecm->args[0];
                            sink.method = ecm->args[1];
                            sink.span = node.span;
                            sinks_.push_back(std::move(sink));
                        }
                    }
                }
            }
        }

        if (naive_) continue;

        // arguments passed into Owning parameters (calls and constructors)
        if (node.kind == FlowNodeKind::Call || node.kind == FlowNodeKind::Creation) {
            const std::vector<ExprPtr>* args;
            if (node.kind == FlowNodeKind::Creation) {
                args = &static_cast<const ObjectCreationExpr*>(node.expr)->args;
            } else {
                args = &static_cast<const CallExpr*>(node.expr)->args;
            }
            std::set<int> seen_args;
            for (const MethodInfo* t : method_.binding.targets_of(node.expr)) {
                for (size_t i = 0; i < t->params.size() && i < args->size(); i++) {
                    if (!has_attribute(t->params[i].attributes, AttributeKind::Owning)) continue;
                    int arg = aliases_.node_for((*args)[i].get());
                    if (arg < 0 || !seen_args.insert(arg).second) continue;
                    for (int anchor : node.anchors) {
                        SinkDischarge sink;
                        sink.kind = SinkKind::OwningArgumentCall;
                        sink.flow_node = arg;
                        sink.cfg_node = anchor;
                        sink.span = node.span;
                        sinks_.push_back(std::move(sink));
                    }
                }
            }
        }

        // stores into Owning fields transfer the obligation to the field
        if (node.kind == FlowNodeKind::FieldWrite && node.field && node.field->is_owning()) {
            for (int anchor : node.anchors) {
                SinkDischarge sink;
                sink.kind = SinkKind::OwningFieldStore;
                sink.flow_node = node.id;
                sink.cfg_node = anchor;
                sink.span = node.span;
                sinks_.push_back(std::move(sink));
            }
        }
    }

    if (!naive_ && method_.owning_return()) {
        for (const auto& node : cfg_.nodes()) {
            if (!node.stmt || node.stmt->kind != StmtKind::Return) continue;
            const auto& ret = *static_cast<const ReturnStmt*>(node.stmt);
            if (!ret.value) continue;
            int value = aliases_.node_for(ret.value.get());
            if (value < 0) continue;
            SinkDischarge sink;
            sink.kind = SinkKind::OwningReturnExpr;
            sink.flow_node = value;
            sink.cfg_node = node.id;
            sink.span = node.span;
            sinks_.push_back(std::move(sink));
        }
    }

    if (!naive_) {
        for (const auto& node : cfg_.nodes()) {
            if (!node.cond || node.cond->kind != ExprKind::NullComparison) continue;
            const auto& cmp = static_cast<const NullComparisonExpr&>(*node.cond);
            int operand = aliases_.node_for(cmp.operand.get());
            if (operand < 0) continue;
            BranchKind null_branch = cmp.is_equal ? BranchKind::True : BranchKind::False;
            for (int eid : cfg_.successor_edges(node.id)) {
                if (cfg_.edge(eid).branch != null_branch) continue;
                SinkDischarge sink;
                sink.kind = SinkKind::NullDischarge;
                sink.flow_node = operand;
                sink.cfg_node = node.id;
                sink.edge = eid;
                sink.span = node.span;
                sinks_.push_back(std::move(sink));
            }
        }
    }
}

void MethodAnalysis::discharge_sets(const SourceObligation& source, std::set<int>& nodes,
                                    std::set<int>& edges) const {
    for (const auto& sink : sinks_) {
        if (source.kind == SourceKind::CreateMustCallForCall) {
            bool applicable = (sink.kind == SinkKind::EnsuresCalledMethodsCall &&
                               sink.field == source.field) ||
                              sink.kind == SinkKind::NullDischarge;
            if (!applicable) continue;
        }
        if (!alias_query(source.flow_node, sink.flow_node)) continue;
        if (sink.kind == SinkKind::NullDischarge) {
            edges.insert(sink.edge);
        } else {
            nodes.insert(sink.cfg_node);
        }
    }
}

bool MethodAnalysis::not_disposed(const SourceObligation& source) const {
    std::set<int> nodes, edges;
    discharge_sets(source, nodes, edges);
    return reaches_avoiding(cfg_, source.cfg_node, cfg_.exit(), nodes, edges);
}

std::vector<int> MethodAnalysis::witness(const SourceObligation& source) const {
    std::set<int> nodes, edges;
    discharge_sets(source, nodes, edges);
    auto path = path_avoiding(cfg_, source.cfg_node, cfg_.exit(), nodes, edges);
    if (path.size() > static_cast<size_t>(kWitnessLimit)) return {};
    return path;
}

LeakReport MethodAnalysis::make_report(const SourceObligation& source) const {
    LeakReport report;
    report.file = source.span.file;
    report.line = source.span.line;
    report.kind = source_kind_name(source.kind);
    switch (source.kind) {
    case SourceKind::ObjectCreation:
        report.message =
            "resource of type " + source.resource_type + " may not be released on all paths";
        break;
    case SourceKind::OwningReturnCall:
        report.message =
            "resource returned by " + source.name + " may not be released on all paths";
        break;
    case SourceKind::CreateMustCallForCall:
        report.message = "obligation on field " + source.field + " created by call to " +
                         source.name + " may not be discharged on all paths";
        break;
    case SourceKind::OwningParameter:
        report.message =
            "owning parameter " + source.name + " may not be released on all paths";
        break;
    }
    report.witness = witness(source);
    return report;
}

std::vector<LeakReport> MethodAnalysis::check() const {
    std::vector<LeakReport> reports;
    for (const auto& source : sources_) {
        if (!not_disposed(source)) continue;
        LeakReport report = make_report(source);
        bool duplicate = false;
        for (const auto& existing : reports) {
            if (existing.file == report.file && existing.line == report.line &&
                existing.kind == report.kind && existing.message == report.message) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<LeakReport> MethodAnalysis::check_create_must_call_for() const {
    std::vector<LeakReport> reports;
    if (naive_) return reports;
    const AttributeSpec* cmcf = method_.create_must_call_for();
    if (!cmcf) return reports;
    const FieldInfo* field = model_.resolve_field(method_.owner, cmcf->args[0]);
    if (!field) return reports; // unresolved field already reported by the model
    std::string release = model_.release_method(field->type);

    std::set<int> removed = release_nodes(cfg_, method_.binding, field, release);
    std::set<int> nulls = null_assign_nodes(cfg_, method_.binding, field);
    removed.insert(nulls.begin(), nulls.end());
    std::set<int> removed_edges = null_edges_for_field(cfg_, method_.binding, field);

    std::set<std::pair<std::string, int>> reported;
    for (const auto& node : cfg_.nodes()) {
        if (!node.stmt || node.stmt->kind != StmtKind::Assign) continue;
        const auto& assign = *static_cast<const AssignStmt*>(node.stmt);
        if (method_.binding.field_of(assign.target.get()) != field) continue;
        std::set<int> avoid = removed;
        avoid.erase(node.id);
        if (!reaches_avoiding(cfg_, cfg_.entry(), node.id, avoid, removed_edges)) continue;
        if (!reported.insert({node.span.file, node.span.line}).second) continue;
        LeakReport report;
        report.file = node.span.file;
        report.line = node.span.line;
        report.kind = "OwningFieldReassignment";
        report.message = "field " + field->name +
                         " may hold an unreleased resource when reassigned in " +
                         method_.qualified_name();
        reports.push_back(std::move(report));
    }
    return reports;
}

// --- owning-field class check -------------------------------------------------------

std::vector<LeakReport> check_owning_field(const SemanticModel& model, const TypeInfo& type) {
    std::vector<LeakReport> reports;
    for (const auto& field : type.fields) {
        if (!field.is_owning()) continue;

        auto report = [&](const std::string& message) {
            LeakReport r;
            r.file = field.span.file;
            r.line = field.span.line;
            r.kind = "OwningField";
            r.message = message;
            reports.push_back(std::move(r));
        };

        std::string must_call;
        if (const AttributeSpec* mc = find_attribute(type.attributes, AttributeKind::MustCall)) {
            must_call = mc->args[0];
        } else if (model.is_disposable(type.name)) {
            must_call = "Dispose";
        } else {
            report("type " + type.name + " has owning field " + field.name +
                   " but carries no MustCall attribute");
            continue;
        }

        const MethodInfo* releaser = type.find_method(must_call);
        if (!releaser || !releaser->has_body()) {
            report("MustCall names " + must_call + " but " + type.name + " does not define it");
            continue;
        }

        const AttributeSpec* ecm = releaser->ensures_called();
        if (!ecm || ecm->args[0] != field.name) {
            report("method " + releaser->qualified_name() +
                   " does not declare EnsuresCalledMethods(" + field.name + ", ...)");
            continue;
        }

        std::string release = model.release_method(field.type);
        if (release.empty() || ecm->args[1] != release) {
            report("EnsuresCalledMethods names " + ecm->args[1] + " but field " + field.name +
                   (release.empty() ? " has no release method" : " requires " + release));
            continue;
        }

        Cfg cfg = build_cfg(*releaser->analysis_body);
        std::set<int> removed = release_nodes(cfg, releaser->binding, &field, release);
        std::set<int> removed_edges = null_edges_for_field(cfg, releaser->binding, &field);
        if (reaches_avoiding(cfg, cfg.entry(), cfg.exit(), removed, removed_edges)) {
            report("method " + releaser->qualified_name() + " does not release field " +
                   field.name + " on all paths");
        }
    }
    return reports;
}

} // namespace mustcall
