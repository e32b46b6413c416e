#ifndef MUSTCALL_ALIAS_HPP
#define MUSTCALL_ALIAS_HPP

#include <string>
#include <vector>

#include "mustcall/cfg.hpp"
#include "mustcall/model.hpp"

namespace mustcall {

/// An occurrence that can carry a resource value at run time: a creation or
/// call expression, a local read, a field read or write, or a parameter.
enum class FlowNodeKind { Creation, Call, LocalRead, FieldRead, FieldWrite, Param };

struct FlowNode {
    int id = 0;
    FlowNodeKind kind = FlowNodeKind::LocalRead;
    const Expr* expr = nullptr;        // null for Param
    std::string var;                   // local/param name
    const FieldInfo* field = nullptr;  // FieldRead / FieldWrite
    std::vector<int> anchors;          // CFG nodes evaluating this occurrence
    Span span;
    std::string type; // static type ("" unknown)
};

/// Intraprocedural value-flow and aliasing for one method.
///
/// local flow follows assignments, initializations and variable reads,
/// flow-sensitively over reaching definitions (calls are not followed and a
/// null assignment kills the variable). Resource aliasing links MustCallAlias
/// arguments to their call expressions; field aliasing links a field write to
/// every later read of the same declared field. The alias relation is the
/// reflexive-transitive closure of the three.
class AliasAnalysis {
  public:
    AliasAnalysis(const SemanticModel& model, const MethodInfo& method, const Cfg& cfg);

    const std::vector<FlowNode>& nodes() const { return nodes_; }
    const FlowNode& node(int id) const { return nodes_[id]; }

    /// Flow node of an expression occurrence, -1 when it carries no value
    /// (opaque, null, this) or sits in unreachable code.
    int node_for(const Expr* expr) const;

    int param_node(const std::string& name) const;

    bool local_flow(int from, int to) const;
    bool is_resource_alias(int from, int to) const;
    bool is_field_alias(int from, int to) const;

    /// Closed alias relation (reflexive, transitive).
    bool alias(int from, int to) const;

    /// All ordered pairs of the closed relation, including reflexive ones.
    std::vector<std::pair<int, int>> relation_pairs() const;

    /// Pairs of the individual component relations (for containment checks).
    const std::vector<std::pair<int, int>>& resource_alias_pairs() const {
        return resource_pairs_;
    }
    const std::vector<std::pair<int, int>>& field_alias_pairs() const { return field_pairs_; }

    /// CFG reachability used by the field-alias ordering rule.
    bool cfg_reach(int node_from, int node_to) const;

    /// Human-readable pair dump sorted by span (debug flag output).
    std::string dump() const;

  private:
    void collect_flow_nodes(const MethodInfo& method);
    void collect_from_stmt(const Stmt& stmt);
    int add_expr_node(const Expr& expr, FlowNodeKind kind, std::vector<int> anchors);
    void collect_expr(const Expr& expr, const std::vector<int>& anchors);
    void compute_reaching_definitions();
    void build_edges();
    void close();

    struct Definition {
        int id = 0;
        std::string var;
        int value_node = -1; // flow node of the assigned value, -1 for null/opaque
        std::vector<int> anchors;
    };

    const SemanticModel& model_;
    const MethodInfo& method_;
    const Cfg& cfg_;

    std::vector<FlowNode> nodes_;
    std::map<const Expr*, int> by_expr_;
    std::map<std::string, int> param_nodes_;

    std::vector<Definition> defs_;
    std::vector<std::pair<int, int>> store_edges_; // rhs value -> field write
    std::vector<std::vector<bool>> def_in_;        // per CFG node

    std::vector<std::vector<int>> local_adj_;    // def-use, use-use, store flow
    std::vector<std::vector<int>> full_adj_;     // + resource/field alias edges
    std::vector<std::pair<int, int>> resource_pairs_;
    std::vector<std::pair<int, int>> field_pairs_;

    std::vector<std::vector<bool>> local_reach_;
    std::vector<std::vector<bool>> full_reach_;
    std::vector<std::vector<bool>> cfg_reach_;
};

} // namespace mustcall

#endif
