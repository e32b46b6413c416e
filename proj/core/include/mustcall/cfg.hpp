#ifndef MUSTCALL_CFG_HPP
#define MUSTCALL_CFG_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mustcall/ast.hpp"

namespace mustcall {

enum class CfgNodeKind { Entry, Exit, Statement, Expression };

/// Which duplicate of an inlined finally body a node belongs to, when any.
enum class FinallyRoute { None, Normal, Exceptional, Return };

struct CfgNode {
    int id = 0;
    CfgNodeKind kind = CfgNodeKind::Statement;
    const Stmt* stmt = nullptr; // statement anchor (null for entry/exit)
    const Expr* cond = nullptr; // condition anchor for Expression nodes
    Span span;
    FinallyRoute route = FinallyRoute::None;
    std::string label; // short description for DOT dumps
};

enum class EdgeKind { Normal, Exceptional };
enum class BranchKind { None, True, False };

struct CfgEdge {
    int id = 0;
    int from = 0;
    int to = 0;
    EdgeKind kind = EdgeKind::Normal;
    BranchKind branch = BranchKind::None;
};

/// Per-method control-flow graph with a unique entry and exit. Nodes
/// unreachable from entry are pruned and ids renumbered densely, so every
/// non-entry node has a predecessor and every non-exit node a successor.
class Cfg {
  public:
    int entry() const { return entry_; }
    int exit() const { return exit_; }
    const std::vector<CfgNode>& nodes() const { return nodes_; }
    const std::vector<CfgEdge>& edges() const { return edges_; }

    const std::vector<int>& successor_edges(int node) const { return succ_[node]; }
    const std::vector<int>& predecessor_edges(int node) const { return pred_[node]; }

    std::vector<int> successors(int node) const;
    std::vector<int> predecessors(int node) const;

    const CfgNode& node(int id) const { return nodes_[id]; }
    const CfgEdge& edge(int id) const { return edges_[id]; }

    /// Nodes anchored to this statement. Multiple nodes occur when a finally
    /// body was inlined on several routes.
    std::vector<int> nodes_for_stmt(const Stmt* stmt) const;

    /// First node for a statement, -1 when the statement is unreachable.
    int node_for_stmt(const Stmt* stmt) const;

    /// Nodes evaluating this condition expression (several when a finally
    /// body containing it was inlined on multiple routes).
    std::vector<int> nodes_for_cond(const Expr* cond) const;

    /// First node for a condition, -1 when unreachable.
    int node_for_cond(const Expr* cond) const;

    /// True when `to` is reachable from `from` following all edge kinds.
    bool reaches(int from, int to) const;

    std::string to_dot(const std::string& title) const;

  private:
    friend class CfgBuilder;

    int entry_ = 0;
    int exit_ = 0;
    std::vector<CfgNode> nodes_;
    std::vector<CfgEdge> edges_;
    std::vector<std::vector<int>> succ_; // node -> edge ids
    std::vector<std::vector<int>> pred_;
    std::map<const Stmt*, std::vector<int>> stmt_nodes_;
    std::map<const Expr*, std::vector<int>> cond_nodes_;
};

/// Replaces one using-block with its try/finally equivalent: the bound
/// variable's declaration followed by try { body } finally { v.Dispose(); }.
/// The synthesized Dispose call is marked so sink classification can tell it
/// apart from source-level calls.
StmtPtr desugar_using(const UsingStmt& stmt);

/// Deep-copies a body with every using-block (recursively) desugared.
std::unique_ptr<BlockStmt> desugar_body(const BlockStmt& body);

/// Builds the CFG of an already-desugared method body.
Cfg build_cfg(const BlockStmt& body);

} // namespace mustcall

#endif
