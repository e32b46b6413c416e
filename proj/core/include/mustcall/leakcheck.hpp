#ifndef MUSTCALL_LEAKCHECK_HPP
#define MUSTCALL_LEAKCHECK_HPP

#include <set>
#include <string>
#include <vector>

#include "mustcall/alias.hpp"
#include "mustcall/cfg.hpp"
#include "mustcall/model.hpp"

namespace mustcall {

enum class SourceKind {
    ObjectCreation,
    OwningReturnCall,
    CreateMustCallForCall,
    OwningParameter,
};

enum class SinkKind {
    CloseDisposeCall,
    OwningReturnExpr,
    OwningArgumentCall,
    EnsuresCalledMethodsCall,
    UsingDispose,
    NullDischarge,
    OwningFieldStore, // assignment into an Owning field transfers the obligation
};

const char* source_kind_name(SourceKind kind);
const char* sink_kind_name(SinkKind kind);

/// A program point where a resource obligation begins.
struct SourceObligation {
    SourceKind kind;
    int flow_node = -1; // occurrence carrying the obligation
    int cfg_node = -1;
    Span span;
    std::string resource_type;
    std::string release_method; // from MustCall of the resource's type
    std::string field;          // CreateMustCallForCall: the named field
    std::string name;           // callee / parameter name, for messages
};

/// A program point (node or edge) that discharges an obligation.
struct SinkDischarge {
    SinkKind kind;
    int flow_node = -1; // discharging occurrence (receiver / argument / ...)
    int cfg_node = -1;
    int edge = -1;      // NullDischarge: the branch edge establishing null
    std::string field;  // EnsuresCalledMethodsCall: field it releases
    std::string method; // EnsuresCalledMethodsCall: method it calls
    Span span;
};

struct LeakReport {
    std::string file;
    int line = 0;
    std::string kind;
    std::string message;
    std::vector<int> witness; // CFG node path source -> exit avoiding sinks

    bool operator==(const LeakReport& other) const {
        return file == other.file && line == other.line && kind == other.kind &&
               message == other.message && witness == other.witness;
    }
};

bool report_less(const LeakReport& a, const LeakReport& b);

/// Path existence in a CFG with discharging nodes and edges removed.
bool reaches_avoiding(const Cfg& cfg, int from, int to, const std::set<int>& removed_nodes,
                      const std::set<int>& removed_edges);

/// Shortest such path (node ids), empty when none exists.
std::vector<int> path_avoiding(const Cfg& cfg, int from, int to,
                               const std::set<int>& removed_nodes,
                               const std::set<int>& removed_edges);

/// Source/sink classification plus the must-call verification for one method.
/// In naive mode attributes are ignored: every disposable allocation is a
/// source, only Close/Dispose calls and using-blocks are sinks, and aliasing
/// is local flow alone.
class MethodAnalysis {
  public:
    MethodAnalysis(const SemanticModel& model, const MethodInfo& method, bool naive = false);

    const MethodInfo& method() const { return method_; }
    const Cfg& cfg() const { return cfg_; }
    const AliasAnalysis& aliases() const { return aliases_; }
    const std::vector<SourceObligation>& sources() const { return sources_; }
    const std::vector<SinkDischarge>& sinks() const { return sinks_; }
    bool naive() const { return naive_; }

    /// Discharging CFG nodes/edges for this source (sinks whose discharging
    /// occurrence is aliased to the source, restricted per source kind).
    void discharge_sets(const SourceObligation& source, std::set<int>& nodes,
                        std::set<int>& edges) const;

    /// True iff some CFG path from the source to exit avoids every discharging
    /// node and edge (reachability over the pruned graph).
    bool not_disposed(const SourceObligation& source) const;

    /// Witness path for a leaking source, empty when none or longer than the
    /// reporting limit.
    std::vector<int> witness(const SourceObligation& source) const;

    /// One report per leaking source.
    std::vector<LeakReport> check() const;

    /// CreateMustCallFor(f): each assignment to f must be preceded by a
    /// release or null-establishment of f on every path from entry.
    std::vector<LeakReport> check_create_must_call_for() const;

  private:
    void classify_sources();
    void classify_sinks();
    bool alias_query(int from, int to) const;
    LeakReport make_report(const SourceObligation& source) const;

    const SemanticModel& model_;
    const MethodInfo& method_;
    bool naive_;
    Cfg cfg_;
    AliasAnalysis aliases_;
    std::vector<SourceObligation> sources_;
    std::vector<SinkDischarge> sinks_;
};

/// Owning-field rule: the class must carry MustCall(d) and d must both declare
/// EnsuresCalledMethods(f, m) and invoke f's release method on every path.
std::vector<LeakReport> check_owning_field(const SemanticModel& model, const TypeInfo& type);

constexpr int kWitnessLimit = 64;

} // namespace mustcall

#endif
