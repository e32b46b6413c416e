#ifndef MUSTCALL_PATH_ORACLE_HPP
#define MUSTCALL_PATH_ORACLE_HPP

#include <vector>

#include "mustcall/leakcheck.hpp"

namespace mustcall {

struct OracleVerdict {
    Span source_location;
    bool leaking = false;
    long paths_enumerated = 0;
    bool inapplicable = false;      // enumeration exceeded the path cap
    std::vector<int> witness;       // sink-free suffix when leaking
};

/// Independent check of the reachability engine: enumerates entry-to-exit
/// paths (each back edge traversed at most once) and declares the source
/// leaking iff some path suffix starting at the source node contains no
/// discharging node or edge. Shares source/sink/alias classification with the
/// engine; only the path semantics differ.
OracleVerdict path_oracle(const MethodAnalysis& analysis, const SourceObligation& source,
                          long path_cap = 1000000);

} // namespace mustcall

#endif
