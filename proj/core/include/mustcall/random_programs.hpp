#ifndef MUSTCALL_RANDOM_PROGRAMS_HPP
#define MUSTCALL_RANDOM_PROGRAMS_HPP

#include <cstdint>
#include <vector>

#include "mustcall/corpus.hpp"

namespace mustcall {

/// Deterministically generates random attribute-free methods (allocations,
/// branches, loops, try/catch, dispose calls and null guards, at most 12
/// statements) with expected verdicts computed by the path-enumeration
/// oracle. Identical seed and count always yield identical program bytes.
std::vector<CorpusCase> generate_random_programs(uint64_t seed, int count);

} // namespace mustcall

#endif
