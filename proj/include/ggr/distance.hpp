// distance.hpp -- edit distances between token strings.
#ifndef GGR_DISTANCE_HPP_
#define GGR_DISTANCE_HPP_

#include <cstdint>

#include "ggr/strings.hpp"

namespace ggr {

// Minimum number of single-token insertions/deletions turning a into b.
// Equals |a| + |b| - 2*LCS(a, b); satisfies the metric axioms and
// indel_distance(a, b) <= |a| + |b|.
std::uint64_t indel_distance(const TokenString& a, const TokenString& b);

// Classic edit distance that additionally permits substitutions (cost 1).
// Offered as an alternative comparator; nothing in the metric layer uses it
// unless explicitly requested.
std::uint64_t levenshtein_distance(const TokenString& a, const TokenString& b);

enum class DistanceKind { Indel, Levenshtein };

std::uint64_t string_distance(const TokenString& a, const TokenString& b,
                              DistanceKind kind);

} // namespace ggr

#endif // GGR_DISTANCE_HPP_
