// search.hpp -- bounded brute-force rule search: enumerate every grammar
// rule within size caps, score each against a transduction map with a
// certified error interval, and rank.
#ifndef GGR_SEARCH_HPP_
#define GGR_SEARCH_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ggr/err.hpp"
#include "ggr/rule.hpp"
#include "ggr/transduction_map.hpp"

namespace ggr {

// Size box for candidate rules plus the scoring parameters. A rule fits the
// box when it has at most maxH variables and maxK recursive calls, its left
// side and every call argument have pattern length <= maxPatternLen (call
// arguments are additionally never longer than the left side), every output
// block has length <= maxLiteralLen, and every variable domain is drawn
// from domainMenu.
struct SearchCaps {
    std::uint32_t maxH = 0;
    std::uint32_t maxK = 0;
    std::uint32_t maxPatternLen = 0;
    std::uint32_t maxLiteralLen = 0;
    std::vector<VariableDomain> domainMenu;  // required when maxH > 0
    double beta = 1.0;                       // scoring weight, > 0
    std::uint32_t truncationLen = 0;         // partial-sum horizon
};

// Visit every rule that fits the box, in a fixed canonical order, each one
// exactly once up to variable renaming (variables are numbered by first
// occurrence in the left side). Order: h ascending; left sides ascending by
// length then elementwise (literals by token id before variables by index);
// domain choices in menu order, leftmost variable most significant; k
// ascending; argument tuples then block tuples likewise lexicographic.
// fn receives the candidate's index in that order and may return false to
// stop. Returns the number of candidates visited.
std::uint64_t enumerate_candidates(
    const AlphabetRef& inputAlphabet, const AlphabetRef& outputAlphabet,
    const SearchCaps& caps,
    const std::function<bool(std::uint64_t index, const GgrRule& r)>& fn);

// Materialized variant of the above.
std::vector<GgrRule> enumerate_candidates(const AlphabetRef& inputAlphabet,
                                          const AlphabetRef& outputAlphabet,
                                          const SearchCaps& caps);

// Score one rule against a map: partial sum at caps.truncationLen with
// undefined points skipped and counted, plus the analytic tail when the map
// carries a growth bound (tail 0 otherwise -- the score is then empirical,
// a lower bound only as far as the data reaches). Finite domains that are
// fully enumerated by the horizon always give tail exactly 0.
ErrEstimate score_rule(const TransductionMap& t, const GgrRule& r,
                       const SearchCaps& caps);

struct ScoredRule {
    GgrRule rule;
    ErrEstimate estimate;
    std::uint64_t candidateIndex = 0;  // position in canonical order
};

inline constexpr std::size_t kAllResults = std::numeric_limits<std::size_t>::max();

// Score every candidate in the box against the map and rank by interval
// upper bound, ties by complexity(), then by canonical index. The ranking
// is a deterministic function of the inputs, independent of thread count.
// `limit` keeps only the best entries (scores of the rest are still
// computed; only the materialized result is truncated).
std::vector<ScoredRule> search_rules(const TransductionMap& t,
                                     const SearchCaps& caps,
                                     std::size_t limit = kAllResults);

// Same over a finite dataset of (input, output) pairs, treated as a partial
// map that is undefined off the listed inputs. Pass a growth bound to get
// analytic tails; without one the scores are purely empirical. The dataset
// must be non-empty.
std::vector<ScoredRule> search_rules(
    const std::vector<std::pair<TokenString, TokenString>>& dataset,
    const SearchCaps& caps,
    std::optional<GrowthBound> bound = std::nullopt,
    std::size_t limit = kAllResults);

} // namespace ggr

#endif // GGR_SEARCH_HPP_
