// engine.hpp -- pattern matching and recursive interpretation of a Grammar,
// plus the induced TransductionMap and rule-driven data augmentation.
#ifndef GGR_ENGINE_HPP_
#define GGR_ENGINE_HPP_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "ggr/rule.hpp"
#include "ggr/transduction_map.hpp"

namespace ggr {

struct EngineLimits {
    std::size_t maxDepth = 10000;
    // every recursive argument must be strictly shorter than its input;
    // guarantees termination by induction on length
    bool requireStrictDecrease = true;
    enum class Ambiguity { FirstMatch, RequireUnique } ambiguity = Ambiguity::FirstMatch;
};

struct MatchAssignment {
    std::vector<TokenString> values;  // values[i] instantiates vars[i]
    std::size_t ruleIndex = 0;        // filled when matching against a grammar
    // start offset of each pattern element's segment, plus the final end;
    // substituting values into the pattern reproduces the input exactly
    std::vector<std::size_t> splits;
};

// All assignments, in canonical order: elements matched left to right,
// unbound variables try shorter bindings first, repeated variables must bind
// equal strings, and every binding lies in its declared domain.
std::vector<MatchAssignment> match_pattern(const Pattern& A,
                                           const std::vector<InputVariable>& vars,
                                           const TokenString& s);

// Recursive interpretation: scan rules in priority order, take the first
// rule and first assignment that matches (or require uniqueness), transduce
// the substituted arguments recursively, and splice the output blocks
// around the results. Memoized per input within one call.
// Errors: Validation (empty input), NoRuleMatches, DepthExceeded,
// NonDecreasingRecursion, AmbiguousMatch.
TokenString interpret(const Grammar& g, const TokenString& s,
                      const EngineLimits& lim = {});

// Certified output-length bound for the interpreted grammar, dExp = 1:
// exact stratified maxima over the lengths reachable with finite-domain
// rules, closed by a per-rule linear step for the unbounded-domain rules.
// nullopt when no linear bound can be certified this way (the caller may
// supply its own), and always nullopt when strict decrease is off.
std::optional<GrowthBound> derive_growth_bound(const Grammar& g,
                                               const EngineLimits& lim = {});

// The induced string-to-string map. evaluate() returns nullopt where the
// grammar defines nothing (no rule matches somewhere in the recursion, or
// the input is empty); other interpretation errors propagate. Thread-safe;
// results are memoized across calls.
class GrammarMap final : public TransductionMap {
public:
    explicit GrammarMap(Grammar g, EngineLimits lim = {});
    const AlphabetRef& inputAlphabet() const override;
    const AlphabetRef& outputAlphabet() const override;
    std::optional<TokenString> evaluate(const TokenString& in) const override;
    std::optional<GrowthBound> growthBound() const override { return bound_; }
    const Grammar& grammar() const { return g_; }
    const EngineLimits& limits() const { return lim_; }

private:
    Grammar g_;
    EngineLimits lim_;
    std::optional<GrowthBound> bound_;
    mutable std::mutex mu_;
    mutable std::map<TokenString, TokenString, TokenStringLess> memo_;
    mutable std::set<TokenString, TokenStringLess> undefined_;
};

TransductionMapRef as_transduction_map(Grammar g, EngineLimits lim = {});

// Up to `budget` (input, interpret(input)) pairs: inputs are rule left sides
// instantiated with domain members of length <= maxLen and with contiguous
// fragments of the seed strings, generated breadth-first by input length,
// duplicate-free, each pair re-verified by the interpreter before emission.
std::vector<std::pair<TokenString, TokenString>> augment(
    const Grammar& g, const std::vector<TokenString>& seeds, std::size_t budget,
    std::size_t maxLen, const EngineLimits& lim = {});

} // namespace ggr

#endif // GGR_ENGINE_HPP_
