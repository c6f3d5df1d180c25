// transducer.hpp -- finite-state transducers as edge-labeled state graphs.
#ifndef GGR_TRANSDUCER_HPP_
#define GGR_TRANSDUCER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ggr/strings.hpp"

namespace ggr {

// Output-length guarantee len(out) <= cT * len(in)^dExp with cT kept as an
// exact rational so the comparison never suffers rounding.
struct GrowthBound {
    std::int64_t num = 1;
    std::int64_t den = 1;
    std::uint32_t dExp = 1;

    GrowthBound() = default;
    GrowthBound(std::int64_t num, std::int64_t den, std::uint32_t dExp);
    static GrowthBound integer(std::int64_t c, std::uint32_t dExp = 1);

    bool holds(std::uint64_t inLen, std::uint64_t outLen) const;
    // Smallest double >= num/den: printing never understates the constant.
    double cTDouble() const;
    std::string print() const;  // "3" or "5/3", then "^" is dExp's concern
};

struct Edge {
    std::uint32_t src = 0;
    std::optional<TokenId> in;  // nullopt = epsilon input
    TokenString out;            // over the output alphabet, possibly empty
    std::uint32_t dst = 0;
};

// Immutable machine. `deterministic()` is computed, not declared: true iff
// there are no epsilon-input edges and no state has two edges on one token.
class FiniteTransducer {
public:
    FiniteTransducer(AlphabetRef inputAlphabet, AlphabetRef outputAlphabet,
                     std::uint32_t stateCount, std::uint32_t initial,
                     std::vector<std::uint32_t> halting, std::vector<Edge> edges,
                     std::vector<std::string> stateNames = {});

    // Line format: `inputs:`, `outputs:`, `initial:`, `final:` headers plus
    // edge lines `SRC DST IN : OUT...` (IN may be @eps@). '#' comments.
    static FiniteTransducer parse(const std::string& text);
    std::string print() const;

    const AlphabetRef& inputAlphabet() const { return inAlpha_; }
    const AlphabetRef& outputAlphabet() const { return outAlpha_; }
    std::uint32_t stateCount() const { return stateCount_; }
    std::uint32_t initial() const { return initial_; }
    bool halting(std::uint32_t state) const { return halting_[state] != 0; }
    const std::vector<Edge>& edges() const { return edges_; }
    // Edge indices leaving `state`, in canonical edge order.
    const std::vector<std::uint32_t>& edgesFrom(std::uint32_t state) const {
        return outgoing_[state];
    }
    const std::string& stateName(std::uint32_t state) const {
        return stateNames_[state];
    }
    std::optional<std::uint32_t> stateByName(const std::string& name) const;
    bool deterministic() const { return deterministic_; }

    const std::optional<GrowthBound>& growthBound() const { return bound_; }
    FiniteTransducer withGrowthBound(GrowthBound b) const;

private:
    AlphabetRef inAlpha_;
    AlphabetRef outAlpha_;
    std::uint32_t stateCount_;
    std::uint32_t initial_;
    std::vector<char> halting_;
    std::vector<Edge> edges_;  // canonical order: (src, eps<token, token, dst, out)
    std::vector<std::vector<std::uint32_t>> outgoing_;
    std::vector<std::string> stateNames_;
    bool deterministic_;
    std::optional<GrowthBound> bound_;
};

// Deterministic execution: walk edges from the initial state consuming s.
// nullopt when a token has no edge or the walk ends outside a halting state.
// A violated attached GrowthBound raises Growth instead of returning.
std::optional<TokenString> run(const FiniteTransducer& t, const TokenString& s);

// cT = max edge output length (>= 1), dExp = 1. Raises Growth when an
// epsilon-input cycle can emit output (output unbounded per input length).
GrowthBound infer_growth_bound(const FiniteTransducer& t);

// Disjoint non-empty blocks covering [0, stateCount). Canonical form: each
// block ascending, blocks ordered by least element.
class StatePartition {
public:
    explicit StatePartition(std::uint32_t stateCount,
                            std::vector<std::vector<std::uint32_t>> blocks);
    static StatePartition singletons(std::uint32_t stateCount);
    // One block per line, member state names space-separated.
    static StatePartition parse(const FiniteTransducer& t, const std::string& text);
    std::string print(const FiniteTransducer& t) const;

    std::uint32_t stateCount() const { return stateCount_; }
    const std::vector<std::vector<std::uint32_t>>& blocks() const { return blocks_; }
    std::uint32_t blockOf(std::uint32_t state) const { return blockOf_[state]; }
    bool isSingletons() const { return blocks_.size() == stateCount_; }

private:
    std::uint32_t stateCount_;
    std::vector<std::vector<std::uint32_t>> blocks_;
    std::vector<std::uint32_t> blockOf_;
};

// Collapse states along the partition; edges are re-targeted to blocks and
// deduplicated. The result is generally nondeterministic. Any attached
// growth bound is dropped (re-infer if needed).
FiniteTransducer quotient(const FiniteTransducer& t, const StatePartition& p);

} // namespace ggr

#endif // GGR_TRANSDUCER_HPP_
