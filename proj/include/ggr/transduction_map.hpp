// transduction_map.hpp -- the abstract string-to-string map interface.
//
// One interface for every way this library realizes a transduction: a
// deterministic machine, a finite lookup table, a grammar interpreter
// (ggr/engine.hpp), or a composition. Everything downstream (metric, search,
// meaning checks) sees only this.
#ifndef GGR_TRANSDUCTION_MAP_HPP_
#define GGR_TRANSDUCTION_MAP_HPP_

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "ggr/strings.hpp"
#include "ggr/transducer.hpp"

namespace ggr {

class TransductionMap {
public:
    virtual ~TransductionMap() = default;
    virtual const AlphabetRef& inputAlphabet() const = 0;
    virtual const AlphabetRef& outputAlphabet() const = 0;
    // nullopt = undefined at this input. Must be deterministic.
    virtual std::optional<TokenString> evaluate(const TokenString& in) const = 0;
    virtual std::optional<GrowthBound> growthBound() const = 0;
};

using TransductionMapRef = std::shared_ptr<const TransductionMap>;

// A deterministic FiniteTransducer as a map.
class FstMap final : public TransductionMap {
public:
    explicit FstMap(FiniteTransducer t);
    const AlphabetRef& inputAlphabet() const override;
    const AlphabetRef& outputAlphabet() const override;
    std::optional<TokenString> evaluate(const TokenString& in) const override;
    std::optional<GrowthBound> growthBound() const override;
    const FiniteTransducer& machine() const { return t_; }

private:
    FiniteTransducer t_;
};

// A finite table of (input, output) pairs; undefined elsewhere.
class TableMap final : public TransductionMap {
public:
    TableMap(AlphabetRef inputAlphabet, AlphabetRef outputAlphabet,
             std::vector<std::pair<TokenString, TokenString>> pairs,
             std::optional<GrowthBound> bound = std::nullopt);
    const AlphabetRef& inputAlphabet() const override;
    const AlphabetRef& outputAlphabet() const override;
    std::optional<TokenString> evaluate(const TokenString& in) const override;
    std::optional<GrowthBound> growthBound() const override;
    std::size_t size() const { return table_.size(); }

private:
    AlphabetRef inAlpha_;
    AlphabetRef outAlpha_;
    std::map<TokenString, TokenString, TokenStringLess> table_;
    std::optional<GrowthBound> bound_;
};

// first, then second; undefined where either leg is. The growth bound, when
// both legs carry one, is the composed bound c2 * c1^d2 with exponent d1*d2
// (dropped if the composed constant overflows).
class ComposedMap final : public TransductionMap {
public:
    ComposedMap(TransductionMapRef first, TransductionMapRef second);
    const AlphabetRef& inputAlphabet() const override;
    const AlphabetRef& outputAlphabet() const override;
    std::optional<TokenString> evaluate(const TokenString& in) const override;
    std::optional<GrowthBound> growthBound() const override;

private:
    TransductionMapRef first_;
    TransductionMapRef second_;
    std::optional<GrowthBound> bound_;
};

struct MeaningReport {
    bool pass = false;
    std::uint64_t checkedCount = 0;  // inputs where all three maps are defined
    std::vector<TokenString> counterexamples;
};

// Does translating then interpreting agree with interpreting directly?
// Compares i2m(t12(s)) with i1m(s) for every s of length <= maxLen on which
// all maps involved are defined.
MeaningReport check_meaning_preservation(const TransductionMap& t12,
                                         const TransductionMap& i1m,
                                         const TransductionMap& i2m,
                                         std::uint32_t maxLen);

} // namespace ggr

#endif // GGR_TRANSDUCTION_MAP_HPP_
