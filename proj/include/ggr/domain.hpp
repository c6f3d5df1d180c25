// domain.hpp -- variable domains as complete deterministic acceptors.
#ifndef GGR_DOMAIN_HPP_
#define GGR_DOMAIN_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ggr/strings.hpp"

namespace ggr {

// Complete DFA over an alphabet: the transition function is total, so
// membership is a plain walk. States are dense indices.
class Dfa {
public:
    Dfa(AlphabetRef alphabet, std::uint32_t start,
        std::vector<std::vector<std::uint32_t>> next, std::vector<char> accept);

    const AlphabetRef& alphabet() const { return alphabet_; }
    std::uint32_t stateCount() const { return static_cast<std::uint32_t>(next_.size()); }
    std::uint32_t start() const { return start_; }
    std::uint32_t next(std::uint32_t state, TokenId token) const {
        return next_[state][token];
    }
    bool accepting(std::uint32_t state) const { return accept_[state] != 0; }

    bool accepts(const TokenString& s) const;
    Dfa complemented() const;

private:
    AlphabetRef alphabet_;
    std::uint32_t start_;
    std::vector<std::vector<std::uint32_t>> next_;  // [state][token]
    std::vector<char> accept_;
};

// How a domain was declared; kept so parsed files print back to the same form.
struct DomainSpec {
    enum class Kind { FiniteSet, SigmaStar, SigmaPlus, SigmaOne, Regex };
    Kind kind = Kind::SigmaStar;
    std::vector<TokenString> strings;  // FiniteSet only
    std::string regexSource;           // Regex only, original text
};

// A set of token strings a rule variable may range over. Membership is
// decided by a complete DFA; enumeration and counting run over the same
// automaton so the three views cannot drift apart. Immutable, cheap to copy.
class VariableDomain {
public:
    static VariableDomain finiteSet(const AlphabetRef& alphabet,
                                    std::vector<TokenString> strings);
    static VariableDomain sigmaStar(const AlphabetRef& alphabet);
    static VariableDomain sigmaPlus(const AlphabetRef& alphabet);
    static VariableDomain sigmaOne(const AlphabetRef& alphabet);
    // Token-level regular expression; see rule file format for the syntax.
    static VariableDomain fromRegex(const AlphabetRef& alphabet,
                                    const std::string& source);

    const AlphabetRef& alphabet() const;
    const DomainSpec& spec() const;
    const Dfa& dfa() const;

    bool contains(const TokenString& s) const;
    // Number of members of exactly this length, without materializing them.
    std::uint64_t countByLength(std::uint32_t length) const;
    // All members of exactly this length, lexicographic by token order.
    std::vector<TokenString> enumerateByLength(std::uint32_t length) const;

    bool isEmpty() const;
    std::optional<std::uint32_t> minLength() const;  // nullopt iff empty
    // nullopt iff members of unbounded length exist.
    std::optional<std::uint32_t> maxLength() const;
    bool isFinite() const { return isEmpty() || maxLength().has_value(); }

    // Declaration body as it appears in rule files, e.g. `SIGMA+` or
    // `{ "zup", "fep" }` or `regex("a"* "b")`.
    std::string printExpr() const;

    bool operator==(const VariableDomain& other) const;

private:
    struct Impl;
    explicit VariableDomain(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

} // namespace ggr

#endif // GGR_DOMAIN_HPP_
