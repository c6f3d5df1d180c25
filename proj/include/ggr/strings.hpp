// strings.hpp -- token alphabets and token strings.
//
// A token is an opaque spelling; strings are finite token sequences. All
// higher layers (transducers, rules, metrics) operate on token ids against a
// fixed Alphabet, never on raw text.
#ifndef GGR_STRINGS_HPP_
#define GGR_STRINGS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ggr/errors.hpp"

namespace ggr {

using TokenId = std::uint32_t;

// Ordered, duplicate-free set of token spellings. The declared order is the
// canonical token order used by every enumeration in the library.
// Spellings must be non-empty, contain no whitespace, '"' or '#', and must
// not collide with format-reserved words ("@eps@", ":").
class Alphabet {
public:
    static std::shared_ptr<const Alphabet> make(std::vector<std::string> tokens);
    // One token per line; '#' starts a comment, blank lines are skipped.
    static std::shared_ptr<const Alphabet> parse(const std::string& text);

    std::size_t size() const { return tokens_.size(); }
    const std::string& spelling(TokenId id) const;
    std::optional<TokenId> find(const std::string& spelling) const;
    TokenId require(const std::string& spelling) const;  // throws Alphabet
    const std::vector<std::string>& tokens() const { return tokens_; }

    std::string print() const;  // one token per line
    bool operator==(const Alphabet& other) const { return tokens_ == other.tokens_; }

private:
    explicit Alphabet(std::vector<std::string> tokens);
    std::vector<std::string> tokens_;
};

using AlphabetRef = std::shared_ptr<const Alphabet>;

// True when both refer to alphabets with identical token lists.
bool same_alphabet(const AlphabetRef& a, const AlphabetRef& b);
void require_same_alphabet(const AlphabetRef& a, const AlphabetRef& b,
                           const char* context);

// A finite sequence of tokens over one alphabet. Value type; comparable with
// length-then-lexicographic order on token ids (the canonical string order).
class TokenString {
public:
    TokenString() = default;
    TokenString(AlphabetRef alphabet, std::vector<TokenId> ids);
    // Splits on whitespace; every piece must be a token of `alphabet`.
    static TokenString parse(const AlphabetRef& alphabet, const std::string& text);

    const AlphabetRef& alphabet() const { return alphabet_; }
    const std::vector<TokenId>& ids() const { return ids_; }
    std::size_t size() const { return ids_.size(); }
    std::size_t length() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    TokenId at(std::size_t i) const { return ids_.at(i); }

    TokenString slice(std::size_t begin, std::size_t end) const;
    TokenString concat(const TokenString& tail) const;
    std::string text() const;  // space-joined spellings

    bool operator==(const TokenString& other) const;
    bool operator!=(const TokenString& other) const { return !(*this == other); }
    // Canonical order: shorter first, then lexicographic by token id.
    bool lexLess(const TokenString& other) const;

private:
    AlphabetRef alphabet_;
    std::vector<TokenId> ids_;
};

struct TokenStringLess {
    bool operator()(const TokenString& a, const TokenString& b) const {
        return a.lexLess(b);
    }
};

} // namespace ggr

#endif // GGR_STRINGS_HPP_
