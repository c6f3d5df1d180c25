#include "ggr/strings.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

#include "ggr/util.hpp"

namespace ggr {

namespace {

bool valid_token_spelling(const std::string& s) {
    if (s.empty()) return false;
    if (s == "@eps@" || s == ":") return false;  // format-reserved
    for (char c : s) {
        if (c == '"' || c == '#') return false;
        if (std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

Alphabet::Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

std::shared_ptr<const Alphabet> Alphabet::make(std::vector<std::string> tokens) {
    if (tokens.empty())
        fail(ErrorKind::Validation, "alphabet must contain at least one token");
    std::unordered_set<std::string> seen;
    for (const auto& t : tokens) {
        if (!valid_token_spelling(t))
            fail(ErrorKind::Validation, "invalid token spelling: \"" + t + "\"");
        if (!seen.insert(t).second)
            fail(ErrorKind::Validation, "duplicate token in alphabet: \"" + t + "\"");
    }
    return std::shared_ptr<const Alphabet>(new Alphabet(std::move(tokens)));
}

std::shared_ptr<const Alphabet> Alphabet::parse(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto pieces = split_ws(line);
        if (pieces.empty()) continue;
        if (pieces.size() > 1)
            fail(ErrorKind::Parse, "alphabet files carry one token per line, got: " + line);
        tokens.push_back(pieces[0]);
    }
    return make(std::move(tokens));
}

const std::string& Alphabet::spelling(TokenId id) const {
    if (id >= tokens_.size())
        fail(ErrorKind::Internal, "token id out of range");
    return tokens_[id];
}

std::optional<TokenId> Alphabet::find(const std::string& spelling) const {
    for (std::size_t i = 0; i < tokens_.size(); ++i)
        if (tokens_[i] == spelling) return static_cast<TokenId>(i);
    return std::nullopt;
}

TokenId Alphabet::require(const std::string& spelling) const {
    auto id = find(spelling);
    if (!id)
        fail(ErrorKind::Alphabet, "token \"" + spelling + "\" is not in the alphabet");
    return *id;
}

std::string Alphabet::print() const {
    std::string out;
    for (const auto& t : tokens_) {
        out += t;
        out += '\n';
    }
    return out;
}

bool same_alphabet(const AlphabetRef& a, const AlphabetRef& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

void require_same_alphabet(const AlphabetRef& a, const AlphabetRef& b,
                           const char* context) {
    if (!same_alphabet(a, b))
        fail(ErrorKind::Alphabet, std::string("alphabet mismatch in ") + context);
}

TokenString::TokenString(AlphabetRef alphabet, std::vector<TokenId> ids)
    : alphabet_(std::move(alphabet)), ids_(std::move(ids)) {
    if (!alphabet_)
        fail(ErrorKind::Internal, "token string without alphabet");
    for (TokenId id : ids_)
        if (id >= alphabet_->size())
            fail(ErrorKind::Internal, "token id out of range for alphabet");
}

TokenString TokenString::parse(const AlphabetRef& alphabet, const std::string& text) {
    std::vector<TokenId> ids;
    for (const auto& piece : split_ws(text))
        ids.push_back(alphabet->require(piece));
    return TokenString(alphabet, std::move(ids));
}

TokenString TokenString::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > ids_.size())
        fail(ErrorKind::Internal, "bad slice bounds");
    return TokenString(alphabet_,
                       std::vector<TokenId>(ids_.begin() + begin, ids_.begin() + end));
}

TokenString TokenString::concat(const TokenString& tail) const {
    require_same_alphabet(alphabet_, tail.alphabet_, "concat");
    std::vector<TokenId> ids = ids_;
    ids.insert(ids.end(), tail.ids_.begin(), tail.ids_.end());
    return TokenString(alphabet_, std::move(ids));
}

std::string TokenString::text() const {
    std::string out;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (i) out += ' ';
        out += alphabet_->spelling(ids_[i]);
    }
    return out;
}

bool TokenString::operator==(const TokenString& other) const {
    return same_alphabet(alphabet_, other.alphabet_) && ids_ == other.ids_;
}

bool TokenString::lexLess(const TokenString& other) const {
    if (ids_.size() != other.ids_.size()) return ids_.size() < other.ids_.size();
    return ids_ < other.ids_;
}

} // namespace ggr
