#include "ggr/domain.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

#include "ggr/util.hpp"

namespace ggr {

Dfa::Dfa(AlphabetRef alphabet, std::uint32_t start,
         std::vector<std::vector<std::uint32_t>> next, std::vector<char> accept)
    : alphabet_(std::move(alphabet)), start_(start), next_(std::move(next)),
      accept_(std::move(accept)) {
    if (!alphabet_ || next_.empty() || next_.size() != accept_.size() ||
        start_ >= next_.size())
        fail(ErrorKind::Internal, "malformed DFA");
    for (const auto& row : next_) {
        if (row.size() != alphabet_->size())
            fail(ErrorKind::Internal, "DFA transition table is not total");
        for (auto s : row)
            if (s >= next_.size())
                fail(ErrorKind::Internal, "DFA transition target out of range");
    }
}

bool Dfa::accepts(const TokenString& s) const {
    require_same_alphabet(alphabet_, s.alphabet(), "Dfa::accepts");
    std::uint32_t state = start_;
    for (TokenId t : s.ids()) state = next_[state][t];
    return accepting(state);
}

Dfa Dfa::complemented() const {
    std::vector<char> accept(accept_.size());
    for (std::size_t i = 0; i < accept_.size(); ++i) accept[i] = accept_[i] ? 0 : 1;
    return Dfa(alphabet_, start_, next_, std::move(accept));
}

// ---------------------------------------------------------------------------
// VariableDomain

struct VariableDomain::Impl {
    DomainSpec spec;
    Dfa dfa;
    bool empty = true;
    std::optional<std::uint32_t> minLen;
    std::optional<std::uint32_t> maxLen;  // nullopt = unbounded

    Impl(DomainSpec s, Dfa d) : spec(std::move(s)), dfa(std::move(d)) {
        analyze();
    }

    void analyze() {
        const std::uint32_t n = dfa.stateCount();
        const std::size_t sigma = dfa.alphabet()->size();
        // Forward reachability and shortest accepting distance.
        std::vector<std::uint32_t> dist(n, UINT32_MAX);
        std::deque<std::uint32_t> queue;
        dist[dfa.start()] = 0;
        queue.push_back(dfa.start());
        while (!queue.empty()) {
            std::uint32_t s = queue.front();
            queue.pop_front();
            for (std::size_t t = 0; t < sigma; ++t) {
                std::uint32_t d = dfa.next(s, static_cast<TokenId>(t));
                if (dist[d] == UINT32_MAX) {
                    dist[d] = dist[s] + 1;
                    queue.push_back(d);
                }
            }
        }
        for (std::uint32_t s = 0; s < n; ++s) {
            if (dist[s] != UINT32_MAX && dfa.accepting(s)) {
                if (!minLen || dist[s] < *minLen) minLen = dist[s];
            }
        }
        empty = !minLen.has_value();
        if (empty) {
            maxLen = 0;
            return;
        }
        // Co-reachability to an accepting state.
        std::vector<std::vector<std::uint32_t>> rev(n);
        for (std::uint32_t s = 0; s < n; ++s)
            for (std::size_t t = 0; t < sigma; ++t)
                rev[dfa.next(s, static_cast<TokenId>(t))].push_back(s);
        std::vector<char> coreach(n, 0);
        for (std::uint32_t s = 0; s < n; ++s)
            if (dfa.accepting(s)) {
                coreach[s] = 1;
                queue.push_back(s);
            }
        while (!queue.empty()) {
            std::uint32_t s = queue.front();
            queue.pop_front();
            for (std::uint32_t p : rev[s])
                if (!coreach[p]) {
                    coreach[p] = 1;
                    queue.push_back(p);
                }
        }
        // Useful = reachable and co-reachable. A cycle through useful states
        // means unbounded member length; otherwise the longest start-to-accept
        // path in the useful DAG is the maximum length.
        std::vector<char> useful(n, 0);
        for (std::uint32_t s = 0; s < n; ++s)
            useful[s] = (dist[s] != UINT32_MAX && coreach[s]) ? 1 : 0;
        // Kahn's algorithm on the useful subgraph (parallel edges collapse).
        std::vector<std::set<std::uint32_t>> succ(n);
        std::vector<std::uint32_t> indeg(n, 0);
        for (std::uint32_t s = 0; s < n; ++s) {
            if (!useful[s]) continue;
            for (std::size_t t = 0; t < sigma; ++t) {
                std::uint32_t d = dfa.next(s, static_cast<TokenId>(t));
                if (useful[d]) succ[s].insert(d);
            }
        }
        for (std::uint32_t s = 0; s < n; ++s)
            if (useful[s])
                for (std::uint32_t d : succ[s]) ++indeg[d];
        std::vector<std::uint32_t> topo;
        for (std::uint32_t s = 0; s < n; ++s)
            if (useful[s] && indeg[s] == 0) queue.push_back(s);
        while (!queue.empty()) {
            std::uint32_t s = queue.front();
            queue.pop_front();
            topo.push_back(s);
            for (std::uint32_t d : succ[s])
                if (--indeg[d] == 0) queue.push_back(d);
        }
        std::size_t usefulCount = 0;
        for (std::uint32_t s = 0; s < n; ++s) usefulCount += useful[s] ? 1 : 0;
        if (topo.size() != usefulCount) {
            maxLen = std::nullopt;  // cycle among useful states
            return;
        }
        std::vector<std::int64_t> longest(n, -1);
        if (useful[dfa.start()]) longest[dfa.start()] = 0;
        std::int64_t best = -1;
        for (std::uint32_t s : topo) {
            if (longest[s] < 0) continue;
            if (dfa.accepting(s)) best = std::max(best, longest[s]);
            for (std::uint32_t d : succ[s])
                longest[d] = std::max(longest[d], longest[s] + 1);
        }
        maxLen = static_cast<std::uint32_t>(best < 0 ? 0 : best);
    }
};

VariableDomain::VariableDomain(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

const AlphabetRef& VariableDomain::alphabet() const { return impl_->dfa.alphabet(); }
const DomainSpec& VariableDomain::spec() const { return impl_->spec; }
const Dfa& VariableDomain::dfa() const { return impl_->dfa; }
bool VariableDomain::isEmpty() const { return impl_->empty; }

std::optional<std::uint32_t> VariableDomain::minLength() const {
    return impl_->empty ? std::nullopt : impl_->minLen;
}

std::optional<std::uint32_t> VariableDomain::maxLength() const {
    return impl_->maxLen;
}

bool VariableDomain::contains(const TokenString& s) const {
    return impl_->dfa.accepts(s);
}

std::uint64_t VariableDomain::countByLength(std::uint32_t length) const {
    const Dfa& dfa = impl_->dfa;
    const std::size_t sigma = dfa.alphabet()->size();
    std::vector<std::uint64_t> cnt(dfa.stateCount(), 0);
    cnt[dfa.start()] = 1;
    for (std::uint32_t step = 0; step < length; ++step) {
        std::vector<std::uint64_t> next(dfa.stateCount(), 0);
        for (std::uint32_t s = 0; s < dfa.stateCount(); ++s) {
            if (cnt[s] == 0) continue;
            for (std::size_t t = 0; t < sigma; ++t) {
                std::uint32_t d = dfa.next(s, static_cast<TokenId>(t));
                next[d] = checked_add(next[d], cnt[s]);
            }
        }
        cnt.swap(next);
    }
    std::uint64_t total = 0;
    for (std::uint32_t s = 0; s < dfa.stateCount(); ++s)
        if (dfa.accepting(s)) total = checked_add(total, cnt[s]);
    return total;
}

std::vector<TokenString> VariableDomain::enumerateByLength(std::uint32_t length) const {
    const Dfa& dfa = impl_->dfa;
    const std::size_t sigma = dfa.alphabet()->size();
    // reach[k][s]: an accepting state lies exactly k steps ahead of s.
    std::vector<std::vector<char>> reach(length + 1,
                                         std::vector<char>(dfa.stateCount(), 0));
    for (std::uint32_t s = 0; s < dfa.stateCount(); ++s)
        reach[0][s] = dfa.accepting(s) ? 1 : 0;
    for (std::uint32_t k = 1; k <= length; ++k)
        for (std::uint32_t s = 0; s < dfa.stateCount(); ++s)
            for (std::size_t t = 0; t < sigma && !reach[k][s]; ++t)
                if (reach[k - 1][dfa.next(s, static_cast<TokenId>(t))])
                    reach[k][s] = 1;

    std::vector<TokenString> out;
    std::vector<TokenId> word(length);
    // DFS in token order yields lexicographic enumeration.
    auto walk = [&](auto&& self, std::uint32_t state, std::uint32_t depth) -> void {
        if (depth == length) {
            if (dfa.accepting(state))
                out.emplace_back(dfa.alphabet(), word);
            return;
        }
        for (std::size_t t = 0; t < sigma; ++t) {
            std::uint32_t d = dfa.next(state, static_cast<TokenId>(t));
            if (!reach[length - depth - 1][d]) continue;
            word[depth] = static_cast<TokenId>(t);
            self(self, d, depth + 1);
        }
    };
    if (reach[length][dfa.start()]) walk(walk, dfa.start(), 0);
    return out;
}

bool VariableDomain::operator==(const VariableDomain& other) const {
    if (impl_ == other.impl_) return true;
    if (!same_alphabet(alphabet(), other.alphabet())) return false;
    const DomainSpec& a = impl_->spec;
    const DomainSpec& b = other.impl_->spec;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case DomainSpec::Kind::FiniteSet: {
            if (a.strings.size() != b.strings.size()) return false;
            for (std::size_t i = 0; i < a.strings.size(); ++i)
                if (!(a.strings[i] == b.strings[i])) return false;
            return true;
        }
        case DomainSpec::Kind::Regex:
            return a.regexSource == b.regexSource;
        default:
            return true;
    }
}

namespace {

// Trie-backed complete DFA for a finite string set; last state is the sink.
Dfa build_finite_dfa(const AlphabetRef& alphabet,
                     const std::vector<TokenString>& strings) {
    const std::size_t sigma = alphabet->size();
    std::vector<std::vector<std::uint32_t>> next;
    std::vector<char> accept;
    auto add_state = [&]() {
        next.emplace_back(sigma, 0);
        accept.push_back(0);
        return static_cast<std::uint32_t>(next.size() - 1);
    };
    std::uint32_t root = add_state();
    std::vector<std::map<TokenId, std::uint32_t>> kids(1);
    for (const auto& s : strings) {
        std::uint32_t at = root;
        for (TokenId t : s.ids()) {
            auto it = kids[at].find(t);
            if (it == kids[at].end()) {
                std::uint32_t fresh = add_state();
                kids.resize(next.size());
                kids[at][t] = fresh;
                at = fresh;
            } else {
                at = it->second;
            }
        }
        accept[at] = 1;
    }
    std::uint32_t sink = add_state();
    kids.resize(next.size());
    for (std::uint32_t s = 0; s < next.size(); ++s)
        for (std::size_t t = 0; t < sigma; ++t) {
            auto it = kids[s].find(static_cast<TokenId>(t));
            next[s][t] = it == kids[s].end() ? sink : it->second;
        }
    return Dfa(alphabet, root, std::move(next), std::move(accept));
}

// --- token-level regular expressions -------------------------------------
//
//   alt     := cat ("|" cat)*
//   cat     := postfix+
//   postfix := atom ("*" | "+" | "?")*
//   atom    := QUOTED | "(" alt ")"
//
// QUOTED is a double-quoted literal; whitespace inside splits it into a
// concatenation of tokens.

struct RegexLexer {
    const std::string& src;
    std::size_t pos = 0;

    explicit RegexLexer(const std::string& s) : src(s) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
            ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    char take() {
        skip_ws();
        if (pos >= src.size())
            fail(ErrorKind::Domain, "unexpected end of regex: " + src);
        return src[pos++];
    }
    std::string quoted() {
        skip_ws();
        if (pos >= src.size() || src[pos] != '"')
            fail(ErrorKind::Domain, "expected quoted token in regex: " + src);
        ++pos;
        std::string body;
        while (pos < src.size() && src[pos] != '"') body += src[pos++];
        if (pos >= src.size())
            fail(ErrorKind::Domain, "unterminated quote in regex: " + src);
        ++pos;
        return body;
    }
};

struct Nfa {
    // transition: (state, token-or-epsilon) -> states
    struct Arc {
        std::optional<TokenId> token;
        std::uint32_t dst;
    };
    std::vector<std::vector<Arc>> arcs;
    std::uint32_t add_state() {
        arcs.emplace_back();
        return static_cast<std::uint32_t>(arcs.size() - 1);
    }
    void link(std::uint32_t a, std::optional<TokenId> t, std::uint32_t b) {
        arcs[a].push_back({t, b});
    }
};

struct Frag {
    std::uint32_t in;
    std::uint32_t out;
};

struct RegexParser {
    RegexLexer lex;
    const AlphabetRef& alphabet;
    Nfa& nfa;

    RegexParser(const std::string& src, const AlphabetRef& alpha, Nfa& n)
        : lex(src), alphabet(alpha), nfa(n) {}

    Frag parse() {
        Frag f = alt();
        if (!lex.done())
            fail(ErrorKind::Domain, "trailing input in regex: " + lex.src);
        return f;
    }

    Frag alt() {
        Frag left = cat();
        while (lex.peek() == '|') {
            lex.take();
            Frag right = cat();
            std::uint32_t in = nfa.add_state();
            std::uint32_t out = nfa.add_state();
            nfa.link(in, std::nullopt, left.in);
            nfa.link(in, std::nullopt, right.in);
            nfa.link(left.out, std::nullopt, out);
            nfa.link(right.out, std::nullopt, out);
            left = {in, out};
        }
        return left;
    }

    bool at_atom() {
        char c = lex.peek();
        return c == '"' || c == '(';
    }

    Frag cat() {
        if (!at_atom())
            fail(ErrorKind::Domain, "expected token or group in regex: " + lex.src);
        Frag left = postfix();
        while (at_atom()) {
            Frag right = postfix();
            nfa.link(left.out, std::nullopt, right.in);
            left = {left.in, right.out};
        }
        return left;
    }

    Frag postfix() {
        Frag f = atom();
        while (true) {
            char c = lex.peek();
            if (c != '*' && c != '+' && c != '?') break;
            lex.take();
            std::uint32_t in = nfa.add_state();
            std::uint32_t out = nfa.add_state();
            nfa.link(in, std::nullopt, f.in);
            nfa.link(f.out, std::nullopt, out);
            if (c == '*' || c == '?') nfa.link(in, std::nullopt, out);
            if (c == '*' || c == '+') nfa.link(f.out, std::nullopt, f.in);
            f = {in, out};
        }
        return f;
    }

    Frag atom() {
        if (lex.peek() == '(') {
            lex.take();
            Frag f = alt();
            if (lex.take() != ')')
                fail(ErrorKind::Domain, "expected ')' in regex: " + lex.src);
            return f;
        }
        std::string body = lex.quoted();
        auto pieces = split_ws(body);
        if (pieces.empty())
            fail(ErrorKind::Domain, "empty quoted token in regex: " + lex.src);
        std::uint32_t in = nfa.add_state();
        std::uint32_t at = in;
        for (const auto& piece : pieces) {
            TokenId t = alphabet->require(piece);
            std::uint32_t nxt = nfa.add_state();
            nfa.link(at, t, nxt);
            at = nxt;
        }
        return {in, at};
    }
};

Dfa nfa_to_dfa(const Nfa& nfa, std::uint32_t start, std::uint32_t accept,
               const AlphabetRef& alphabet) {
    const std::size_t sigma = alphabet->size();
    auto closure = [&](std::set<std::uint32_t> states) {
        std::deque<std::uint32_t> queue(states.begin(), states.end());
        while (!queue.empty()) {
            std::uint32_t s = queue.front();
            queue.pop_front();
            for (const auto& arc : nfa.arcs[s])
                if (!arc.token && states.insert(arc.dst).second)
                    queue.push_back(arc.dst);
        }
        return states;
    };
    std::map<std::set<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::set<std::uint32_t>> sets;
    std::vector<std::vector<std::uint32_t>> next;
    std::vector<char> accepting;
    auto intern = [&](std::set<std::uint32_t> s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(sets.size());
        ids.emplace(s, id);
        sets.push_back(std::move(s));
        next.emplace_back(sigma, 0);
        accepting.push_back(sets.back().count(accept) ? 1 : 0);
        return id;
    };
    std::uint32_t dstart = intern(closure({start}));
    for (std::uint32_t at = 0; at < sets.size(); ++at) {
        for (std::size_t t = 0; t < sigma; ++t) {
            std::set<std::uint32_t> moved;
            for (std::uint32_t s : sets[at])
                for (const auto& arc : nfa.arcs[s])
                    if (arc.token && *arc.token == static_cast<TokenId>(t))
                        moved.insert(arc.dst);
            next[at][t] = intern(closure(std::move(moved)));
        }
    }
    return Dfa(alphabet, dstart, std::move(next), std::move(accepting));
}

} // namespace

VariableDomain VariableDomain::finiteSet(const AlphabetRef& alphabet,
                                         std::vector<TokenString> strings) {
    for (const auto& s : strings)
        require_same_alphabet(alphabet, s.alphabet(), "finiteSet domain");
    std::sort(strings.begin(), strings.end(),
              [](const TokenString& a, const TokenString& b) { return a.lexLess(b); });
    strings.erase(std::unique(strings.begin(), strings.end()), strings.end());
    DomainSpec spec;
    spec.kind = DomainSpec::Kind::FiniteSet;
    spec.strings = strings;
    Dfa dfa = build_finite_dfa(alphabet, strings);
    return VariableDomain(
        std::make_shared<const Impl>(std::move(spec), std::move(dfa)));
}

VariableDomain VariableDomain::sigmaStar(const AlphabetRef& alphabet) {
    std::vector<std::vector<std::uint32_t>> next{
        std::vector<std::uint32_t>(alphabet->size(), 0)};
    DomainSpec spec;
    spec.kind = DomainSpec::Kind::SigmaStar;
    return VariableDomain(std::make_shared<const Impl>(
        std::move(spec), Dfa(alphabet, 0, std::move(next), {1})));
}

VariableDomain VariableDomain::sigmaPlus(const AlphabetRef& alphabet) {
    std::vector<std::vector<std::uint32_t>> next{
        std::vector<std::uint32_t>(alphabet->size(), 1),
        std::vector<std::uint32_t>(alphabet->size(), 1)};
    DomainSpec spec;
    spec.kind = DomainSpec::Kind::SigmaPlus;
    return VariableDomain(std::make_shared<const Impl>(
        std::move(spec), Dfa(alphabet, 0, std::move(next), {0, 1})));
}

VariableDomain VariableDomain::sigmaOne(const AlphabetRef& alphabet) {
    std::vector<std::vector<std::uint32_t>> next{
        std::vector<std::uint32_t>(alphabet->size(), 1),
        std::vector<std::uint32_t>(alphabet->size(), 2),
        std::vector<std::uint32_t>(alphabet->size(), 2)};
    DomainSpec spec;
    spec.kind = DomainSpec::Kind::SigmaOne;
    return VariableDomain(std::make_shared<const Impl>(
        std::move(spec), Dfa(alphabet, 0, std::move(next), {0, 1, 0})));
}

VariableDomain VariableDomain::fromRegex(const AlphabetRef& alphabet,
                                         const std::string& source) {
    Nfa nfa;
    RegexParser parser(source, alphabet, nfa);
    Frag f = parser.parse();
    DomainSpec spec;
    spec.kind = DomainSpec::Kind::Regex;
    spec.regexSource = source;
    return VariableDomain(std::make_shared<const Impl>(
        std::move(spec), nfa_to_dfa(nfa, f.in, f.out, alphabet)));
}

std::string VariableDomain::printExpr() const {
    const DomainSpec& spec = impl_->spec;
    switch (spec.kind) {
        case DomainSpec::Kind::SigmaStar: return "SIGMA*";
        case DomainSpec::Kind::SigmaPlus: return "SIGMA+";
        case DomainSpec::Kind::SigmaOne: return "SIGMA1";
        case DomainSpec::Kind::Regex: return "regex(" + spec.regexSource + ")";
        case DomainSpec::Kind::FiniteSet: {
            std::string out = "{";
            for (std::size_t i = 0; i < spec.strings.size(); ++i) {
                out += i ? ", \"" : " \"";
                out += spec.strings[i].text();
                out += '"';
            }
            out += spec.strings.empty() ? "}" : " }";
            return out;
        }
    }
    fail(ErrorKind::Internal, "unknown domain kind");
}

} // namespace ggr
