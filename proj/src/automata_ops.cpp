#include "ggr/automata_ops.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "ggr/util.hpp"

namespace ggr {

Dfa determinize_acceptor(const FiniteTransducer& t, std::size_t stateCap) {
    const std::size_t sigma = t.inputAlphabet()->size();
    auto closure = [&](std::set<std::uint32_t> states) {
        std::deque<std::uint32_t> queue(states.begin(), states.end());
        while (!queue.empty()) {
            std::uint32_t s = queue.front();
            queue.pop_front();
            for (auto ei : t.edgesFrom(s)) {
                const Edge& e = t.edges()[ei];
                if (!e.in && states.insert(e.dst).second) queue.push_back(e.dst);
            }
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
        if (sets.size() >= stateCap)
            fail(ErrorKind::StateLimit,
                 "determinization exceeded " + std::to_string(stateCap) + " states");
        std::uint32_t id = static_cast<std::uint32_t>(sets.size());
        ids.emplace(s, id);
        sets.push_back(std::move(s));
        next.emplace_back(sigma, 0);
        bool acc = false;
        for (auto st : sets.back())
            if (t.halting(st)) {
                acc = true;
                break;
            }
        accepting.push_back(acc ? 1 : 0);
        return id;
    };
    std::uint32_t start = intern(closure({t.initial()}));
    for (std::uint32_t at = 0; at < sets.size(); ++at) {
        for (std::size_t tok = 0; tok < sigma; ++tok) {
            std::set<std::uint32_t> moved;
            for (auto s : sets[at])
                for (auto ei : t.edgesFrom(s)) {
                    const Edge& e = t.edges()[ei];
                    if (e.in && *e.in == static_cast<TokenId>(tok))
                        moved.insert(e.dst);
                }
            next[at][tok] = intern(closure(std::move(moved)));
        }
    }
    return Dfa(t.inputAlphabet(), start, std::move(next), std::move(accepting));
}

namespace {

// Shortest, then lexicographically least, string accepted by `good` and
// rejected by `bad`. BFS expanding tokens in declared order: the first
// satisfying node is reached along exactly that witness.
std::optional<TokenString> shortest_separating(const Dfa& good, const Dfa& bad) {
    const std::size_t sigma = good.alphabet()->size();
    const std::uint64_t width = bad.stateCount();
    auto id = [&](std::uint32_t g, std::uint32_t b) -> std::uint64_t {
        return g * width + b;
    };
    auto satisfies = [&](std::uint32_t g, std::uint32_t b) {
        return good.accepting(g) && !bad.accepting(b);
    };
    if (static_cast<std::uint64_t>(good.stateCount()) * width > (1u << 26))
        fail(ErrorKind::StateLimit, "product automaton too large to search");
    std::vector<char> seen(static_cast<std::size_t>(good.stateCount()) * width, 0);
    struct Crumb {
        std::uint64_t parent;
        TokenId token;
    };
    std::map<std::uint64_t, Crumb> crumbs;
    auto rebuild = [&](std::uint64_t at) {
        std::vector<TokenId> rev;
        while (true) {
            auto it = crumbs.find(at);
            if (it == crumbs.end()) break;
            rev.push_back(it->second.token);
            at = it->second.parent;
        }
        std::reverse(rev.begin(), rev.end());
        return TokenString(good.alphabet(), std::move(rev));
    };
    std::uint64_t startId = id(good.start(), bad.start());
    if (satisfies(good.start(), bad.start()))
        return TokenString(good.alphabet(), {});
    seen[startId] = 1;
    std::deque<std::uint64_t> queue{startId};
    while (!queue.empty()) {
        std::uint64_t at = queue.front();
        queue.pop_front();
        std::uint32_t g = static_cast<std::uint32_t>(at / width);
        std::uint32_t b = static_cast<std::uint32_t>(at % width);
        for (std::size_t tok = 0; tok < sigma; ++tok) {
            std::uint32_t g2 = good.next(g, static_cast<TokenId>(tok));
            std::uint32_t b2 = bad.next(b, static_cast<TokenId>(tok));
            std::uint64_t next = id(g2, b2);
            if (seen[next]) continue;
            seen[next] = 1;
            crumbs[next] = {at, static_cast<TokenId>(tok)};
            if (satisfies(g2, b2)) return rebuild(next);
            queue.push_back(next);
        }
    }
    return std::nullopt;
}

} // namespace

AcceptorSymmetryResult check_quotient_symmetry_acceptor(const FiniteTransducer& t,
                                                        const StatePartition& p,
                                                        std::size_t stateCap) {
    FiniteTransducer q = quotient(t, p);
    Dfa dq = determinize_acceptor(q, stateCap);
    Dfa dm = determinize_acceptor(t, stateCap);
    // L(q) >= L(t) holds by construction; only the converse needs a search.
    auto witness = shortest_separating(dq, dm);
    AcceptorSymmetryResult r;
    r.symmetric = !witness.has_value();
    r.counterexample = std::move(witness);
    return r;
}

namespace {

std::string output_set_text(const std::set<TokenString, TokenStringLess>& outs) {
    std::string s = "{";
    bool first = true;
    for (const auto& o : outs) {
        s += first ? " \"" : ", \"";
        s += o.text();
        s += '"';
        first = false;
    }
    s += first ? "}" : " }";
    return s;
}

} // namespace

TransducerSymmetryResult check_quotient_symmetry_transducer(
    const FiniteTransducer& t, const StatePartition& p, std::uint32_t maxLen) {
    if (!t.deterministic())
        fail(ErrorKind::Validation,
             "transducer symmetry check requires a deterministic machine");
    FiniteTransducer q = quotient(t, p);
    const AlphabetRef& sigma = t.inputAlphabet();

    using OutSet = std::set<TokenString, TokenStringLess>;
    // outputs of q from `state` consuming input[pos:], memoized per input
    std::map<std::pair<std::uint32_t, std::size_t>, OutSet> memo;
    const TokenString* current = nullptr;
    auto outputs = [&](auto&& self, std::uint32_t state, std::size_t pos) -> OutSet {
        auto key = std::make_pair(state, pos);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        OutSet result;
        if (pos == current->length()) {
            if (q.halting(state)) result.insert(TokenString(q.outputAlphabet(), {}));
        } else {
            TokenId want = current->ids()[pos];
            for (auto ei : q.edgesFrom(state)) {
                const Edge& e = q.edges()[ei];
                if (!e.in || *e.in != want) continue;
                for (const auto& suffix : self(self, e.dst, pos + 1))
                    result.insert(e.out.concat(suffix));
            }
        }
        memo.emplace(key, result);
        return result;
    };

    TransducerSymmetryResult r;
    std::vector<TokenId> word;
    auto visit = [&](auto&& self, std::size_t remaining) -> bool {
        if (remaining == 0) {
            TokenString input(sigma, word);
            current = &input;
            memo.clear();
            OutSet got = outputs(outputs, q.initial(), 0);
            auto expected = run(t, input);
            bool ok = expected ? (got.size() == 1 && *got.begin() == *expected)
                               : got.empty();
            if (ok) return true;
            r.counterexample = input;
            r.detail = "original " +
                       (expected ? "\"" + expected->text() + "\"" : std::string("undefined")) +
                       ", quotient " + output_set_text(got);
            return false;
        }
        for (TokenId tok = 0; tok < sigma->size(); ++tok) {
            word.push_back(tok);
            bool ok = self(self, remaining - 1);
            word.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    for (std::uint32_t len = 0; len <= maxLen; ++len) {
        if (!visit(visit, len)) {
            r.symmetric = false;
            r.checkedLen = len;
            return r;
        }
    }
    r.symmetric = true;
    r.checkedLen = maxLen;
    return r;
}

} // namespace ggr
