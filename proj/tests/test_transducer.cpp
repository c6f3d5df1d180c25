#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "ggr/automata_ops.hpp"
#include "ggr/errors.hpp"
#include "ggr/transducer.hpp"
#include "ggr/transduction_map.hpp"

using namespace ggr;

namespace {

// --- independent oracles ---------------------------------------------------

// Plain deterministic path walk over a (src, token) -> edge index built here,
// sidestepping the library's adjacency structures.
std::optional<TokenString> walk_oracle(const FiniteTransducer& t,
                                       const TokenString& s) {
    std::map<std::pair<std::uint32_t, TokenId>, const Edge*> table;
    for (const auto& e : t.edges())
        if (e.in) table[{e.src, *e.in}] = &e;
    std::uint32_t state = t.initial();
    std::vector<TokenId> out;
    for (TokenId tok : s.ids()) {
        auto it = table.find({state, tok});
        if (it == table.end()) return std::nullopt;
        for (TokenId o : it->second->out.ids()) out.push_back(o);
        state = it->second->dst;
    }
    if (!t.halting(state)) return std::nullopt;
    return TokenString(t.outputAlphabet(), std::move(out));
}

// Acceptance by subset simulation (epsilon-aware), independent of the
// library's determinization.
bool nfa_accepts(const FiniteTransducer& t, const TokenString& s) {
    auto close = [&](std::set<std::uint32_t>& states) {
        std::deque<std::uint32_t> queue(states.begin(), states.end());
        while (!queue.empty()) {
            std::uint32_t at = queue.front();
            queue.pop_front();
            for (const auto& e : t.edges())
                if (e.src == at && !e.in && states.insert(e.dst).second)
                    queue.push_back(e.dst);
        }
    };
    std::set<std::uint32_t> states{t.initial()};
    close(states);
    for (TokenId tok : s.ids()) {
        std::set<std::uint32_t> next;
        for (const auto& e : t.edges())
            if (e.in && *e.in == tok && states.count(e.src)) next.insert(e.dst);
        close(next);
        states = std::move(next);
        if (states.empty()) return false;
    }
    for (auto st : states)
        if (t.halting(st)) return true;
    return false;
}

// Bounded exhaustive language comparison between an acceptor m and its
// quotient q, by breadth-first search over (m state, q state-subset) pairs.
// Sound and complete for all strings of length <= bound without enumerating
// them. Reports the earliest length at which each inclusion fails.
struct LanguageCompare {
    std::optional<std::uint32_t> mNotQ;  // some string in L(m) \ L(q)
    std::optional<std::uint32_t> qNotM;  // some string in L(q) \ L(m)
};
LanguageCompare compare_languages(const FiniteTransducer& m,
                                  const FiniteTransducer& q, std::uint32_t bound) {
    using QSet = std::vector<std::uint32_t>;
    using Node = std::pair<std::int64_t, QSet>;  // m state or -1 when dead
    const std::size_t sigma = m.inputAlphabet()->size();
    auto mAccepts = [&](std::int64_t s) { return s >= 0 && m.halting(static_cast<std::uint32_t>(s)); };
    auto qAccepts = [&](const QSet& set) {
        for (auto s : set)
            if (q.halting(s)) return true;
        return false;
    };
    LanguageCompare out;
    std::set<Node> seen;
    std::deque<std::pair<Node, std::uint32_t>> queue;
    Node start{static_cast<std::int64_t>(m.initial()), {q.initial()}};
    seen.insert(start);
    queue.push_back({start, 0});
    while (!queue.empty()) {
        auto [node, depth] = queue.front();
        queue.pop_front();
        bool ma = mAccepts(node.first), qa = qAccepts(node.second);
        if (ma && !qa && !out.mNotQ) out.mNotQ = depth;
        if (qa && !ma && !out.qNotM) out.qNotM = depth;
        if (depth == bound || (out.mNotQ && out.qNotM)) continue;
        for (std::size_t tok = 0; tok < sigma; ++tok) {
            std::int64_t m2 = -1;
            if (node.first >= 0)
                for (const auto& e : m.edges())
                    if (e.in && *e.in == tok &&
                        e.src == static_cast<std::uint32_t>(node.first)) {
                        m2 = e.dst;
                        break;  // m is deterministic by construction
                    }
            std::set<std::uint32_t> q2set;
            for (const auto& e : q.edges())
                if (e.in && *e.in == tok &&
                    std::find(node.second.begin(), node.second.end(), e.src) !=
                        node.second.end())
                    q2set.insert(e.dst);
            Node next{m2, QSet(q2set.begin(), q2set.end())};
            if (seen.insert(next).second) queue.push_back({next, depth + 1});
        }
    }
    return out;
}

FiniteTransducer identity_machine(const AlphabetRef& alpha) {
    std::vector<Edge> edges;
    for (TokenId t = 0; t < alpha->size(); ++t)
        edges.push_back({0, t, TokenString(alpha, {t}), 0});
    return FiniteTransducer(alpha, alpha, 1, 0, {0}, std::move(edges));
}

} // namespace

TEST_CASE("growth bound arithmetic is exact") {
    GrowthBound b(5, 3, 1);
    CHECK(b.holds(3, 5));    // 5 <= 5
    CHECK(!b.holds(3, 6));   // 6 > 5
    CHECK(b.holds(0, 0));
    CHECK(!b.holds(0, 1));
    GrowthBound sq = GrowthBound::integer(2, 2);
    CHECK(sq.holds(3, 18));
    CHECK(!sq.holds(3, 19));
    CHECK(GrowthBound(10, 4, 1).print() == "5/2");  // reduced
    CHECK(GrowthBound::integer(3).print() == "3");
    CHECK(GrowthBound(1, 3, 1).cTDouble() * 3.0 >= 1.0);  // rounded up
    CHECK_THROWS_AS(GrowthBound(0, 1, 1), Error);
    CHECK_THROWS_AS(GrowthBound(1, 1, 0), Error);
    // enormous inputs saturate on the safe side
    CHECK(GrowthBound::integer(2, 10).holds(UINT64_MAX / 2, UINT64_MAX));
}

TEST_CASE("transducer text format round-trips") {
    const char* text =
        "# a two-state machine\n"
        "inputs: a b\n"
        "outputs: x y\n"
        "initial: p\n"
        "final: p q\n"
        "p q a : x x\n"
        "q p b :\n"
        "p p @eps@ : y\n";
    auto t = FiniteTransducer::parse(text);
    CHECK(t.stateCount() == 2);
    CHECK(t.initial() == 0);
    CHECK(t.halting(0));
    CHECK(t.halting(1));
    CHECK(t.edges().size() == 3);
    CHECK(!t.deterministic());  // has an epsilon edge
    auto printed = t.print();
    auto reparsed = FiniteTransducer::parse(printed);
    CHECK(reparsed.print() == printed);

    CHECK_THROWS_AS(FiniteTransducer::parse("inputs: a\ninitial: s\n"), Error);
    CHECK_THROWS_AS(
        FiniteTransducer::parse("inputs: a\noutputs: x\ninitial: s\ns s a x\n"),
        Error);  // missing ':'
    CHECK_THROWS_AS(FiniteTransducer::parse(
                        "inputs: a\noutputs: x\ninitial: s\ns s q : x\n"),
                    Error);  // 'q' is not an input token
}

TEST_CASE("run: pinned examples") {
    auto alpha = Alphabet::make({"a", "b"});
    auto ident = identity_machine(alpha);
    CHECK(run(ident, TokenString::parse(alpha, "a b a"))->text() == "a b a");
    CHECK(run(ident, TokenString::parse(alpha, ""))->text() == "");

    auto xa = Alphabet::make({"a"});
    auto xo = Alphabet::make({"x"});
    FiniteTransducer doubler(
        xa, xo, 2, 0, {1},
        {{0, TokenId{0}, TokenString::parse(xo, "x x"), 1},
         {1, TokenId{0}, TokenString::parse(xo, "x x"), 1}});
    auto out = run(doubler, TokenString::parse(xa, "a a"));
    REQUIRE(out.has_value());
    CHECK(out->text() == "x x x x");
    CHECK(GrowthBound::integer(2, 1).holds(2, out->length()));
    CHECK(!run(doubler, TokenString::parse(xa, "")).has_value());  // 0 not halting

    auto bounded = doubler.withGrowthBound(GrowthBound::integer(2, 1));
    CHECK(run(bounded, TokenString::parse(xa, "a"))->text() == "x x");
    auto lying = doubler.withGrowthBound(GrowthBound::integer(1, 1));
    CHECK_THROWS_AS(run(lying, TokenString::parse(xa, "a")), Error);

    FiniteTransducer nondet(
        xa, xo, 1, 0, {0},
        {{0, TokenId{0}, TokenString(xo, {}), 0},
         {0, TokenId{0}, TokenString(xo, {TokenId{0}}), 0}});
    CHECK(!nondet.deterministic());
    CHECK_THROWS_AS(run(nondet, TokenString::parse(xa, "a")), Error);
}

TEST_CASE("run agrees with a path-walking oracle on random machines") {
    auto in = Alphabet::make({"a", "b"});
    auto outA = Alphabet::make({"x", "y"});
    std::mt19937 rng(99);
    std::uniform_int_distribution<std::uint32_t> stateDist(1, 5);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> outLen(0, 2);
    for (int trial = 0; trial < 60; ++trial) {
        std::uint32_t n = stateDist(rng);
        std::uniform_int_distribution<std::uint32_t> st(0, n - 1);
        std::vector<Edge> edges;
        for (std::uint32_t s = 0; s < n; ++s)
            for (TokenId tok = 0; tok < 2; ++tok) {
                if (coin(rng) == 0 && n > 1) continue;  // leave some gaps
                std::vector<TokenId> out;
                for (int i = outLen(rng); i > 0; --i)
                    out.push_back(static_cast<TokenId>(coin(rng)));
                edges.push_back({s, tok, TokenString(outA, std::move(out)), st(rng)});
            }
        std::vector<std::uint32_t> halting;
        for (std::uint32_t s = 0; s < n; ++s)
            if (coin(rng)) halting.push_back(s);
        FiniteTransducer t(in, outA, n, 0, halting, edges);
        REQUIRE(t.deterministic());
        std::vector<TokenId> word;
        auto visit = [&](auto&& self, std::size_t remaining) -> void {
            TokenString s(in, word);
            auto got = run(t, s);
            auto want = walk_oracle(t, s);
            CHECK(got == want);
            if (remaining == 0) return;
            for (TokenId tok = 0; tok < 2; ++tok) {
                word.push_back(tok);
                self(self, remaining - 1);
                word.pop_back();
            }
        };
        visit(visit, 4);
    }
}

TEST_CASE("infer_growth_bound: pinned examples and exhaustive validity") {
    auto alpha = Alphabet::make({"a", "b"});
    auto ident = identity_machine(alpha);
    auto b = infer_growth_bound(ident);
    CHECK(b.num == 1);
    CHECK(b.den == 1);
    CHECK(b.dExp == 1);

    auto xo = Alphabet::make({"x"});
    FiniteTransducer wide(alpha, xo, 1, 0, {0},
                          {{0, TokenId{0}, TokenString::parse(xo, "x x x"), 0},
                           {0, TokenId{1}, TokenString::parse(xo, "x"), 0}});
    CHECK(infer_growth_bound(wide).num == 3);

    // epsilon cycle with output is rejected; without output it is fine
    FiniteTransducer epsBad(alpha, xo, 2, 0, {0},
                            {{0, std::nullopt, TokenString::parse(xo, "x"), 1},
                             {1, std::nullopt, TokenString(xo, {}), 0}});
    CHECK_THROWS_AS(infer_growth_bound(epsBad), Error);
    FiniteTransducer epsOk(alpha, xo, 2, 0, {0},
                           {{0, std::nullopt, TokenString(xo, {}), 1},
                            {1, std::nullopt, TokenString(xo, {}), 0},
                            {0, TokenId{0}, TokenString::parse(xo, "x"), 0}});
    CHECK(infer_growth_bound(epsOk).num == 1);
    // epsilon edge with output NOT on a cycle is fine
    FiniteTransducer epsChain(alpha, xo, 2, 0, {1},
                              {{0, std::nullopt, TokenString::parse(xo, "x"), 1},
                               {1, TokenId{0}, TokenString::parse(xo, "x"), 1}});
    CHECK(infer_growth_bound(epsChain).num == 1);

    // inferred bounds are never violated by actual runs
    std::mt19937 rng(123);
    std::uniform_int_distribution<std::uint32_t> stateDist(1, 4);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> outLen(0, 3);
    for (int trial = 0; trial < 25; ++trial) {
        std::uint32_t n = stateDist(rng);
        std::uniform_int_distribution<std::uint32_t> st(0, n - 1);
        std::vector<Edge> edges;
        for (std::uint32_t s = 0; s < n; ++s)
            for (TokenId tok = 0; tok < 2; ++tok) {
                std::vector<TokenId> out;
                for (int i = outLen(rng); i > 0; --i) out.push_back(0);
                edges.push_back({s, tok, TokenString(xo, std::move(out)), st(rng)});
            }
        std::vector<std::uint32_t> halting;
        for (std::uint32_t s = 0; s < n; ++s)
            if (coin(rng)) halting.push_back(s);
        FiniteTransducer t(alpha, xo, n, 0, halting, edges);
        auto bounded = t.withGrowthBound(infer_growth_bound(t));
        std::vector<TokenId> word;
        auto visit = [&](auto&& self, std::size_t remaining) -> void {
            CHECK_NOTHROW(run(bounded, TokenString(alpha, word)));
            if (remaining == 0) return;
            for (TokenId tok = 0; tok < 2; ++tok) {
                word.push_back(tok);
                self(self, remaining - 1);
                word.pop_back();
            }
        };
        visit(visit, 8);
    }
}

TEST_CASE("state partitions validate and round-trip") {
    auto alpha = Alphabet::make({"a"});
    FiniteTransducer t(alpha, alpha, 3, 0, {0},
                       {{0, TokenId{0}, TokenString(alpha, {}), 1},
                        {1, TokenId{0}, TokenString(alpha, {}), 2},
                        {2, TokenId{0}, TokenString(alpha, {}), 0}});
    auto p = StatePartition::parse(t, "s0 s2\ns1\n");
    CHECK(p.blocks().size() == 2);
    CHECK(p.blockOf(0) == p.blockOf(2));
    CHECK(p.blockOf(1) != p.blockOf(0));
    CHECK(p.print(t) == "s0 s2\ns1\n");
    CHECK(StatePartition::singletons(3).isSingletons());
    CHECK_THROWS_AS(StatePartition(3, {{0, 1}}), Error);          // missing 2
    CHECK_THROWS_AS(StatePartition(3, {{0, 1}, {1, 2}}), Error);  // overlap
    CHECK_THROWS_AS(StatePartition(3, {{0, 1, 2, 3}}), Error);    // unknown
    CHECK_THROWS_AS(StatePartition::parse(t, "s0 nope\ns1 s2\n"), Error);
}

TEST_CASE("quotient by singletons is the identity on the graph") {
    const char* text =
        "inputs: a b\n"
        "outputs: x\n"
        "initial: u\n"
        "final: v\n"
        "u v a : x\n"
        "v u b : x x\n"
        "u u b :\n";
    auto t = FiniteTransducer::parse(text);
    auto q = quotient(t, StatePartition::singletons(t.stateCount()));
    CHECK(q.print() == t.print());
    // and quotienting a quotient by its own singletons changes nothing
    auto p = StatePartition::parse(t, "u v\n");
    auto q2 = quotient(t, p);
    CHECK(quotient(q2, StatePartition::singletons(q2.stateCount())).print() ==
          q2.print());
}

TEST_CASE("even-length acceptor: merging both states admits \"a\"") {
    auto alpha = Alphabet::make({"a"});
    FiniteTransducer even(alpha, alpha, 2, 0, {0},
                          {{0, TokenId{0}, TokenString(alpha, {}), 1},
                           {1, TokenId{0}, TokenString(alpha, {}), 0}});
    auto merged = StatePartition(2, {{0, 1}});
    auto q = quotient(even, merged);
    // quotient accepts a* (both brute-forced here)
    for (std::uint32_t len = 0; len <= 6; ++len) {
        TokenString s(alpha, std::vector<TokenId>(len, 0));
        CHECK(nfa_accepts(even, s) == (len % 2 == 0));
        CHECK(nfa_accepts(q, s));
    }
    auto verdict = check_quotient_symmetry_acceptor(even, merged);
    REQUIRE(!verdict.symmetric);
    REQUIRE(verdict.counterexample.has_value());
    CHECK(verdict.counterexample->text() == "a");

    CHECK(check_quotient_symmetry_acceptor(even, StatePartition::singletons(2))
              .symmetric);
}

TEST_CASE("acceptor symmetry agrees with the exhaustive-language oracle") {
    std::mt19937 rng(424242);
    int nonSymmetric = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<std::uint32_t> stateDist(1, 8);
        std::uniform_int_distribution<std::size_t> sigmaDist(1, 3);
        std::uint32_t n = stateDist(rng);
        std::size_t sigmaSize = sigmaDist(rng);
        std::vector<std::string> letters = {"a", "b", "c"};
        letters.resize(sigmaSize);
        auto alpha = Alphabet::make(letters);
        std::uniform_int_distribution<std::uint32_t> st(0, n - 1);
        std::uniform_int_distribution<int> pct(0, 99);
        std::vector<Edge> edges;
        for (std::uint32_t s = 0; s < n; ++s)
            for (TokenId tok = 0; tok < sigmaSize; ++tok) {
                if (pct(rng) < 20) continue;  // some missing transitions
                edges.push_back({s, tok, TokenString(alpha, {}), st(rng)});
            }
        std::vector<std::uint32_t> halting;
        for (std::uint32_t s = 0; s < n; ++s)
            if (pct(rng) < 40) halting.push_back(s);
        FiniteTransducer m(alpha, alpha, n, 0, halting, edges);

        // random partition
        std::uniform_int_distribution<std::uint32_t> blockCount(1, n);
        std::uint32_t nb = blockCount(rng);
        std::vector<std::vector<std::uint32_t>> blocks(nb);
        for (std::uint32_t s = 0; s < n; ++s) blocks[s % nb].push_back(s);
        std::shuffle(blocks.begin(), blocks.end(), rng);
        blocks.erase(std::remove_if(blocks.begin(), blocks.end(),
                                    [](const auto& b) { return b.empty(); }),
                     blocks.end());
        StatePartition p(n, blocks);

        auto q = quotient(m, p);
        auto oracle = compare_languages(m, q, 2 * n);
        CHECK(!oracle.mNotQ.has_value());  // quotient never shrinks the language

        auto verdict = check_quotient_symmetry_acceptor(m, p);
        CHECK(verdict.symmetric == !oracle.qNotM.has_value());
        if (!verdict.symmetric) {
            ++nonSymmetric;
            REQUIRE(verdict.counterexample.has_value());
            const auto& w = *verdict.counterexample;
            CHECK(nfa_accepts(q, w));
            CHECK(!nfa_accepts(m, w));
            REQUIRE(oracle.qNotM.has_value());
            CHECK(w.length() == *oracle.qNotM);  // shortest witness
        }
    }
    CHECK(nonSymmetric > 10);  // the sample exercises both verdicts
}

TEST_CASE("transducer symmetry: bounded map comparison") {
    auto alpha = Alphabet::make({"a", "b"});
    auto ident = identity_machine(alpha);
    auto all = StatePartition::singletons(1);
    CHECK(check_quotient_symmetry_transducer(ident, all, 6).symmetric);

    // 3-state machine where two states emit different outputs for 'a'
    auto xo = Alphabet::make({"x", "y"});
    FiniteTransducer t(
        alpha, xo, 3, 0, {0, 1, 2},
        {{0, TokenId{0}, TokenString::parse(xo, "x"), 1},
         {0, TokenId{1}, TokenString::parse(xo, "y"), 2},
         {1, TokenId{0}, TokenString::parse(xo, "x"), 1},
         {2, TokenId{0}, TokenString::parse(xo, "y"), 2}});
    auto merged = StatePartition(3, {{0}, {1, 2}});
    auto verdict = check_quotient_symmetry_transducer(t, merged, 4);
    REQUIRE(!verdict.symmetric);
    REQUIRE(verdict.counterexample.has_value());
    // shortest ambiguous input: "a a" can now follow either merged branch
    CHECK(verdict.counterexample->text() == "a a");
    CHECK(verdict.detail.find("quotient") != std::string::npos);

    // identity with every state merged stays the identity map
    FiniteTransducer ident3(
        alpha, alpha, 2, 0, {0, 1},
        {{0, TokenId{0}, TokenString::parse(alpha, "a"), 1},
         {0, TokenId{1}, TokenString::parse(alpha, "b"), 1},
         {1, TokenId{0}, TokenString::parse(alpha, "a"), 0},
         {1, TokenId{1}, TokenString::parse(alpha, "b"), 0}});
    CHECK(check_quotient_symmetry_transducer(ident3, StatePartition(2, {{0, 1}}), 6)
              .symmetric);
}

TEST_CASE("meaning preservation") {
    auto source = Alphabet::make({"a", "b"});
    auto target = Alphabet::make({"a", "b"});
    auto meaning = Alphabet::make({"m0", "m1"});

    auto ident = std::make_shared<FstMap>(identity_machine(source));
    // interpreter: a -> m0, b -> m1 (homomorphism)
    FiniteTransducer interp(
        source, meaning, 1, 0, {0},
        {{0, TokenId{0}, TokenString::parse(meaning, "m0"), 0},
         {0, TokenId{1}, TokenString::parse(meaning, "m1"), 0}});
    auto i1m = std::make_shared<FstMap>(interp);

    auto sameReport = check_meaning_preservation(*ident, *i1m, *i1m, 4);
    CHECK(sameReport.pass);
    CHECK(sameReport.checkedCount > 0);

    // translation swaps a and b; composing the swap before the interpreter
    // restores meaning
    FiniteTransducer swap(
        source, target, 1, 0, {0},
        {{0, TokenId{0}, TokenString::parse(target, "b"), 0},
         {0, TokenId{1}, TokenString::parse(target, "a"), 0}});
    auto swapMap = std::make_shared<FstMap>(swap);
    auto i2m = std::make_shared<ComposedMap>(swapMap, i1m);
    auto swapped = check_meaning_preservation(*swapMap, *i1m, *i2m, 5);
    CHECK(swapped.pass);

    // a broken target interpreter differs on a single token
    FiniteTransducer broken(
        target, meaning, 1, 0, {0},
        {{0, TokenId{0}, TokenString::parse(meaning, "m0"), 0},
         {0, TokenId{1}, TokenString::parse(meaning, "m0"), 0}});
    auto i2mBroken = std::make_shared<FstMap>(broken);
    auto bad = check_meaning_preservation(*ident, *i1m, *i2mBroken, 3);
    REQUIRE(!bad.pass);
    REQUIRE(!bad.counterexamples.empty());
    CHECK(bad.counterexamples.front().text() == "b");

    auto mismatch = Alphabet::make({"zzz"});
    FstMap wrong(identity_machine(mismatch));
    CHECK_THROWS_AS(check_meaning_preservation(*ident, wrong, *i1m, 2), Error);
}

TEST_CASE("transduction maps: table and composition") {
    auto alpha = Alphabet::make({"a", "b"});
    auto mk = [&](const char* t) { return TokenString::parse(alpha, t); };
    TableMap table(alpha, alpha, {{mk("a"), mk("b b")}, {mk("b"), mk("a")}});
    CHECK(table.evaluate(mk("a"))->text() == "b b");
    CHECK(!table.evaluate(mk("a a")).has_value());
    CHECK(table.size() == 2);
    CHECK_THROWS_AS(TableMap(alpha, alpha, {{mk("a"), mk("a")}, {mk("a"), mk("b")}}),
                    Error);
    // duplicate identical pairs collapse silently
    CHECK(TableMap(alpha, alpha, {{mk("a"), mk("a")}, {mk("a"), mk("a")}}).size() ==
          1);

    auto ident = std::make_shared<FstMap>(
        identity_machine(alpha).withGrowthBound(GrowthBound::integer(2, 1)));
    auto ident2 = std::make_shared<FstMap>(
        identity_machine(alpha).withGrowthBound(GrowthBound::integer(3, 1)));
    ComposedMap composed(ident, ident2);
    auto b = composed.growthBound();
    REQUIRE(b.has_value());
    CHECK(b->num == 6);
    CHECK(b->dExp == 1);
    CHECK(composed.evaluate(mk("a b"))->text() == "a b");
}
