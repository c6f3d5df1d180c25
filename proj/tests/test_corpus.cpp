#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ggr/corpus.hpp"
#include "ggr/engine.hpp"
#include "ggr/err.hpp"
#include "ggr/errors.hpp"
#include "ggr/rule.hpp"
#include "ggr/rule_io.hpp"

using namespace ggr;

namespace {

ErrorKind error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::Internal;
}

std::string interpret_text(const Grammar& g, const std::string& input) {
    TokenString s = TokenString::parse(g.inputAlphabet, input);
    return interpret(g, s).text();
}

bool undefined_on(const GrammarMap& map, const std::string& input) {
    TokenString s = TokenString::parse(map.inputAlphabet(), input);
    return !map.evaluate(s).has_value();
}

std::vector<TokenString> all_strings(const AlphabetRef& a, std::size_t len) {
    std::vector<TokenString> out;
    std::vector<TokenId> ids(len, 0);
    while (true) {
        out.emplace_back(a, ids);
        std::size_t i = len;
        while (i > 0 && ++ids[i - 1] == a->size()) {
            ids[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    return out;
}

// partial sums of every rule against the grammar's own map stay at zero
void check_self_consistency(const Grammar& g, std::uint64_t L) {
    GrammarMap map(g);
    for (const GgrRule& r : g.rules) {
        PartialSum p = err_partial_sum(map, r, 1.0, L, UndefinedPolicy::Skip);
        CHECK(p.sum == 0.0);
    }
}

// printing and reparsing preserves every rule and loses none to the
// general-rule bucket (i.e. each one passes the restricted-form checks)
void check_round_trip(const Grammar& g) {
    RuleParseResult back = parse_rules(print_grammar(g));
    CHECK(back.gtrs.empty());
    REQUIRE(back.grammar.rules.size() == g.rules.size());
    for (std::size_t i = 0; i < g.rules.size(); ++i)
        CHECK(back.grammar.rules[i] == g.rules[i]);
    CHECK(print_grammar(back.grammar) == print_grammar(g));
}

} // namespace

TEST_CASE("permutation grammar extends its table pointwise") {
    Grammar g = build_gordon_grammar({{"a", "b"}, {"b", "a"}});
    CHECK(interpret_text(g, "a b a") == "b a b");
    CHECK(interpret_text(g, "a") == "b");

    // identity table: the interpretation fixes every string
    Grammar id = build_gordon_grammar({{"a", "a"}, {"b", "b"}});
    for (std::size_t len = 1; len <= 4; ++len)
        for (const auto& s : all_strings(id.inputAlphabet, len))
            CHECK(interpret(id, s) == s);

    // any table: interpretation equals the tokenwise map
    Grammar pre = build_gordon_grammar(corpus_preset(CorpusKind::GordonPermutation).permutation);
    const AlphabetRef& alpha = pre.inputAlphabet;
    std::vector<TokenId> image(alpha->size());
    for (TokenId t = 0; t < alpha->size(); ++t) {
        TokenString one(alpha, {t});
        TokenString mapped = interpret(pre, one);
        REQUIRE(mapped.size() == 1);
        image[t] = mapped.at(0);
    }
    for (std::size_t len = 1; len <= 4; ++len)
        for (const auto& s : all_strings(alpha, len)) {
            std::vector<TokenId> want;
            for (TokenId t : s.ids()) want.push_back(image[t]);
            CHECK(interpret(pre, s) == TokenString(alpha, want));
        }

    SUBCASE("rejects non-bijections") {
        CHECK(error_kind([] {
                  build_gordon_grammar({{"a", "b"}, {"b", "b"}});
              }) == ErrorKind::Validation);
        CHECK(error_kind([] {
                  build_gordon_grammar({{"a", "b"}, {"a", "a"}});
              }) == ErrorKind::Validation);
        CHECK(error_kind([] {
                  build_gordon_grammar({{"a", "c"}, {"b", "a"}});
              }) == ErrorKind::Validation);
        CHECK(error_kind([] { build_gordon_grammar({}); }) ==
              ErrorKind::Validation);
    }
}

TEST_CASE("conjunction grammar splits on AND and reverses on AFTER") {
    Grammar g = build_and_after_grammar(corpus_preset(CorpusKind::AndAfter).groundFacts);
    CHECK(interpret_text(g, "RUN LEFT AND WALK") == "LTURN RUN WALK");
    CHECK(interpret_text(g, "RUN LEFT AFTER WALK") == "WALK LTURN RUN");
    CHECK(interpret_text(g, "RUN") == "RUN");
    CHECK(interpret_text(g, "WALK LEFT") == "LTURN WALK");

    // the two conjunctions are mirror readings of each other
    for (const char* a : {"RUN", "WALK", "RUN LEFT"})
        for (const char* b : {"WALK", "WALK LEFT"}) {
            std::string ab = std::string(a) + " AND " + b;
            std::string ba = std::string(b) + " AFTER " + a;
            CHECK(interpret_text(g, ab) == interpret_text(g, ba));
        }

    // conjunction arguments never contain conjunctions themselves
    GrammarMap map(g);
    CHECK(undefined_on(map, "RUN AND WALK AND RUN"));
    CHECK(undefined_on(map, "RUN AFTER WALK AND RUN"));
    CHECK(undefined_on(map, "AND"));
    CHECK(undefined_on(map, "LEFT"));
    CHECK_FALSE(undefined_on(map, "RUN AND WALK"));

    SUBCASE("rejects malformed tables") {
        CHECK(error_kind([] { build_and_after_grammar({}); }) ==
              ErrorKind::Validation);
        CHECK(error_kind([] {
                  build_and_after_grammar({{"RUN", "RUN"}, {"RUN", "WALK"}});
              }) == ErrorKind::Validation);
        CHECK(error_kind([] {
                  build_and_after_grammar({{"RUN AND WALK", "RUN"}});
              }) == ErrorKind::Validation);
        CHECK(error_kind([] { build_and_after_grammar({{"", "RUN"}}); }) ==
              ErrorKind::Validation);
    }
}

TEST_CASE("colored-words grammar") {
    Grammar g = build_lake_grammar();
    CHECK(interpret_text(g, "zup") == "green");
    CHECK(interpret_text(g, "fep") == "rose");
    CHECK(interpret_text(g, "gazzer") == "red");
    CHECK(interpret_text(g, "tufa") == "bourbon");
    CHECK(interpret_text(g, "gazzer blicket") == "red red");
    CHECK(interpret_text(g, "zup kiki fep") == "green rose");
    CHECK(interpret_text(g, "zup lug fep") == "rose green rose green green");
    CHECK(interpret_text(g, "zup fep") == "green rose");

    GrammarMap map(g);
    // single-word arguments only: three plain words in a row fall outside
    CHECK(undefined_on(map, "zup fep tufa"));
    CHECK(undefined_on(map, "lug"));
    CHECK(undefined_on(map, "lug blicket"));

    SUBCASE("generalized concatenation widens the language") {
        LakeOptions opt;
        opt.generalizedConcatenation = true;
        Grammar wide = build_lake_grammar(opt);
        CHECK(interpret_text(wide, "zup fep tufa") == "green rose bourbon");
        CHECK(interpret_text(wide, "gazzer zup lug fep") ==
              "red rose green rose green green");
        CHECK(interpret_text(wide, "zup lug fep") ==
              "rose green rose green green");
        GrammarMap wideMap(wide);
        CHECK(undefined_on(wideMap, "zup lug fep gazzer blicket"));
    }

    SUBCASE("bracket-tagged variant matches on the tags") {
        LakeOptions opt;
        opt.bracketTagged = true;
        Grammar tagged = build_lake_grammar(opt);
        CHECK(interpret_text(tagged, "zup") == "green");
        CHECK(interpret_text(tagged, "l zup l'") == "green");
        CHECK(interpret_text(tagged, "l zup l' l lug l' l fep l'") ==
              "rose green rose green green");
        CHECK(interpret_text(tagged, "l zup l' l kiki l' l fep l'") ==
              "green rose");
        CHECK(interpret_text(tagged, "l gazzer l' l blicket l'") == "red red");
        CHECK(interpret_text(tagged, "l zup l' l fep l'") == "green rose");
        GrammarMap taggedMap(tagged);
        CHECK(undefined_on(taggedMap, "zup lug fep"));
        CHECK(undefined_on(taggedMap, "l zup"));
    }
}

TEST_CASE("tagged-brackets grammar exchanges words inside their class") {
    Grammar g = build_tagged_grammar(corpus_preset(CorpusKind::TaggedBrackets).classes);
    CHECK(interpret_text(g, "run") == "jump");
    CHECK(interpret_text(g, "l1 run l1'") == "l1 jump l1'");
    CHECK(interpret_text(g, "l2 dog l2'") == "l2 cat l2'");
    CHECK(interpret_text(g, "l1 run l1' l2 dog l2'") == "l1 jump l1' l2 cat l2'");
    CHECK(interpret_text(g, "l1 run l1' l1 jump l1' l2 cat l2'") ==
          "l1 jump l1' l1 run l1' l2 dog l2'");

    GrammarMap map(g);
    CHECK(undefined_on(map, "l1 dog l1'"));  // dog is not in class 1
    CHECK(undefined_on(map, "l1 run l2'"));
    CHECK(undefined_on(map, "run jump"));

    SUBCASE("rejects malformed classes") {
        CHECK(error_kind([] { return build_tagged_grammar({}); }) ==
              ErrorKind::Validation);
        CHECK(error_kind([] {
                  build_tagged_grammar({{{"run", "jump"}}, {{"run", "run"}}});
              }) == ErrorKind::Validation);
        CHECK(error_kind([] {
                  build_tagged_grammar({{{"run", "jump"}, {"jump", "jump"}}});
              }) == ErrorKind::Validation);
        CHECK(error_kind([] {
                  build_tagged_grammar({{{"l1", "l1"}}});
              }) == ErrorKind::Validation);
    }
}

TEST_CASE("every corpus grammar is well formed and self consistent") {
    std::vector<Grammar> grammars;
    grammars.push_back(build_corpus(corpus_preset(CorpusKind::GordonPermutation)));
    grammars.push_back(build_corpus(corpus_preset(CorpusKind::AndAfter)));
    grammars.push_back(build_corpus(corpus_preset(CorpusKind::TaggedBrackets)));
    grammars.push_back(build_corpus(corpus_preset(CorpusKind::LakeInterpretation)));
    LakeOptions wide;
    wide.generalizedConcatenation = true;
    grammars.push_back(build_lake_grammar(wide));
    LakeOptions tagged;
    tagged.bracketTagged = true;
    grammars.push_back(build_lake_grammar(tagged));
    tagged.generalizedConcatenation = true;
    grammars.push_back(build_lake_grammar(tagged));

    for (const Grammar& g : grammars) {
        validate_grammar(g);
        check_round_trip(g);
        check_self_consistency(g, 5);
    }
}

TEST_CASE("corpus spec dispatch checks parameters") {
    CorpusSpec spec;
    spec.which = CorpusKind::GordonPermutation;
    CHECK(error_kind([&] { build_corpus(spec); }) == ErrorKind::Validation);
    spec.which = CorpusKind::AndAfter;
    CHECK(error_kind([&] { build_corpus(spec); }) == ErrorKind::Validation);
    spec.which = CorpusKind::TaggedBrackets;
    CHECK(error_kind([&] { build_corpus(spec); }) == ErrorKind::Validation);
    spec.which = CorpusKind::LakeInterpretation;
    Grammar g = build_corpus(spec);  // no parameters needed
    CHECK(interpret_text(g, "tufa") == "bourbon");
}

TEST_CASE("dataset generation is seeded, sorted, and verified") {
    Grammar lake = build_lake_grammar();

    // the full space at length <= 3: 4 words, 16 word pairs, 4 blicket
    // forms, 16 lug forms, 16 kiki forms
    auto all = generate_dataset(lake, 3, 1u << 30);
    CHECK(all.size() == 56);
    std::set<std::string> seen;
    GrammarMap map(lake);
    for (const auto& [input, output] : all) {
        CHECK(seen.insert(input.text()).second);
        auto v = map.evaluate(input);
        REQUIRE(v.has_value());
        CHECK(*v == output);
    }

    auto ten = generate_dataset(lake, 3, 10, 7);
    CHECK(ten.size() == 10);
    auto tenAgain = generate_dataset(lake, 3, 10, 7);
    REQUIRE(ten.size() == tenAgain.size());
    for (std::size_t i = 0; i < ten.size(); ++i) {
        CHECK(ten[i].first == tenAgain[i].first);
        CHECK(ten[i].second == tenAgain[i].second);
    }
    // samples keep the enumeration order: shorter inputs first, then lexicographic
    for (std::size_t i = 1; i < ten.size(); ++i) {
        CHECK(ten[i - 1].first.size() <= ten[i].first.size());
        if (ten[i - 1].first.size() == ten[i].first.size())
            CHECK(ten[i - 1].first.ids() < ten[i].first.ids());
    }

    // count >= space returns everything without padding
    Grammar tiny = build_gordon_grammar({{"a", "b"}, {"b", "a"}});
    auto six = generate_dataset(tiny, 2, 100);
    CHECK(six.size() == 6);

    SUBCASE("guards") {
        Grammar conj = build_and_after_grammar(
            corpus_preset(CorpusKind::AndAfter).groundFacts);
        CHECK(error_kind([&] { generate_dataset(conj, 10, 1); }) ==
              ErrorKind::Validation);
        CHECK(error_kind([&] { generate_dataset(conj, 0, 1); }) ==
              ErrorKind::Undefined);
    }
}
