#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

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

Grammar parse_grammar(const std::string& text) {
    RuleParseResult r = parse_rules(text);
    REQUIRE(r.gtrs.empty());
    return std::move(r.grammar);
}

GgrRule parse_rule(const std::string& text) {
    RuleParseResult r = parse_rules(text);
    REQUIRE(r.grammar.rules.size() == 1);
    return r.grammar.rules[0];
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

// string reversal over {a, b} as a finite table covering lengths 1..maxLen
std::shared_ptr<TableMap> reversal_table(const AlphabetRef& alpha,
                                         std::size_t maxLen) {
    std::vector<std::pair<TokenString, TokenString>> pairs;
    for (std::size_t len = 1; len <= maxLen; ++len)
        for (const auto& s : all_strings(alpha, len)) {
            std::vector<TokenId> rev(s.ids().rbegin(), s.ids().rend());
            pairs.emplace_back(s, TokenString(alpha, rev));
        }
    return std::make_shared<TableMap>(alpha, alpha, std::move(pairs),
                                      GrowthBound(1, 1, 1));
}

const char* kConcatRuleText =
    "input-alphabet \"a\" \"b\"\n"
    "output-alphabet \"a\" \"b\"\n"
    "forall x1 in SIGMA+, x2 in SIGMA+: T(x1 x2) = T(x1) T(x2)\n";

const char* kSwapRuleText =
    "input-alphabet \"a\" \"b\"\n"
    "output-alphabet \"a\" \"b\"\n"
    "forall x1 in SIGMA+, x2 in SIGMA+: T(x1 x2) = T(x2) T(x1)\n";

} // namespace

TEST_CASE("tail constants read the rule shape") {
    GgrRule concat = parse_rule(kConcatRuleText);
    TailConstants tc = TailConstants::from(concat, GrowthBound(2, 1, 1));
    CHECK(tc.cT == doctest::Approx(2.0));
    CHECK(tc.dExp == 1);
    CHECK(tc.h == 2);
    CHECK(tc.dMax == 1);
    CHECK(tc.lenA == 2);
    CHECK(tc.lensAbar == std::vector<std::uint64_t>{1, 1});
    CHECK(tc.sumLenB == 0);
    CHECK(tc.sigmaSize == 2);

    GgrRule doubled = parse_rule(
        "input-alphabet \"a\"\n"
        "output-alphabet \"b\"\n"
        "forall x1 in SIGMA+: T(x1 x1 \"a\") = \"b b\" T(x1)\n");
    TailConstants td = TailConstants::from(doubled, GrowthBound(1, 1, 1));
    CHECK(td.h == 1);
    CHECK(td.dMax == 2);
    CHECK(td.lenA == 3);
    CHECK(td.lensAbar == std::vector<std::uint64_t>{1});
    CHECK(td.sumLenB == 2);
}

TEST_CASE("tail bound equals a long direct summation of the majorant") {
    // h=1 keeps the composition factor trivial; the series is
    // sum_{m>L} e^{-beta m} (cT(lenA + m) + sumLenB + cT(1 + m))
    TailConstants tc;
    tc.cT = 1.0;
    tc.dExp = 1;
    tc.h = 1;
    tc.dMax = 1;
    tc.lenA = 2;
    tc.lensAbar = {1};
    tc.sumLenB = 0;
    tc.sigmaSize = 2;

    auto oracle = [&](const TailConstants& c, double beta, std::uint64_t L) {
        long double s = 0.0L;
        for (std::uint64_t m = L + 1; m <= L + 10000; ++m) {
            long double P = c.cT * std::pow((long double)c.lenA + c.dMax * (long double)m,
                                            (long double)c.dExp) +
                            (long double)c.sumLenB;
            for (auto la : c.lensAbar)
                P += c.cT * std::pow((long double)la + c.dMax * (long double)m,
                                     (long double)c.dExp);
            s += std::pow((long double)m + 1.0L, (long double)c.h - 1.0L) *
                 std::exp(-(long double)beta * (long double)m) * P;
        }
        return (double)s;
    };

    for (std::uint64_t L : {0, 1, 2, 5, 10})
        CHECK(tail_bound(tc, 1.0, L) ==
              doctest::Approx(oracle(tc, 1.0, L)).epsilon(1e-13));

    TailConstants wide = tc;
    wide.h = 3;
    wide.dMax = 2;
    wide.lensAbar = {2, 1};
    wide.sumLenB = 4;
    wide.cT = 5.0 / 3.0;
    for (double beta : {0.5, 1.0, 2.5})
        for (std::uint64_t L : {0, 3, 7})
            CHECK(tail_bound(wide, beta, L) ==
                  doctest::Approx(oracle(wide, beta, L)).epsilon(1e-12));
}

TEST_CASE("tail bound decreases to zero and vanishes for ground rules") {
    TailConstants tc;
    tc.cT = 1.0;
    tc.dExp = 1;
    tc.h = 2;
    tc.dMax = 1;
    tc.lenA = 2;
    tc.lensAbar = {1, 1};
    tc.sumLenB = 3;
    tc.sigmaSize = 2;

    double prev = tail_bound(tc, 1.0, 0);
    CHECK(prev > 0.0);
    for (std::uint64_t L = 1; L <= 30; ++L) {
        double cur = tail_bound(tc, 1.0, L);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(prev < 1e-8);

    TailConstants ground;
    ground.h = 0;
    ground.lenA = 1;
    ground.sumLenB = 1;
    CHECK(tail_bound(ground, 1.0, 0) == 0.0);
    CHECK(tail_bound(ground, 0.1, 17) == 0.0);

    CHECK(error_kind([&] { tail_bound(tc, 0.0, 0); }) == ErrorKind::Validation);
    CHECK(error_kind([&] { tail_bound(tc, -1.0, 0); }) == ErrorKind::Validation);
}

TEST_CASE("reversal scores the concatenation rule at exactly e^(-2 beta)") {
    auto alpha = Alphabet::make({"a", "b"});
    auto t = reversal_table(alpha, 4);
    GgrRule concat = parse_rule(kConcatRuleText);

    const double beta = 1.0;
    PartialSum ps = err_partial_sum(*t, concat, beta, 2);
    // four assignments at total length 2; the two mixed ones are distance 2
    CHECK(ps.termsByLength == std::vector<std::uint64_t>{0, 0, 4});
    CHECK(ps.termCount == 4);
    CHECK(ps.skippedTerms == 0);
    CHECK(ps.sum == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(ps.sumByLength[2] == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

    // more shells only add mass
    PartialSum deeper = err_partial_sum(*t, concat, beta, 4);
    CHECK(deeper.sum > ps.sum);
    CHECK(deeper.sumByLength[2] == doctest::Approx(ps.sumByLength[2]));

    // the swap rule is what reversal actually satisfies
    GgrRule swap = parse_rule(kSwapRuleText);
    PartialSum zero = err_partial_sum(*t, swap, beta, 4);
    CHECK(zero.sum == 0.0);
    CHECK(zero.termCount == deeper.termCount);

    // beyond the table the required points are undefined
    CHECK(error_kind([&] { err_partial_sum(*t, concat, beta, 5); }) ==
          ErrorKind::Undefined);
    PartialSum skipped =
        err_partial_sum(*t, concat, beta, 5, UndefinedPolicy::Skip);
    CHECK(skipped.skippedTerms == 128);  // all 4*2^5 length-5 assignments
    CHECK(skipped.termsByLength[5] == 0);
    CHECK(skipped.sum == doctest::Approx(deeper.sum));
}

TEST_CASE("a rule the map satisfies exactly scores zero everywhere") {
    Grammar hom = parse_grammar(
        "input-alphabet \"run\" \"walk\" \"look\"\n"
        "output-alphabet \"RUN\" \"WALK\" \"LOOK1\" \"LOOK2\"\n"
        "T(\"run\") = \"RUN\"\n"
        "T(\"walk\") = \"WALK\"\n"
        "T(\"look\") = \"LOOK1 LOOK2\"\n"
        "forall x1 in SIGMA1, x2 in SIGMA+: T(x1 x2) = T(x1) T(x2)\n");
    GrammarMap map(hom);
    GgrRule concat = parse_rule(
        "input-alphabet \"run\" \"walk\" \"look\"\n"
        "output-alphabet \"RUN\" \"WALK\" \"LOOK1\" \"LOOK2\"\n"
        "forall x1 in SIGMA+, x2 in SIGMA+: T(x1 x2) = T(x1) T(x2)\n");

    PartialSum ps = err_partial_sum(map, concat, 1.0, 5);
    CHECK(ps.sum == 0.0);
    // shells hold 0, 0, 3^2, 2*3^3, 3*3^4, 4*3^5 ordered assignments
    CHECK(ps.termsByLength ==
          std::vector<std::uint64_t>{0, 0, 9, 54, 243, 972});
    CHECK(ps.termCount == 1278);
}

TEST_CASE("per-term weight decays by exactly exp(-beta - ln sigma)") {
    // constant map: every input goes to the same one-token output, so each
    // term has distance 1 against the two-token block and the shell sums
    // expose the raw weights
    auto inAlpha = Alphabet::make({"a", "b"});
    auto outAlpha = Alphabet::make({"c"});
    std::vector<std::pair<TokenString, TokenString>> pairs;
    for (std::size_t len = 1; len <= 6; ++len)
        for (const auto& s : all_strings(inAlpha, len))
            pairs.emplace_back(s, TokenString::parse(outAlpha, "c"));
    TableMap t(inAlpha, outAlpha, std::move(pairs), GrowthBound(1, 1, 1));

    GgrRule r = parse_rule(
        "input-alphabet \"a\" \"b\"\n"
        "output-alphabet \"c\"\n"
        "forall x1 in SIGMA+: T(x1) = \"c c\"\n");

    const double beta = 0.7;
    PartialSum ps = err_partial_sum(t, r, beta, 6);
    for (std::uint64_t m = 1; m <= 6; ++m)
        CHECK(ps.termsByLength[m] == (std::uint64_t{1} << m));
    for (std::uint64_t m = 1; m < 6; ++m) {
        const double wNext = ps.sumByLength[m + 1] / (double)ps.termsByLength[m + 1];
        const double wCur = ps.sumByLength[m] / (double)ps.termsByLength[m];
        CHECK(wNext / wCur ==
              doctest::Approx(std::exp(-beta - std::log(2.0))).epsilon(1e-12));
    }
}

TEST_CASE("finite domains give a single exact term and a zero tail") {
    auto inAlpha = Alphabet::make({"zup", "fep"});
    auto outAlpha = Alphabet::make({"green", "rose"});
    std::vector<std::pair<TokenString, TokenString>> pairs{
        {TokenString::parse(inAlpha, "zup"), TokenString::parse(outAlpha, "green")},
        {TokenString::parse(inAlpha, "fep"), TokenString::parse(outAlpha, "rose")},
        {TokenString::parse(inAlpha, "zup fep"),
         TokenString::parse(outAlpha, "rose green")}};
    TableMap t(inAlpha, outAlpha, std::move(pairs), GrowthBound(1, 1, 1));

    GgrRule r = parse_rule(
        "input-alphabet \"zup\" \"fep\"\n"
        "output-alphabet \"green\" \"rose\"\n"
        "forall x1 in { \"zup\" }, x2 in { \"fep\" }: T(x1 x2) = T(x1) T(x2)\n");

    const double beta = 1.0;
    PartialSum ps = err_partial_sum(t, r, beta, 4);
    // one assignment total: distance("rose green", "green rose") = 2
    CHECK(ps.termCount == 1);
    const double expected = std::exp((-beta - std::log(2.0)) * 2.0) * 2.0;
    CHECK(ps.sum == doctest::Approx(expected).epsilon(1e-12));

    ErrEstimate est = err_estimate(t, r, beta, 1e-12, 50);
    CHECK(est.widthReached);
    CHECK(est.truncationLen == 2);  // the domains exhaust at 1 + 1
    CHECK(est.tailBound == 0.0);
    CHECK(est.partialSum == doctest::Approx(expected).epsilon(1e-12));
    CHECK(est.upper() == est.lower());
}

TEST_CASE("estimates are nested and bracket the exact finite value") {
    auto alpha = Alphabet::make({"a", "b"});
    auto t = reversal_table(alpha, 4);
    GgrRule r = parse_rule(
        "input-alphabet \"a\" \"b\"\n"
        "output-alphabet \"a\" \"b\"\n"
        "forall x1 in { \"a\", \"b\", \"a b\" }, x2 in { \"a\", \"b\", \"a b\" }: "
        "T(x1 x2) = T(x1) T(x2)\n");

    // all nine assignments lie within the table; the full sum is exact
    const double exact = err_partial_sum(*t, r, 1.0, 4).sum;
    CHECK(exact > 0.0);

    ErrEstimate prev;
    bool first = true;
    for (std::uint64_t L = 0; L <= 4; ++L) {
        ErrEstimate est = err_estimate(*t, r, 1.0, 0.0, L);
        CHECK(est.lower() <= exact + 1e-12);
        CHECK(est.upper() >= exact - 1e-12);
        if (!first) {
            CHECK(est.lower() >= prev.lower() - 1e-12);
            CHECK(est.upper() <= prev.upper() + 1e-12);
        }
        prev = est;
        first = false;
    }
    CHECK(prev.tailBound == 0.0);  // exhausted at total length 4
    CHECK(prev.lower() == doctest::Approx(exact));
}

TEST_CASE("estimate convergence on an exactly-satisfied rule") {
    // a one-token alphabet keeps the shells single-term, so the truncation
    // length can climb until the certified width crosses 1e-9
    Grammar g = parse_grammar(
        "input-alphabet \"a\"\n"
        "output-alphabet \"b\"\n"
        "T(\"a\") = \"b b\"\n"
        "forall x1 in SIGMA1, x2 in SIGMA+: T(x1 x2) = T(x1) T(x2)\n");
    GrammarMap map(g);
    GgrRule concat = parse_rule(
        "input-alphabet \"a\"\n"
        "output-alphabet \"b\"\n"
        "forall x1 in SIGMA+, x2 in SIGMA+: T(x1 x2) = T(x1) T(x2)\n");

    ErrEstimate est = err_estimate(map, concat, 1.0, 1e-9, 200);
    CHECK(est.widthReached);
    CHECK(est.partialSum == 0.0);
    CHECK(est.tailBound < 1e-9);
    CHECK(est.tailBound > 0.0);
    CHECK(est.truncationLen < 200);

    // a tighter target needs a longer truncation
    ErrEstimate tighter = err_estimate(map, concat, 1.0, 1e-12, 200);
    CHECK(tighter.truncationLen > est.truncationLen);
    CHECK(tighter.tailBound < 1e-12);
}

TEST_CASE("estimate demands a growth bound and a positive beta") {
    auto alpha = Alphabet::make({"a", "b"});
    std::vector<std::pair<TokenString, TokenString>> pairs{
        {TokenString::parse(alpha, "a"), TokenString::parse(alpha, "a")}};
    TableMap bare(alpha, alpha, std::move(pairs));  // no bound attached
    GgrRule concat = parse_rule(kConcatRuleText);

    CHECK(error_kind([&] { err_estimate(bare, concat, 1.0, 1e-9, 10); }) ==
          ErrorKind::Growth);
    auto t = reversal_table(alpha, 2);
    CHECK(error_kind([&] { err_estimate(*t, concat, 0.0, 1e-9, 10); }) ==
          ErrorKind::Validation);
    CHECK(error_kind([&] { err_partial_sum(*t, concat, -2.0, 2); }) ==
          ErrorKind::Validation);

    // alphabet mismatch between rule and map
    GgrRule foreign = parse_rule(
        "input-alphabet \"x\"\n"
        "output-alphabet \"y\"\n"
        "forall x1 in SIGMA+: T(x1) = \"y\"\n");
    CHECK(error_kind([&] { err_partial_sum(*t, foreign, 1.0, 2); }) ==
          ErrorKind::Alphabet);
}

TEST_CASE("associative regrouping matches the canonical sum") {
    auto alpha = Alphabet::make({"a", "b"});
    auto t = reversal_table(alpha, 4);
    GgrRule concat = parse_rule(kConcatRuleText);

    PartialSum ps = err_partial_sum(*t, concat, 0.8, 4);
    double regrouped = 0.0;
    for (std::size_t m = ps.sumByLength.size(); m-- > 0;)
        regrouped += ps.sumByLength[m];
    CHECK(std::abs(regrouped - ps.sum) <= 1e-12);
}
