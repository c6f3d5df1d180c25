#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

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

std::multiset<GgrViolationKind> violation_kinds(const GtrRule& r) {
    auto checked = validate_ggr(r);
    REQUIRE(std::holds_alternative<std::vector<GgrViolation>>(checked));
    std::multiset<GgrViolationKind> kinds;
    for (const auto& v : std::get<std::vector<GgrViolation>>(checked))
        kinds.insert(v.kind);
    return kinds;
}

// parse a file expected to yield exactly one executable rule
GgrRule one_rule(const std::string& text) {
    RuleParseResult r = parse_rules(text);
    REQUIRE(r.grammar.rules.size() == 1);
    REQUIRE(r.gtrs.empty());
    return r.grammar.rules[0];
}

// parse a file expected to yield exactly one non-executable rule
GtrRule one_gtr(const std::string& text) {
    RuleParseResult r = parse_rules(text);
    REQUIRE(r.gtrs.size() == 1);
    REQUIRE(r.grammar.rules.empty());
    return r.gtrs[0];
}

const char* kBothAlphabets =
    "input-alphabet \"a1\" \"a2\" \"a3\"\n"
    "output-alphabet \"b1\" \"b2\" \"b3\"\n";

} // namespace

TEST_CASE("swap rule parses with two variables and two calls") {
    RuleParseResult r = parse_rules(
        "input-alphabet \"run\" \"walk\" \"and\"\n"
        "output-alphabet \"RUN\" \"WALK\"\n"
        "# swap the conjuncts\n"
        "forall x1 in SIGMA+, x2 in SIGMA+: T(x1 \"and\" x2) = T(x2) T(x1)\n");
    REQUIRE(r.grammar.rules.size() == 1);
    CHECK(r.gtrs.empty());
    CHECK(r.ruleLines == std::vector<int>{4});
    const GgrRule& rule = r.grammar.rules[0];
    CHECK(rule.h() == 2);
    CHECK(rule.k() == 2);
    CHECK(rule.vars()[0].name == "x1");
    CHECK(rule.vars()[1].name == "x2");
    CHECK(rule.vars()[0].domain.spec().kind == DomainSpec::Kind::SigmaPlus);
    REQUIRE(rule.lhs().length() == 3);
    CHECK(rule.lhs().elems()[0] == PatternElem::variable(0));
    CHECK(rule.lhs().elems()[1] ==
          PatternElem::literal(rule.inputAlphabet()->require("and")));
    CHECK(rule.lhs().elems()[2] == PatternElem::variable(1));
    for (const auto& b : rule.blocks()) CHECK(b.empty());
    REQUIRE(rule.args().size() == 2);
    CHECK(rule.args()[0].elems() == std::vector<PatternElem>{PatternElem::variable(1)});
    CHECK(rule.args()[1].elems() == std::vector<PatternElem>{PatternElem::variable(0)});
    CHECK(complexity(rule) == 7);  // 3 + 1 + 1 + 0 + 2
}

TEST_CASE("ground fact parses without a quantifier and infers alphabets") {
    GgrRule rule = one_rule("T(\"zup\") = \"green\"\n");
    CHECK(rule.h() == 0);
    CHECK(rule.k() == 0);
    CHECK(rule.isGround());
    CHECK(rule.inputAlphabet()->tokens() == std::vector<std::string>{"zup"});
    CHECK(rule.outputAlphabet()->tokens() == std::vector<std::string>{"green"});
    REQUIRE(rule.blocks().size() == 1);
    CHECK(rule.blocks()[0].text() == "green");
    CHECK(complexity(rule) == 2);  // 1 + 1

    GroundEquation g = substitute(rule, {});
    CHECK(g.lhsInput.text() == "zup");
    CHECK(g.rhsArgs.empty());
    REQUIRE(g.blocks.size() == 1);
    CHECK(g.blocks[0].text() == "green");
}

TEST_CASE("alphabet inference walks the file in order of first appearance") {
    RuleParseResult r = parse_rules(
        "T(\"zup\") = \"green\"\n"
        "class-domain C = { \"fep\", \"zup\" }\n"
        "forall x1 in C: T(x1 \"lug\") = \"rose\" T(x1)\n");
    CHECK(r.grammar.inputAlphabet->tokens() ==
          std::vector<std::string>({"zup", "fep", "lug"}));
    CHECK(r.grammar.outputAlphabet->tokens() ==
          std::vector<std::string>({"green", "rose"}));
    REQUIRE(r.grammar.domains.size() == 1);
    CHECK(r.grammar.domains[0].first == "C");
    CHECK(r.grammar.findDomain("C") != nullptr);
    CHECK(r.grammar.findDomain("D") == nullptr);
}

TEST_CASE("syntax errors carry line and column") {
    // unclosed call
    CHECK(error_kind([] {
              parse_rules("forall x1 in SIGMA*: T(x1 = T(x1)\n");
          }) == ErrorKind::Parse);
    // unterminated string
    CHECK(error_kind([] { parse_rules("T(\"zup) = \"green\"\n"); }) ==
          ErrorKind::Parse);
    // missing equals
    CHECK(error_kind([] { parse_rules("T(\"zup\") \"green\"\n"); }) ==
          ErrorKind::Parse);
    // empty right side
    CHECK(error_kind([] { parse_rules("T(\"zup\") =\n"); }) == ErrorKind::Parse);
    // empty call
    CHECK(error_kind([] { parse_rules("T() = \"green\"\n"); }) == ErrorKind::Parse);
    try {
        parse_rules("# comment\n\nT(\"zup) = \"green\"\n");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).rfind("line 3", 0) == 0);
    }
}

TEST_CASE("restricted-form check accepts the five-symbol left side") {
    GgrRule rule = one_rule(
        std::string(kBothAlphabets) +
        "forall x1 in SIGMA*, x2 in SIGMA*: "
        "T(x1 \"a1 a2\" x2 \"a3\") = "
        "\"b1\" T(x1) T(x1) T(\"a1 a3\") T(x2 \"a2\") \"b2\"\n");
    CHECK(rule.h() == 2);
    CHECK(rule.k() == 4);
    CHECK(rule.lhs().length() == 5);
    CHECK(rule.lhs().multiplicity(0) == 1);
    CHECK(rule.args()[0].length() == 1);
    CHECK(rule.args()[2].length() == 2);
    CHECK(rule.args()[3].length() == 2);
    CHECK(rule.blocks()[0].text() == "b1");
    CHECK(rule.blocks()[4].text() == "b2");
    CHECK(rule.blocks()[1].empty());
}

TEST_CASE("restricted-form check reports every violated condition") {
    // output variable + two calls on the left: both conditions reported
    GtrRule gtr = one_gtr(
        std::string(kBothAlphabets) +
        "forall x1 in SIGMA*, x2 in SIGMA*, y1 in SIGMA*: "
        "T(x1 \"a1 a2\") \"b1\" y1 T(x2 \"a3\") = "
        "\"b1\" T(x1) T(x1) T(\"a1 a3\") y1 T(\"a1\" x2 \"a2\") \"b3\" y1\n");
    CHECK(gtr.inputVars().size() == 2);
    CHECK(gtr.outputVars().size() == 1);
    CHECK(gtr.lhsArgs().size() == 2);
    CHECK(gtr.rhsArgs().size() == 4);
    CHECK(violation_kinds(gtr) ==
          std::multiset<GgrViolationKind>({GgrViolationKind::OutputVariablePresent,
                                           GgrViolationKind::LhsNotSingleCall}));
}

TEST_CASE("each restricted-form condition fails independently") {
    // argument longer than the left side
    GtrRule longArg = one_gtr(std::string(kBothAlphabets) +
                              "forall x1 in SIGMA*: T(x1) = T(x1 \"a1\")\n");
    CHECK(violation_kinds(longArg) ==
          std::multiset<GgrViolationKind>({GgrViolationKind::ArgExceedsLhs}));

    // variable not bound on the left side
    GtrRule unbound = one_gtr(std::string(kBothAlphabets) +
                              "forall x1 in SIGMA*, x2 in SIGMA*: T(x1) = T(x2)\n");
    CHECK(violation_kinds(unbound) ==
          std::multiset<GgrViolationKind>({GgrViolationKind::VarNotInLhs}));

    // two calls on the left, nothing else wrong
    GtrRule twoCalls = one_gtr(std::string(kBothAlphabets) +
                               "forall x1 in SIGMA*: T(x1) T(x1) = T(x1)\n");
    CHECK(violation_kinds(twoCalls) ==
          std::multiset<GgrViolationKind>({GgrViolationKind::LhsNotSingleCall}));

    // literal material around the single left call
    GtrRule blockMaterial = one_gtr(std::string(kBothAlphabets) +
                                    "forall x1 in SIGMA*: \"b1\" T(x1) = T(x1)\n");
    CHECK(violation_kinds(blockMaterial) ==
          std::multiset<GgrViolationKind>({GgrViolationKind::LhsNotSingleCall}));

    // pure output variable violation (left side stays a single call)
    GtrRule outVar = one_gtr(std::string(kBothAlphabets) +
                             "forall y1 in SIGMA*: T(\"a1\") = \"b1\" y1\n");
    CHECK(violation_kinds(outVar) ==
          std::multiset<GgrViolationKind>({GgrViolationKind::OutputVariablePresent}));

    // an output variable on the left also breaks the single-call shape
    GtrRule outVarLhs = one_gtr(std::string(kBothAlphabets) +
                                "forall y1 in SIGMA*: T(\"a1\") y1 = \"b1\" y1\n");
    CHECK(violation_kinds(outVarLhs) ==
          std::multiset<GgrViolationKind>({GgrViolationKind::OutputVariablePresent,
                                           GgrViolationKind::LhsNotSingleCall}));
}

TEST_CASE("substitution instantiates every occurrence") {
    GgrRule lug = one_rule(
        "input-alphabet \"zup\" \"fep\" \"lug\"\n"
        "output-alphabet \"green\" \"rose\"\n"
        "forall x1 in SIGMA+, x2 in SIGMA+: "
        "T(x1 \"lug\" x2) = T(x2) T(x1) T(x2) T(x1) T(x1)\n");
    const AlphabetRef& in = lug.inputAlphabet();
    GroundEquation g = substitute(
        lug, {TokenString::parse(in, "zup"), TokenString::parse(in, "fep")});
    CHECK(g.lhsInput.text() == "zup lug fep");
    REQUIRE(g.rhsArgs.size() == 5);
    CHECK(g.rhsArgs[0].text() == "fep");
    CHECK(g.rhsArgs[1].text() == "zup");
    CHECK(g.rhsArgs[2].text() == "fep");
    CHECK(g.rhsArgs[3].text() == "zup");
    CHECK(g.rhsArgs[4].text() == "zup");
    for (const auto& b : g.blocks) CHECK(b.empty());

    // arity and domain misuse
    CHECK(error_kind([&] { substitute(lug, {TokenString::parse(in, "zup")}); }) ==
          ErrorKind::Validation);
    CHECK(error_kind([&] {
              substitute(lug, {TokenString::parse(in, "zup"), TokenString(in, {})});
          }) == ErrorKind::Domain);  // SIGMA+ excludes the empty string
}

TEST_CASE("substituted length equals literal count plus weighted variable lengths") {
    GgrRule concat = one_rule(
        "input-alphabet \"a\" \"b\" \"c\"\n"
        "output-alphabet \"z\"\n"
        "forall x1 in SIGMA1, x2 in SIGMA+: T(x1 x2) = T(x1) T(x2)\n");
    const AlphabetRef& in = concat.inputAlphabet();
    GroundEquation g = substitute(
        concat, {TokenString::parse(in, "a"), TokenString::parse(in, "b c")});
    CHECK(g.lhsInput.text() == "a b c");
    CHECK(g.lhsInput.length() == 3);

    // repeated variable: each occurrence contributes its full length
    GgrRule doubled = one_rule(
        "input-alphabet \"a\" \"b\"\n"
        "output-alphabet \"z\"\n"
        "forall x1 in SIGMA*: T(x1 x1 \"a\") = T(x1)\n");
    const AlphabetRef& in2 = doubled.inputAlphabet();
    const TokenString v = TokenString::parse(in2, "b b");
    GroundEquation g2 = substitute(doubled, {v});
    const std::size_t literals = 1;
    const std::size_t expected =
        literals + doubled.lhs().multiplicity(0) * v.length();
    CHECK(g2.lhsInput.length() == expected);
    CHECK(g2.lhsInput.text() == "b b b b a");
}

TEST_CASE("complexity charges one per symbol and per variable") {
    const std::string head =
        "input-alphabet \"a\" \"b\"\n"
        "output-alphabet \"z\"\n";
    auto score = [&](const std::string& ruleLine) {
        return complexity(one_rule(head + ruleLine + "\n"));
    };
    const std::uint64_t base =
        score("forall x1 in SIGMA+, x2 in SIGMA+: T(x1 \"a\" x2) = T(x2) T(x1)");
    CHECK(base == 7);
    // one extra literal in the left pattern
    CHECK(score("forall x1 in SIGMA+, x2 in SIGMA+: T(x1 \"a a\" x2) = T(x2) T(x1)") ==
          base + 1);
    // one extra literal in an argument
    CHECK(score("forall x1 in SIGMA+, x2 in SIGMA+: T(x1 \"a\" x2) = T(x2 \"a\") T(x1)") ==
          base + 1);
    // one extra output block token
    CHECK(score("forall x1 in SIGMA+, x2 in SIGMA+: T(x1 \"a\" x2) = T(x2) \"z\" T(x1)") ==
          base + 1);
    // one extra variable occurrence in an argument
    CHECK(score("forall x1 in SIGMA+, x2 in SIGMA+: T(x1 \"a\" x2) = T(x2 x1) T(x1)") ==
          base + 1);
}

TEST_CASE("variable misuse is rejected at parse time") {
    const std::string head = std::string(kBothAlphabets);
    // same variable inside and outside calls
    CHECK(error_kind([&] {
              parse_rules(head + "forall x1 in SIGMA*: T(x1) = x1 T(x1)\n");
          }) == ErrorKind::Validation);
    // declared but never used
    CHECK(error_kind([&] {
              parse_rules(head +
                          "forall x1 in SIGMA*, x3 in SIGMA*: T(x1) = T(x1)\n");
          }) == ErrorKind::Validation);
    // used but never declared
    CHECK(error_kind([&] { parse_rules(head + "T(x9) = T(x9)\n"); }) ==
          ErrorKind::Parse);
    // duplicate binding
    CHECK(error_kind([&] {
              parse_rules(head +
                          "forall x1 in SIGMA*, x1 in SIGMA*: T(x1) = T(x1)\n");
          }) == ErrorKind::Validation);
    // literal outside the declared alphabet, error prefixed with its line
    try {
        parse_rules(std::string(kBothAlphabets) + "T(\"zap\") = \"b1\"\n");
        FAIL("expected an alphabet error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Alphabet);
        CHECK(std::string(e.what()).rfind("line 3", 0) == 0);
    }
}

TEST_CASE("named domains resolve for input variables only") {
    RuleParseResult r = parse_rules(
        "input-alphabet \"zup\" \"fep\" \"lug\"\n"
        "output-alphabet \"green\" \"rose\"\n"
        "class-domain C = { \"zup\", \"fep\" }\n"
        "forall x1 in C: T(x1 \"lug\") = \"green\" T(x1)\n");
    REQUIRE(r.grammar.rules.size() == 1);
    const VariableDomain& d = r.grammar.rules[0].vars()[0].domain;
    const AlphabetRef& in = r.grammar.inputAlphabet;
    CHECK(d.contains(TokenString::parse(in, "zup")));
    CHECK(!d.contains(TokenString::parse(in, "lug")));
    CHECK(d.maxLength() == 1);

    CHECK(error_kind([] {
              parse_rules("input-alphabet \"zup\"\noutput-alphabet \"green\"\n"
                          "forall x1 in D: T(x1) = \"green\"\n");
          }) == ErrorKind::Domain);
    // named domains are input classes: their strings must live in the
    // input alphabet, and they never bind output variables
    CHECK(error_kind([] {
              parse_rules("input-alphabet \"zup\"\noutput-alphabet \"green\"\n"
                          "class-domain C = { \"green\" }\n");
          }) == ErrorKind::Alphabet);
    CHECK(error_kind([] {
              parse_rules("input-alphabet \"zup\"\noutput-alphabet \"green\"\n"
                          "class-domain C = { \"zup\" }\n"
                          "forall y1 in C: T(\"zup\") = \"green\" y1\n");
          }) == ErrorKind::Domain);
    CHECK(error_kind([] {
              parse_rules("class-domain C = { \"zup\" }\n"
                          "class-domain C = SIGMA*\n"
                          "T(\"zup\") = \"green\"\n");
          }) == ErrorKind::Parse);
}

TEST_CASE("inline domains work in bindings") {
    GgrRule rule = one_rule(
        "input-alphabet \"zup\" \"fep\"\n"
        "output-alphabet \"green\"\n"
        "forall x1 in { \"zup\" }: T(x1 \"fep\") = \"green\"\n");
    CHECK(rule.vars()[0].domain.spec().kind == DomainSpec::Kind::FiniteSet);
    CHECK(rule.vars()[0].domain.contains(
        TokenString::parse(rule.inputAlphabet(), "zup")));

    GgrRule rx = one_rule(
        "input-alphabet \"zup\" \"fep\"\n"
        "output-alphabet \"green\"\n"
        "forall x1 in regex(\"zup\"+): T(x1 \"fep\") = \"green\"\n");
    const AlphabetRef& in = rx.inputAlphabet();
    CHECK(rx.vars()[0].domain.contains(TokenString::parse(in, "zup zup")));
    CHECK(!rx.vars()[0].domain.contains(TokenString::parse(in, "fep")));
    CHECK(!rx.vars()[0].domain.contains(TokenString(in, {})));
}

TEST_CASE("printing is a fixpoint of parsing") {
    const std::string text =
        "input-alphabet \"a1\" \"a2\" \"a3\"\n"
        "output-alphabet \"b1\" \"b2\" \"b3\"\n"
        "class-domain C = { \"a1\", \"a2 a2\" }\n"
        "class-domain R = regex((\"a1\" | \"a2\")* \"a3\"?)\n"
        "forall x1 in SIGMA*, x2 in SIGMA*: T(x1 \"a1 a2\" x2 \"a3\") = "
        "\"b1\" T(x1) T(x1) T(\"a1 a3\") T(x2 \"a2\") \"b2\"\n"
        "forall x1 in C: T(x1) = \"b3\"\n"
        "T(\"a1\") = \"\"\n";
    RuleParseResult first = parse_rules(text);
    const std::string printed = print_grammar(first.grammar);
    RuleParseResult second = parse_rules(printed);
    CHECK(print_grammar(second.grammar) == printed);
    REQUIRE(second.grammar.rules.size() == first.grammar.rules.size());
    for (std::size_t i = 0; i < first.grammar.rules.size(); ++i)
        CHECK(second.grammar.rules[i] == first.grammar.rules[i]);
    CHECK(second.grammar.domains.size() == first.grammar.domains.size());

    // adjacent literals merge into one quoted run when printed
    GgrRule merged = one_rule(std::string(kBothAlphabets) +
                              "T(\"a1\" \"a2\") = \"b1\" \"b2\"\n");
    CHECK(print_rule(merged) == "T(\"a1 a2\") = \"b1 b2\"");

    // the unrestricted form round-trips too
    const std::string gtrLine =
        "forall x1 in SIGMA*, x2 in SIGMA*, y1 in SIGMA*: "
        "T(x1 \"a1 a2\") \"b1\" y1 T(x2 \"a3\") = "
        "\"b1\" T(x1) T(x1) T(\"a1 a3\") y1 T(\"a1\" x2 \"a2\") \"b3\" y1";
    GtrRule gtr = one_gtr(std::string(kBothAlphabets) + gtrLine + "\n");
    CHECK(print_gtr(gtr) == gtrLine);
    GtrRule again = one_gtr(std::string(kBothAlphabets) + print_gtr(gtr) + "\n");
    CHECK(print_gtr(again) == gtrLine);
}

TEST_CASE("empty output blocks print as the empty literal") {
    GgrRule erase = one_rule("input-alphabet \"a\"\noutput-alphabet \"z\"\n"
                             "T(\"a\") = \"\"\n");
    CHECK(erase.blocks().size() == 1);
    CHECK(erase.blocks()[0].empty());
    CHECK(print_rule(erase) == "T(\"a\") = \"\"");
    GroundEquation g = substitute(erase, {});
    CHECK(g.blocks[0].empty());
}

TEST_CASE("direct construction enforces the same invariants") {
    AlphabetRef in = Alphabet::make({"a"});
    AlphabetRef out = Alphabet::make({"z"});
    VariableDomain star = VariableDomain::sigmaStar(in);
    Pattern justVar({PatternElem::variable(0)});
    Pattern varPlus({PatternElem::variable(0), PatternElem::literal(0)});

    // argument longer than the left side
    CHECK(error_kind([&] {
              GgrRule(in, out, {{"x1", star}}, justVar, {TokenString(out, {}), TokenString(out, {})},
                      {varPlus});
          }) == ErrorKind::Validation);
    // unbound variable
    CHECK(error_kind([&] {
              GgrRule(in, out, {{"x1", star}}, Pattern({PatternElem::literal(0)}),
                      {TokenString(out, {}), TokenString(out, {})}, {justVar});
          }) == ErrorKind::Validation);
    // domain over the wrong alphabet
    CHECK(error_kind([&] {
              GgrRule(in, out, {{"x1", VariableDomain::sigmaStar(out)}}, justVar,
                      {TokenString(out, {})}, {});
          }) == ErrorKind::Validation);
    // block over the wrong alphabet
    CHECK(error_kind([&] {
              GgrRule(in, out, {{"x1", star}}, justVar, {TokenString(in, {})}, {});
          }) == ErrorKind::Validation);
}
