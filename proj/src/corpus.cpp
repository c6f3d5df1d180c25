#include "ggr/corpus.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_set>

#include "ggr/domain.hpp"
#include "ggr/engine.hpp"
#include "ggr/errors.hpp"
#include "ggr/util.hpp"

namespace ggr {

namespace {

// strings of length 1..maxLen enumerated exactly is the generation space;
// refuse anything past this many candidates
constexpr std::uint64_t kDatasetEnumerationCap = 2'000'000;

TokenString empty_string(const AlphabetRef& a) { return TokenString(a, {}); }

Pattern ground_pattern(const AlphabetRef& a, const std::string& phrase) {
    std::vector<PatternElem> elems;
    for (const auto& piece : split_ws(phrase))
        elems.push_back(PatternElem::literal(a->require(piece)));
    return Pattern(std::move(elems));
}

GgrRule ground_rule(const AlphabetRef& in, const AlphabetRef& out,
                    const std::string& lhs, const std::string& rhs) {
    return GgrRule(in, out, {}, ground_pattern(in, lhs),
                   {TokenString::parse(out, rhs)}, {});
}

// T(<lhs elems>) = T(x_{argVar[0]}) ... T(x_{argVar[k-1]}) with empty blocks
GgrRule call_rule(const AlphabetRef& in, const AlphabetRef& out,
                  std::vector<InputVariable> vars, Pattern lhs,
                  const std::vector<std::size_t>& argVars) {
    std::vector<TokenString> blocks(argVars.size() + 1, empty_string(out));
    std::vector<Pattern> args;
    args.reserve(argVars.size());
    for (std::size_t v : argVars) args.push_back(Pattern({PatternElem::variable(v)}));
    return GgrRule(in, out, std::move(vars), std::move(lhs), std::move(blocks),
                   std::move(args));
}

// regex alternation of single tokens: ("a"|"b"|...)
std::string one_of(const std::vector<std::string>& tokens) {
    std::string src = "(";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) src += "|";
        src += "\"" + tokens[i] + "\"";
    }
    return src + ")";
}

void require_table(const std::vector<std::pair<std::string, std::string>>& table,
                   const char* who) {
    if (table.empty())
        fail(ErrorKind::Validation, std::string(who) + ": the table is empty");
}

} // namespace

Grammar build_gordon_grammar(
    const std::vector<std::pair<std::string, std::string>>& permutation) {
    require_table(permutation, "permutation grammar");
    std::vector<std::string> tokens;
    std::unordered_set<std::string> left, right;
    for (const auto& [from, to] : permutation) {
        if (!left.insert(from).second)
            fail(ErrorKind::Validation,
                 "permutation grammar: token \"" + from + "\" mapped twice");
        if (!right.insert(to).second)
            fail(ErrorKind::Validation,
                 "permutation grammar: token \"" + to + "\" produced twice");
        tokens.push_back(from);
    }
    for (const auto& t : tokens)
        if (right.find(t) == right.end())
            fail(ErrorKind::Validation,
                 "permutation grammar: not a bijection, token \"" + t +
                     "\" never produced");
    for (const auto& [from, to] : permutation)
        if (left.find(to) == left.end())
            fail(ErrorKind::Validation,
                 "permutation grammar: not a bijection, token \"" + to +
                     "\" is outside the alphabet");

    AlphabetRef alpha = Alphabet::make(tokens);
    Grammar g;
    g.inputAlphabet = alpha;
    g.outputAlphabet = alpha;
    for (const auto& [from, to] : permutation)
        g.rules.push_back(ground_rule(alpha, alpha, from, to));
    VariableDomain plus = VariableDomain::sigmaPlus(alpha);
    g.rules.push_back(call_rule(
        alpha, alpha, {{"x1", plus}, {"x2", plus}},
        Pattern({PatternElem::variable(0), PatternElem::variable(1)}), {0, 1}));
    return g;
}

Grammar build_and_after_grammar(
    const std::vector<std::pair<std::string, std::string>>& groundFacts) {
    require_table(groundFacts, "conjunction grammar");
    std::vector<std::string> inTokens, outTokens;
    std::unordered_set<std::string> inSeen, outSeen, lhsSeen;
    for (const auto& [cmd, meaning] : groundFacts) {
        const auto cmdTokens = split_ws(cmd);
        if (cmdTokens.empty())
            fail(ErrorKind::Validation, "conjunction grammar: empty command");
        if (!lhsSeen.insert(cmd).second)
            fail(ErrorKind::Validation,
                 "conjunction grammar: command \"" + cmd + "\" listed twice");
        for (const auto& t : cmdTokens) {
            if (t == "AND" || t == "AFTER")
                fail(ErrorKind::Validation,
                     "conjunction grammar: command \"" + cmd +
                         "\" contains a conjunction token");
            if (inSeen.insert(t).second) inTokens.push_back(t);
        }
        for (const auto& t : split_ws(meaning))
            if (outSeen.insert(t).second) outTokens.push_back(t);
    }
    if (outTokens.empty())
        fail(ErrorKind::Validation,
             "conjunction grammar: the ground outputs list no tokens");

    // both conjunction rules quantify over conjunction-free strings, so
    // neither rule ever constrains a string the other one rewrites
    std::string plainSrc = one_of(inTokens) + "+";
    inTokens.push_back("AND");
    inTokens.push_back("AFTER");
    AlphabetRef in = Alphabet::make(inTokens);
    AlphabetRef out = Alphabet::make(outTokens);
    VariableDomain plain = VariableDomain::fromRegex(in, plainSrc);

    Grammar g;
    g.inputAlphabet = in;
    g.outputAlphabet = out;
    for (const auto& [cmd, meaning] : groundFacts)
        g.rules.push_back(ground_rule(in, out, cmd, meaning));
    const TokenId idAnd = in->require("AND");
    const TokenId idAfter = in->require("AFTER");
    g.rules.push_back(call_rule(in, out, {{"x1", plain}, {"x2", plain}},
                                Pattern({PatternElem::variable(0),
                                         PatternElem::literal(idAnd),
                                         PatternElem::variable(1)}),
                                {0, 1}));
    g.rules.push_back(call_rule(in, out, {{"x1", plain}, {"x2", plain}},
                                Pattern({PatternElem::variable(0),
                                         PatternElem::literal(idAfter),
                                         PatternElem::variable(1)}),
                                {1, 0}));
    return g;
}

Grammar build_tagged_grammar(
    const std::vector<std::vector<std::pair<std::string, std::string>>>& classes) {
    if (classes.empty())
        fail(ErrorKind::Validation, "tagged grammar: no classes given");
    std::vector<std::string> tokens;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        require_table(classes[i], "tagged grammar class");
        std::unordered_set<std::string> left, right;
        for (const auto& [from, to] : classes[i]) {
            if (!seen.insert(from).second)
                fail(ErrorKind::Validation,
                     "tagged grammar: word \"" + from +
                         "\" appears in two classes or twice");
            left.insert(from);
            if (!right.insert(to).second)
                fail(ErrorKind::Validation, "tagged grammar: word \"" + to +
                                                "\" produced twice in a class");
            tokens.push_back(from);
        }
        for (const auto& [from, to] : classes[i]) {
            (void)from;
            if (left.find(to) == left.end())
                fail(ErrorKind::Validation,
                     "tagged grammar: class " + std::to_string(i + 1) +
                         " is not a bijection at \"" + to + "\"");
        }
    }
    std::vector<std::string> brackets;
    for (std::size_t i = 1; i <= classes.size(); ++i) {
        brackets.push_back("l" + std::to_string(i));
        brackets.push_back("l" + std::to_string(i) + "'");
    }
    for (const auto& b : brackets) {
        if (seen.count(b))
            fail(ErrorKind::Validation,
                 "tagged grammar: word \"" + b + "\" collides with a bracket");
        tokens.push_back(b);
    }
    AlphabetRef alpha = Alphabet::make(tokens);

    Grammar g;
    g.inputAlphabet = alpha;
    g.outputAlphabet = alpha;
    for (const auto& cls : classes)
        for (const auto& [from, to] : cls)
            g.rules.push_back(ground_rule(alpha, alpha, from, to));

    // per class: T(l<i> x l<i>') = l<i> T(x) l<i>' for class-i words
    std::string chunkSrc;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        std::vector<std::string> words;
        std::vector<TokenString> members;
        for (const auto& [from, to] : classes[i]) {
            (void)to;
            words.push_back(from);
            members.push_back(TokenString::parse(alpha, from));
        }
        const std::string lb = "l" + std::to_string(i + 1);
        const std::string rb = lb + "'";
        if (i) chunkSrc += "|";
        chunkSrc += "\"" + lb + "\" " + one_of(words) + " \"" + rb + "\"";
        VariableDomain dom = VariableDomain::finiteSet(alpha, members);
        g.rules.push_back(GgrRule(
            alpha, alpha, {{"x1", dom}},
            Pattern({PatternElem::literal(alpha->require(lb)),
                     PatternElem::variable(0),
                     PatternElem::literal(alpha->require(rb))}),
            {TokenString::parse(alpha, lb), TokenString::parse(alpha, rb)},
            {Pattern({PatternElem::variable(0)})}));
    }

    // one bracketed chunk, then one or more further chunks
    VariableDomain chunk = VariableDomain::fromRegex(alpha, "(" + chunkSrc + ")");
    VariableDomain chunks =
        VariableDomain::fromRegex(alpha, "(" + chunkSrc + ")+");
    g.rules.push_back(call_rule(
        alpha, alpha, {{"x1", chunk}, {"x2", chunks}},
        Pattern({PatternElem::variable(0), PatternElem::variable(1)}), {0, 1}));
    return g;
}

Grammar build_lake_grammar(const LakeOptions& options) {
    std::vector<std::string> tokens = {"zup",  "fep",    "gazzer", "tufa",
                                       "lug",  "kiki",   "blicket"};
    if (options.bracketTagged) {
        tokens.push_back("l");
        tokens.push_back("l'");
    }
    AlphabetRef in = Alphabet::make(tokens);
    AlphabetRef out = Alphabet::make({"green", "rose", "red", "bourbon"});

    Grammar g;
    g.inputAlphabet = in;
    g.outputAlphabet = out;
    g.rules.push_back(ground_rule(in, out, "zup", "green"));
    g.rules.push_back(ground_rule(in, out, "fep", "rose"));
    g.rules.push_back(ground_rule(in, out, "gazzer", "red"));
    g.rules.push_back(ground_rule(in, out, "tufa", "bourbon"));

    const TokenId idLug = in->require("lug");
    const TokenId idKiki = in->require("kiki");
    const TokenId idBlicket = in->require("blicket");
    VariableDomain word = VariableDomain::sigmaOne(in);
    VariableDomain wide = VariableDomain::sigmaPlus(in);
    VariableDomain concatDom = options.generalizedConcatenation ? wide : word;

    if (!options.bracketTagged) {
        g.rules.push_back(call_rule(
            in, out, {{"x1", word}, {"x2", word}},
            Pattern({PatternElem::variable(0), PatternElem::literal(idLug),
                     PatternElem::variable(1)}),
            {1, 0, 1, 0, 0}));
        g.rules.push_back(call_rule(
            in, out, {{"x1", word}, {"x2", word}},
            Pattern({PatternElem::variable(0), PatternElem::literal(idKiki),
                     PatternElem::variable(1)}),
            {0, 1}));
        g.rules.push_back(call_rule(
            in, out, {{"x1", word}},
            Pattern({PatternElem::variable(0), PatternElem::literal(idBlicket)}),
            {0, 0}));
        g.rules.push_back(call_rule(
            in, out, {{"x1", concatDom}, {"x2", concatDom}},
            Pattern({PatternElem::variable(0), PatternElem::variable(1)}),
            {0, 1}));
        return g;
    }

    // tag-delimited form: every word w of a rule's left side appears as
    // l w l', and the quantified arguments are single words
    const TokenId lb = in->require("l");
    const TokenId rb = in->require("l'");
    std::vector<TokenString> wordMembers;
    for (const auto& t : {"zup", "fep", "gazzer", "tufa", "lug", "kiki",
                          "blicket"})
        wordMembers.push_back(TokenString::parse(in, t));
    VariableDomain tagged = options.generalizedConcatenation
                                ? wide
                                : VariableDomain::finiteSet(in, wordMembers);

    auto wrap = [&](std::initializer_list<PatternElem> middle) {
        std::vector<PatternElem> elems;
        elems.push_back(PatternElem::literal(lb));
        for (const auto& e : middle) elems.push_back(e);
        elems.push_back(PatternElem::literal(rb));
        return Pattern(std::move(elems));
    };
    auto taggedWord = [&](TokenId t) {
        return std::vector<PatternElem>{PatternElem::literal(lb),
                                        PatternElem::literal(t),
                                        PatternElem::literal(rb)};
    };

    // T(l x1 l' l lug l' l x2 l') = T(x2) T(x1) T(x2) T(x1) T(x1), etc.
    auto functionLhs = [&](std::size_t arity, TokenId name) {
        std::vector<PatternElem> elems;
        auto pushTaggedVar = [&](std::size_t v) {
            elems.push_back(PatternElem::literal(lb));
            elems.push_back(PatternElem::variable(v));
            elems.push_back(PatternElem::literal(rb));
        };
        pushTaggedVar(0);
        for (const auto& e : taggedWord(name)) elems.push_back(e);
        if (arity == 2) pushTaggedVar(1);
        return Pattern(std::move(elems));
    };
    g.rules.push_back(call_rule(in, out, {{"x1", tagged}, {"x2", tagged}},
                                functionLhs(2, idLug), {1, 0, 1, 0, 0}));
    g.rules.push_back(call_rule(in, out, {{"x1", tagged}, {"x2", tagged}},
                                functionLhs(2, idKiki), {0, 1}));
    g.rules.push_back(call_rule(in, out, {{"x1", tagged}},
                                functionLhs(1, idBlicket), {0, 0}));
    g.rules.push_back(call_rule(
        in, out, {{"x1", tagged}, {"x2", tagged}},
        Pattern({PatternElem::literal(lb), PatternElem::variable(0),
                 PatternElem::literal(rb), PatternElem::literal(lb),
                 PatternElem::variable(1), PatternElem::literal(rb)}),
        {0, 1}));
    // a single tagged phrase unwraps to its own interpretation
    g.rules.push_back(call_rule(in, out, {{"x1", wide}},
                                wrap({PatternElem::variable(0)}), {0}));
    return g;
}

Grammar build_corpus(const CorpusSpec& spec) {
    switch (spec.which) {
        case CorpusKind::GordonPermutation:
            if (spec.permutation.empty())
                fail(ErrorKind::Validation,
                     "corpus spec: a permutation table is required");
            return build_gordon_grammar(spec.permutation);
        case CorpusKind::AndAfter:
            if (spec.groundFacts.empty())
                fail(ErrorKind::Validation,
                     "corpus spec: ground command facts are required");
            return build_and_after_grammar(spec.groundFacts);
        case CorpusKind::TaggedBrackets:
            if (spec.classes.empty())
                fail(ErrorKind::Validation,
                     "corpus spec: at least one word class is required");
            return build_tagged_grammar(spec.classes);
        case CorpusKind::LakeInterpretation:
            return build_lake_grammar(spec.lake);
    }
    fail(ErrorKind::Usage, "corpus spec: unknown corpus kind");
}

CorpusSpec corpus_preset(CorpusKind which) {
    CorpusSpec spec;
    spec.which = which;
    switch (which) {
        case CorpusKind::GordonPermutation:
            spec.permutation = {{"jump", "run"}, {"run", "jump"}, {"walk", "walk"}};
            break;
        case CorpusKind::AndAfter:
            spec.groundFacts = {{"RUN", "RUN"},
                                {"WALK", "WALK"},
                                {"RUN LEFT", "LTURN RUN"},
                                {"WALK LEFT", "LTURN WALK"}};
            break;
        case CorpusKind::TaggedBrackets:
            spec.classes = {{{"run", "jump"}, {"jump", "run"}},
                            {{"dog", "cat"}, {"cat", "dog"}}};
            break;
        case CorpusKind::LakeInterpretation:
            break;
    }
    return spec;
}

std::vector<std::pair<TokenString, TokenString>> generate_dataset(
    const Grammar& g, std::size_t maxLen, std::size_t count,
    std::uint64_t seed) {
    validate_grammar(g);
    const std::uint64_t sigma = g.inputAlphabet->size();
    std::uint64_t space = 0, layer = 1;
    for (std::size_t len = 1; len <= maxLen; ++len) {
        if (layer > kDatasetEnumerationCap / sigma)
            fail(ErrorKind::Validation,
                 "dataset: the generation space passes " +
                     std::to_string(kDatasetEnumerationCap) +
                     " strings; lower maxLen");
        layer *= sigma;
        space += layer;
        if (space > kDatasetEnumerationCap)
            fail(ErrorKind::Validation,
                 "dataset: the generation space passes " +
                     std::to_string(kDatasetEnumerationCap) +
                     " strings; lower maxLen");
    }

    GrammarMap map(g);
    std::vector<std::pair<TokenString, TokenString>> pool;
    std::vector<TokenId> ids;
    for (std::size_t len = 1; len <= maxLen; ++len) {
        ids.assign(len, 0);
        while (true) {
            TokenString input(g.inputAlphabet, ids);
            if (auto outValue = map.evaluate(input))
                pool.emplace_back(std::move(input), *std::move(outValue));
            std::size_t i = len;
            while (i > 0 && ++ids[i - 1] == sigma) {
                ids[i - 1] = 0;
                --i;
            }
            if (i == 0) break;
        }
    }
    if (pool.empty())
        fail(ErrorKind::Undefined,
             "dataset: the grammar interprets nothing up to length " +
                 std::to_string(maxLen));
    if (count >= pool.size()) return pool;

    // draw `count` distinct indices, then keep the enumeration order
    std::mt19937_64 rng(seed);
    auto below = [&rng](std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t v;
        do { v = rng(); } while (v >= limit);
        return v % n;
    };
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < count; ++i)
        std::swap(order[i], order[i + below(order.size() - i)]);
    order.resize(count);
    std::sort(order.begin(), order.end());
    std::vector<std::pair<TokenString, TokenString>> out;
    out.reserve(count);
    for (std::size_t i : order) out.push_back(std::move(pool[i]));
    return out;
}

} // namespace ggr
