// capi.cpp -- the extern "C" surface. Every entry point follows the same
// shape: clear the thread-local error, do the work, translate any Error
// into a status code. Nothing in here may let an exception escape.
#include "ggr/ggr_c.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "ggr/automata_ops.hpp"
#include "ggr/corpus.hpp"
#include "ggr/engine.hpp"
#include "ggr/err.hpp"
#include "ggr/errors.hpp"
#include "ggr/rule.hpp"
#include "ggr/rule_io.hpp"
#include "ggr/search.hpp"
#include "ggr/strings.hpp"
#include "ggr/transducer.hpp"
#include "ggr/transduction_map.hpp"
#include "ggr/util.hpp"

using namespace ggr;

struct ggr_grammar {
    RuleParseResult parsed;
};

struct ggr_transducer {
    FiniteTransducer t;
};

struct ggr_partition {
    StatePartition p;
};

struct ggr_rule {
    GgrRule r;
};

struct ggr_map {
    TransductionMapRef m;
};

namespace {

thread_local std::string t_last_error;

ggr_status to_status(ErrorKind k) {
    switch (k) {
        case ErrorKind::Usage: return GGR_E_USAGE;
        case ErrorKind::Io: return GGR_E_IO;
        case ErrorKind::Parse: return GGR_E_PARSE;
        case ErrorKind::Validation: return GGR_E_VALIDATION;
        case ErrorKind::Alphabet: return GGR_E_ALPHABET;
        case ErrorKind::Domain: return GGR_E_DOMAIN;
        case ErrorKind::Undefined: return GGR_E_UNDEFINED;
        case ErrorKind::Growth: return GGR_E_GROWTH;
        case ErrorKind::NoRuleMatches: return GGR_E_NO_RULE_MATCHES;
        case ErrorKind::DepthExceeded: return GGR_E_DEPTH_EXCEEDED;
        case ErrorKind::NonDecreasingRecursion:
            return GGR_E_NON_DECREASING_RECURSION;
        case ErrorKind::AmbiguousMatch: return GGR_E_AMBIGUOUS_MATCH;
        case ErrorKind::StateLimit: return GGR_E_STATE_LIMIT;
        case ErrorKind::Internal: return GGR_E_INTERNAL;
    }
    return GGR_E_INTERNAL;
}

template <typename Fn>
ggr_status guard(Fn&& fn) noexcept {
    t_last_error.clear();
    try {
        fn();
        return GGR_OK;
    } catch (const Error& e) {
        t_last_error = e.what();
        return to_status(e.kind());
    } catch (const std::bad_alloc&) {
        t_last_error = "out of memory";
        return GGR_E_INTERNAL;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return GGR_E_INTERNAL;
    } catch (...) {
        t_last_error = "unknown failure";
        return GGR_E_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* message) {
    if (!ok) fail(ErrorKind::Usage, message);
}

std::string pairs_to_tsv(
    const std::vector<std::pair<TokenString, TokenString>>& pairs) {
    std::string out;
    for (const auto& [in, rhs] : pairs) {
        out += in.text();
        out += '\t';
        out += rhs.text();
        out += '\n';
    }
    return out;
}

// ------------------------------------------------- built-in grammar registry

struct CorpusEntry {
    const char* name;
    const char* summary;
};

constexpr CorpusEntry kCorpusEntries[] = {
    {"gordon", "token permutation extended over whole strings"},
    {"gordon-concat", "the word-level concatenation rule, as a rule file"},
    {"and-after", "command conjunctions: AND keeps order, AFTER swaps it"},
    {"tagged-brackets", "per-class word exchange inside bracket tags"},
    {"lake", "four color words with lug/kiki/blicket composition"},
    {"lake-concat", "lake with concatenation over whole strings"},
    {"lake-tagged", "lake with every phrase wrapped in bracket tags"},
};

std::string alphabet_directives(const Grammar& g) {
    std::string out = "input-alphabet";
    for (const auto& tok : g.inputAlphabet->tokens()) out += " \"" + tok + "\"";
    out += "\noutput-alphabet";
    for (const auto& tok : g.outputAlphabet->tokens()) out += " \"" + tok + "\"";
    out += "\n";
    return out;
}

// The concatenation rule of the permutation grammar quantified over single
// tokens, the form whose domains a fixed horizon exhausts (so a scoring run
// certifies a zero-width tail instead of truncating an infinite sum).
std::string gordon_concat_rule_text() {
    Grammar g = build_gordon_grammar(
        corpus_preset(CorpusKind::GordonPermutation).permutation);
    VariableDomain one = VariableDomain::sigmaOne(g.inputAlphabet);
    std::vector<TokenString> blocks(3, TokenString(g.outputAlphabet, {}));
    GgrRule rule(
        g.inputAlphabet, g.outputAlphabet,
        {{"x1", one}, {"x2", one}},
        Pattern({PatternElem::variable(0), PatternElem::variable(1)}),
        std::move(blocks),
        {Pattern({PatternElem::variable(0)}), Pattern({PatternElem::variable(1)})});
    return alphabet_directives(g) + print_rule(rule) + "\n";
}

Grammar corpus_grammar(const std::string& name) {
    if (name == "gordon")
        return build_corpus(corpus_preset(CorpusKind::GordonPermutation));
    if (name == "and-after")
        return build_corpus(corpus_preset(CorpusKind::AndAfter));
    if (name == "tagged-brackets")
        return build_corpus(corpus_preset(CorpusKind::TaggedBrackets));
    if (name == "lake")
        return build_corpus(corpus_preset(CorpusKind::LakeInterpretation));
    if (name == "lake-concat") {
        LakeOptions opt;
        opt.generalizedConcatenation = true;
        return build_lake_grammar(opt);
    }
    if (name == "lake-tagged") {
        LakeOptions opt;
        opt.bracketTagged = true;
        return build_lake_grammar(opt);
    }
    if (name == "gordon-concat")
        fail(ErrorKind::Usage,
             "\"gordon-concat\" names a rule file, not a grammar");
    fail(ErrorKind::Usage, "unknown corpus name \"" + name +
                               "\"; the list subcommand names the registry");
}

} // namespace

extern "C" {

const char* ggr_version(void) { return "1.0.0"; }

const char* ggr_status_name(ggr_status s) {
    switch (s) {
        case GGR_OK: return "ok";
        case GGR_E_USAGE: return error_kind_name(ErrorKind::Usage);
        case GGR_E_IO: return error_kind_name(ErrorKind::Io);
        case GGR_E_PARSE: return error_kind_name(ErrorKind::Parse);
        case GGR_E_VALIDATION: return error_kind_name(ErrorKind::Validation);
        case GGR_E_ALPHABET: return error_kind_name(ErrorKind::Alphabet);
        case GGR_E_DOMAIN: return error_kind_name(ErrorKind::Domain);
        case GGR_E_UNDEFINED: return error_kind_name(ErrorKind::Undefined);
        case GGR_E_GROWTH: return error_kind_name(ErrorKind::Growth);
        case GGR_E_NO_RULE_MATCHES:
            return error_kind_name(ErrorKind::NoRuleMatches);
        case GGR_E_DEPTH_EXCEEDED:
            return error_kind_name(ErrorKind::DepthExceeded);
        case GGR_E_NON_DECREASING_RECURSION:
            return error_kind_name(ErrorKind::NonDecreasingRecursion);
        case GGR_E_AMBIGUOUS_MATCH:
            return error_kind_name(ErrorKind::AmbiguousMatch);
        case GGR_E_STATE_LIMIT: return error_kind_name(ErrorKind::StateLimit);
        case GGR_E_INTERNAL: return error_kind_name(ErrorKind::Internal);
    }
    return error_kind_name(ErrorKind::Internal);
}

const char* ggr_last_error(void) { return t_last_error.c_str(); }

void ggr_string_free(char* s) { std::free(s); }

// ----------------------------------------------------------------- grammars

ggr_status ggr_grammar_parse(const char* text, ggr_grammar** out) {
    return guard([&] {
        require(text && out, "ggr_grammar_parse: null argument");
        *out = new ggr_grammar{parse_rules(text)};
    });
}

void ggr_grammar_free(ggr_grammar* g) { delete g; }

ggr_status ggr_grammar_print(const ggr_grammar* g, char** out) {
    return guard([&] {
        require(g && out, "ggr_grammar_print: null argument");
        *out = dup_string(print_grammar(g->parsed.grammar));
    });
}

size_t ggr_grammar_rule_count(const ggr_grammar* g) {
    return g ? g->parsed.grammar.rules.size() : 0;
}

size_t ggr_grammar_general_rule_count(const ggr_grammar* g) {
    return g ? g->parsed.gtrs.size() : 0;
}

ggr_status ggr_grammar_rule_text(const ggr_grammar* g, size_t i, int* line,
                                 char** out) {
    return guard([&] {
        require(g && out, "ggr_grammar_rule_text: null argument");
        require(i < g->parsed.grammar.rules.size(),
                "ggr_grammar_rule_text: index out of range");
        if (line) *line = g->parsed.ruleLines[i];
        *out = dup_string(print_rule(g->parsed.grammar.rules[i]));
    });
}

ggr_status ggr_grammar_general_rule_text(const ggr_grammar* g, size_t i,
                                         int* line, char** out) {
    return guard([&] {
        require(g && out, "ggr_grammar_general_rule_text: null argument");
        require(i < g->parsed.gtrs.size(),
                "ggr_grammar_general_rule_text: index out of range");
        if (line) *line = g->parsed.gtrLines[i];
        *out = dup_string(print_gtr(g->parsed.gtrs[i]));
    });
}

ggr_status ggr_grammar_interpret(const ggr_grammar* g, const char* input,
                                 char** out) {
    return guard([&] {
        require(g && input && out, "ggr_grammar_interpret: null argument");
        TokenString s = TokenString::parse(g->parsed.grammar.inputAlphabet, input);
        *out = dup_string(interpret(g->parsed.grammar, s).text());
    });
}

ggr_status ggr_grammar_to_map(const ggr_grammar* g, ggr_map** out) {
    return guard([&] {
        require(g && out, "ggr_grammar_to_map: null argument");
        *out = new ggr_map{as_transduction_map(g->parsed.grammar)};
    });
}

ggr_status ggr_grammar_augment(const ggr_grammar* g, const char* const* seeds,
                               size_t seed_count, uint64_t budget,
                               uint64_t max_len, char** tsv_out) {
    return guard([&] {
        require(g && tsv_out, "ggr_grammar_augment: null argument");
        require(seed_count == 0 || seeds, "ggr_grammar_augment: null seeds");
        std::vector<TokenString> seedStrings;
        seedStrings.reserve(seed_count);
        for (size_t i = 0; i < seed_count; ++i) {
            require(seeds[i], "ggr_grammar_augment: null seed");
            seedStrings.push_back(
                TokenString::parse(g->parsed.grammar.inputAlphabet, seeds[i]));
        }
        *tsv_out = dup_string(pairs_to_tsv(
            augment(g->parsed.grammar, seedStrings, budget, max_len)));
    });
}

// ----------------------------------------------- built-in example grammars

ggr_status ggr_corpus_list(char** out) {
    return guard([&] {
        require(out, "ggr_corpus_list: null argument");
        std::string text;
        for (const auto& e : kCorpusEntries) {
            text += e.name;
            text += '\t';
            text += e.summary;
            text += '\n';
        }
        *out = dup_string(text);
    });
}

ggr_status ggr_corpus_text(const char* name, char** out) {
    return guard([&] {
        require(name && out, "ggr_corpus_text: null argument");
        if (std::string(name) == "gordon-concat") {
            *out = dup_string(gordon_concat_rule_text());
            return;
        }
        *out = dup_string(print_grammar(corpus_grammar(name)));
    });
}

ggr_status ggr_corpus_dataset(const char* name, uint64_t max_len,
                              uint64_t count, uint64_t seed, char** tsv_out) {
    return guard([&] {
        require(name && tsv_out, "ggr_corpus_dataset: null argument");
        Grammar g = corpus_grammar(name);
        *tsv_out = dup_string(pairs_to_tsv(generate_dataset(
            g, static_cast<std::size_t>(max_len),
            static_cast<std::size_t>(count), seed)));
    });
}

// -------------------------------------------------------------- transducers

ggr_status ggr_transducer_parse(const char* text, ggr_transducer** out) {
    return guard([&] {
        require(text && out, "ggr_transducer_parse: null argument");
        *out = new ggr_transducer{FiniteTransducer::parse(text)};
    });
}

void ggr_transducer_free(ggr_transducer* t) { delete t; }

ggr_status ggr_transducer_print(const ggr_transducer* t, char** out) {
    return guard([&] {
        require(t && out, "ggr_transducer_print: null argument");
        *out = dup_string(t->t.print());
    });
}

uint32_t ggr_transducer_state_count(const ggr_transducer* t) {
    return t ? t->t.stateCount() : 0;
}

int ggr_transducer_is_deterministic(const ggr_transducer* t) {
    return t && t->t.deterministic() ? 1 : 0;
}

ggr_status ggr_transducer_run(const ggr_transducer* t, const char* input,
                              char** out) {
    return guard([&] {
        require(t && input && out, "ggr_transducer_run: null argument");
        TokenString s = TokenString::parse(t->t.inputAlphabet(), input);
        auto result = run(t->t, s);
        if (!result)
            fail(ErrorKind::Undefined,
                 "the transducer is undefined on \"" + s.text() + "\"");
        *out = dup_string(result->text());
    });
}

ggr_status ggr_transducer_to_map(const ggr_transducer* t, int infer_bound,
                                 ggr_map** out) {
    return guard([&] {
        require(t && out, "ggr_transducer_to_map: null argument");
        FiniteTransducer machine = t->t;
        if (infer_bound && !machine.growthBound())
            machine = machine.withGrowthBound(infer_growth_bound(machine));
        *out = new ggr_map{std::make_shared<FstMap>(std::move(machine))};
    });
}

ggr_status ggr_transducer_quotient(const ggr_transducer* t,
                                   const ggr_partition* p,
                                   ggr_transducer** out) {
    return guard([&] {
        require(t && p && out, "ggr_transducer_quotient: null argument");
        *out = new ggr_transducer{quotient(t->t, p->p)};
    });
}

// --------------------------------------------------------------- partitions

ggr_status ggr_partition_parse(const ggr_transducer* t, const char* text,
                               ggr_partition** out) {
    return guard([&] {
        require(t && text && out, "ggr_partition_parse: null argument");
        *out = new ggr_partition{StatePartition::parse(t->t, text)};
    });
}

void ggr_partition_free(ggr_partition* p) { delete p; }

ggr_status ggr_partition_print(const ggr_transducer* t, const ggr_partition* p,
                               char** out) {
    return guard([&] {
        require(t && p && out, "ggr_partition_print: null argument");
        *out = dup_string(p->p.print(t->t));
    });
}

// ----------------------------------------------------------------- symmetry

ggr_status ggr_check_symmetry_acceptor(const ggr_transducer* t,
                                       const ggr_partition* p, int* symmetric,
                                       char** counterexample) {
    return guard([&] {
        require(t && p && symmetric && counterexample,
                "ggr_check_symmetry_acceptor: null argument");
        AcceptorSymmetryResult r = check_quotient_symmetry_acceptor(t->t, p->p);
        *symmetric = r.symmetric ? 1 : 0;
        *counterexample =
            r.counterexample ? dup_string(r.counterexample->text()) : nullptr;
    });
}

ggr_status ggr_check_symmetry_transducer(const ggr_transducer* t,
                                         const ggr_partition* p,
                                         uint32_t max_len, int* symmetric,
                                         uint32_t* checked_len,
                                         char** counterexample, char** detail) {
    return guard([&] {
        require(t && p && symmetric && checked_len && counterexample && detail,
                "ggr_check_symmetry_transducer: null argument");
        TransducerSymmetryResult r =
            check_quotient_symmetry_transducer(t->t, p->p, max_len);
        *symmetric = r.symmetric ? 1 : 0;
        *checked_len = r.checkedLen;
        *counterexample =
            r.counterexample ? dup_string(r.counterexample->text()) : nullptr;
        *detail = r.detail.empty() ? nullptr : dup_string(r.detail);
    });
}

// ------------------------------------------------------------ rules + metric

ggr_status ggr_rule_parse(const char* text, ggr_rule** out) {
    return guard([&] {
        require(text && out, "ggr_rule_parse: null argument");
        RuleParseResult parsed = parse_rules(text);
        if (!parsed.gtrs.empty())
            fail(ErrorKind::Validation,
                 "line " + std::to_string(parsed.gtrLines[0]) +
                     ": the rule is not in the executable restricted form");
        if (parsed.grammar.rules.size() != 1)
            fail(ErrorKind::Validation,
                 "expected exactly one rule, found " +
                     std::to_string(parsed.grammar.rules.size()));
        *out = new ggr_rule{std::move(parsed.grammar.rules[0])};
    });
}

void ggr_rule_free(ggr_rule* r) { delete r; }

ggr_status ggr_rule_print(const ggr_rule* r, char** out) {
    return guard([&] {
        require(r && out, "ggr_rule_print: null argument");
        *out = dup_string(print_rule(r->r));
    });
}

ggr_status ggr_err_estimate(const ggr_map* m, const ggr_rule* r, double beta,
                            double target_width, uint64_t max_len,
                            int skip_undefined, ggr_err_result* out) {
    return guard([&] {
        require(m && r && out, "ggr_err_estimate: null argument");
        ErrEstimate e = err_estimate(*m->m, r->r, beta, target_width, max_len,
                                     skip_undefined ? UndefinedPolicy::Skip
                                                    : UndefinedPolicy::Error);
        out->lower = e.lower();
        out->upper = e.upper();
        out->truncation_len = e.truncationLen;
        out->beta = e.beta;
        out->term_count = e.termCount;
        out->skipped_terms = e.skippedTerms;
        out->width_reached = e.widthReached ? 1 : 0;
    });
}

ggr_status ggr_err_per_length(const ggr_map* m, const ggr_rule* r, double beta,
                              uint64_t truncation_len, int skip_undefined,
                              char** tsv_out) {
    return guard([&] {
        require(m && r && tsv_out, "ggr_err_per_length: null argument");
        PartialSum p = err_partial_sum(*m->m, r->r, beta, truncation_len,
                                       skip_undefined ? UndefinedPolicy::Skip
                                                      : UndefinedPolicy::Error);
        std::string text;
        for (std::size_t len = 0; len < p.sumByLength.size(); ++len) {
            text += std::to_string(len);
            text += '\t';
            text += format_double(p.sumByLength[len]);
            text += '\t';
            text += std::to_string(p.termsByLength[len]);
            text += '\n';
        }
        *tsv_out = dup_string(text);
    });
}

// --------------------------------------------------------------------- maps

void ggr_map_free(ggr_map* m) { delete m; }

ggr_status ggr_map_evaluate(const ggr_map* m, const char* input, char** out) {
    return guard([&] {
        require(m && input && out, "ggr_map_evaluate: null argument");
        TokenString s = TokenString::parse(m->m->inputAlphabet(), input);
        auto result = m->m->evaluate(s);
        if (!result)
            fail(ErrorKind::Undefined,
                 "the map is undefined on \"" + s.text() + "\"");
        *out = dup_string(result->text());
    });
}

int ggr_map_has_growth_bound(const ggr_map* m) {
    return m && m->m->growthBound() ? 1 : 0;
}

ggr_status ggr_map_from_tsv(const char* tsv, int64_t bound_num,
                            int64_t bound_den, uint32_t bound_exp,
                            ggr_map** out) {
    return guard([&] {
        require(tsv && out, "ggr_map_from_tsv: null argument");
        std::vector<std::pair<std::string, std::string>> rows;
        std::string text(tsv);
        std::size_t from = 0;
        int lineNo = 0;
        while (from <= text.size()) {
            std::size_t to = text.find('\n', from);
            std::string line = text.substr(
                from, to == std::string::npos ? std::string::npos : to - from);
            from = (to == std::string::npos) ? text.size() + 1 : to + 1;
            ++lineNo;
            if (line.empty() || line[0] == '#') continue;
            std::size_t tab = line.find('\t');
            if (tab == std::string::npos)
                fail(ErrorKind::Parse,
                     "line " + std::to_string(lineNo) +
                         ": expected input<TAB>output");
            if (line.find('\t', tab + 1) != std::string::npos)
                fail(ErrorKind::Parse, "line " + std::to_string(lineNo) +
                                           ": more than one tab");
            rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
        }
        if (rows.empty())
            fail(ErrorKind::Validation, "the dataset lists no pairs");

        auto collect = [&](bool inputs) {
            std::vector<std::string> order;
            for (const auto& row : rows)
                for (const auto& tok :
                     split_ws(inputs ? row.first : row.second)) {
                    bool seen = false;
                    for (const auto& have : order)
                        if (have == tok) { seen = true; break; }
                    if (!seen) order.push_back(tok);
                }
            return order;
        };
        std::vector<std::string> inTokens = collect(true);
        std::vector<std::string> outTokens = collect(false);
        if (inTokens.empty())
            fail(ErrorKind::Validation, "every dataset input is empty");
        if (outTokens.empty()) outTokens = inTokens;  // all-empty outputs
        AlphabetRef inAlpha = Alphabet::make(std::move(inTokens));
        AlphabetRef outAlpha = Alphabet::make(std::move(outTokens));

        std::optional<GrowthBound> bound;
        if (bound_den != 0) bound = GrowthBound(bound_num, bound_den, bound_exp);
        std::vector<std::pair<TokenString, TokenString>> pairs;
        pairs.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            TokenString in = TokenString::parse(inAlpha, rows[i].first);
            TokenString rhs = TokenString::parse(outAlpha, rows[i].second);
            if (bound && !bound->holds(in.size(), rhs.size()))
                fail(ErrorKind::Growth,
                     "pair \"" + in.text() + "\" -> \"" + rhs.text() +
                         "\" violates the declared growth bound");
            pairs.emplace_back(std::move(in), std::move(rhs));
        }
        *out = new ggr_map{std::make_shared<TableMap>(
            std::move(inAlpha), std::move(outAlpha), std::move(pairs), bound)};
    });
}

// ------------------------------------------------------------------- search

ggr_status ggr_search(const ggr_map* m, const ggr_search_caps* caps,
                      const char* const* domain_exprs, size_t domain_count,
                      uint64_t limit, char** tsv_out) {
    return guard([&] {
        require(m && caps && tsv_out, "ggr_search: null argument");
        require(domain_count == 0 || domain_exprs, "ggr_search: null domains");
        SearchCaps cppCaps;
        cppCaps.maxH = caps->max_h;
        cppCaps.maxK = caps->max_k;
        cppCaps.maxPatternLen = caps->max_pattern_len;
        cppCaps.maxLiteralLen = caps->max_literal_len;
        cppCaps.beta = caps->beta;
        cppCaps.truncationLen = caps->truncation_len;
        for (size_t i = 0; i < domain_count; ++i) {
            require(domain_exprs[i], "ggr_search: null domain expression");
            cppCaps.domainMenu.push_back(
                parse_domain(m->m->inputAlphabet(), domain_exprs[i]));
        }
        std::size_t keep = limit == 0 ? kAllResults
                                      : static_cast<std::size_t>(limit);
        std::vector<ScoredRule> ranked = search_rules(*m->m, cppCaps, keep);
        std::string text;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            const ScoredRule& s = ranked[i];
            text += std::to_string(i + 1);
            text += '\t';
            text += format_double(s.estimate.lower());
            text += '\t';
            text += format_double(s.estimate.upper());
            text += '\t';
            text += std::to_string(complexity(s.rule));
            text += '\t';
            text += std::to_string(s.estimate.skippedTerms);
            text += '\t';
            text += print_rule(s.rule);
            text += '\n';
        }
        *tsv_out = dup_string(text);
    });
}

} // extern "C"
