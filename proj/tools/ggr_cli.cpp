// ggr_cli.cpp -- the `ggr` command. Thin shell over the C API: reads files,
// forwards text, prints results. Exit codes: 0 success (verdicts included),
// 1 bad input (usage, io, parse, validation, alphabet, domain), 2 runtime
// failure. Every failure is one stderr line `error:<kind>: <message>`.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ggr/ggr_c.h"

namespace {

struct CliFailure {
    std::string kind;
    std::string message;
    int exitCode;
};

[[noreturn]] void fail_with(const std::string& kind, const std::string& message,
                            int exitCode) {
    throw CliFailure{kind, message, exitCode};
}

int exit_code_for(ggr_status st) {
    switch (st) {
        case GGR_E_USAGE:
        case GGR_E_IO:
        case GGR_E_PARSE:
        case GGR_E_VALIDATION:
        case GGR_E_ALPHABET:
        case GGR_E_DOMAIN:
            return 1;
        default:
            return 2;
    }
}

void check(ggr_status st) {
    if (st == GGR_OK) return;
    fail_with(ggr_status_name(st), ggr_last_error(), exit_code_for(st));
}

// unique_ptr-style guards for the C handles
struct StringGuard {
    char* s = nullptr;
    ~StringGuard() { ggr_string_free(s); }
    std::string str() const { return s ? s : ""; }
};

template <typename T, void (*Free)(T*)>
struct Handle {
    T* h = nullptr;
    ~Handle() { Free(h); }
    T** slot() { return &h; }
    T* get() const { return h; }
};

using GrammarHandle = Handle<ggr_grammar, ggr_grammar_free>;
using TransducerHandle = Handle<ggr_transducer, ggr_transducer_free>;
using PartitionHandle = Handle<ggr_partition, ggr_partition_free>;
using RuleHandle = Handle<ggr_rule, ggr_rule_free>;
using MapHandle = Handle<ggr_map, ggr_map_free>;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_with("io", "cannot read \"" + path + "\"", 1);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail_with("io", "cannot read \"" + path + "\"", 1);
    return buf.str();
}

// every subcommand funnels its stdout through here so --output means the
// same thing everywhere
void emit(const std::string& outputPath, const std::string& text) {
    if (outputPath.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        if (std::fflush(stdout) != 0) fail_with("io", "cannot write stdout", 1);
        return;
    }
    std::ofstream out(outputPath, std::ios::binary);
    if (!out) fail_with("io", "cannot write \"" + outputPath + "\"", 1);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) fail_with("io", "cannot write \"" + outputPath + "\"", 1);
}

void parse_growth_spec(const std::string& spec, std::int64_t& num,
                       std::int64_t& den, std::uint32_t& exp) {
    // "C", "C/D", "C^E", or "C/D^E" with positive integers
    std::string body = spec;
    exp = 1;
    std::size_t caret = body.find('^');
    auto to_u64 = [&](const std::string& s) -> std::uint64_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            fail_with("usage", "bad growth spec \"" + spec + "\"; use C, C/D, or C/D^E",
                      1);
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            fail_with("usage", "growth spec \"" + spec + "\" overflows", 1);
        }
    };
    if (caret != std::string::npos) {
        exp = static_cast<std::uint32_t>(to_u64(body.substr(caret + 1)));
        body.resize(caret);
    }
    std::size_t slash = body.find('/');
    den = 1;
    if (slash != std::string::npos) {
        den = static_cast<std::int64_t>(to_u64(body.substr(slash + 1)));
        body.resize(slash);
    }
    num = static_cast<std::int64_t>(to_u64(body));
    if (num <= 0 || den <= 0)
        fail_with("usage", "growth spec \"" + spec + "\" must be positive", 1);
}

// ------------------------------------------------------------- subcommands

struct ValidateArgs {
    std::string grammar, rule, transducer;
};

int run_validate(const ValidateArgs& a) {
    std::string text;
    if (!a.grammar.empty()) {
        GrammarHandle g;
        check(ggr_grammar_parse(read_file(a.grammar).c_str(), g.slot()));
        text += "rules: " + std::to_string(ggr_grammar_rule_count(g.get())) + "\n";
        size_t general = ggr_grammar_general_rule_count(g.get());
        text += "general-rules: " + std::to_string(general) + "\n";
        for (size_t i = 0; i < general; ++i) {
            StringGuard s;
            int line = 0;
            check(ggr_grammar_general_rule_text(g.get(), i, &line, &s.s));
            text += "  line " + std::to_string(line) + ": " + s.str() + "\n";
        }
    } else if (!a.rule.empty()) {
        RuleHandle r;
        check(ggr_rule_parse(read_file(a.rule).c_str(), r.slot()));
        StringGuard s;
        check(ggr_rule_print(r.get(), &s.s));
        text = s.str() + "\n";
    } else {
        TransducerHandle t;
        check(ggr_transducer_parse(read_file(a.transducer).c_str(), t.slot()));
        text += "states: " + std::to_string(ggr_transducer_state_count(t.get())) + "\n";
        text += std::string("deterministic: ") +
                (ggr_transducer_is_deterministic(t.get()) ? "yes" : "no") + "\n";
    }
    emit("", text);
    return 0;
}

struct TransduceArgs {
    std::string grammar, transducer, inputFile, output;
    std::vector<std::string> inputs;
};

int run_transduce(const TransduceArgs& a) {
    std::vector<std::string> inputs = a.inputs;
    if (!a.inputFile.empty()) {
        std::istringstream lines(read_file(a.inputFile));
        std::string line;
        while (std::getline(lines, line)) inputs.push_back(line);
    }
    if (inputs.empty())
        fail_with("usage", "nothing to transduce; pass --input or --input-file", 1);

    std::string text;
    if (!a.grammar.empty()) {
        GrammarHandle g;
        check(ggr_grammar_parse(read_file(a.grammar).c_str(), g.slot()));
        for (const auto& input : inputs) {
            StringGuard s;
            check(ggr_grammar_interpret(g.get(), input.c_str(), &s.s));
            text += s.str() + "\n";
        }
    } else {
        TransducerHandle t;
        check(ggr_transducer_parse(read_file(a.transducer).c_str(), t.slot()));
        for (const auto& input : inputs) {
            StringGuard s;
            check(ggr_transducer_run(t.get(), input.c_str(), &s.s));
            text += s.str() + "\n";
        }
    }
    emit(a.output, text);
    return 0;
}

struct ErrArgs {
    std::string grammar, transducer, data, growth, rule, output;
    std::string betaText = "1.0";
    double width = 1e-9;
    std::uint64_t maxLen = 16;
    bool skipUndefined = false;
    bool perLength = false;
};

MapHandle load_map(const std::string& grammar, const std::string& transducer,
                   const std::string& data, const std::string& growth) {
    MapHandle m;
    if (!grammar.empty()) {
        GrammarHandle g;
        check(ggr_grammar_parse(read_file(grammar).c_str(), g.slot()));
        check(ggr_grammar_to_map(g.get(), m.slot()));
    } else if (!transducer.empty()) {
        TransducerHandle t;
        check(ggr_transducer_parse(read_file(transducer).c_str(), t.slot()));
        check(ggr_transducer_to_map(t.get(), 1, m.slot()));
    } else {
        std::int64_t num = 0, den = 0;
        std::uint32_t exp = 1;
        if (!growth.empty()) parse_growth_spec(growth, num, den, exp);
        check(ggr_map_from_tsv(read_file(data).c_str(), num, den, exp, m.slot()));
    }
    return m;
}

int run_err(const ErrArgs& a) {
    MapHandle m = load_map(a.grammar, a.transducer, a.data, a.growth);
    RuleHandle r;
    check(ggr_rule_parse(read_file(a.rule).c_str(), r.slot()));
    double beta = 0.0;
    try {
        beta = std::stod(a.betaText);
    } catch (const std::exception&) {
        fail_with("usage", "bad --beta \"" + a.betaText + "\"", 1);
    }
    ggr_err_result res{};
    check(ggr_err_estimate(m.get(), r.get(), beta, a.width, a.maxLen,
                           a.skipUndefined ? 1 : 0, &res));
    std::ostringstream line;
    line.precision(17);
    line << res.lower << " " << res.upper << " " << res.truncation_len << " "
         << a.betaText << " " << res.term_count << "\n";
    std::string text = line.str();
    if (res.skipped_terms > 0)
        text += "skipped: " + std::to_string(res.skipped_terms) + "\n";
    if (!res.width_reached) text += "width-not-reached\n";
    if (a.perLength) {
        StringGuard tsv;
        check(ggr_err_per_length(m.get(), r.get(), beta, res.truncation_len,
                                 a.skipUndefined ? 1 : 0, &tsv.s));
        text += tsv.str();
    }
    emit(a.output, text);
    return 0;
}

struct QuotientArgs {
    std::string transducer, partition, output;
};

int run_quotient(const QuotientArgs& a) {
    TransducerHandle t;
    check(ggr_transducer_parse(read_file(a.transducer).c_str(), t.slot()));
    PartitionHandle p;
    check(ggr_partition_parse(t.get(), read_file(a.partition).c_str(), p.slot()));
    TransducerHandle q;
    check(ggr_transducer_quotient(t.get(), p.get(), q.slot()));
    StringGuard s;
    check(ggr_transducer_print(q.get(), &s.s));
    emit(a.output, s.str());
    return 0;
}

struct CheckSymArgs {
    std::string acceptor, transducer, partition, output;
    std::uint32_t maxLen = 8;
};

int run_check_sym(const CheckSymArgs& a) {
    const std::string& machinePath = a.acceptor.empty() ? a.transducer : a.acceptor;
    TransducerHandle t;
    check(ggr_transducer_parse(read_file(machinePath).c_str(), t.slot()));
    PartitionHandle p;
    check(ggr_partition_parse(t.get(), read_file(a.partition).c_str(), p.slot()));

    std::string text;
    if (!a.acceptor.empty()) {
        int symmetric = 0;
        StringGuard cex;
        check(ggr_check_symmetry_acceptor(t.get(), p.get(), &symmetric, &cex.s));
        text += symmetric ? "symmetric\n" : "non-symmetric\n";
        if (!symmetric) text += "counterexample: " + cex.str() + "\n";
    } else {
        int symmetric = 0;
        std::uint32_t checkedLen = 0;
        StringGuard cex, detail;
        check(ggr_check_symmetry_transducer(t.get(), p.get(), a.maxLen, &symmetric,
                                            &checkedLen, &cex.s, &detail.s));
        text += symmetric ? "symmetric\n" : "non-symmetric\n";
        text += "checked-len: " + std::to_string(checkedLen) + "\n";
        if (!symmetric) {
            text += "counterexample: " + cex.str() + "\n";
            if (detail.s) text += "detail: " + detail.str() + "\n";
        }
    }
    emit(a.output, text);
    return 0;
}

struct AugmentArgs {
    std::string grammar, seeds, output;
    std::uint64_t budget = 100;
    std::uint64_t maxLen = 6;
};

int run_augment(const AugmentArgs& a) {
    GrammarHandle g;
    check(ggr_grammar_parse(read_file(a.grammar).c_str(), g.slot()));
    std::vector<std::string> seedLines;
    if (!a.seeds.empty()) {
        std::istringstream lines(read_file(a.seeds));
        std::string line;
        while (std::getline(lines, line))
            if (!line.empty() && line[0] != '#') seedLines.push_back(line);
    }
    std::vector<const char*> seedPtrs;
    seedPtrs.reserve(seedLines.size());
    for (const auto& s : seedLines) seedPtrs.push_back(s.c_str());
    StringGuard tsv;
    check(ggr_grammar_augment(g.get(), seedPtrs.data(), seedPtrs.size(),
                              a.budget, a.maxLen, &tsv.s));
    emit(a.output, tsv.str());
    return 0;
}

struct SearchArgs {
    std::string grammar, transducer, data, growth, output;
    std::vector<std::string> domains;
    ggr_search_caps caps{0, 0, 0, 0, 1.0, 4};
    std::uint64_t top = 0;
};

int run_search(const SearchArgs& a) {
    MapHandle m = load_map(a.grammar, a.transducer, a.data, a.growth);
    std::vector<const char*> domainPtrs;
    domainPtrs.reserve(a.domains.size());
    for (const auto& d : a.domains) domainPtrs.push_back(d.c_str());
    StringGuard tsv;
    check(ggr_search(m.get(), &a.caps, domainPtrs.data(), domainPtrs.size(),
                     a.top, &tsv.s));
    emit(a.output, tsv.str());
    return 0;
}

struct CorpusArgs {
    bool list = false;
    bool dataset = false;
    std::string name, output;
    std::uint64_t maxLen = 3;
    std::uint64_t count = 10;
    std::uint64_t seed = 0;
};

int run_corpus(const CorpusArgs& a) {
    StringGuard s;
    if (a.list) {
        check(ggr_corpus_list(&s.s));
    } else if (a.dataset) {
        check(ggr_corpus_dataset(a.name.c_str(), a.maxLen, a.count, a.seed, &s.s));
    } else {
        check(ggr_corpus_text(a.name.c_str(), &s.s));
    }
    emit(a.output, s.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"string-to-string rule grammars: interpret, score, search"};
    app.set_version_flag("--version", ggr_version());
    app.require_subcommand(1);

    ValidateArgs validateArgs;
    CLI::App* validate =
        app.add_subcommand("validate", "parse a file and report what it holds");
    auto* vg = validate->add_option("--grammar", validateArgs.grammar,
                                    "grammar file to check");
    auto* vr = validate->add_option("--rule", validateArgs.rule,
                                    "rule file to check (exactly one rule)");
    auto* vt = validate->add_option("--transducer", validateArgs.transducer,
                                    "transducer file to check");
    vg->excludes(vr)->excludes(vt);
    vr->excludes(vt);

    TransduceArgs transduceArgs;
    CLI::App* transduce =
        app.add_subcommand("transduce", "run inputs through a grammar or machine");
    auto* tg = transduce->add_option("--grammar", transduceArgs.grammar,
                                     "grammar file to interpret with");
    auto* tt = transduce->add_option("--transducer", transduceArgs.transducer,
                                     "transducer file to run");
    transduce->add_option("--input", transduceArgs.inputs,
                          "input token string (repeatable)");
    transduce->add_option("--input-file", transduceArgs.inputFile,
                          "file with one input per line");
    transduce->add_option("--output", transduceArgs.output,
                          "write results here instead of stdout");
    tg->excludes(tt);

    ErrArgs errArgs;
    CLI::App* err = app.add_subcommand(
        "err", "certified discrepancy interval between a map and a rule");
    auto* eg = err->add_option("--grammar", errArgs.grammar, "grammar file as the map");
    auto* et = err->add_option("--transducer", errArgs.transducer,
                               "deterministic transducer file as the map");
    auto* ed = err->add_option("--data", errArgs.data,
                               "TSV file input<TAB>output as a finite map");
    err->add_option("--growth", errArgs.growth,
                    "growth bound C, C/D, or C/D^E for --data (positive integers)");
    err->add_option("--rule", errArgs.rule, "rule file to score")->required();
    err->add_option("--beta", errArgs.betaText, "weight decay, > 0 (default 1.0)");
    err->add_option("--width", errArgs.width,
                    "target interval width, > 0 (default 1e-9)");
    err->add_option("--max-len", errArgs.maxLen,
                    "largest truncation length tried, >= 0 (default 16)");
    err->add_flag("--skip-undefined", errArgs.skipUndefined,
                  "skip (and count) terms where the map is undefined");
    err->add_flag("--per-length", errArgs.perLength,
                  "append the per-length breakdown as TSV");
    err->add_option("--output", errArgs.output,
                    "write results here instead of stdout");
    eg->excludes(et)->excludes(ed);
    et->excludes(ed);

    QuotientArgs quotientArgs;
    CLI::App* quotientCmd =
        app.add_subcommand("quotient", "collapse states along a partition");
    quotientCmd->add_option("--transducer", quotientArgs.transducer,
                            "transducer file")->required();
    quotientCmd->add_option("--partition", quotientArgs.partition,
                            "partition file: one block per line, state names "
                            "space-separated")->required();
    quotientCmd->add_option("--output", quotientArgs.output,
                            "write the quotient machine here instead of stdout");

    CheckSymArgs checkSymArgs;
    CLI::App* checkSym = app.add_subcommand(
        "check-sym", "does collapsing states change the behavior?");
    auto* ca = checkSym->add_option("--acceptor", checkSymArgs.acceptor,
                                    "machine file; exact language comparison, "
                                    "outputs ignored");
    auto* ct = checkSym->add_option("--transducer", checkSymArgs.transducer,
                                    "deterministic machine file; transduction "
                                    "comparison up to --max-len");
    checkSym->add_option("--partition", checkSymArgs.partition,
                         "partition file: one block per line")->required();
    checkSym->add_option("--max-len", checkSymArgs.maxLen,
                         "input length horizon for --transducer, >= 0 (default 8)");
    checkSym->add_option("--output", checkSymArgs.output,
                         "write the verdict here instead of stdout");
    ca->excludes(ct);

    AugmentArgs augmentArgs;
    CLI::App* augmentCmd = app.add_subcommand(
        "augment", "generate verified (input, output) pairs from a grammar");
    augmentCmd->add_option("--grammar", augmentArgs.grammar, "grammar file")
        ->required();
    augmentCmd->add_option("--seeds", augmentArgs.seeds,
                           "file with one seed string per line; fragments feed "
                           "the generator");
    augmentCmd->add_option("--budget", augmentArgs.budget,
                           "most pairs to emit, >= 0 (default 100)");
    augmentCmd->add_option("--max-len", augmentArgs.maxLen,
                           "longest domain member substituted, >= 0 (default 6)");
    augmentCmd->add_option("--output", augmentArgs.output,
                           "write TSV here instead of stdout");

    SearchArgs searchArgs;
    CLI::App* search = app.add_subcommand(
        "search", "enumerate every rule inside the caps and rank by certified "
                  "discrepancy");
    auto* sg = search->add_option("--grammar", searchArgs.grammar,
                                  "grammar file as the map to explain");
    auto* st = search->add_option("--transducer", searchArgs.transducer,
                                  "deterministic transducer file as the map");
    auto* sd = search->add_option("--data", searchArgs.data,
                                  "TSV file input<TAB>output as a finite map");
    search->add_option("--growth", searchArgs.growth,
                       "growth bound C, C/D, or C/D^E for --data");
    search->add_option("--max-h", searchArgs.caps.max_h,
                       "most variables per rule, >= 0")->required();
    search->add_option("--max-k", searchArgs.caps.max_k,
                       "most recursive calls per rule, >= 0")->required();
    search->add_option("--max-pattern-len", searchArgs.caps.max_pattern_len,
                       "left-side length cap, >= 0")->required();
    search->add_option("--max-literal-len", searchArgs.caps.max_literal_len,
                       "output block length cap, >= 0")->required();
    search->add_option("--domain", searchArgs.domains,
                       "domain menu entry, e.g. SIGMA+ or regex(\"a\"|\"b\") "
                       "(repeatable; required when --max-h > 0)");
    search->add_option("--beta", searchArgs.caps.beta,
                       "scoring weight decay, > 0 (default 1.0)");
    search->add_option("--truncation-len", searchArgs.caps.truncation_len,
                       "partial-sum horizon, >= 0 (default 4)");
    search->add_option("--top", searchArgs.top,
                       "keep only the best N rows; 0 keeps all (default 0)");
    search->add_option("--output", searchArgs.output,
                       "write TSV here instead of stdout");
    sg->excludes(st)->excludes(sd);
    st->excludes(sd);

    CorpusArgs corpusArgs;
    CLI::App* corpus = app.add_subcommand(
        "corpus", "emit a built-in example grammar or a sampled dataset");
    auto* cl = corpus->add_flag("--list", corpusArgs.list,
                                "list the registry, one name per line");
    auto* cn = corpus->add_option("--name", corpusArgs.name,
                                  "registry name (see --list)");
    corpus->add_flag("--dataset", corpusArgs.dataset,
                     "emit sampled (input, output) TSV instead of the grammar");
    corpus->add_option("--max-len", corpusArgs.maxLen,
                       "dataset input length cap, >= 1 (default 3)");
    corpus->add_option("--count", corpusArgs.count,
                       "dataset size, >= 0 (default 10)");
    corpus->add_option("--seed", corpusArgs.seed,
                       "dataset sampling seed, >= 0 (default 0)");
    corpus->add_option("--output", corpusArgs.output,
                       "write here instead of stdout");
    cl->excludes(cn);

    try {
        app.parse(argc, argv);

        if (validate->parsed()) {
            if (validateArgs.grammar.empty() && validateArgs.rule.empty() &&
                validateArgs.transducer.empty())
                fail_with("usage",
                          "pass one of --grammar, --rule, --transducer", 1);
            return run_validate(validateArgs);
        }
        if (transduce->parsed()) {
            if (transduceArgs.grammar.empty() && transduceArgs.transducer.empty())
                fail_with("usage", "pass --grammar or --transducer", 1);
            return run_transduce(transduceArgs);
        }
        if (err->parsed()) {
            if (errArgs.grammar.empty() && errArgs.transducer.empty() &&
                errArgs.data.empty())
                fail_with("usage", "pass one of --grammar, --transducer, --data", 1);
            return run_err(errArgs);
        }
        if (quotientCmd->parsed()) return run_quotient(quotientArgs);
        if (checkSym->parsed()) {
            if (checkSymArgs.acceptor.empty() && checkSymArgs.transducer.empty())
                fail_with("usage", "pass --acceptor or --transducer", 1);
            return run_check_sym(checkSymArgs);
        }
        if (augmentCmd->parsed()) return run_augment(augmentArgs);
        if (search->parsed()) return run_search(searchArgs);
        if (corpus->parsed()) {
            if (!corpusArgs.list && corpusArgs.name.empty())
                fail_with("usage", "pass --name or --list", 1);
            return run_corpus(corpusArgs);
        }
        fail_with("usage", "no subcommand given", 1);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints the parsed subcommand's help
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error:usage: " << e.what() << "\n";
        return 1;
    } catch (const CliFailure& f) {
        std::cerr << "error:" << f.kind << ": " << f.message << "\n";
        return f.exitCode;
    } catch (const std::exception& e) {
        std::cerr << "error:internal: " << e.what() << "\n";
        return 2;
    }
}
