#include "ggr/rule_io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "ggr/errors.hpp"
#include "ggr/util.hpp"

namespace ggr {
namespace {

// ---------------------------------------------------------------- lexing

struct Token {
    enum Kind { Ident, Quoted, Punct, Regex } kind;
    std::string text;  // Quoted: inner text; Regex: raw source between parens
    int col;
};

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ", col " +
                               std::to_string(col) + ": " + msg);
}

bool punct_char(char c) {
    return c == '(' || c == ')' || c == '{' || c == '}' || c == ',' ||
           c == ':' || c == '=';
}

bool space_char(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && space_char(s[b])) ++b;
    while (e > b && space_char(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::vector<Token> lex_line(const std::string& raw, int line) {
    std::vector<Token> out;
    const std::size_t n = raw.size();
    std::size_t i = 0;
    auto col = [](std::size_t p) { return static_cast<int>(p) + 1; };
    while (i < n) {
        const char c = raw[i];
        if (space_char(c)) { ++i; continue; }
        if (c == '#') break;
        if (punct_char(c)) {
            out.push_back({Token::Punct, std::string(1, c), col(i)});
            ++i;
            continue;
        }
        if (c == '"') {
            const std::size_t j = raw.find('"', i + 1);
            if (j == std::string::npos)
                parse_fail(line, col(i), "unterminated string literal");
            out.push_back({Token::Quoted, raw.substr(i + 1, j - i - 1), col(i)});
            i = j + 1;
            continue;
        }
        std::size_t j = i;
        while (j < n && !space_char(raw[j]) && !punct_char(raw[j]) &&
               raw[j] != '"' && raw[j] != '#')
            ++j;
        std::string word = raw.substr(i, j - i);
        if (word == "regex") {
            // raw capture up to the matching close paren; quotes shield parens
            std::size_t k = j;
            while (k < n && space_char(raw[k])) ++k;
            if (k >= n || raw[k] != '(')
                parse_fail(line, col(i), "expected ( after regex");
            std::size_t m = k + 1;
            int depth = 1;
            bool inQuote = false;
            for (; m < n; ++m) {
                const char d = raw[m];
                if (d == '"') inQuote = !inQuote;
                else if (!inQuote && d == '(') ++depth;
                else if (!inQuote && d == ')' && --depth == 0) break;
            }
            if (m >= n) parse_fail(line, col(i), "unterminated regex(...)");
            out.push_back({Token::Regex, trim(raw.substr(k + 1, m - k - 1)), col(i)});
            i = m + 1;
            continue;
        }
        out.push_back({Token::Ident, std::move(word), col(i)});
        i = j;
    }
    return out;
}

bool reserved_name(const std::string& s) {
    return s == "forall" || s == "in" || s == "T" || s == "regex" ||
           s == "SIGMA*" || s == "SIGMA+" || s == "SIGMA1" ||
           s == "input-alphabet" || s == "output-alphabet" ||
           s == "class-domain";
}

// ----------------------------------------------------------- raw structures

struct DomainExpr {
    enum class Kind { Star, Plus, One, Set, Regex, Named };
    Kind kind = Kind::Star;
    std::string name;                  // Named only
    std::vector<std::string> strings;  // Set only, raw quoted text
    std::string regexSource;           // Regex only
    int col = 0;
};

struct CallElem {
    bool isVar;
    std::string text;  // variable name or raw literal text
    int col;
};

struct RawItem {
    enum class Kind { Literal, Var, Call };
    Kind kind;
    std::string text;  // Literal / Var
    int col;
    std::vector<CallElem> call;  // Call only
};

struct RawBinding {
    std::string var;
    DomainExpr domain;
    int col;
};

struct RawRule {
    std::vector<RawBinding> bindings;
    std::vector<RawItem> lhs, rhs;
    int line;
};

struct RawDomainDecl {
    std::string name;
    DomainExpr expr;
    int line;
};

// ------------------------------------------------------------ line parsing

struct Cursor {
    const std::vector<Token>& toks;
    std::size_t pos = 0;
    int line;

    bool done() const { return pos >= toks.size(); }
    const Token& peek() const {
        if (done()) parse_fail(line, lastCol(), "unexpected end of line");
        return toks[pos];
    }
    const Token& take() {
        const Token& t = peek();
        ++pos;
        return t;
    }
    int lastCol() const {
        return toks.empty() ? 1 : toks.back().col + static_cast<int>(toks.back().text.size());
    }
    bool atPunct(char c) const {
        return !done() && toks[pos].kind == Token::Punct && toks[pos].text[0] == c;
    }
    void expectPunct(char c, const char* what) {
        if (!atPunct(c))
            parse_fail(line, done() ? lastCol() : toks[pos].col,
                       std::string("expected ") + what);
        ++pos;
    }
};

DomainExpr parse_domain_expr(Cursor& c, bool allowNamed) {
    DomainExpr e;
    const Token& t = c.take();
    e.col = t.col;
    if (t.kind == Token::Regex) {
        e.kind = DomainExpr::Kind::Regex;
        e.regexSource = t.text;
        return e;
    }
    if (t.kind == Token::Punct && t.text == "{") {
        e.kind = DomainExpr::Kind::Set;
        while (true) {
            const Token& s = c.take();
            if (s.kind != Token::Quoted)
                parse_fail(c.line, s.col, "expected a quoted string in { }");
            e.strings.push_back(s.text);
            if (c.atPunct(',')) { ++c.pos; continue; }
            c.expectPunct('}', "} after the string set");
            return e;
        }
    }
    if (t.kind == Token::Ident) {
        if (t.text == "SIGMA*") { e.kind = DomainExpr::Kind::Star; return e; }
        if (t.text == "SIGMA+") { e.kind = DomainExpr::Kind::Plus; return e; }
        if (t.text == "SIGMA1") { e.kind = DomainExpr::Kind::One; return e; }
        if (allowNamed && !reserved_name(t.text)) {
            e.kind = DomainExpr::Kind::Named;
            e.name = t.text;
            return e;
        }
    }
    parse_fail(c.line, t.col,
               "expected a domain: SIGMA*, SIGMA+, SIGMA1, { ... }, regex(...)" +
                   std::string(allowNamed ? " or a declared name" : ""));
}

std::vector<RawItem> parse_side(Cursor& c, bool stopAtEquals, const char* sideName) {
    std::vector<RawItem> items;
    while (!c.done()) {
        const Token& t = c.toks[c.pos];
        if (stopAtEquals && t.kind == Token::Punct && t.text == "=") break;
        if (t.kind == Token::Quoted) {
            items.push_back({RawItem::Kind::Literal, t.text, t.col, {}});
            ++c.pos;
            continue;
        }
        if (t.kind == Token::Ident) {
            if (t.text == "T") {
                ++c.pos;
                c.expectPunct('(', "( after T");
                RawItem call{RawItem::Kind::Call, "", t.col, {}};
                while (!c.atPunct(')')) {
                    const Token& e = c.take();
                    if (e.kind == Token::Quoted)
                        call.call.push_back({false, e.text, e.col});
                    else if (e.kind == Token::Ident && !reserved_name(e.text))
                        call.call.push_back({true, e.text, e.col});
                    else
                        parse_fail(c.line, e.col,
                                   "expected a variable or quoted literal inside T(...)");
                }
                if (call.call.empty())
                    parse_fail(c.line, t.col, "empty call; use T(\"\") for the empty string");
                c.expectPunct(')', ") closing the call");
                items.push_back(std::move(call));
                continue;
            }
            if (reserved_name(t.text))
                parse_fail(c.line, t.col, "unexpected keyword \"" + t.text + "\"");
            items.push_back({RawItem::Kind::Var, t.text, t.col, {}});
            ++c.pos;
            continue;
        }
        parse_fail(c.line, t.col, "unexpected token \"" + t.text + "\"");
    }
    if (items.empty())
        parse_fail(c.line, c.done() ? c.lastCol() : c.toks[c.pos].col,
                   std::string("empty ") + sideName + "; use \"\" for the empty string");
    return items;
}

RawRule parse_rule_line(const std::vector<Token>& toks, int line) {
    Cursor c{toks, 0, line};
    RawRule r;
    r.line = line;
    if (!c.done() && toks[0].kind == Token::Ident && toks[0].text == "forall") {
        ++c.pos;
        while (true) {
            const Token& v = c.take();
            if (v.kind != Token::Ident || reserved_name(v.text))
                parse_fail(line, v.col, "expected a variable name after forall");
            const Token& kw = c.take();
            if (kw.kind != Token::Ident || kw.text != "in")
                parse_fail(line, kw.col, "expected \"in\" after the variable name");
            RawBinding b{v.text, parse_domain_expr(c, true), v.col};
            r.bindings.push_back(std::move(b));
            if (c.atPunct(',')) { ++c.pos; continue; }
            break;
        }
        c.expectPunct(':', ": after the forall bindings");
    }
    r.lhs = parse_side(c, true, "left side");
    c.expectPunct('=', "= between the rule sides");
    r.rhs = parse_side(c, false, "right side");
    return r;
}

// -------------------------------------------------------- alphabet inference

void add_unique(std::vector<std::string>& acc, const std::string& tok) {
    if (std::find(acc.begin(), acc.end(), tok) == acc.end()) acc.push_back(tok);
}

void add_literal_tokens(std::vector<std::string>& acc, const std::string& text) {
    for (const auto& piece : split_ws(text)) add_unique(acc, piece);
}

void add_regex_tokens(std::vector<std::string>& acc, const std::string& src) {
    std::size_t i = 0;
    while (true) {
        i = src.find('"', i);
        if (i == std::string::npos) return;
        const std::size_t j = src.find('"', i + 1);
        if (j == std::string::npos) return;
        add_literal_tokens(acc, src.substr(i + 1, j - i - 1));
        i = j + 1;
    }
}

void add_domain_expr_tokens(std::vector<std::string>& acc, const DomainExpr& e) {
    if (e.kind == DomainExpr::Kind::Set)
        for (const auto& s : e.strings) add_literal_tokens(acc, s);
    else if (e.kind == DomainExpr::Kind::Regex)
        add_regex_tokens(acc, e.regexSource);
}

// variables used inside calls are input-side, in blocks output-side
void classify_vars(const RawRule& r, std::set<std::string>& inCall,
                   std::set<std::string>& inBlock) {
    for (const auto* side : {&r.lhs, &r.rhs}) {
        for (const auto& it : *side) {
            if (it.kind == RawItem::Kind::Var) inBlock.insert(it.text);
            else if (it.kind == RawItem::Kind::Call)
                for (const auto& e : it.call)
                    if (e.isVar) inCall.insert(e.text);
        }
    }
}

// ------------------------------------------------------------ materializing

struct Materializer {
    AlphabetRef inAlpha, outAlpha;
    const std::vector<RawDomainDecl>* decls;
    std::map<std::string, VariableDomain> named;  // input-side cache

    VariableDomain get(const DomainExpr& e, bool inputSide, int line) {
        const AlphabetRef& alpha = inputSide ? inAlpha : outAlpha;
        switch (e.kind) {
            case DomainExpr::Kind::Star: return VariableDomain::sigmaStar(alpha);
            case DomainExpr::Kind::Plus: return VariableDomain::sigmaPlus(alpha);
            case DomainExpr::Kind::One: return VariableDomain::sigmaOne(alpha);
            case DomainExpr::Kind::Set: {
                std::vector<TokenString> ss;
                ss.reserve(e.strings.size());
                for (const auto& raw : e.strings)
                    ss.push_back(TokenString::parse(alpha, raw));
                return VariableDomain::finiteSet(alpha, std::move(ss));
            }
            case DomainExpr::Kind::Regex:
                return VariableDomain::fromRegex(alpha, e.regexSource);
            case DomainExpr::Kind::Named: {
                // named domains are input classes by construction
                if (!inputSide)
                    fail(ErrorKind::Domain,
                         "line " + std::to_string(line) + ": named domain \"" + e.name +
                             "\" cannot bind an output variable; inline the expression");
                auto it = named.find(e.name);
                if (it != named.end()) return it->second;
                for (const auto& d : *decls) {
                    if (d.name != e.name) continue;
                    VariableDomain dom = get(d.expr, true, d.line);
                    named.emplace(e.name, dom);
                    return dom;
                }
                fail(ErrorKind::Domain, "line " + std::to_string(line) +
                                            ": unknown domain \"" + e.name + "\"");
            }
        }
        fail(ErrorKind::Internal, "unhandled domain expression");
    }
};

// --------------------------------------------------------------- assembling

GtrRule assemble_rule(const RawRule& rr, Materializer& mat) {
    std::set<std::string> inCall, inBlock;
    classify_vars(rr, inCall, inBlock);

    std::set<std::string> declared;
    for (const auto& b : rr.bindings)
        if (!declared.insert(b.var).second)
            fail(ErrorKind::Validation, "duplicate variable \"" + b.var + "\"");
    for (const auto& used : {inCall, inBlock})
        for (const auto& name : used)
            if (!declared.count(name))
                fail(ErrorKind::Parse, "unknown variable \"" + name +
                                           "\" (literals must be quoted)");

    std::vector<InputVariable> inputVars, outputVars;
    std::map<std::string, std::pair<bool, std::uint32_t>> index;  // name -> (isInput, idx)
    for (const auto& b : rr.bindings) {
        const bool ic = inCall.count(b.var) != 0;
        const bool bc = inBlock.count(b.var) != 0;
        if (ic && bc)
            fail(ErrorKind::Validation, "variable \"" + b.var +
                                            "\" used both inside and outside calls");
        if (!ic && !bc)
            fail(ErrorKind::Validation, "variable \"" + b.var + "\" is never used");
        if (ic) {
            index[b.var] = {true, static_cast<std::uint32_t>(inputVars.size())};
            inputVars.push_back({b.var, mat.get(b.domain, true, rr.line)});
        } else {
            index[b.var] = {false, static_cast<std::uint32_t>(outputVars.size())};
            outputVars.push_back({b.var, mat.get(b.domain, false, rr.line)});
        }
    }

    auto build_side = [&](const std::vector<RawItem>& items,
                          std::vector<Pattern>& blocks, std::vector<Pattern>& args) {
        std::vector<PatternElem> cur;
        for (const auto& it : items) {
            switch (it.kind) {
                case RawItem::Kind::Literal:
                    for (const auto& piece : split_ws(it.text))
                        cur.push_back(PatternElem::literal(mat.outAlpha->require(piece)));
                    break;
                case RawItem::Kind::Var:
                    cur.push_back(PatternElem::variable(index[it.text].second));
                    break;
                case RawItem::Kind::Call: {
                    blocks.emplace_back(std::move(cur));
                    cur = {};
                    std::vector<PatternElem> arg;
                    for (const auto& e : it.call) {
                        if (e.isVar)
                            arg.push_back(PatternElem::variable(index[e.text].second));
                        else
                            for (const auto& piece : split_ws(e.text))
                                arg.push_back(PatternElem::literal(mat.inAlpha->require(piece)));
                    }
                    args.emplace_back(std::move(arg));
                    break;
                }
            }
        }
        blocks.emplace_back(std::move(cur));
    };

    std::vector<Pattern> lhsBlocks, lhsArgs, rhsBlocks, rhsArgs;
    build_side(rr.lhs, lhsBlocks, lhsArgs);
    build_side(rr.rhs, rhsBlocks, rhsArgs);
    if (lhsArgs.empty())
        fail(ErrorKind::Validation, "left side contains no T(...) call");
    return GtrRule(mat.inAlpha, mat.outAlpha, std::move(inputVars),
                   std::move(outputVars), std::move(lhsBlocks), std::move(lhsArgs),
                   std::move(rhsBlocks), std::move(rhsArgs));
}

[[noreturn]] void rethrow_with_line(const Error& e, int line) {
    const std::string msg = e.what();
    if (msg.rfind("line ", 0) == 0) throw e;
    fail(e.kind(), "line " + std::to_string(line) + ": " + msg);
}

} // namespace

RuleParseResult parse_rules(const std::string& text) {
    // lex every line and sort the lines into declarations and rules
    std::vector<std::pair<int, std::vector<Token>>> directiveIn, directiveOut;
    std::vector<RawDomainDecl> decls;
    std::vector<RawRule> rawRules;
    {
        int line = 0;
        std::size_t from = 0;
        while (from <= text.size()) {
            const std::size_t to = text.find('\n', from);
            std::string raw = text.substr(
                from, to == std::string::npos ? std::string::npos : to - from);
            ++line;
            from = (to == std::string::npos) ? text.size() + 1 : to + 1;

            std::vector<Token> toks = lex_line(raw, line);
            if (toks.empty()) continue;
            const bool directive =
                toks[0].kind == Token::Ident &&
                (toks[0].text == "input-alphabet" || toks[0].text == "output-alphabet" ||
                 toks[0].text == "class-domain");
            if (!directive) {
                rawRules.push_back(parse_rule_line(toks, line));
                continue;
            }
            if (toks[0].text == "class-domain") {
                Cursor c{toks, 1, line};
                const Token& name = c.take();
                if (name.kind != Token::Ident || reserved_name(name.text))
                    parse_fail(line, name.col, "expected a domain name");
                c.expectPunct('=', "= after the domain name");
                DomainExpr expr = parse_domain_expr(c, false);
                if (!c.done())
                    parse_fail(line, c.peek().col, "trailing tokens after the domain");
                for (const auto& d : decls)
                    if (d.name == name.text)
                        parse_fail(line, name.col,
                                   "domain \"" + name.text + "\" declared twice");
                decls.push_back({name.text, std::move(expr), line});
            } else if (toks[0].text == "input-alphabet") {
                if (!directiveIn.empty())
                    parse_fail(line, toks[0].col, "input-alphabet declared twice");
                directiveIn.emplace_back(line, toks);
            } else {
                if (!directiveOut.empty())
                    parse_fail(line, toks[0].col, "output-alphabet declared twice");
                directiveOut.emplace_back(line, toks);
            }
        }
    }

    // the two alphabets: declared up front, or inferred from the literals
    auto directive_tokens = [](const std::pair<int, std::vector<Token>>& dir) {
        std::vector<std::string> acc;
        const auto& toks = dir.second;
        for (std::size_t i = 1; i < toks.size(); ++i) {
            if (toks[i].kind != Token::Quoted)
                parse_fail(dir.first, toks[i].col, "expected quoted tokens");
            for (const auto& piece : split_ws(toks[i].text)) acc.push_back(piece);
        }
        if (acc.empty())
            parse_fail(dir.first, toks[0].col, "alphabet declaration lists no tokens");
        return acc;
    };

    std::vector<std::string> inTokens, outTokens;
    if (!directiveIn.empty()) inTokens = directive_tokens(directiveIn[0]);
    if (!directiveOut.empty()) outTokens = directive_tokens(directiveOut[0]);
    if (directiveIn.empty() || directiveOut.empty()) {
        // first appearance order across the whole file, declarations and
        // rules interleaved as written
        std::vector<std::string> inferIn, inferOut;
        std::size_t di = 0, ri = 0;
        while (di < decls.size() || ri < rawRules.size()) {
            if (di < decls.size() &&
                (ri >= rawRules.size() || decls[di].line < rawRules[ri].line)) {
                add_domain_expr_tokens(inferIn, decls[di].expr);
                ++di;
                continue;
            }
            const RawRule& rr = rawRules[ri++];
            std::set<std::string> inCall, inBlock;
            classify_vars(rr, inCall, inBlock);
            for (const auto& b : rr.bindings)
                add_domain_expr_tokens(inCall.count(b.var) || !inBlock.count(b.var)
                                           ? inferIn
                                           : inferOut,
                                       b.domain);
            for (const auto* side : {&rr.lhs, &rr.rhs}) {
                for (const auto& it : *side) {
                    if (it.kind == RawItem::Kind::Literal)
                        add_literal_tokens(inferOut, it.text);
                    else if (it.kind == RawItem::Kind::Call)
                        for (const auto& e : it.call)
                            if (!e.isVar) add_literal_tokens(inferIn, e.text);
                }
            }
        }
        if (directiveIn.empty()) inTokens = std::move(inferIn);
        if (directiveOut.empty()) outTokens = std::move(inferOut);
    }
    if (inTokens.empty())
        fail(ErrorKind::Alphabet,
             "cannot determine the input alphabet: no input literals found; "
             "add an input-alphabet line");
    if (outTokens.empty())
        fail(ErrorKind::Alphabet,
             "cannot determine the output alphabet: no output literals found; "
             "add an output-alphabet line");

    RuleParseResult result;
    try {
        result.grammar.inputAlphabet = Alphabet::make(std::move(inTokens));
    } catch (const Error& e) {
        rethrow_with_line(e, directiveIn.empty() ? 1 : directiveIn[0].first);
    }
    try {
        result.grammar.outputAlphabet = Alphabet::make(std::move(outTokens));
    } catch (const Error& e) {
        rethrow_with_line(e, directiveOut.empty() ? 1 : directiveOut[0].first);
    }

    Materializer mat{result.grammar.inputAlphabet, result.grammar.outputAlphabet,
                     &decls, {}};
    for (const auto& d : decls) {
        try {
            DomainExpr ref;
            ref.kind = DomainExpr::Kind::Named;
            ref.name = d.name;
            result.grammar.domains.emplace_back(d.name, mat.get(ref, true, d.line));
        } catch (const Error& e) {
            rethrow_with_line(e, d.line);
        }
    }
    for (const auto& rr : rawRules) {
        try {
            GtrRule rule = assemble_rule(rr, mat);
            auto checked = validate_ggr(rule);
            if (std::holds_alternative<GgrRule>(checked)) {
                result.grammar.rules.push_back(std::get<GgrRule>(std::move(checked)));
                result.ruleLines.push_back(rr.line);
            } else {
                result.gtrs.push_back(std::move(rule));
                result.gtrLines.push_back(rr.line);
            }
        } catch (const Error& e) {
            rethrow_with_line(e, rr.line);
        }
    }
    validate_grammar(result.grammar);
    return result;
}

VariableDomain parse_domain(const AlphabetRef& alphabet, const std::string& text) {
    if (!alphabet) fail(ErrorKind::Usage, "parse_domain: null alphabet");
    std::vector<Token> toks = lex_line(text, 1);
    if (toks.empty())
        fail(ErrorKind::Parse, "line 1: expected a domain expression");
    Cursor c{toks, 0, 1};
    DomainExpr expr = parse_domain_expr(c, false);
    if (!c.done())
        parse_fail(1, c.peek().col, "trailing tokens after the domain");
    Materializer mat{alphabet, alphabet, nullptr, {}};
    return mat.get(expr, true, 1);
}

// ------------------------------------------------------------------ printing

namespace {

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string domain_ref(const VariableDomain& d) {
    switch (d.spec().kind) {
        case DomainSpec::Kind::SigmaStar: return "SIGMA*";
        case DomainSpec::Kind::SigmaPlus: return "SIGMA+";
        case DomainSpec::Kind::SigmaOne: return "SIGMA1";
        default: return d.printExpr();
    }
}

std::string forall_prefix(const std::vector<const InputVariable*>& vars) {
    if (vars.empty()) return "";
    std::vector<std::string> parts;
    parts.reserve(vars.size());
    for (const auto* v : vars) parts.push_back(v->name + " in " + domain_ref(v->domain));
    return "forall " + join(parts, ", ") + ": ";
}

// literal runs merge into a single quoted string
void flush_run(std::vector<std::string>& parts, std::vector<std::string>& run) {
    if (run.empty()) return;
    parts.push_back(quoted(join(run, " ")));
    run.clear();
}

std::string print_call(const Pattern& p, const AlphabetRef& inAlpha,
                       const std::vector<InputVariable>& vars) {
    std::vector<std::string> parts, run;
    for (const auto& e : p.elems()) {
        if (e.isVariable) {
            flush_run(parts, run);
            parts.push_back(vars[e.var].name);
        } else {
            run.push_back(inAlpha->spelling(e.token));
        }
    }
    flush_run(parts, run);
    if (parts.empty()) parts.push_back("\"\"");
    return "T(" + join(parts, " ") + ")";
}

void append_block(std::vector<std::string>& parts, const Pattern& p,
                  const AlphabetRef& outAlpha, const std::vector<InputVariable>& vars) {
    std::vector<std::string> run;
    for (const auto& e : p.elems()) {
        if (e.isVariable) {
            flush_run(parts, run);
            parts.push_back(vars[e.var].name);
        } else {
            run.push_back(outAlpha->spelling(e.token));
        }
    }
    flush_run(parts, run);
}

std::string print_gtr_side(const std::vector<Pattern>& blocks,
                           const std::vector<Pattern>& args, const GtrRule& r) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < args.size(); ++i) {
        append_block(parts, blocks[i], r.outputAlphabet(), r.outputVars());
        parts.push_back(print_call(args[i], r.inputAlphabet(), r.inputVars()));
    }
    append_block(parts, blocks.back(), r.outputAlphabet(), r.outputVars());
    if (parts.empty()) parts.push_back("\"\"");
    return join(parts, " ");
}

} // namespace

std::string print_rule(const GgrRule& r) {
    std::vector<const InputVariable*> vars;
    vars.reserve(r.vars().size());
    for (const auto& v : r.vars()) vars.push_back(&v);
    std::string out = forall_prefix(vars);
    out += print_call(r.lhs(), r.inputAlphabet(), r.vars());
    out += " = ";
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < r.args().size(); ++i) {
        if (!r.blocks()[i].empty()) parts.push_back(quoted(r.blocks()[i].text()));
        parts.push_back(print_call(r.args()[i], r.inputAlphabet(), r.vars()));
    }
    if (!r.blocks().back().empty()) parts.push_back(quoted(r.blocks().back().text()));
    if (parts.empty()) parts.push_back("\"\"");
    out += join(parts, " ");
    return out;
}

std::string print_gtr(const GtrRule& r) {
    std::vector<const InputVariable*> vars;
    vars.reserve(r.inputVars().size() + r.outputVars().size());
    for (const auto& v : r.inputVars()) vars.push_back(&v);
    for (const auto& v : r.outputVars()) vars.push_back(&v);
    std::string out = forall_prefix(vars);
    out += print_gtr_side(r.lhsBlocks(), r.lhsArgs(), r);
    out += " = ";
    out += print_gtr_side(r.rhsBlocks(), r.rhsArgs(), r);
    return out;
}

std::string print_grammar(const Grammar& g) {
    validate_grammar(g);
    std::string out = "input-alphabet";
    for (const auto& tok : g.inputAlphabet->tokens()) out += " " + quoted(tok);
    out += "\noutput-alphabet";
    for (const auto& tok : g.outputAlphabet->tokens()) out += " " + quoted(tok);
    out += "\n";
    for (const auto& [name, dom] : g.domains)
        out += "class-domain " + name + " = " + dom.printExpr() + "\n";
    for (const auto& r : g.rules) out += print_rule(r) + "\n";
    return out;
}

} // namespace ggr
