#include "ggr/engine.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "ggr/errors.hpp"

namespace ggr {
namespace {

bool seg_equal(const TokenString& s, std::size_t pos, const TokenString& v) {
    for (std::size_t i = 0; i < v.length(); ++i)
        if (s.ids()[pos + i] != v.ids()[i]) return false;
    return true;
}

// Backtracking walk over the pattern elements, emitting assignments in
// canonical order (left to right, shorter bindings first). The callback
// returns false to stop the whole enumeration.
class MatchScan {
public:
    MatchScan(const Pattern& pat, const std::vector<InputVariable>& vars,
              const TokenString& s,
              const std::function<bool(MatchAssignment&&)>& fn)
        : pat_(pat), vars_(vars), s_(s), fn_(fn),
          values_(vars.size()), has_(vars.size(), 0),
          splits_(pat.elems().size() + 1, 0) {}

    void run() { step(0, 0); }

private:
    // returns false once the callback asked to stop
    bool step(std::size_t elem, std::size_t pos) {
        splits_[elem] = pos;
        if (elem == pat_.elems().size()) {
            if (pos != s_.length()) return true;
            MatchAssignment ma;
            ma.values = values_;
            ma.splits = splits_;
            return fn_(std::move(ma));
        }
        const PatternElem& e = pat_.elems()[elem];
        if (!e.isVariable) {
            if (pos < s_.length() && s_.ids()[pos] == e.token)
                return step(elem + 1, pos + 1);
            return true;
        }
        if (has_[e.var]) {
            const TokenString& v = values_[e.var];
            if (pos + v.length() <= s_.length() && seg_equal(s_, pos, v))
                return step(elem + 1, pos + v.length());
            return true;
        }
        for (std::size_t len = 0; pos + len <= s_.length(); ++len) {
            TokenString cand = s_.slice(pos, pos + len);
            if (!vars_[e.var].domain.contains(cand)) continue;
            values_[e.var] = std::move(cand);
            has_[e.var] = 1;
            const bool keepGoing = step(elem + 1, pos + len);
            has_[e.var] = 0;
            if (!keepGoing) return false;
        }
        return true;
    }

    const Pattern& pat_;
    const std::vector<InputVariable>& vars_;
    const TokenString& s_;
    const std::function<bool(MatchAssignment&&)>& fn_;
    std::vector<TokenString> values_;
    std::vector<char> has_;
    std::vector<std::size_t> splits_;
};

void scan_matches(const Pattern& pat, const std::vector<InputVariable>& vars,
                  const TokenString& s,
                  const std::function<bool(MatchAssignment&&)>& fn) {
    for (std::uint32_t v = 0; v < vars.size(); ++v)
        if (!pat.usesVariable(v))
            fail(ErrorKind::Usage, "pattern does not bind variable \"" +
                                       vars[v].name + "\"");
    MatchScan(pat, vars, s, fn).run();
}

// One recursive interpretation pass over a shared memo.
struct Evaluator {
    const Grammar& g;
    const EngineLimits& lim;
    std::map<TokenString, TokenString, TokenStringLess>& memo;
    std::set<TokenString, TokenStringLess>& undefined;

    TokenString eval(const TokenString& s, std::size_t depth) {
        if (s.empty())
            fail(ErrorKind::NoRuleMatches, "no rule matches the empty string");
        if (auto it = memo.find(s); it != memo.end()) return it->second;
        if (undefined.count(s))
            fail(ErrorKind::NoRuleMatches, "no rule matches \"" + s.text() + "\"");
        if (depth >= lim.maxDepth)
            fail(ErrorKind::DepthExceeded,
                 "recursion exceeded " + std::to_string(lim.maxDepth) +
                     " levels at \"" + s.text() + "\"");

        const bool requireUnique =
            lim.ambiguity == EngineLimits::Ambiguity::RequireUnique;
        std::optional<MatchAssignment> chosen;
        for (std::size_t i = 0; i < g.rules.size(); ++i) {
            const GgrRule& r = g.rules[i];
            scan_matches(r.lhs(), r.vars(), s, [&](MatchAssignment&& ma) {
                if (chosen)
                    fail(ErrorKind::AmbiguousMatch,
                         "\"" + s.text() + "\" matches rule " +
                             std::to_string(chosen->ruleIndex + 1) +
                             " and rule " + std::to_string(i + 1) +
                             " (or one rule twice)");
                ma.ruleIndex = i;
                chosen = std::move(ma);
                return requireUnique;  // keep scanning only to prove uniqueness
            });
            if (chosen && !requireUnique) break;
        }
        if (!chosen) {
            undefined.insert(s);
            fail(ErrorKind::NoRuleMatches, "no rule matches \"" + s.text() + "\"");
        }

        const GgrRule& r = g.rules[chosen->ruleIndex];
        GroundEquation ge = substitute(r, chosen->values);
        if (ge.lhsInput != s)
            fail(ErrorKind::Internal, "match assignment does not reproduce the input");
        TokenString out = ge.blocks[0];
        for (std::size_t j = 0; j < ge.rhsArgs.size(); ++j) {
            const TokenString& arg = ge.rhsArgs[j];
            if (lim.requireStrictDecrease && arg.length() >= s.length())
                fail(ErrorKind::NonDecreasingRecursion,
                     "rule " + std::to_string(chosen->ruleIndex + 1) +
                         " does not shorten \"" + s.text() + "\"");
            out = out.concat(eval(arg, depth + 1)).concat(ge.blocks[j + 1]);
        }
        memo.emplace(s, out);
        return out;
    }
};

void check_limits(const EngineLimits& lim) {
    if (lim.maxDepth < 1) fail(ErrorKind::Usage, "maxDepth must be at least 1");
}

} // namespace

std::vector<MatchAssignment> match_pattern(const Pattern& A,
                                           const std::vector<InputVariable>& vars,
                                           const TokenString& s) {
    std::vector<MatchAssignment> out;
    scan_matches(A, vars, s, [&](MatchAssignment&& ma) {
        out.push_back(std::move(ma));
        return true;
    });
    return out;
}

TokenString interpret(const Grammar& g, const TokenString& s,
                      const EngineLimits& lim) {
    check_limits(lim);
    require_same_alphabet(s.alphabet(), g.inputAlphabet, "interpreted input");
    if (s.empty())
        fail(ErrorKind::Validation, "cannot interpret the empty string");
    std::map<TokenString, TokenString, TokenStringLess> memo;
    std::set<TokenString, TokenStringLess> undefined;
    return Evaluator{g, lim, memo, undefined}.eval(s, 0);
}

// ------------------------------------------------------- growth derivation

namespace {

// non-negative rational with overflow-free comparison
struct Rat {
    std::uint64_t num = 0, den = 1;
};

bool rat_less(const Rat& a, const Rat& b) {
    return static_cast<unsigned __int128>(a.num) * b.den <
           static_cast<unsigned __int128>(b.num) * a.den;
}

struct VarShape {
    std::uint32_t d = 0;        // occurrences in the lhs
    std::uint32_t e = 0;        // occurrences across all arguments
    std::uint32_t minLen = 0;
    std::optional<std::uint32_t> maxLen;
    std::vector<std::uint32_t> okLens;  // achievable lengths, capped later
};

struct RuleShape {
    std::uint64_t tA = 0;    // literal tokens in the lhs
    std::uint64_t sumB = 0;  // total output-block length
    std::vector<std::uint64_t> tArg;
    std::vector<std::vector<std::uint32_t>> argVarCount;  // [arg][var]
    std::vector<VarShape> vars;
    bool bounded = true;  // every variable domain is finite
};

std::optional<std::uint64_t> add_u64(std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) return std::nullopt;
    return a + b;
}

} // namespace

std::optional<GrowthBound> derive_growth_bound(const Grammar& g,
                                               const EngineLimits& lim) {
    // the stratified maxima below assume recursion strictly shrinks inputs
    if (!lim.requireStrictDecrease) return std::nullopt;

    std::vector<RuleShape> shapes;
    for (const GgrRule& r : g.rules) {
        bool vacuous = false;
        for (const auto& v : r.vars()) vacuous = vacuous || v.domain.isEmpty();
        if (vacuous) continue;  // matches nothing, constrains nothing

        RuleShape sh;
        sh.vars.resize(r.h());
        for (const auto& e : r.lhs().elems()) {
            if (e.isVariable) ++sh.vars[e.var].d;
            else ++sh.tA;
        }
        for (const auto& b : r.blocks()) sh.sumB += b.length();
        sh.tArg.resize(r.k(), 0);
        sh.argVarCount.assign(r.k(), std::vector<std::uint32_t>(r.h(), 0));
        for (std::size_t j = 0; j < r.args().size(); ++j) {
            for (const auto& e : r.args()[j].elems()) {
                if (e.isVariable) {
                    ++sh.argVarCount[j][e.var];
                    ++sh.vars[e.var].e;
                } else {
                    ++sh.tArg[j];
                }
            }
        }
        for (std::uint32_t v = 0; v < r.h(); ++v) {
            const VariableDomain& dom = r.vars()[v].domain;
            sh.vars[v].minLen = *dom.minLength();
            sh.vars[v].maxLen = dom.maxLength();
            if (!sh.vars[v].maxLen) sh.bounded = false;
        }
        shapes.push_back(std::move(sh));
    }

    // stratum ceiling: the largest input length a finite-domain rule reaches
    std::uint64_t N = 0;
    for (const auto& sh : shapes) {
        if (!sh.bounded) continue;
        std::uint64_t n = sh.tA;
        for (const auto& v : sh.vars)
            n += static_cast<std::uint64_t>(v.d) * *v.maxLen;
        N = std::max(N, n);
    }
    if (N > 512) return std::nullopt;  // strata too wide to tabulate

    // achievable binding lengths per rule variable, up to the ceiling
    std::vector<RuleShape> withLens = std::move(shapes);
    {
        std::size_t shapeIdx = 0;
        for (const GgrRule& r : g.rules) {
            bool vacuous = false;
            for (const auto& v : r.vars()) vacuous = vacuous || v.domain.isEmpty();
            if (vacuous) continue;
            RuleShape& sh = withLens[shapeIdx++];
            for (std::uint32_t v = 0; v < r.h(); ++v) {
                const std::uint64_t cap =
                    sh.tA > N ? 0 : (N - sh.tA) / std::max<std::uint32_t>(sh.vars[v].d, 1);
                const std::uint64_t top =
                    sh.vars[v].maxLen ? std::min<std::uint64_t>(*sh.vars[v].maxLen, cap)
                                      : cap;
                for (std::uint64_t len = sh.vars[v].minLen; len <= top; ++len)
                    if (r.vars()[v].domain.countByLength(
                            static_cast<std::uint32_t>(len)) > 0)
                        sh.vars[v].okLens.push_back(static_cast<std::uint32_t>(len));
            }
        }
    }

    // U[n] = certified max output length over defined inputs of length n <= N
    std::vector<std::uint64_t> U(N + 1, 0);
    bool overflow = false;
    for (std::uint64_t n = 1; n <= N && !overflow; ++n) {
        for (const auto& sh : withLens) {
            if (sh.tA > n) continue;
            std::vector<std::uint32_t> pick(sh.vars.size(), 0);
            // enumerate assignments of binding lengths with total exactly n
            std::function<void(std::size_t, std::uint64_t)> dfs =
                [&](std::size_t v, std::uint64_t used) {
                    if (overflow) return;
                    if (v == sh.vars.size()) {
                        if (used != n) return;
                        std::uint64_t val = sh.sumB;
                        for (std::size_t j = 0; j < sh.tArg.size(); ++j) {
                            std::uint64_t argLen = sh.tArg[j];
                            for (std::size_t i = 0; i < sh.vars.size(); ++i)
                                argLen += static_cast<std::uint64_t>(
                                              sh.argVarCount[j][i]) * pick[i];
                            if (argLen >= n) return;  // errors out at run time
                            auto sum = add_u64(val, U[argLen]);
                            if (!sum) { overflow = true; return; }
                            val = *sum;
                        }
                        U[n] = std::max(U[n], val);
                        return;
                    }
                    for (std::uint32_t len : sh.vars[v].okLens) {
                        const std::uint64_t add =
                            static_cast<std::uint64_t>(sh.vars[v].d) * len;
                        if (used + add > n) break;  // okLens ascending
                        pick[v] = len;
                        dfs(v + 1, used + add);
                    }
                };
            dfs(0, sh.tA);
        }
    }
    if (overflow) return std::nullopt;

    Rat cT{0, 1};
    for (std::uint64_t n = 1; n <= N; ++n)
        if (U[n] > 0 && rat_less(cT, Rat{U[n], n})) cT = Rat{U[n], n};

    // linear closure for rules whose inputs grow without bound: the input
    // must gain at least as many tokens as all the recursive arguments
    // combined, with the slack paying for the literal output blocks
    for (const auto& sh : withLens) {
        if (sh.bounded) continue;
        __int128 gmin = static_cast<__int128>(sh.tA);
        for (const auto& t : sh.tArg) gmin -= static_cast<__int128>(t);
        for (const auto& v : sh.vars) {
            const std::int64_t coeff =
                static_cast<std::int64_t>(v.d) - static_cast<std::int64_t>(v.e);
            if (coeff > 0) {
                gmin += static_cast<__int128>(coeff) * v.minLen;
            } else if (coeff < 0) {
                if (!v.maxLen) return std::nullopt;  // argument growth unbounded
                gmin += static_cast<__int128>(coeff) * *v.maxLen;
            }
        }
        if (gmin < 0) return std::nullopt;
        if (gmin == 0) {
            if (sh.sumB > 0) return std::nullopt;
            continue;
        }
        const Rat need{sh.sumB, static_cast<std::uint64_t>(gmin)};
        if (rat_less(cT, need)) cT = need;
    }

    if (cT.num == 0) cT = {1, 1};  // nothing produces output; 1*n still holds
    if (cT.num > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) ||
        cT.den > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        return std::nullopt;
    return GrowthBound(static_cast<std::int64_t>(cT.num),
                       static_cast<std::int64_t>(cT.den), 1);
}

// --------------------------------------------------------------- GrammarMap

GrammarMap::GrammarMap(Grammar g, EngineLimits lim)
    : g_(std::move(g)), lim_(lim) {
    validate_grammar(g_);
    check_limits(lim_);
    bound_ = derive_growth_bound(g_, lim_);
}

const AlphabetRef& GrammarMap::inputAlphabet() const { return g_.inputAlphabet; }
const AlphabetRef& GrammarMap::outputAlphabet() const { return g_.outputAlphabet; }

std::optional<TokenString> GrammarMap::evaluate(const TokenString& in) const {
    require_same_alphabet(in.alphabet(), g_.inputAlphabet, "evaluated input");
    if (in.empty()) return std::nullopt;
    std::lock_guard<std::mutex> lock(mu_);
    try {
        return Evaluator{g_, lim_, memo_, undefined_}.eval(in, 0);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NoRuleMatches) return std::nullopt;
        throw;
    }
}

TransductionMapRef as_transduction_map(Grammar g, EngineLimits lim) {
    return std::make_shared<GrammarMap>(std::move(g), lim);
}

// ------------------------------------------------------------- augmentation

std::vector<std::pair<TokenString, TokenString>> augment(
    const Grammar& g, const std::vector<TokenString>& seeds, std::size_t budget,
    std::size_t maxLen, const EngineLimits& lim) {
    check_limits(lim);
    validate_grammar(g);
    for (const auto& s : seeds)
        require_same_alphabet(s.alphabet(), g.inputAlphabet, "augmentation seed");

    std::vector<std::pair<TokenString, TokenString>> out;
    if (budget == 0) return out;

    // per rule and variable: domain members up to maxLen plus matching seeds
    struct RulePools {
        std::vector<std::vector<TokenString>> pool;  // per var, canonical order
        std::vector<std::size_t> minPoolLen, maxPoolLen;
        bool usable = true;
    };
    std::vector<RulePools> pools(g.rules.size());
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
        const GgrRule& r = g.rules[i];
        RulePools& rp = pools[i];
        rp.pool.resize(r.h());
        rp.minPoolLen.assign(r.h(), 0);
        rp.maxPoolLen.assign(r.h(), 0);
        for (std::uint32_t v = 0; v < r.h(); ++v) {
            auto& pool = rp.pool[v];
            const VariableDomain& dom = r.vars()[v].domain;
            for (std::uint32_t len = 0; len <= maxLen; ++len)
                for (auto& m : dom.enumerateByLength(len)) pool.push_back(std::move(m));
            // contiguous seed fragments join the pool whatever their length;
            // the short ones are already covered by the enumeration above
            for (const auto& s : seeds)
                for (std::size_t b = 0; b < s.length(); ++b)
                    for (std::size_t e = b + 1; e <= s.length(); ++e) {
                        TokenString frag = s.slice(b, e);
                        if (frag.length() > maxLen && dom.contains(frag))
                            pool.push_back(std::move(frag));
                    }
            std::sort(pool.begin(), pool.end(), TokenStringLess{});
            pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
            if (pool.empty()) { rp.usable = false; break; }
            rp.minPoolLen[v] = pool.front().length();
            rp.maxPoolLen[v] = pool.back().length();
        }
    }

    std::size_t maxInputLen = 0;
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
        if (!pools[i].usable) continue;
        const GgrRule& r = g.rules[i];
        std::size_t n = 0;
        for (const auto& e : r.lhs().elems())
            n += e.isVariable ? pools[i].maxPoolLen[e.var] : 1;
        maxInputLen = std::max(maxInputLen, n);
    }

    std::map<TokenString, TokenString, TokenStringLess> memo;
    std::set<TokenString, TokenStringLess> undefinedMemo;
    Evaluator ev{g, lim, memo, undefinedMemo};
    std::set<TokenString, TokenStringLess> seen;

    for (std::size_t L = 1; L <= maxInputLen && out.size() < budget; ++L) {
        for (std::size_t i = 0; i < g.rules.size() && out.size() < budget; ++i) {
            if (!pools[i].usable) continue;
            const GgrRule& r = g.rules[i];
            const RulePools& rp = pools[i];

            // per-variable lhs multiplicity and remaining-length windows
            std::vector<std::size_t> mult(r.h(), 0);
            std::size_t literals = 0;
            for (const auto& e : r.lhs().elems()) {
                if (e.isVariable) ++mult[e.var];
                else ++literals;
            }
            std::vector<std::size_t> minTail(r.h() + 1, 0), maxTail(r.h() + 1, 0);
            for (std::size_t v = r.h(); v-- > 0;) {
                minTail[v] = minTail[v + 1] + mult[v] * rp.minPoolLen[v];
                maxTail[v] = maxTail[v + 1] + mult[v] * rp.maxPoolLen[v];
            }
            if (literals > L || literals + minTail[0] > L || literals + maxTail[0] < L)
                continue;

            std::vector<TokenString> values(r.h());
            std::function<bool(std::size_t, std::size_t)> pickVar =
                [&](std::size_t v, std::size_t used) -> bool {
                if (v == r.h()) {
                    if (used != L) return true;
                    TokenString input = r.lhs().substitute(g.inputAlphabet, values);
                    if (input.empty()) return true;
                    if (!seen.insert(input).second) return true;
                    try {
                        TokenString result = ev.eval(input, 0);
                        out.emplace_back(std::move(input), std::move(result));
                    } catch (const Error&) {
                        return true;  // not interpretable; keep generating
                    }
                    return out.size() < budget;
                }
                for (const auto& cand : rp.pool[v]) {
                    const std::size_t add = mult[v] * cand.length();
                    if (used + add + minTail[v + 1] > L) break;  // pool ascending
                    if (used + add + maxTail[v + 1] < L) continue;
                    values[v] = cand;
                    if (!pickVar(v + 1, used + add)) return false;
                }
                return true;
            };
            pickVar(0, literals);
        }
    }
    return out;
}

} // namespace ggr
