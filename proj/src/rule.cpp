#include "ggr/rule.hpp"

#include <algorithm>
#include <set>

#include "ggr/errors.hpp"

namespace ggr {

bool Pattern::usesVariable(std::uint32_t v) const {
    for (const auto& e : elems_)
        if (e.isVariable && e.var == v) return true;
    return false;
}

std::uint32_t Pattern::multiplicity(std::uint32_t v) const {
    std::uint32_t n = 0;
    for (const auto& e : elems_)
        if (e.isVariable && e.var == v) ++n;
    return n;
}

bool Pattern::isGround() const {
    return std::none_of(elems_.begin(), elems_.end(),
                        [](const PatternElem& e) { return e.isVariable; });
}

TokenString Pattern::groundString(const AlphabetRef& alphabet) const {
    std::vector<TokenId> ids;
    ids.reserve(elems_.size());
    for (const auto& e : elems_) {
        if (e.isVariable) fail(ErrorKind::Internal, "groundString on non-ground pattern");
        ids.push_back(e.token);
    }
    return TokenString(alphabet, std::move(ids));
}

TokenString Pattern::substitute(const AlphabetRef& alphabet,
                                const std::vector<TokenString>& values) const {
    std::vector<TokenId> ids;
    for (const auto& e : elems_) {
        if (!e.isVariable) {
            ids.push_back(e.token);
            continue;
        }
        if (e.var >= values.size())
            fail(ErrorKind::Internal, "substitute: variable index out of range");
        const TokenString& v = values[e.var];
        ids.insert(ids.end(), v.ids().begin(), v.ids().end());
    }
    return TokenString(alphabet, std::move(ids));
}

namespace {

void check_pattern(const Pattern& p, const AlphabetRef& alphabet,
                   std::size_t varCount, const char* what) {
    for (const auto& e : p.elems()) {
        if (e.isVariable) {
            if (e.var >= varCount)
                fail(ErrorKind::Validation,
                     std::string(what) + ": variable index out of range");
        } else if (e.token >= alphabet->size()) {
            fail(ErrorKind::Validation,
                 std::string(what) + ": token id out of range");
        }
    }
}

void check_var_list(const std::vector<InputVariable>& vars,
                    const AlphabetRef& alphabet, const char* what) {
    std::set<std::string> seen;
    for (const auto& v : vars) {
        if (v.name.empty())
            fail(ErrorKind::Validation, std::string(what) + ": empty variable name");
        if (!seen.insert(v.name).second)
            fail(ErrorKind::Validation,
                 std::string(what) + ": duplicate variable name \"" + v.name + "\"");
        if (!same_alphabet(v.domain.alphabet(), alphabet))
            fail(ErrorKind::Validation,
                 std::string(what) + ": domain of \"" + v.name +
                     "\" is over the wrong alphabet");
    }
}

} // namespace

GtrRule::GtrRule(AlphabetRef inputAlphabet, AlphabetRef outputAlphabet,
                 std::vector<InputVariable> inputVars,
                 std::vector<InputVariable> outputVars,
                 std::vector<Pattern> lhsBlocks, std::vector<Pattern> lhsArgs,
                 std::vector<Pattern> rhsBlocks, std::vector<Pattern> rhsArgs)
    : inAlpha_(std::move(inputAlphabet)),
      outAlpha_(std::move(outputAlphabet)),
      inputVars_(std::move(inputVars)),
      outputVars_(std::move(outputVars)),
      lhsBlocks_(std::move(lhsBlocks)),
      lhsArgs_(std::move(lhsArgs)),
      rhsBlocks_(std::move(rhsBlocks)),
      rhsArgs_(std::move(rhsArgs)) {
    if (!inAlpha_ || !outAlpha_)
        fail(ErrorKind::Validation, "rule requires both alphabets");
    check_var_list(inputVars_, inAlpha_, "rule");
    check_var_list(outputVars_, outAlpha_, "rule");
    {
        std::set<std::string> names;
        for (const auto& v : inputVars_) names.insert(v.name);
        for (const auto& v : outputVars_)
            if (!names.insert(v.name).second)
                fail(ErrorKind::Validation,
                     "rule: variable name \"" + v.name +
                         "\" used for both an input and an output variable");
    }
    if (lhsArgs_.empty())
        fail(ErrorKind::Validation, "rule: left side must contain at least one call");
    if (lhsBlocks_.size() != lhsArgs_.size() + 1 ||
        rhsBlocks_.size() != rhsArgs_.size() + 1)
        fail(ErrorKind::Internal, "rule: block/argument counts out of step");
    for (const auto& p : lhsArgs_) check_pattern(p, inAlpha_, inputVars_.size(), "lhs call");
    for (const auto& p : rhsArgs_) check_pattern(p, inAlpha_, inputVars_.size(), "rhs call");
    for (const auto& p : lhsBlocks_) check_pattern(p, outAlpha_, outputVars_.size(), "lhs block");
    for (const auto& p : rhsBlocks_) check_pattern(p, outAlpha_, outputVars_.size(), "rhs block");
    // every quantified variable has to occur on the appropriate level
    for (std::uint32_t v = 0; v < inputVars_.size(); ++v) {
        bool used = false;
        for (const auto& p : lhsArgs_) used = used || p.usesVariable(v);
        for (const auto& p : rhsArgs_) used = used || p.usesVariable(v);
        if (!used)
            fail(ErrorKind::Validation,
                 "rule: input variable \"" + inputVars_[v].name +
                     "\" does not occur in any call");
    }
    for (std::uint32_t v = 0; v < outputVars_.size(); ++v) {
        bool used = false;
        for (const auto& p : lhsBlocks_) used = used || p.usesVariable(v);
        for (const auto& p : rhsBlocks_) used = used || p.usesVariable(v);
        if (!used)
            fail(ErrorKind::Validation,
                 "rule: output variable \"" + outputVars_[v].name +
                     "\" does not occur in any block");
    }
}

GgrRule::GgrRule(AlphabetRef inputAlphabet, AlphabetRef outputAlphabet,
                 std::vector<InputVariable> vars, Pattern lhs,
                 std::vector<TokenString> blocks, std::vector<Pattern> args)
    : inAlpha_(std::move(inputAlphabet)),
      outAlpha_(std::move(outputAlphabet)),
      vars_(std::move(vars)),
      lhs_(std::move(lhs)),
      blocks_(std::move(blocks)),
      args_(std::move(args)) {
    if (!inAlpha_ || !outAlpha_)
        fail(ErrorKind::Validation, "rule requires both alphabets");
    check_var_list(vars_, inAlpha_, "rule");
    check_pattern(lhs_, inAlpha_, vars_.size(), "lhs");
    if (blocks_.size() != args_.size() + 1)
        fail(ErrorKind::Internal, "rule: block/argument counts out of step");
    for (const auto& b : blocks_)
        if (!same_alphabet(b.alphabet(), outAlpha_))
            fail(ErrorKind::Validation, "rule: output block over the wrong alphabet");
    for (const auto& a : args_) {
        check_pattern(a, inAlpha_, vars_.size(), "call");
        if (a.length() > lhs_.length())
            fail(ErrorKind::Validation,
                 "rule: call argument longer than the left side");
    }
    for (std::uint32_t v = 0; v < vars_.size(); ++v)
        if (!lhs_.usesVariable(v))
            fail(ErrorKind::Validation,
                 "rule: variable \"" + vars_[v].name +
                     "\" is not bound on the left side");
}

bool GgrRule::operator==(const GgrRule& other) const {
    if (!same_alphabet(inAlpha_, other.inAlpha_) ||
        !same_alphabet(outAlpha_, other.outAlpha_))
        return false;
    if (vars_.size() != other.vars_.size()) return false;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].name != other.vars_[i].name) return false;
        if (!(vars_[i].domain == other.vars_[i].domain)) return false;
    }
    return lhs_ == other.lhs_ && blocks_ == other.blocks_ && args_ == other.args_;
}

const char* ggr_violation_name(GgrViolationKind k) {
    switch (k) {
        case GgrViolationKind::OutputVariablePresent: return "output-variable-present";
        case GgrViolationKind::LhsNotSingleCall: return "lhs-not-single-call";
        case GgrViolationKind::ArgExceedsLhs: return "arg-exceeds-lhs";
        case GgrViolationKind::VarNotInLhs: return "var-not-in-lhs";
    }
    return "unknown";
}

std::variant<GgrRule, std::vector<GgrViolation>> validate_ggr(const GtrRule& r) {
    std::vector<GgrViolation> violations;
    if (!r.outputVars().empty()) {
        std::string names;
        for (const auto& v : r.outputVars()) {
            if (!names.empty()) names += ", ";
            names += v.name;
        }
        violations.push_back({GgrViolationKind::OutputVariablePresent,
                              "output variables present: " + names});
    }
    bool blocksEmpty = std::all_of(
        r.lhsBlocks().begin(), r.lhsBlocks().end(),
        [](const Pattern& p) { return p.length() == 0; });
    bool singleCall = r.lhsArgs().size() == 1 && blocksEmpty;
    if (!singleCall) {
        violations.push_back(
            {GgrViolationKind::LhsNotSingleCall,
             "left side must be exactly one call, found " +
                 std::to_string(r.lhsArgs().size()) + " call(s)" +
                 (blocksEmpty ? "" : " with literal material around them")});
    } else {
        // the remaining two conditions compare against that single argument
        const Pattern& a = r.lhsArgs()[0];
        for (std::size_t i = 0; i < r.rhsArgs().size(); ++i) {
            if (r.rhsArgs()[i].length() > a.length())
                violations.push_back(
                    {GgrViolationKind::ArgExceedsLhs,
                     "argument " + std::to_string(i + 1) + " has pattern length " +
                         std::to_string(r.rhsArgs()[i].length()) +
                         " but the left side has " + std::to_string(a.length())});
        }
        for (std::uint32_t v = 0; v < r.inputVars().size(); ++v) {
            if (!a.usesVariable(v))
                violations.push_back(
                    {GgrViolationKind::VarNotInLhs,
                     "variable \"" + r.inputVars()[v].name +
                         "\" is not bound on the left side"});
        }
    }
    if (!violations.empty()) return violations;

    std::vector<TokenString> blocks;
    blocks.reserve(r.rhsBlocks().size());
    for (const auto& b : r.rhsBlocks())
        blocks.push_back(b.groundString(r.outputAlphabet()));
    return GgrRule(r.inputAlphabet(), r.outputAlphabet(), r.inputVars(),
                   r.lhsArgs()[0], std::move(blocks), r.rhsArgs());
}

GroundEquation substitute(const GgrRule& r, const std::vector<TokenString>& values) {
    if (values.size() != r.vars().size())
        fail(ErrorKind::Validation, "substitute: expected " +
                                        std::to_string(r.vars().size()) +
                                        " values, got " + std::to_string(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        require_same_alphabet(values[i].alphabet(), r.inputAlphabet(),
                              "substituted value");
        if (!r.vars()[i].domain.contains(values[i]))
            fail(ErrorKind::Domain, "substitute: value \"" + values[i].text() +
                                        "\" is outside the domain of " +
                                        r.vars()[i].name);
    }
    GroundEquation g;
    g.lhsInput = r.lhs().substitute(r.inputAlphabet(), values);
    g.blocks = r.blocks();
    g.rhsArgs.reserve(r.args().size());
    for (const auto& a : r.args())
        g.rhsArgs.push_back(a.substitute(r.inputAlphabet(), values));
    return g;
}

std::uint64_t complexity(const GgrRule& r) {
    std::uint64_t c = r.lhs().length();
    for (const auto& a : r.args()) c += a.length();
    for (const auto& b : r.blocks()) c += b.size();
    c += r.vars().size();
    return c;
}

const VariableDomain* Grammar::findDomain(const std::string& name) const {
    for (const auto& [n, d] : domains)
        if (n == name) return &d;
    return nullptr;
}

void validate_grammar(const Grammar& g) {
    if (!g.inputAlphabet || !g.outputAlphabet)
        fail(ErrorKind::Validation, "grammar requires both alphabets");
    std::set<std::string> names;
    for (const auto& [n, d] : g.domains) {
        if (!names.insert(n).second)
            fail(ErrorKind::Validation, "grammar: duplicate domain name \"" + n + "\"");
        if (!same_alphabet(d.alphabet(), g.inputAlphabet))
            fail(ErrorKind::Validation,
                 "grammar: domain \"" + n + "\" is over the wrong alphabet");
    }
    for (const auto& r : g.rules) {
        if (!same_alphabet(r.inputAlphabet(), g.inputAlphabet) ||
            !same_alphabet(r.outputAlphabet(), g.outputAlphabet))
            fail(ErrorKind::Validation, "grammar: rule over the wrong alphabets");
    }
}

} // namespace ggr
