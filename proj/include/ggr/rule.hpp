// rule.hpp -- the rule data model: universally quantified transduction
// equations over pattern strings, and their validated "grammar rule" subset
// that the engine can execute.
#ifndef GGR_RULE_HPP_
#define GGR_RULE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ggr/domain.hpp"
#include "ggr/strings.hpp"

namespace ggr {

// One element of a pattern string: a literal token or a variable reference.
struct PatternElem {
    bool isVariable = false;
    TokenId token = 0;       // valid when !isVariable
    std::uint32_t var = 0;   // index into the rule's variable list otherwise

    static PatternElem literal(TokenId t) { return {false, t, 0}; }
    static PatternElem variable(std::uint32_t v) { return {true, 0, v}; }
    bool operator==(const PatternElem&) const = default;
};

// A string over (variables ∪ tokens). Every element counts 1 toward the
// pattern length, variables included.
class Pattern {
public:
    Pattern() = default;
    explicit Pattern(std::vector<PatternElem> elems) : elems_(std::move(elems)) {}

    const std::vector<PatternElem>& elems() const { return elems_; }
    std::size_t length() const { return elems_.size(); }
    bool usesVariable(std::uint32_t v) const;
    std::uint32_t multiplicity(std::uint32_t v) const;
    bool isGround() const;  // no variables at all
    // Literal-only view; precondition: isGround().
    TokenString groundString(const AlphabetRef& alphabet) const;
    // Replace each variable by its assigned string.
    TokenString substitute(const AlphabetRef& alphabet,
                           const std::vector<TokenString>& values) const;

    bool operator==(const Pattern&) const = default;

private:
    std::vector<PatternElem> elems_;
};

struct InputVariable {
    std::string name;
    VariableDomain domain;
};

// The general quantified equation:
//   B0 T(A1) B1 ... T(Ak1) Bk1  =  B'0 T(A'1) B'1 ... T(A'k2) B'k2
// with input variables ranging over classes inside the A-patterns and output
// variables inside the B-patterns. Parsed and stored, but only the restricted
// subset below has execution and metric semantics.
class GtrRule {
public:
    GtrRule(AlphabetRef inputAlphabet, AlphabetRef outputAlphabet,
            std::vector<InputVariable> inputVars,
            std::vector<InputVariable> outputVars,
            std::vector<Pattern> lhsBlocks, std::vector<Pattern> lhsArgs,
            std::vector<Pattern> rhsBlocks, std::vector<Pattern> rhsArgs);

    const AlphabetRef& inputAlphabet() const { return inAlpha_; }
    const AlphabetRef& outputAlphabet() const { return outAlpha_; }
    const std::vector<InputVariable>& inputVars() const { return inputVars_; }
    const std::vector<InputVariable>& outputVars() const { return outputVars_; }
    const std::vector<Pattern>& lhsBlocks() const { return lhsBlocks_; }
    const std::vector<Pattern>& lhsArgs() const { return lhsArgs_; }
    const std::vector<Pattern>& rhsBlocks() const { return rhsBlocks_; }
    const std::vector<Pattern>& rhsArgs() const { return rhsArgs_; }

private:
    AlphabetRef inAlpha_;
    AlphabetRef outAlpha_;
    std::vector<InputVariable> inputVars_;
    std::vector<InputVariable> outputVars_;
    std::vector<Pattern> lhsBlocks_;  // k1+1 patterns over (outputVars ∪ Λ)
    std::vector<Pattern> lhsArgs_;    // k1 patterns over (inputVars ∪ Σ)
    std::vector<Pattern> rhsBlocks_;  // k2+1
    std::vector<Pattern> rhsArgs_;    // k2
};

// The executable subset: T(A) = B0 T(A'1) B1 ... T(A'k) Bk with literal
// blocks, every variable bound in A, and no argument pattern longer than A.
// h = #vars and k = #args may both be zero (a ground fact).
class GgrRule {
public:
    GgrRule(AlphabetRef inputAlphabet, AlphabetRef outputAlphabet,
            std::vector<InputVariable> vars, Pattern lhs,
            std::vector<TokenString> blocks, std::vector<Pattern> args);

    const AlphabetRef& inputAlphabet() const { return inAlpha_; }
    const AlphabetRef& outputAlphabet() const { return outAlpha_; }
    const std::vector<InputVariable>& vars() const { return vars_; }
    std::uint32_t h() const { return static_cast<std::uint32_t>(vars_.size()); }
    const Pattern& lhs() const { return lhs_; }
    // k+1 literal output blocks interleaving the k recursive arguments.
    const std::vector<TokenString>& blocks() const { return blocks_; }
    const std::vector<Pattern>& args() const { return args_; }
    std::uint32_t k() const { return static_cast<std::uint32_t>(args_.size()); }
    bool isGround() const { return vars_.empty() && args_.empty(); }

    bool operator==(const GgrRule& other) const;

private:
    AlphabetRef inAlpha_;
    AlphabetRef outAlpha_;
    std::vector<InputVariable> vars_;
    Pattern lhs_;
    std::vector<TokenString> blocks_;
    std::vector<Pattern> args_;
};

enum class GgrViolationKind {
    OutputVariablePresent,  // some y_j occurs
    LhsNotSingleCall,       // k1 != 1 or literal material around the lhs call
    ArgExceedsLhs,          // some A'_i is longer than A
    VarNotInLhs,            // an input variable is not bound by A
};
const char* ggr_violation_name(GgrViolationKind k);

struct GgrViolation {
    GgrViolationKind kind;
    std::string detail;
};

// The restricted view of a general rule, or the reasons there is none.
// The first two conditions are checked always; the length and binding
// conditions only make sense against a single-call lhs and are reported
// only when that shape is present.
std::variant<GgrRule, std::vector<GgrViolation>> validate_ggr(const GtrRule& r);

// A fully substituted rule instance.
struct GroundEquation {
    TokenString lhsInput;               // A with variables replaced (over Σ)
    std::vector<TokenString> blocks;    // the rule's literal blocks (over Λ)
    std::vector<TokenString> rhsArgs;   // each A'_i with variables replaced
};

// values[i] instantiates vars()[i]; each must lie in its declared domain.
GroundEquation substitute(const GgrRule& r, const std::vector<TokenString>& values);

// patternLength(A) + sum patternLength(A'_i) + sum len(B_j) + h.
// Adding any single symbol anywhere raises the score by exactly 1.
std::uint64_t complexity(const GgrRule& r);

// An ordered rule set over fixed alphabets; order is match priority.
struct Grammar {
    AlphabetRef inputAlphabet;
    AlphabetRef outputAlphabet;
    // named domains in declaration order (names unique)
    std::vector<std::pair<std::string, VariableDomain>> domains;
    std::vector<GgrRule> rules;

    const VariableDomain* findDomain(const std::string& name) const;
};

// Shared well-formedness checks (alphabets consistent, names unique).
void validate_grammar(const Grammar& g);

} // namespace ggr

#endif // GGR_RULE_HPP_
