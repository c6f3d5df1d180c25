// rule_io.hpp -- the textual rule language: one declaration or rule per
// line, '#' comments. See the README for the grammar; print_* functions emit
// the canonical spelling that parse_rules accepts back unchanged.
#ifndef GGR_RULE_IO_HPP_
#define GGR_RULE_IO_HPP_

#include <string>
#include <vector>

#include "ggr/rule.hpp"

namespace ggr {

struct RuleParseResult {
    Grammar grammar;               // alphabets, domains, executable rules
    std::vector<GtrRule> gtrs;     // rules outside the executable subset
    // for each grammar rule / gtr, the 1-based source line it came from
    std::vector<int> ruleLines;
    std::vector<int> gtrLines;
};

// Parse a whole rule file. Alphabets may be declared up front with
// input-alphabet / output-alphabet lines; otherwise they are inferred from
// the literals in order of first appearance.
RuleParseResult parse_rules(const std::string& text);

// Parse a single domain expression -- SIGMA*, SIGMA+, SIGMA1, { "..." }, or
// regex(...) -- against an existing alphabet. Named domains are not
// resolvable here.
VariableDomain parse_domain(const AlphabetRef& alphabet, const std::string& text);

std::string print_rule(const GgrRule& r);
std::string print_gtr(const GtrRule& r);
// Alphabet directives, domain declarations, then rules, one per line.
std::string print_grammar(const Grammar& g);

} // namespace ggr

#endif // GGR_RULE_IO_HPP_
