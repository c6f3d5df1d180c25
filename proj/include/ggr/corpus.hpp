// corpus.hpp -- ready-made example grammars (pointwise permutation,
// AND/AFTER conjunctions, bracket-tagged word classes, the colored-words
// interpretation grammar) plus deterministic dataset generation.
#ifndef GGR_CORPUS_HPP_
#define GGR_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ggr/rule.hpp"
#include "ggr/strings.hpp"

namespace ggr {

enum class CorpusKind {
    GordonPermutation,   // token permutation + concatenation rule
    AndAfter,            // ground commands + AND / AFTER conjunction rules
    TaggedBrackets,      // per-class bracketed word exchange, chunk chaining
    LakeInterpretation,  // four color facts + lug / kiki / blicket / concat
};

struct LakeOptions {
    // widen the concatenation rule from single words to arbitrary nonempty
    // strings, so longer word sequences become interpretable; in the
    // bracket-tagged form this widens the argument domains the same way
    bool generalizedConcatenation = false;
    // tag every word argument as l w l' and match on the brackets
    bool bracketTagged = false;
};

struct CorpusSpec {
    CorpusKind which = CorpusKind::LakeInterpretation;
    // GordonPermutation: token -> token bijection; the left column fixes
    // the alphabet order
    std::vector<std::pair<std::string, std::string>> permutation;
    // AndAfter: ground command phrase -> meaning phrase (whitespace-split);
    // command phrases must not contain the conjunction tokens themselves
    std::vector<std::pair<std::string, std::string>> groundFacts;
    // TaggedBrackets: one exchange table per class; class i is delimited
    // by the bracket tokens l<i> and l<i>'
    std::vector<std::vector<std::pair<std::string, std::string>>> classes;
    LakeOptions lake;
};

// Named parameter sets used for the shipped corpus files.
CorpusSpec corpus_preset(CorpusKind which);

// Ground rules T(sigma) = perm(sigma) for every token, plus concatenation
// over nonempty strings; interpretation is then the pointwise extension of
// the permutation. Rejects tables that are not bijections.
Grammar build_gordon_grammar(
    const std::vector<std::pair<std::string, std::string>>& permutation);

// Ground command rules plus
//   T(x1 AND x2)   = T(x1) T(x2)
//   T(x1 AFTER x2) = T(x2) T(x1)
// with x1, x2 ranging over nonempty conjunction-free strings (keeping the
// two rules consistent on every string they both reach).
Grammar build_and_after_grammar(
    const std::vector<std::pair<std::string, std::string>>& groundFacts);

// Per class i: ground word exchanges plus T(l<i> x l<i>') = l<i> T(x) l<i>'
// for class-i words, chained by concatenation over bracketed chunks.
Grammar build_tagged_grammar(
    const std::vector<std::vector<std::pair<std::string, std::string>>>& classes);

// The colored-words interpretation grammar: four ground facts
// (zup/fep/gazzer/tufa -> green/rose/red/bourbon) and the lug, kiki,
// blicket, and concatenation rules with variables over single words.
Grammar build_lake_grammar(const LakeOptions& options = {});

// Dispatch on spec.which after checking the parameters are complete.
Grammar build_corpus(const CorpusSpec& spec);

// Deterministic sample of (input, interpret(input)) pairs: enumerates every
// string of length 1..maxLen the grammar interprets, then keeps `count` of
// them chosen by the seed (all of them when count is at least the space).
// Sorted by input, duplicate-free, every output re-verified. Errors when
// the enumeration space exceeds an internal guard or defines nothing.
std::vector<std::pair<TokenString, TokenString>> generate_dataset(
    const Grammar& g, std::size_t maxLen, std::size_t count,
    std::uint64_t seed = 0);

} // namespace ggr

#endif // GGR_CORPUS_HPP_
