// automata_ops.hpp -- determinization and quotient-symmetry checks.
#ifndef GGR_AUTOMATA_OPS_HPP_
#define GGR_AUTOMATA_OPS_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "ggr/domain.hpp"
#include "ggr/transducer.hpp"

namespace ggr {

// Acceptor view of a machine (outputs ignored, epsilon inputs allowed):
// subset construction with epsilon closure into a complete DFA.
// Raises StateLimit when the subset automaton exceeds stateCap states.
Dfa determinize_acceptor(const FiniteTransducer& t, std::size_t stateCap = 1u << 20);

struct AcceptorSymmetryResult {
    bool symmetric = false;
    // Shortest (then lexicographically least) string accepted by the quotient
    // but not the original; engaged iff !symmetric.
    std::optional<TokenString> counterexample;
};

// Exact decision of L(t/p) == L(t). Only the inclusion L(t/p) <= L(t) is
// searched: merging states never shrinks the language.
AcceptorSymmetryResult check_quotient_symmetry_acceptor(
    const FiniteTransducer& t, const StatePartition& p,
    std::size_t stateCap = 1u << 20);

struct TransducerSymmetryResult {
    bool symmetric = false;
    std::uint32_t checkedLen = 0;  // verified for all inputs of length <= this
    std::optional<TokenString> counterexample;
    std::string detail;  // what differed on the counterexample
};

// Bounded check that t/p induces the same partial map as deterministic t:
// for every input of length <= maxLen the set of quotient outputs must equal
// {run(t, input)} (and be empty exactly where run is undefined).
TransducerSymmetryResult check_quotient_symmetry_transducer(
    const FiniteTransducer& t, const StatePartition& p, std::uint32_t maxLen);

} // namespace ggr

#endif // GGR_AUTOMATA_OPS_HPP_
