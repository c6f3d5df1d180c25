// err.hpp -- the rule-discrepancy functional: exact partial sums over rule
// substitutions, plus a certified majorant for the discarded tail, giving a
// two-sided interval around the (usually infinite) full sum.
#ifndef GGR_ERR_HPP_
#define GGR_ERR_HPP_

#include <cstdint>
#include <vector>

#include "ggr/rule.hpp"
#include "ggr/transduction_map.hpp"

namespace ggr {

// Constants the tail majorant needs, extracted from one rule and the map's
// growth bound. The weighted mass at total substituted length m is at most
//   (m+1)^(h-1) * e^(-beta*m) * P(m),
//   P(m) = cT*(lenA + dMax*m)^dExp + sumLenB
//          + cT*sum_i (lensAbar[i] + dMax*m)^dExp:
// the alphabet^m assignment count cancels against the ln(sigma) part of the
// term weight, (m+1)^(h-1) bounds the number of length compositions, and
// P(m) bounds the indel distance by the two output lengths.
struct TailConstants {
    double cT = 1.0;         // growth constant, rounded up when rational
    std::uint32_t dExp = 1;
    std::uint32_t h = 0;
    std::uint32_t dMax = 1;  // max occurrences of one variable in one pattern
    std::uint64_t lenA = 0;
    std::vector<std::uint64_t> lensAbar;
    std::uint64_t sumLenB = 0;
    std::uint64_t sigmaSize = 0;

    static TailConstants from(const GgrRule& r, const GrowthBound& b);
};

// Certified upper bound on sum_{m>L} (m+1)^(h-1) e^(-beta m) P(m). Terms are
// added until the running ratio majorant e^(-beta)*((m+1)/m)^(h-1+dExp) is
// below rho = (1+e^(-beta))/2 and the geometric closure term is negligible
// against the sum; the closure is then added, keeping the result >= the full
// series. h = 0 returns exactly 0 (the only assignment has length 0).
// Returns +infinity if certification would exceed the internal iteration cap
// (only for microscopically small beta).
double tail_bound(const TailConstants& tc, double beta, std::uint64_t L);

enum class UndefinedPolicy {
    Error,  // an undefined required point raises ErrorKind::Undefined
    Skip,   // the term is dropped and counted in skippedTerms
};

struct PartialSum {
    double sum = 0.0;                          // canonical order, compensated
    std::vector<double> sumByLength;           // index = total substituted length
    std::vector<std::uint64_t> termsByLength;  // evaluated terms per length
    std::uint64_t termCount = 0;
    std::uint64_t skippedTerms = 0;
};

// Sum over all assignments (a_i in C_i) with total length sum l(a_i) <= L of
//   exp((-beta - ln sigma) * total) * indel_distance(t(A-hat), B-hat),
// where A-hat is the substituted lhs and B-hat splices t of each substituted
// argument between the rule's literal blocks. Terms are accumulated in
// canonical enumeration order (total length ascending, then per-variable
// lengths ascending, then members in domain order) with compensated
// summation. sigma is the full input-alphabet size even when the domains
// are smaller.
PartialSum err_partial_sum(const TransductionMap& t, const GgrRule& r,
                           double beta, std::uint64_t L,
                           UndefinedPolicy policy = UndefinedPolicy::Error);

struct ErrEstimate {
    double partialSum = 0.0;  // lower bound: all discarded terms are >= 0
    double tailBound = 0.0;
    std::uint64_t truncationLen = 0;
    double beta = 0.0;
    std::uint64_t termCount = 0;
    std::uint64_t skippedTerms = 0;
    bool widthReached = false;  // tailBound <= the requested width

    double lower() const { return partialSum; }
    double upper() const { return partialSum + tailBound; }
};

// Raises the truncation length until tailBound <= targetWidth or maxL is
// reached. When every domain is finite, the enumeration exhausts at the sum
// of the domains' maximum lengths and the tail is exactly 0 from there on.
// Requires t to carry a growth bound.
ErrEstimate err_estimate(const TransductionMap& t, const GgrRule& r, double beta,
                         double targetWidth, std::uint64_t maxL,
                         UndefinedPolicy policy = UndefinedPolicy::Error);

} // namespace ggr

#endif // GGR_ERR_HPP_
