#include "ggr/err.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "ggr/distance.hpp"
#include "ggr/errors.hpp"
#include "ggr/util.hpp"

namespace ggr {

TailConstants TailConstants::from(const GgrRule& r, const GrowthBound& b) {
    TailConstants tc;
    tc.cT = b.cTDouble();
    tc.dExp = b.dExp;
    tc.h = r.h();
    std::uint32_t dmax = 1;
    for (std::uint32_t v = 0; v < r.h(); ++v) {
        dmax = std::max(dmax, r.lhs().multiplicity(v));
        for (const auto& a : r.args()) dmax = std::max(dmax, a.multiplicity(v));
    }
    tc.dMax = dmax;
    tc.lenA = r.lhs().length();
    for (const auto& a : r.args()) tc.lensAbar.push_back(a.length());
    for (const auto& bl : r.blocks()) tc.sumLenB += bl.length();
    tc.sigmaSize = r.inputAlphabet()->size();
    return tc;
}

namespace {

void check_beta(double beta) {
    if (!(beta > 0.0))
        fail(ErrorKind::Validation, "beta must be positive");
}

long double tail_term(const TailConstants& tc, double beta, std::uint64_t m) {
    const long double md = static_cast<long double>(m);
    long double P =
        tc.cT * std::pow(static_cast<long double>(tc.lenA) + tc.dMax * md,
                         static_cast<long double>(tc.dExp)) +
        static_cast<long double>(tc.sumLenB);
    for (std::uint64_t la : tc.lensAbar)
        P += tc.cT * std::pow(static_cast<long double>(la) + tc.dMax * md,
                              static_cast<long double>(tc.dExp));
    return std::pow(md + 1.0L, static_cast<long double>(tc.h) - 1.0L) *
           std::exp(static_cast<long double>(-beta) * md) * P;
}

} // namespace

double tail_bound(const TailConstants& tc, double beta, std::uint64_t L) {
    check_beta(beta);
    if (tc.h == 0) return 0.0;  // the lone assignment sits at total length 0

    const long double rho = 0.5L * (1.0L + std::exp(-(long double)beta));
    const long double p =
        static_cast<long double>(tc.h) - 1.0L + static_cast<long double>(tc.dExp);
    const std::uint64_t kMaxIter = 5'000'000;

    long double sum = 0.0L;
    for (std::uint64_t it = 0, m = L + 1;; ++it, ++m) {
        if (it >= kMaxIter) return std::numeric_limits<double>::infinity();
        const long double term = tail_term(tc, beta, m);
        sum += term;
        // valid for every later step too: the ratio majorant decreases in m
        const long double ratio =
            std::exp(-(long double)beta) *
            std::pow(static_cast<long double>(m + 1) / static_cast<long double>(m),
                     p);
        if (ratio <= rho) {
            const long double closure = term * (rho / (1.0L - rho));
            if (closure <= 1e-14L * sum + 1e-300L) {
                sum += closure;
                break;
            }
        }
    }
    return static_cast<double>(sum);
}

namespace {

// Enumerates all assignments whose per-variable lengths sum to exactly
// `total`, in canonical order: variables left to right, lengths ascending,
// members in domain enumeration order.
// Materialized enumerate-by-length results, reused across the shells of one
// accumulation run. Entries are only ever created behind a countByLength > 0
// guard, so an empty vector can double as the "not filled yet" state.
using AssignmentEnumCache = std::vector<std::map<std::uint32_t, std::vector<TokenString>>>;

void for_each_assignment(
    const GgrRule& r, std::uint64_t total, AssignmentEnumCache& cache,
    const std::function<void(const std::vector<TokenString>&)>& fn) {
    const auto& vars = r.vars();
    const std::size_t h = vars.size();
    if (h == 0) {
        if (total == 0) fn({});
        return;
    }

    const std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max() / 4;
    std::vector<std::uint64_t> minTail(h + 1, 0), maxTail(h + 1, 0);
    for (std::size_t i = h; i-- > 0;) {
        auto mn = vars[i].domain.minLength();
        if (!mn) return;  // an empty domain admits no assignments at all
        minTail[i] = minTail[i + 1] + *mn;
        auto mx = vars[i].domain.maxLength();
        maxTail[i] = mx ? std::min(maxTail[i + 1] + *mx, kInf) : kInf;
    }
    if (total < minTail[0] || total > maxTail[0]) return;

    if (cache.size() < h) cache.resize(h);
    std::vector<TokenString> values(h);
    std::function<void(std::size_t, std::uint64_t)> pick =
        [&](std::size_t i, std::uint64_t remaining) {
            if (i == h) {
                fn(values);
                return;
            }
            const VariableDomain& dom = vars[i].domain;
            std::uint64_t lo = *dom.minLength();
            if (remaining > maxTail[i + 1])
                lo = std::max(lo, remaining - maxTail[i + 1]);
            const std::uint64_t hi = remaining - minTail[i + 1];
            for (std::uint64_t len = lo; len <= hi; ++len) {
                if (dom.countByLength(static_cast<std::uint32_t>(len)) == 0)
                    continue;
                auto& members = cache[i][static_cast<std::uint32_t>(len)];
                if (members.empty())
                    members = dom.enumerateByLength(static_cast<std::uint32_t>(len));
                for (const auto& member : members) {
                    values[i] = member;
                    pick(i + 1, remaining - len);
                }
            }
        };
    pick(0, total);
}

std::string describe_assignment(const GgrRule& r,
                                const std::vector<TokenString>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ", ";
        s += r.vars()[i].name + "=\"" + values[i].text() + "\"";
    }
    return s.empty() ? std::string("the empty assignment") : s;
}

// Adds every term of one total-length shell to the accumulators.
struct ShellAccumulator {
    const TransductionMap& t;
    const GgrRule& r;
    double beta;
    UndefinedPolicy policy;

    CompensatedSum total;                 // canonical order across shells
    std::vector<double> sumByLength;
    std::vector<std::uint64_t> termsByLength;
    std::uint64_t termCount = 0;
    std::uint64_t skippedTerms = 0;
    AssignmentEnumCache enumCache;

    void run_shell(std::uint64_t m) {
        const double logWeight =
            -(beta + std::log(static_cast<double>(r.inputAlphabet()->size()))) *
            static_cast<double>(m);
        const double weight = std::exp(logWeight);
        CompensatedSum shell;
        std::uint64_t shellTerms = 0;

        for_each_assignment(r, m, enumCache, [&](const std::vector<TokenString>& values) {
            TokenString ahat = r.lhs().substitute(r.inputAlphabet(), values);
            auto lhsOut = t.evaluate(ahat);
            if (!lhsOut) {
                undefined_at(ahat, values);
                return;
            }
            TokenString bhat = r.blocks()[0];
            for (std::size_t j = 0; j < r.args().size(); ++j) {
                TokenString arg = r.args()[j].substitute(r.inputAlphabet(), values);
                auto argOut = t.evaluate(arg);
                if (!argOut) {
                    undefined_at(arg, values);
                    return;
                }
                bhat = bhat.concat(*argOut).concat(r.blocks()[j + 1]);
            }
            const double term =
                weight * static_cast<double>(indel_distance(*lhsOut, bhat));
            shell.add(term);
            total.add(term);
            ++shellTerms;
        });

        if (sumByLength.size() <= m) {
            sumByLength.resize(m + 1, 0.0);
            termsByLength.resize(m + 1, 0);
        }
        sumByLength[m] = shell.value();
        termsByLength[m] = shellTerms;
        termCount += shellTerms;
    }

private:
    void undefined_at(const TokenString& point,
                      const std::vector<TokenString>& values) {
        if (policy == UndefinedPolicy::Skip) {
            ++skippedTerms;
            return;
        }
        fail(ErrorKind::Undefined, "transduction undefined at \"" + point.text() +
                                       "\" (with " +
                                       describe_assignment(r, values) + ")");
    }
};

void check_compatible(const TransductionMap& t, const GgrRule& r) {
    require_same_alphabet(t.inputAlphabet(), r.inputAlphabet(), "metric input");
    require_same_alphabet(t.outputAlphabet(), r.outputAlphabet(), "metric output");
}

// total substituted length after which a rule over finite domains has no
// further assignments; 0 when some domain is empty; nullopt when unbounded
std::optional<std::uint64_t> exhaustion_length(const GgrRule& r) {
    std::uint64_t total = 0;
    for (const auto& v : r.vars()) {
        if (v.domain.isEmpty()) return 0;
        auto mx = v.domain.maxLength();
        if (!mx) return std::nullopt;
        total += *mx;
    }
    return total;
}

} // namespace

PartialSum err_partial_sum(const TransductionMap& t, const GgrRule& r,
                           double beta, std::uint64_t L, UndefinedPolicy policy) {
    check_beta(beta);
    check_compatible(t, r);
    ShellAccumulator acc{t, r, beta, policy};
    for (std::uint64_t m = 0; m <= L; ++m) acc.run_shell(m);

    PartialSum out;
    out.sum = acc.total.value();
    out.sumByLength = std::move(acc.sumByLength);
    out.termsByLength = std::move(acc.termsByLength);
    out.sumByLength.resize(L + 1, 0.0);
    out.termsByLength.resize(L + 1, 0);
    out.termCount = acc.termCount;
    out.skippedTerms = acc.skippedTerms;
    return out;
}

ErrEstimate err_estimate(const TransductionMap& t, const GgrRule& r, double beta,
                         double targetWidth, std::uint64_t maxL,
                         UndefinedPolicy policy) {
    check_beta(beta);
    check_compatible(t, r);
    if (!t.growthBound())
        fail(ErrorKind::Growth,
             "the transduction map carries no growth bound; the tail cannot "
             "be certified");
    const TailConstants tc = TailConstants::from(r, *t.growthBound());
    const std::optional<std::uint64_t> exhaustAt = exhaustion_length(r);

    ErrEstimate est;
    est.beta = beta;
    ShellAccumulator acc{t, r, beta, policy};
    for (std::uint64_t L = 0;; ++L) {
        if (!exhaustAt || L <= *exhaustAt) acc.run_shell(L);
        est.partialSum = acc.total.value();
        est.truncationLen = L;
        est.termCount = acc.termCount;
        est.skippedTerms = acc.skippedTerms;
        est.tailBound =
            (exhaustAt && L >= *exhaustAt) ? 0.0 : tail_bound(tc, beta, L);
        if (est.tailBound <= targetWidth) {
            est.widthReached = true;
            break;
        }
        if (L >= maxL) break;
    }
    return est;
}

} // namespace ggr
