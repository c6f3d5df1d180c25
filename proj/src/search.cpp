#include "ggr/search.hpp"

#include <algorithm>
#include <string>

#include "ggr/errors.hpp"
#include "ggr/util.hpp"

namespace ggr {
namespace {

void check_caps(const AlphabetRef& inAlpha, const AlphabetRef& outAlpha,
                const SearchCaps& caps) {
    if (!inAlpha || !outAlpha)
        fail(ErrorKind::Usage, "candidate enumeration requires both alphabets");
    if (caps.maxH > 0 && caps.domainMenu.empty())
        fail(ErrorKind::Validation,
             "search caps: domain menu must be non-empty when maxH > 0");
    for (const auto& d : caps.domainMenu)
        require_same_alphabet(d.alphabet(), inAlpha, "domain menu entry");
}

// Rightmost-fastest odometer over fixed-base digits; false once every
// combination has been produced. An empty digit vector is the single empty
// combination: the do/while around it runs exactly once.
bool next_digits(std::vector<std::size_t>& d, std::size_t base) {
    for (std::size_t i = d.size(); i-- > 0;) {
        if (++d[i] < base) return true;
        d[i] = 0;
    }
    return false;
}

// Every pattern over (sigma literals + varCount variables) with length in
// [minLen, maxLen], in canonical order: length ascending, then elementwise
// with literals (by token id) ranked below variables (by index).
std::vector<Pattern> all_patterns(std::size_t sigma, std::uint32_t varCount,
                                  std::uint32_t minLen, std::uint32_t maxLen) {
    std::vector<Pattern> out;
    const std::size_t base = sigma + varCount;
    for (std::uint32_t len = minLen; len <= maxLen; ++len) {
        if (len == 0) {
            out.emplace_back();
            continue;
        }
        std::vector<std::size_t> digits(len, 0);
        do {
            std::vector<PatternElem> elems(len);
            for (std::uint32_t i = 0; i < len; ++i)
                elems[i] = digits[i] < sigma
                               ? PatternElem::literal(static_cast<TokenId>(digits[i]))
                               : PatternElem::variable(
                                     static_cast<std::uint32_t>(digits[i] - sigma));
            out.emplace_back(std::move(elems));
        } while (next_digits(digits, base));
    }
    return out;
}

// Left sides of exactly this length that use all h variables, numbered by
// first occurrence (so each rule shape appears once up to renaming). Same
// elementwise order as all_patterns. emit returns false to stop.
bool lhs_patterns(std::size_t sigma, std::uint32_t h, std::uint32_t len,
                  const std::function<bool(const Pattern&)>& emit) {
    std::vector<PatternElem> elems(len);
    // used = variables introduced so far; introducing is only ever allowed
    // in index order, which is exactly the canonical-naming constraint
    std::function<bool(std::uint32_t, std::uint32_t)> step =
        [&](std::uint32_t pos, std::uint32_t used) -> bool {
        if (len - pos < h - used) return true;  // no room left for unseen vars
        if (pos == len) return emit(Pattern(elems));
        for (std::size_t t = 0; t < sigma; ++t) {
            elems[pos] = PatternElem::literal(static_cast<TokenId>(t));
            if (!step(pos + 1, used)) return false;
        }
        const std::uint32_t hi = used < h ? used : h - 1;
        for (std::uint32_t v = 0; h > 0 && v <= hi; ++v) {
            elems[pos] = PatternElem::variable(v);
            if (!step(pos + 1, v == used ? used + 1 : used)) return false;
        }
        return true;
    };
    return step(0, 0);
}

// Every string over the alphabet with length in [0, maxLen], canonical
// (length, then token) order.
std::vector<TokenString> all_block_strings(const AlphabetRef& alphabet,
                                           std::uint32_t maxLen) {
    std::vector<TokenString> out;
    out.emplace_back(alphabet, std::vector<TokenId>{});
    for (std::uint32_t len = 1; len <= maxLen; ++len) {
        std::vector<std::size_t> digits(len, 0);
        do {
            std::vector<TokenId> ids(len);
            for (std::uint32_t i = 0; i < len; ++i)
                ids[i] = static_cast<TokenId>(digits[i]);
            out.emplace_back(alphabet, std::move(ids));
        } while (next_digits(digits, alphabet->size()));
    }
    return out;
}

// All assignments here run over the full enumeration exactly once; the
// exhaustive partial sum is then the complete metric value and the tail is
// exactly zero, whatever the analytic majorant would say.
bool domains_exhausted_by(const GgrRule& r, std::uint64_t horizon) {
    std::uint64_t sum = 0;
    for (const auto& v : r.vars()) {
        if (v.domain.isEmpty()) return true;  // no assignments at all
        auto mx = v.domain.maxLength();
        if (!mx) return false;
        sum += *mx;
    }
    return sum <= horizon;
}

struct CompactScore {
    std::uint64_t index = 0;
    double upper = 0.0;
    std::uint64_t cplx = 0;
};

bool rank_less(const CompactScore& a, const CompactScore& b) {
    if (a.upper != b.upper) return a.upper < b.upper;
    if (a.cplx != b.cplx) return a.cplx < b.cplx;
    return a.index < b.index;
}

} // namespace

std::uint64_t enumerate_candidates(
    const AlphabetRef& inputAlphabet, const AlphabetRef& outputAlphabet,
    const SearchCaps& caps,
    const std::function<bool(std::uint64_t index, const GgrRule& r)>& fn) {
    check_caps(inputAlphabet, outputAlphabet, caps);
    const std::size_t sigma = inputAlphabet->size();
    const std::vector<TokenString> blockPool =
        all_block_strings(outputAlphabet, caps.maxLiteralLen);

    std::uint64_t index = 0;
    bool stop = false;
    for (std::uint32_t h = 0; h <= caps.maxH && h <= caps.maxPatternLen && !stop;
         ++h) {
        // argument pool, length ascending; prefix sizes let each left side
        // restrict arguments to its own length
        const std::vector<Pattern> argPool =
            all_patterns(sigma, h, 0, caps.maxPatternLen);
        std::vector<std::size_t> argsUpToLen(caps.maxPatternLen + 1, 0);
        for (std::size_t i = 0; i < argPool.size(); ++i)
            for (std::uint32_t l = static_cast<std::uint32_t>(argPool[i].length());
                 l <= caps.maxPatternLen; ++l)
                argsUpToLen[l] = i + 1;

        for (std::uint32_t len = (h == 0 ? 0 : h);
             len <= caps.maxPatternLen && !stop; ++len) {
            lhs_patterns(sigma, h, len, [&](const Pattern& lhs) {
                const std::size_t argBase = argsUpToLen[len];
                std::vector<std::size_t> dch(h, 0);
                do {
                    std::vector<InputVariable> vars;
                    vars.reserve(h);
                    for (std::uint32_t v = 0; v < h; ++v)
                        vars.push_back({"x" + std::to_string(v + 1),
                                        caps.domainMenu[dch[v]]});
                    for (std::uint32_t k = 0; k <= caps.maxK; ++k) {
                        std::vector<std::size_t> ach(k, 0);
                        do {
                            std::vector<Pattern> args;
                            args.reserve(k);
                            for (std::uint32_t a = 0; a < k; ++a)
                                args.push_back(argPool[ach[a]]);
                            std::vector<std::size_t> bch(k + 1, 0);
                            do {
                                std::vector<TokenString> blocks;
                                blocks.reserve(k + 1);
                                for (std::uint32_t b = 0; b <= k; ++b)
                                    blocks.push_back(blockPool[bch[b]]);
                                GgrRule r(inputAlphabet, outputAlphabet, vars,
                                          lhs, std::move(blocks), args);
                                if (!fn(index++, r)) {
                                    stop = true;
                                    return false;
                                }
                            } while (next_digits(bch, blockPool.size()));
                        } while (next_digits(ach, argBase));
                    }
                } while (next_digits(dch, caps.domainMenu.size()));
                return true;
            });
        }
    }
    return index;
}

std::vector<GgrRule> enumerate_candidates(const AlphabetRef& inputAlphabet,
                                          const AlphabetRef& outputAlphabet,
                                          const SearchCaps& caps) {
    std::vector<GgrRule> out;
    enumerate_candidates(inputAlphabet, outputAlphabet, caps,
                         [&](std::uint64_t, const GgrRule& r) {
                             out.push_back(r);
                             return true;
                         });
    return out;
}

ErrEstimate score_rule(const TransductionMap& t, const GgrRule& r,
                       const SearchCaps& caps) {
    PartialSum ps =
        err_partial_sum(t, r, caps.beta, caps.truncationLen, UndefinedPolicy::Skip);
    ErrEstimate est;
    est.partialSum = ps.sum;
    est.truncationLen = caps.truncationLen;
    est.beta = caps.beta;
    est.termCount = ps.termCount;
    est.skippedTerms = ps.skippedTerms;
    if (domains_exhausted_by(r, caps.truncationLen)) {
        est.tailBound = 0.0;
        est.widthReached = true;
    } else if (auto bound = t.growthBound()) {
        est.tailBound =
            tail_bound(TailConstants::from(r, *bound), caps.beta, caps.truncationLen);
        est.widthReached = false;
    } else {
        est.tailBound = 0.0;  // empirical score: no growth bound, no tail
        est.widthReached = false;
    }
    return est;
}

std::vector<ScoredRule> search_rules(const TransductionMap& t,
                                     const SearchCaps& caps, std::size_t limit) {
    if (!(caps.beta > 0.0))
        fail(ErrorKind::Validation, "search caps: beta must be > 0");
    const AlphabetRef& inA = t.inputAlphabet();
    const AlphabetRef& outA = t.outputAlphabet();

    // pass 1: score everything, keeping only what ranking needs
    std::vector<CompactScore> scores;
    constexpr std::size_t kChunk = 4096;
    const unsigned threads = worker_thread_count();
    std::vector<GgrRule> chunk;
    std::vector<std::uint64_t> chunkIdx;
    std::vector<double> uppers;
    chunk.reserve(kChunk);
    chunkIdx.reserve(kChunk);
    auto flush = [&]() {
        if (chunk.empty()) return;
        uppers.assign(chunk.size(), 0.0);
        parallel_for(chunk.size(), threads, [&](std::size_t i) {
            uppers[i] = score_rule(t, chunk[i], caps).upper();
        });
        for (std::size_t i = 0; i < chunk.size(); ++i)
            scores.push_back({chunkIdx[i], uppers[i], complexity(chunk[i])});
        chunk.clear();
        chunkIdx.clear();
    };
    enumerate_candidates(inA, outA, caps, [&](std::uint64_t idx, const GgrRule& r) {
        chunk.push_back(r);
        chunkIdx.push_back(idx);
        if (chunk.size() == kChunk) flush();
        return true;
    });
    flush();

    std::sort(scores.begin(), scores.end(), rank_less);
    if (limit < scores.size()) scores.resize(limit);

    // pass 2: re-enumerate to materialize just the ranked survivors
    std::vector<std::pair<std::uint64_t, std::size_t>> want;  // (index, rank)
    want.reserve(scores.size());
    for (std::size_t rank = 0; rank < scores.size(); ++rank)
        want.emplace_back(scores[rank].index, rank);
    std::sort(want.begin(), want.end());
    std::vector<std::optional<GgrRule>> picked(scores.size());
    if (!want.empty()) {
        const std::uint64_t maxIndex = want.back().first;
        std::size_t remaining = want.size();
        enumerate_candidates(inA, outA, caps,
                             [&](std::uint64_t idx, const GgrRule& r) {
                                 auto it = std::lower_bound(
                                     want.begin(), want.end(),
                                     std::make_pair(idx, std::size_t{0}));
                                 if (it != want.end() && it->first == idx) {
                                     picked[it->second] = r;
                                     --remaining;
                                 }
                                 return remaining > 0 && idx < maxIndex;
                             });
    }

    std::vector<ScoredRule> out;
    out.reserve(scores.size());
    for (std::size_t rank = 0; rank < scores.size(); ++rank) {
        if (!picked[rank])
            fail(ErrorKind::Internal, "search: candidate stream changed between passes");
        ErrEstimate est = score_rule(t, *picked[rank], caps);
        out.push_back({*std::move(picked[rank]), est, scores[rank].index});
    }
    return out;
}

std::vector<ScoredRule> search_rules(
    const std::vector<std::pair<TokenString, TokenString>>& dataset,
    const SearchCaps& caps, std::optional<GrowthBound> bound, std::size_t limit) {
    if (dataset.empty()) fail(ErrorKind::Validation, "search: empty dataset");
    TableMap table(dataset.front().first.alphabet(),
                   dataset.front().second.alphabet(), dataset, std::move(bound));
    return search_rules(table, caps, limit);
}

} // namespace ggr
