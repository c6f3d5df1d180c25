#include "ggr/transduction_map.hpp"

namespace ggr {

// ---------------------------------------------------------------------------
// FstMap

FstMap::FstMap(FiniteTransducer t) : t_(std::move(t)) {
    if (!t_.deterministic())
        fail(ErrorKind::Validation,
             "FstMap requires a deterministic transducer");
}

const AlphabetRef& FstMap::inputAlphabet() const { return t_.inputAlphabet(); }
const AlphabetRef& FstMap::outputAlphabet() const { return t_.outputAlphabet(); }

std::optional<TokenString> FstMap::evaluate(const TokenString& in) const {
    return run(t_, in);
}

std::optional<GrowthBound> FstMap::growthBound() const { return t_.growthBound(); }

// ---------------------------------------------------------------------------
// TableMap

TableMap::TableMap(AlphabetRef inputAlphabet, AlphabetRef outputAlphabet,
                   std::vector<std::pair<TokenString, TokenString>> pairs,
                   std::optional<GrowthBound> bound)
    : inAlpha_(std::move(inputAlphabet)), outAlpha_(std::move(outputAlphabet)),
      bound_(bound) {
    for (auto& [in, out] : pairs) {
        require_same_alphabet(inAlpha_, in.alphabet(), "table input");
        require_same_alphabet(outAlpha_, out.alphabet(), "table output");
        auto it = table_.find(in);
        if (it != table_.end()) {
            if (it->second != out)
                fail(ErrorKind::Validation,
                     "conflicting table entries for \"" + in.text() + "\"");
            continue;
        }
        table_.emplace(std::move(in), std::move(out));
    }
}

const AlphabetRef& TableMap::inputAlphabet() const { return inAlpha_; }
const AlphabetRef& TableMap::outputAlphabet() const { return outAlpha_; }

std::optional<TokenString> TableMap::evaluate(const TokenString& in) const {
    auto it = table_.find(in);
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

std::optional<GrowthBound> TableMap::growthBound() const { return bound_; }

// ---------------------------------------------------------------------------
// ComposedMap

namespace {

std::optional<GrowthBound> compose_bounds(const std::optional<GrowthBound>& f,
                                          const std::optional<GrowthBound>& g) {
    if (!f || !g) return std::nullopt;
    // len(g(f(x))) <= c2 * (c1 * n^d1)^d2 = (c2 * c1^d2) * n^(d1*d2)
    unsigned __int128 num = static_cast<unsigned __int128>(g->num);
    unsigned __int128 den = static_cast<unsigned __int128>(g->den);
    const unsigned __int128 lim = static_cast<unsigned __int128>(INT64_MAX);
    for (std::uint32_t i = 0; i < g->dExp; ++i) {
        num *= static_cast<unsigned __int128>(f->num);
        den *= static_cast<unsigned __int128>(f->den);
        if (num > lim || den > lim) return std::nullopt;  // constant overflows
    }
    std::uint64_t d = static_cast<std::uint64_t>(f->dExp) * g->dExp;
    if (d > UINT32_MAX) return std::nullopt;
    return GrowthBound(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den),
                       static_cast<std::uint32_t>(d));
}

} // namespace

ComposedMap::ComposedMap(TransductionMapRef first, TransductionMapRef second)
    : first_(std::move(first)), second_(std::move(second)) {
    if (!first_ || !second_)
        fail(ErrorKind::Validation, "composition requires both maps");
    require_same_alphabet(first_->outputAlphabet(), second_->inputAlphabet(),
                          "composition boundary");
    bound_ = compose_bounds(first_->growthBound(), second_->growthBound());
}

const AlphabetRef& ComposedMap::inputAlphabet() const {
    return first_->inputAlphabet();
}
const AlphabetRef& ComposedMap::outputAlphabet() const {
    return second_->outputAlphabet();
}

std::optional<TokenString> ComposedMap::evaluate(const TokenString& in) const {
    auto mid = first_->evaluate(in);
    if (!mid) return std::nullopt;
    // The boundary alphabets are equal by content; rebind so the second map
    // sees its own alphabet object.
    if (mid->alphabet() != second_->inputAlphabet())
        return second_->evaluate(TokenString(second_->inputAlphabet(), mid->ids()));
    return second_->evaluate(*mid);
}

std::optional<GrowthBound> ComposedMap::growthBound() const { return bound_; }

// ---------------------------------------------------------------------------
// check_meaning_preservation

MeaningReport check_meaning_preservation(const TransductionMap& t12,
                                         const TransductionMap& i1m,
                                         const TransductionMap& i2m,
                                         std::uint32_t maxLen) {
    require_same_alphabet(t12.inputAlphabet(), i1m.inputAlphabet(),
                          "meaning check: translation vs source interpreter");
    require_same_alphabet(t12.outputAlphabet(), i2m.inputAlphabet(),
                          "meaning check: translation vs target interpreter");
    require_same_alphabet(i1m.outputAlphabet(), i2m.outputAlphabet(),
                          "meaning check: the two interpreters");

    const AlphabetRef& sigma = t12.inputAlphabet();
    MeaningReport report;
    std::vector<TokenId> word;
    auto visit = [&](auto&& self, std::size_t remaining) -> void {
        if (remaining == 0) {
            TokenString s(sigma, word);
            auto translated = t12.evaluate(s);
            if (!translated) return;
            auto viaTarget = i2m.evaluate(
                translated->alphabet() == i2m.inputAlphabet()
                    ? *translated
                    : TokenString(i2m.inputAlphabet(), translated->ids()));
            auto direct = i1m.evaluate(s);
            if (!viaTarget || !direct) return;  // outside the common domain
            ++report.checkedCount;
            if (*viaTarget != *direct) report.counterexamples.push_back(s);
            return;
        }
        for (TokenId tok = 0; tok < sigma->size(); ++tok) {
            word.push_back(tok);
            self(self, remaining - 1);
            word.pop_back();
        }
    };
    for (std::uint32_t len = 0; len <= maxLen; ++len) visit(visit, len);
    report.pass = report.counterexamples.empty();
    return report;
}

} // namespace ggr
