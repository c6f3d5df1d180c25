#include "ggr/distance.hpp"

#include <algorithm>
#include <vector>

namespace ggr {

std::uint64_t indel_distance(const TokenString& a, const TokenString& b) {
    require_same_alphabet(a.alphabet(), b.alphabet(), "indel_distance");
    const auto& x = a.ids();
    const auto& y = b.ids();
    if (x == y) return 0;
    // dist = |x| + |y| - 2*LCS(x, y); one rolling row of the LCS table.
    std::vector<std::uint64_t> row(y.size() + 1, 0);
    for (std::size_t i = 1; i <= x.size(); ++i) {
        std::uint64_t diag = 0;  // row[j-1] from the previous iteration
        for (std::size_t j = 1; j <= y.size(); ++j) {
            std::uint64_t prev = row[j];
            if (x[i - 1] == y[j - 1])
                row[j] = diag + 1;
            else
                row[j] = std::max(row[j], row[j - 1]);
            diag = prev;
        }
    }
    return static_cast<std::uint64_t>(x.size()) + y.size() - 2 * row[y.size()];
}

std::uint64_t levenshtein_distance(const TokenString& a, const TokenString& b) {
    require_same_alphabet(a.alphabet(), b.alphabet(), "levenshtein_distance");
    const auto& x = a.ids();
    const auto& y = b.ids();
    std::vector<std::uint64_t> row(y.size() + 1);
    for (std::size_t j = 0; j <= y.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        std::uint64_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= y.size(); ++j) {
            std::uint64_t prev = row[j];
            std::uint64_t sub = diag + (x[i - 1] == y[j - 1] ? 0 : 1);
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
            diag = prev;
        }
    }
    return row[y.size()];
}

std::uint64_t string_distance(const TokenString& a, const TokenString& b,
                              DistanceKind kind) {
    return kind == DistanceKind::Indel ? indel_distance(a, b)
                                       : levenshtein_distance(a, b);
}

} // namespace ggr
