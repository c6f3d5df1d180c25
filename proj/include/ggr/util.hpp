// util.hpp -- numeric and concurrency helpers shared across modules.
#ifndef GGR_UTIL_HPP_
#define GGR_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ggr {

// Neumaier-compensated accumulator; `value()` folds the correction in.
// Accumulation order is part of the contract wherever sums are reported.
struct CompensatedSum {
    double sum = 0.0;
    double correction = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            correction += (sum - t) + x;
        else
            correction += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + correction; }
};

// Fixed 17-significant-digit rendering; stable across reruns of one build,
// used for every floating-point value that reaches an output stream.
std::string format_double(double v);

// Saturating checked addition/multiplication for counting without silent wrap.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

// Thread cap: GGR_THREADS when set (>=1), else hardware concurrency capped at 8.
unsigned worker_thread_count();

// Runs body(i) for i in [0, n). Results must be written to per-index slots so
// the outcome is identical for every thread count. `threads` <= 1 runs inline.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body);

// Whitespace tokenizer used by the line-oriented text formats.
std::vector<std::string> split_ws(const std::string& text);

} // namespace ggr

#endif // GGR_UTIL_HPP_
