#pragma once

#include <cstddef>
#include <span>

namespace zlab::detail {

// Pairwise (cascade) summation in a fixed order. The split point depends only
// on the length, so the result is identical no matter how the caller's work
// was scheduled.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace zlab::detail
