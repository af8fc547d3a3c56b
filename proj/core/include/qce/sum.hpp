// Fixed-order pairwise summation. Every reduction in the library funnels
// through these so that results are bit-stable across runs and across the
// serial/parallel execution paths.

#pragma once

#include <cstddef>
#include <span>
#include <utility>

namespace qce {

namespace detail {

template <typename F>
double pairwise_sum_range(std::size_t lo, std::size_t hi, const F& value_at) {
    const std::size_t n = hi - lo;
    if (n <= 16) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            acc += value_at(i);
        }
        return acc;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum_range(lo, mid, value_at) + pairwise_sum_range(mid, hi, value_at);
}

} // namespace detail

// Sum of value_at(0..n-1) with a fixed binary reduction tree.
template <typename F>
double pairwise_sum(std::size_t n, F&& value_at) {
    return detail::pairwise_sum_range(0, n, value_at);
}

inline double pairwise_sum(std::span<const double> xs) {
    return pairwise_sum(xs.size(), [&xs](std::size_t i) { return xs[i]; });
}

} // namespace qce
