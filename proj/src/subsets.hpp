#pragma once

#include <cstddef>
#include <vector>

namespace polyproj::detail {

/// Calls fn on each k-subset of {0..n-1}, in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn)
{
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/// Binomial coefficient, saturating at `cap`.
inline std::size_t choose_capped(std::size_t n, std::size_t k, std::size_t cap)
{
    if (k > n) return 0;
    long double c = 1;
    for (std::size_t i = 0; i < k; ++i) {
        c = c * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
        if (c > static_cast<long double>(cap)) return cap;
    }
    return static_cast<std::size_t>(c + 0.5L);
}

}  // namespace polyproj::detail
