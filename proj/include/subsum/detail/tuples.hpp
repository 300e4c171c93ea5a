#pragma once

#include <cstdint>
#include <vector>

namespace subsum {

namespace detail {

template <class F>
void distinct_tuples_from(std::vector<std::uint64_t>& masks, std::vector<bool>& used, std::size_t depth,
                          std::uint64_t limit, F& f) {
    if (depth == masks.size()) {
        f(static_cast<const std::vector<std::uint64_t>&>(masks));
        return;
    }
    for (std::uint64_t s = 1; s < limit; ++s) {
        if (used[s]) continue;
        used[s] = true;
        masks[depth] = s;
        distinct_tuples_from(masks, used, depth + 1, limit, f);
        used[s] = false;
    }
}

}  // namespace detail

template <class F>
void for_each_distinct_tuple(std::size_t r, std::size_t k, F&& f) {
    const std::uint64_t limit = std::uint64_t{1} << k;
    if (r == 0 || r > limit - 1) return;
    std::vector<std::uint64_t> masks(r);
    std::vector<bool> used(limit, false);
    detail::distinct_tuples_from(masks, used, 0, limit, f);
}

/// Same enumeration restricted to tuples whose first mask is `first`.
template <class F>
void for_each_distinct_tuple_with_first(std::size_t r, std::size_t k, std::uint64_t first, F&& f) {
    const std::uint64_t limit = std::uint64_t{1} << k;
    if (r == 0 || r > limit - 1 || first == 0 || first >= limit) return;
    std::vector<std::uint64_t> masks(r);
    std::vector<bool> used(limit, false);
    masks[0] = first;
    used[first] = true;
    detail::distinct_tuples_from(masks, used, 1, limit, f);
}

}  // namespace subsum
