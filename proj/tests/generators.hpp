#pragma once

// Small random instances for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "subsum/group.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

// One to three cyclic factors >= 2 with product <= max_order.
inline std::vector<std::uint64_t> factors(Rng& rng, std::uint64_t max_order) {
    std::vector<std::uint64_t> f;
    std::uint64_t n = 1;
    const auto t = uniform(rng, 1, 3);
    for (std::uint64_t i = 0; i < t && n * 2 <= max_order; ++i) {
        const auto d = uniform(rng, 2, max_order / n);
        f.push_back(d);
        n *= d;
    }
    return f;
}

inline std::vector<std::uint64_t> indices(Rng& rng, std::uint64_t n, std::uint64_t k) {
    std::vector<std::uint64_t> a(k);
    for (auto& x : a) x = uniform(rng, 0, n - 1);
    return a;
}

inline std::vector<subsum::Element> as_elements(const std::vector<std::uint64_t>& idx) {
    std::vector<subsum::Element> a;
    for (auto i : idx) a.push_back(subsum::Element{i});
    return a;
}

}  // namespace gen
