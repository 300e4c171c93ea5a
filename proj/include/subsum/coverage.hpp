#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "subsum/bitops.hpp"
#include "subsum/group.hpp"
#include "subsum/numeric.hpp"

namespace subsum {

/// Membership map of the subset-sum set: bit(x) = 1 iff x is the sum of some indexed sub-list of A.
class CoverageBitmap {
public:
    CoverageBitmap(GroupSpec g, std::vector<bits::Word> words);

    const GroupSpec& group() const { return group_; }
    bool contains(Element x) const { return bits::test(words_, x.index); }
    std::uint64_t popcount() const { return popcount_; }
    bool full() const { return popcount_ == group_.order(); }
    std::span<const bits::Word> words() const { return words_; }
    std::vector<Element> members() const;

private:
    GroupSpec group_;
    std::vector<bits::Word> words_;
    std::uint64_t popcount_;
};

/// Reusable scratch for the bitmap recurrence B <- B | (B + a). Allocates once per group;
/// run() and step() are allocation-free afterwards. One instance per thread.
class SubsetSumKernel {
public:
    explicit SubsetSumKernel(const GroupSpec& g);

    const GroupSpec& group() const { return group_; }
    std::size_t word_count() const { return words_; }

    /// dst = src | (src + a). dst and src must not alias.
    void step(std::span<const bits::Word> src, std::span<bits::Word> dst, Element a);

    /// Sigma(A) from {0}, stopping as soon as every element is reached. Returns the popcount.
    std::uint64_t run(std::span<const Element> a);

    std::span<const bits::Word> result() const { return current_; }

private:
    void translate(std::span<const bits::Word> src, std::span<bits::Word> dst, Element a);

    GroupSpec group_;
    std::size_t words_;
    std::vector<bits::Word> current_, next_, tmp_a_, tmp_b_;
};

CoverageBitmap sigma_bitmap(const GroupSpec& g, std::span<const Element> a);

/// Exact per-element subset counts, counts[x] = #{S subset of [k] : sigma(S) = x}, empty set included.
class MultiplicityTable {
public:
    MultiplicityTable(GroupSpec g, unsigned k, std::vector<u128> counts);

    const GroupSpec& group() const { return group_; }
    unsigned k() const { return k_; }
    std::span<const u128> counts() const { return counts_; }
    u128 count(Element x) const { return counts_[x.index]; }
    /// X_x: nonempty index subsets hitting x.
    u128 nonempty_hits(Element x) const { return counts_[x.index] - (x.index == 0 ? 1 : 0); }

private:
    GroupSpec group_;
    unsigned k_;
    std::vector<u128> counts_;
};

inline constexpr unsigned kMaxExactCountK = 120;

/// Throws CapacityError when a.size() > kMaxExactCountK.
MultiplicityTable sigma_counts(const GroupSpec& g, std::span<const Element> a);

struct MissStats {
    std::uint64_t missed = 0;  // U
    mpq_class lambda_hat;      // mean of X_x over x != 0
};

MissStats miss_stats(const MultiplicityTable& t);

bool covers(const GroupSpec& g, std::span<const Element> a);

}  // namespace subsum
