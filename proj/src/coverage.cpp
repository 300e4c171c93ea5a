#include "subsum/coverage.hpp"

#include <algorithm>

#include "subsum/errors.hpp"

namespace subsum {

CoverageBitmap::CoverageBitmap(GroupSpec g, std::vector<bits::Word> words)
    : group_(std::move(g)), words_(std::move(words)), popcount_(bits::popcount(words_)) {}

std::vector<Element> CoverageBitmap::members() const {
    std::vector<Element> out;
    for (auto x : elements(group_))
        if (contains(x)) out.push_back(x);
    return out;
}

SubsetSumKernel::SubsetSumKernel(const GroupSpec& g)
    : group_(g),
      words_(bits::words_for(g.order())),
      current_(words_),
      next_(words_),
      tmp_a_(words_),
      tmp_b_(words_) {}

void SubsetSumKernel::translate(std::span<const bits::Word> src, std::span<bits::Word> dst, Element a) {
    const auto n = group_.order();
    if (group_.is_cyclic()) {
        std::fill(dst.begin(), dst.end(), 0);
        bits::or_rotated_block(dst, src, 0, n, a.index);
        return;
    }
    // Translate one coordinate at a time: digit i rotates every block of length n_i * stride_i
    // by digit * stride_i positions.
    std::span<const bits::Word> cur = src;
    bool any = false;
    auto rest = a.index;
    std::span<bits::Word> bufs[2] = {tmp_a_, tmp_b_};
    int which = 0;
    for (std::size_t i = 0; i < group_.rank(); ++i) {
        auto ni = group_.factors()[i];
        auto digit = rest % ni;
        rest /= ni;
        if (digit == 0) continue;
        auto stride = group_.stride(i);
        auto block = ni * stride;
        auto out = bufs[which];
        std::fill(out.begin(), out.end(), 0);
        for (std::uint64_t base = 0; base < n; base += block) bits::or_rotated_block(out, cur, base, block, digit * stride);
        cur = out;
        which ^= 1;
        any = true;
    }
    if (!any) {
        std::copy(src.begin(), src.end(), dst.begin());
    } else {
        std::copy(cur.begin(), cur.end(), dst.begin());
    }
}

void SubsetSumKernel::step(std::span<const bits::Word> src, std::span<bits::Word> dst, Element a) {
    if (a.index == 0) {
        std::copy(src.begin(), src.end(), dst.begin());
        return;
    }
    if (group_.is_cyclic()) {
        std::copy(src.begin(), src.end(), dst.begin());
        bits::or_rotated_block(dst, src, 0, group_.order(), a.index);
        return;
    }
    translate(src, dst, a);
    for (std::size_t w = 0; w < words_; ++w) dst[w] |= src[w];
}

std::uint64_t SubsetSumKernel::run(std::span<const Element> a) {
    const auto n = group_.order();
    std::fill(current_.begin(), current_.end(), 0);
    current_[0] = 1;
    std::uint64_t pop = 1;
    for (auto x : a) {
        check_element(group_, x);
        if (pop == n) break;
        step(current_, next_, x);
        std::swap(current_, next_);
        pop = bits::popcount(current_);
    }
    return pop;
}

CoverageBitmap sigma_bitmap(const GroupSpec& g, std::span<const Element> a) {
    SubsetSumKernel kernel(g);
    kernel.run(a);
    auto r = kernel.result();
    return CoverageBitmap(g, std::vector<bits::Word>(r.begin(), r.end()));
}

bool covers(const GroupSpec& g, std::span<const Element> a) {
    if (below_capacity(static_cast<unsigned>(std::min<std::size_t>(a.size(), 64)), g.order())) {
        for (auto x : a) check_element(g, x);
        return false;
    }
    SubsetSumKernel kernel(g);
    return kernel.run(a) == g.order();
}

MultiplicityTable::MultiplicityTable(GroupSpec g, unsigned k, std::vector<u128> counts)
    : group_(std::move(g)), k_(k), counts_(std::move(counts)) {}

MultiplicityTable sigma_counts(const GroupSpec& g, std::span<const Element> a) {
    if (a.size() > kMaxExactCountK)
        throw CapacityError("exact subset counts need k <= " + std::to_string(kMaxExactCountK) + ", got "
                            + std::to_string(a.size()));
    const auto n = g.order();
    std::vector<u128> c(n, 0), next(n);
    c[0] = 1;
    for (auto x : a) {
        check_element(g, x);
        if (g.is_cyclic()) {
            const auto s = x.index;
            for (std::uint64_t y = 0; y < n; ++y) next[y] = c[y] + c[y >= s ? y - s : y + n - s];
        } else {
            for (std::uint64_t y = 0; y < n; ++y) next[y] = c[y] + c[subtract(g, Element{y}, x).index];
        }
        c.swap(next);
    }
    return MultiplicityTable(g, static_cast<unsigned>(a.size()), std::move(c));
}

MissStats miss_stats(const MultiplicityTable& t) {
    const auto n = t.group().order();
    MissStats s;
    u128 total = 0;
    for (std::uint64_t x = 1; x < n; ++x) {
        auto hits = t.nonempty_hits(Element{x});
        if (hits == 0) ++s.missed;
        total += hits;
    }
    s.lambda_hat = mpq_class(to_mpz(total), to_mpz(n - 1));
    s.lambda_hat.canonicalize();
    return s;
}

}  // namespace subsum
