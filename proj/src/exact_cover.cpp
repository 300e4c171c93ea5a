#include "subsum/exact_cover.hpp"

#include <omp.h>

#include "subsum/coverage.hpp"
#include "subsum/errors.hpp"
#include "subsum/numeric.hpp"

namespace subsum {

mpq_class ExactCoverCount::probability() const {
    mpq_class q(covering, total);
    q.canonicalize();
    return q;
}

bool exact_cover_feasible(const GroupSpec& g, std::uint64_t k, SampleModel model, const EnumLimits& limits) {
    if (model == SampleModel::Subset) return k <= g.order() && binomial(g.order(), k) <= to_mpz(limits.max_subsets);
    return pow_mpz(g.order(), k) <= to_mpz(limits.max_assignments);
}

namespace {

u128 small_binomial(std::uint64_t n, std::uint64_t j) {
    if (j > n) return 0;
    u128 r = 1;
    for (std::uint64_t i = 0; i < j; ++i) r = r * (n - i) / (i + 1);
    return r;
}

u128 small_power(std::uint64_t base, std::uint64_t e) {
    u128 r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r *= base;
    return r;
}

class CoverWalker {
public:
    CoverWalker(const GroupSpec& g, std::uint64_t k, SampleModel model)
        : kernel_(g), n_(g.order()), k_(k), model_(model), levels_(k + 1, std::vector<bits::Word>(kernel_.word_count())) {}

    /// Covering samples among those extending levels_[depth] (which holds Sigma of the chosen prefix).
    /// `next` is the smallest admissible next element (subset model) or unused (i.i.d.).
    u128 walk(std::uint64_t depth, std::uint64_t next) {
        const auto& here = levels_[depth];
        auto pop = bits::popcount(here);
        auto remaining = k_ - depth;
        if (pop == n_) {
            return model_ == SampleModel::Subset ? small_binomial(n_ - next, remaining) : small_power(n_, remaining);
        }
        if (remaining == 0) return 0;
        if (remaining < 64 && static_cast<u128>(pop) << remaining < n_) return 0;
        u128 hits = 0;
        if (model_ == SampleModel::Subset) {
            for (std::uint64_t c = next; c + remaining <= n_; ++c) {
                kernel_.step(here, levels_[depth + 1], Element{c});
                hits += walk(depth + 1, c + 1);
            }
        } else {
            for (std::uint64_t c = 0; c < n_; ++c) {
                kernel_.step(here, levels_[depth + 1], Element{c});
                hits += walk(depth + 1, 0);
            }
        }
        return hits;
    }

    /// Covering samples whose first element is `first`.
    u128 from_first(std::uint64_t first) {
        std::fill(levels_[0].begin(), levels_[0].end(), 0);
        levels_[0][0] = 1;
        kernel_.step(levels_[0], levels_[1], Element{first});
        return walk(1, model_ == SampleModel::Subset ? first + 1 : 0);
    }

private:
    SubsetSumKernel kernel_;
    std::uint64_t n_, k_;
    SampleModel model_;
    std::vector<std::vector<bits::Word>> levels_;
};

}  // namespace

ExactCoverCount exact_cover_count(const GroupSpec& g, std::uint64_t k, SampleModel model, const EnumLimits& limits,
                                  Threads threads) {
    if (model == SampleModel::Subset && k > g.order())
        throw DomainError("cannot choose " + std::to_string(k) + " distinct elements from a group of order "
                          + std::to_string(g.order()));
    if (!exact_cover_feasible(g, k, model, limits))
        throw CapacityError("exact " + std::string(to_string(model)) + " enumeration for group " + g.to_string()
                            + ", k=" + std::to_string(k) + " exceeds the enumeration gate");
    ExactCoverCount out;
    out.total = model == SampleModel::Subset ? binomial(g.order(), k) : pow_mpz(g.order(), k);
    if (k == 0) {
        out.covering = 0;  // Sigma({}) = {0} and N >= 2
        return out;
    }
    const auto n = g.order();
    const auto firsts = model == SampleModel::Subset ? n - k + 1 : n;
    std::uint64_t covering = 0;
#pragma omp parallel num_threads(threads.resolve()) reduction(+ : covering)
    {
        CoverWalker walker(g, k, model);
#pragma omp for schedule(dynamic, 1)
        for (std::uint64_t first = 0; first < firsts; ++first)
            covering += static_cast<std::uint64_t>(walker.from_first(first));
    }
    out.covering = to_mpz(covering);
    return out;
}

}  // namespace subsum
