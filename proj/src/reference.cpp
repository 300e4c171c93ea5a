#include "subsum/reference.hpp"

#include "subsum/coverage.hpp"
#include "subsum/errors.hpp"
#include "subsum/numeric.hpp"

namespace subsum::reference {

std::uint64_t count_covering_trials(const GroupSpec& g, std::uint64_t k, SampleModel model, std::uint64_t trials,
                                    std::uint64_t seed) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        auto a = draw(g, k, model, SeedPlan{seed, i});
        if (covers(g, a)) ++hits;
    }
    return hits;
}

mpz_class exact_cover_count(const GroupSpec& g, std::uint64_t k, SampleModel model) {
    const auto n = g.order();
    if (model == SampleModel::Subset && k > n) throw DomainError("k exceeds N");
    mpz_class hits = 0;
    std::vector<Element> a(k);
    if (model == SampleModel::Iid) {
        std::vector<std::uint64_t> digits(k, 0);
        while (true) {
            for (std::uint64_t i = 0; i < k; ++i) a[i] = Element{digits[i]};
            if (covers(g, a)) ++hits;
            std::uint64_t pos = 0;
            while (pos < k && ++digits[pos] == n) digits[pos++] = 0;
            if (pos == k) break;
        }
        return hits;
    }
    std::vector<std::uint64_t> comb(k);
    for (std::uint64_t i = 0; i < k; ++i) comb[i] = i;
    while (true) {
        for (std::uint64_t i = 0; i < k; ++i) a[i] = Element{comb[i]};
        if (covers(g, a)) ++hits;
        std::int64_t i = static_cast<std::int64_t>(k) - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + static_cast<std::uint64_t>(i)) --i;
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (auto j = static_cast<std::size_t>(i) + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    return hits;
}

std::uint64_t lattice_points_in_colspace(const IncidenceMatrix& v) {
    const auto r = v.rows(), c = v.cols();
    if (r > kMaxLatticeRows) throw CapacityError("too many rows for the lattice-point census");
    const auto base = rank_over_q(v);
    std::uint64_t count = 0;
    std::vector<std::uint8_t> aug(r * (c + 1));
    for (std::uint64_t u = 0; u < (std::uint64_t{1} << r); ++u) {
        for (std::size_t j = 0; j < r; ++j) {
            for (std::size_t t = 0; t < c; ++t) aug[j * (c + 1) + t] = v(j, t);
            aug[j * (c + 1) + c] = static_cast<std::uint8_t>((u >> j) & 1u);
        }
        if (rank_over_q(IncidenceMatrix(r, c + 1, aug)) == base) ++count;
    }
    return count;
}

}  // namespace subsum::reference
