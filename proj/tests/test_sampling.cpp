#include "doctest.h"

#include <algorithm>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.hpp"
#include "subsum/errors.hpp"
#include "subsum/exact_cover.hpp"
#include "subsum/sampling.hpp"

using namespace subsum;

namespace {

std::vector<std::uint64_t> idx(const std::vector<Element>& a) {
    std::vector<std::uint64_t> v;
    for (auto e : a) v.push_back(e.index);
    return v;
}

// Pearson statistic against equal expected counts; passes when below the 99.9% quantile.
bool uniform_by_chi_square(const std::map<std::vector<std::uint64_t>, std::uint64_t>& observed, std::uint64_t cells,
                           std::uint64_t draws) {
    const double expected = static_cast<double>(draws) / static_cast<double>(cells);
    double stat = 0;
    std::uint64_t seen = 0;
    for (const auto& [key, count] : observed) {
        const double d = static_cast<double>(count) - expected;
        stat += d * d / expected;
        ++seen;
    }
    stat += static_cast<double>(cells - seen) * expected;
    const boost::math::chi_squared dist(static_cast<double>(cells - 1));
    return stat < boost::math::quantile(dist, 0.999);
}

}  // namespace

TEST_CASE("draw examples") {
    const auto z5 = GroupSpec::cyclic(5);
    auto all = idx(draw(z5, 5, SampleModel::Subset, SeedPlan{1, 0}));
    std::sort(all.begin(), all.end());
    CHECK(all == std::vector<std::uint64_t>{0, 1, 2, 3, 4});
    CHECK(draw(z5, 0, SampleModel::Subset, SeedPlan{1, 0}).empty());
    CHECK(draw(z5, 0, SampleModel::Iid, SeedPlan{1, 0}).empty());
    CHECK_THROWS_AS(draw(z5, 6, SampleModel::Subset, SeedPlan{1, 0}), DomainError);
    CHECK(draw(z5, 9, SampleModel::Iid, SeedPlan{1, 0}).size() == 9);
}

TEST_CASE("model names round-trip") {
    CHECK(parse_model("subset") == SampleModel::Subset);
    CHECK(parse_model("iid") == SampleModel::Iid);
    CHECK(to_string(SampleModel::Iid) == "iid");
    CHECK_THROWS_AS(parse_model("SUBSET"), DomainError);
}

TEST_CASE("draws are a pure function of the seed plan and nest in k") {
    const GroupSpec g({7, 11});
    for (auto model : {SampleModel::Subset, SampleModel::Iid}) {
        for (std::uint64_t t = 0; t < 50; ++t) {
            const SeedPlan plan{12345, t};
            const auto full = idx(draw(g, 20, model, plan));
            CHECK(full == idx(draw(g, 20, model, plan)));
            for (std::uint64_t k = 0; k < 20; ++k) {
                const auto part = idx(draw(g, k, model, plan));
                CHECK(std::equal(part.begin(), part.end(), full.begin()));
            }
            for (auto x : full) CHECK(x < g.order());
            if (model == SampleModel::Subset) {
                auto sorted = full;
                std::sort(sorted.begin(), sorted.end());
                CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
            }
        }
        CHECK(idx(draw(g, 20, model, SeedPlan{1, 0})) != idx(draw(g, 20, model, SeedPlan{1, 1})));
        CHECK(idx(draw(g, 20, model, SeedPlan{1, 0})) != idx(draw(g, 20, model, SeedPlan{2, 0})));
    }
}

TEST_CASE("subset draws are uniform over k-subsets") {
    const auto g = GroupSpec::cyclic(6);
    std::map<std::vector<std::uint64_t>, std::uint64_t> seen;
    const std::uint64_t draws = 30'000;
    for (std::uint64_t t = 0; t < draws; ++t) {
        auto s = idx(draw(g, 2, SampleModel::Subset, SeedPlan{77, t}));
        std::sort(s.begin(), s.end());
        ++seen[s];
    }
    CHECK(seen.size() == 15);
    CHECK(uniform_by_chi_square(seen, 15, draws));
}

TEST_CASE("iid draws are uniform over ordered tuples") {
    const auto g = GroupSpec::cyclic(7);
    std::map<std::vector<std::uint64_t>, std::uint64_t> seen;
    const std::uint64_t draws = 49'000;
    for (std::uint64_t t = 0; t < draws; ++t) ++seen[idx(draw(g, 2, SampleModel::Iid, SeedPlan{78, t}))];
    CHECK(uniform_by_chi_square(seen, 49, draws));
}

TEST_CASE("bounded draws are uniform and in range") {
    TrialRng rng(SeedPlan{3, 4});
    std::map<std::vector<std::uint64_t>, std::uint64_t> seen;
    for (int i = 0; i < 20'000; ++i) {
        const auto v = rng.below(10);
        REQUIRE(v < 10);
        ++seen[{v}];
    }
    CHECK(uniform_by_chi_square(seen, 10, 20'000));
    CHECK(rng.below(1) == 0);
}

TEST_CASE("element frequencies in a large group stay within 5 sigma") {
    // Each element of Z_1000 lands in a 50-subset with probability 1/20.
    const auto g = GroupSpec::cyclic(1000);
    std::vector<std::uint64_t> freq(1000, 0);
    const std::uint64_t draws = 4000;
    for (std::uint64_t t = 0; t < draws; ++t)
        for (auto e : draw(g, 50, SampleModel::Subset, SeedPlan{9, t})) ++freq[e.index];
    const double mean = draws / 20.0, sigma = std::sqrt(draws * (1.0 / 20) * (19.0 / 20));
    for (auto f : freq) CHECK(std::abs(static_cast<double>(f) - mean) <= 5 * sigma);
}

TEST_CASE("collision bound and coupling") {
    CHECK(collision_bound(3, 5) == mpq_class(3, 5));
    CHECK(collision_bound(1, 5) == 0);

    const auto z2 = coupling_gap_exact(GroupSpec::cyclic(2), 1);
    CHECK(z2.p_subset == mpq_class(1, 2));
    CHECK(z2.p_iid == mpq_class(1, 2));
    CHECK(z2.gap == 0);

    const auto z5 = coupling_gap_exact(GroupSpec::cyclic(5), 3);
    CHECK(z5.p_subset == mpq_class(2, 5));
    CHECK(z5.bound == mpq_class(6, 5));
    CHECK(z5.holds());

    for (const auto& f : std::vector<std::vector<std::uint64_t>>{{5}, {7}, {2, 2}, {2, 3}, {9}}) {
        for (std::uint64_t k = 1; k <= 4; ++k) {
            const GroupSpec g(f);
            if (k > g.order()) continue;
            const auto gap = coupling_gap_exact(g, k);
            CHECK(gap.p_subset == oracle::cover_probability_subset(f, k));
            CHECK(gap.p_iid == oracle::cover_probability_iid(f, k));
            mpq_class diff = gap.p_subset - gap.p_iid;
            if (diff < 0) diff = -diff;
            CHECK(gap.gap == diff);
            CHECK(gap.holds());
        }
    }

    EnumLimits tight;
    tight.max_assignments = 10;
    CHECK_THROWS_AS(coupling_gap_exact(GroupSpec::cyclic(5), 3, tight), CapacityError);
}
