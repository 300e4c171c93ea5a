#include "doctest.h"

#include "generators.hpp"
#include "oracles.hpp"
#include "subsum/coverage.hpp"
#include "subsum/errors.hpp"

using namespace subsum;

namespace {

std::vector<Element> elems(std::initializer_list<std::uint64_t> xs) {
    std::vector<Element> a;
    for (auto x : xs) a.push_back(Element{x});
    return a;
}

std::set<std::uint64_t> member_set(const CoverageBitmap& b) {
    std::set<std::uint64_t> s;
    for (auto e : b.members()) s.insert(e.index);
    return s;
}

}  // namespace

TEST_CASE("bitmap examples") {
    const auto z5 = GroupSpec::cyclic(5), z7 = GroupSpec::cyclic(7);
    CHECK(member_set(sigma_bitmap(z5, {})) == std::set<std::uint64_t>{0});
    CHECK(sigma_bitmap(z7, elems({1, 2, 3})).full());
    const auto b = sigma_bitmap(z5, elems({0, 1, 4}));
    CHECK(member_set(b) == std::set<std::uint64_t>{0, 1, 4});
    CHECK_FALSE(b.contains(Element{2}));
    CHECK(covers(z7, elems({1, 2, 3})));
    CHECK_FALSE(covers(z5, elems({0, 1, 4})));
}

TEST_CASE("count examples") {
    const auto t = sigma_counts(GroupSpec::cyclic(5), elems({1, 4}));
    CHECK(t.count(Element{0}) == 2);
    CHECK(t.count(Element{1}) == 1);
    CHECK(t.count(Element{4}) == 1);
    CHECK(t.count(Element{2}) == 0);
    CHECK(t.count(Element{3}) == 0);
    CHECK(t.nonempty_hits(Element{0}) == 1);

    const auto u = sigma_counts(GroupSpec::cyclic(3), elems({1}));
    CHECK(u.count(Element{0}) == 1);
    CHECK(u.count(Element{1}) == 1);
    CHECK(u.count(Element{2}) == 0);
}

TEST_CASE("bitmap and counts agree with subset enumeration") {
    gen::Rng rng(2024);
    for (int round = 0; round < 500; ++round) {
        const auto f = gen::factors(rng, 32);
        const GroupSpec g(f);
        const auto k = gen::uniform(rng, 0, 10);
        const auto idx = gen::indices(rng, g.order(), k);
        const auto a = gen::as_elements(idx);
        INFO("group ", g.to_string(), " k ", k);

        const auto expected = oracle::sum_counts(f, idx);
        const auto bitmap = sigma_bitmap(g, a);
        const auto counts = sigma_counts(g, a);
        std::uint64_t pop = 0;
        for (std::uint64_t x = 0; x < g.order(); ++x) {
            CHECK(bitmap.contains(Element{x}) == (expected[x] > 0));
            CHECK(counts.count(Element{x}) == expected[x]);
            pop += expected[x] > 0;
        }
        CHECK(bitmap.popcount() == pop);
        CHECK(covers(g, a) == (pop == g.order()));
    }
}

TEST_CASE("wide groups cross word boundaries") {
    gen::Rng rng(99);
    for (const auto& f : std::vector<std::vector<std::uint64_t>>{{67}, {130}, {3, 43}, {64, 2}, {5, 7, 6}}) {
        const GroupSpec g(f);
        for (int round = 0; round < 20; ++round) {
            const auto idx = gen::indices(rng, g.order(), gen::uniform(rng, 1, 9));
            const auto bitmap = sigma_bitmap(g, gen::as_elements(idx));
            const auto expected = oracle::sum_set(f, idx);
            CHECK(member_set(bitmap) == expected);
        }
    }
}

TEST_CASE("sigma is monotone in the list") {
    gen::Rng rng(5);
    for (int round = 0; round < 200; ++round) {
        const GroupSpec g(gen::factors(rng, 40));
        const auto a = gen::as_elements(gen::indices(rng, g.order(), gen::uniform(rng, 1, 8)));
        const auto shorter = std::span<const Element>(a).first(a.size() - 1);
        const auto small = sigma_bitmap(g, shorter), big = sigma_bitmap(g, a);
        for (auto e : small.members()) CHECK(big.contains(e));
        CHECK(big.popcount() <= 2 * small.popcount());
    }
}

TEST_CASE("capacity: fewer than log2 N elements never cover") {
    gen::Rng rng(11);
    for (int round = 0; round < 200; ++round) {
        const GroupSpec g(gen::factors(rng, 200));
        std::uint64_t k = 0;
        while ((std::uint64_t{1} << (k + 1)) < g.order()) ++k;
        const auto a = gen::as_elements(gen::indices(rng, g.order(), k));
        CHECK(sigma_bitmap(g, a).popcount() <= (std::uint64_t{1} << k));
        CHECK_FALSE(covers(g, a));
    }
}

TEST_CASE("kernel reuse gives the same result as fresh bitmaps") {
    const GroupSpec g({4, 6});
    SubsetSumKernel kernel(g);
    gen::Rng rng(3);
    for (int round = 0; round < 50; ++round) {
        const auto a = gen::as_elements(gen::indices(rng, g.order(), gen::uniform(rng, 0, 7)));
        const auto pop = kernel.run(a);
        const auto fresh = sigma_bitmap(g, a);
        if (fresh.full()) {
            CHECK(pop == g.order());
        } else {
            CHECK(pop == fresh.popcount());
            const auto words = kernel.result();
            CHECK(std::equal(words.begin(), words.end(), fresh.words().begin()));
        }
    }
}

TEST_CASE("counts gate and miss statistics") {
    const auto z3 = GroupSpec::cyclic(3);
    std::vector<Element> many(kMaxExactCountK + 1, Element{1});
    CHECK_THROWS_AS(sigma_counts(z3, many), CapacityError);
    many.pop_back();
    const auto big = sigma_counts(z3, many);
    u128 total = 0;
    for (auto c : big.counts()) total += c;
    CHECK(total == (u128{1} << kMaxExactCountK));

    // Z_5, A = (1,4): nonzero hits X_1 = X_4 = 1, X_2 = X_3 = 0.
    const auto stats = miss_stats(sigma_counts(GroupSpec::cyclic(5), elems({1, 4})));
    CHECK(stats.missed == 2);
    CHECK(stats.lambda_hat == mpq_class(1, 2));

    // Empty list: every nonzero element is missed.
    const auto empty = miss_stats(sigma_counts(GroupSpec::cyclic(7), {}));
    CHECK(empty.missed == 6);
    CHECK(empty.lambda_hat == 0);
}

TEST_CASE("counts satisfy sum identities") {
    gen::Rng rng(8);
    for (int round = 0; round < 100; ++round) {
        const GroupSpec g(gen::factors(rng, 50));
        const auto k = gen::uniform(rng, 0, 20);
        const auto t = sigma_counts(g, gen::as_elements(gen::indices(rng, g.order(), k)));
        u128 total = 0;
        for (auto c : t.counts()) total += c;
        CHECK(total == (u128{1} << k));
        CHECK(t.count(Element{0}) >= 1);
    }
}
