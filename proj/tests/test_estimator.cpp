#include "doctest.h"

#include "generators.hpp"
#include "oracles.hpp"
#include "subsum/errors.hpp"
#include "subsum/estimator.hpp"
#include "subsum/reference.hpp"
#include "subsum/series.hpp"

using namespace subsum;

namespace {

mpq_class q(long n, long d = 1) {
    mpq_class x(n, d);
    x.canonicalize();
    return x;
}

McOptions threads(int n, double confidence = 0.95) { return McOptions{confidence, Threads{n}}; }

}  // namespace

TEST_CASE("wilson interval") {
    const auto half = wilson_interval(50, 100, 0.95);
    CHECK(half.low == doctest::Approx(0.403831).epsilon(1e-5));
    CHECK(half.high == doctest::Approx(0.596169).epsilon(1e-5));

    const auto none = wilson_interval(0, 10, 0.95);
    CHECK(none.low == 0);
    CHECK(none.high == doctest::Approx(0.277535).epsilon(1e-5));
    const auto all = wilson_interval(10, 10, 0.95);
    CHECK(all.high == 1);
    CHECK(all.low == doctest::Approx(1 - 0.277535).epsilon(1e-5));

    CHECK(wilson_interval(3, 40, 0.99).low < wilson_interval(3, 40, 0.9).low);
    CHECK_THROWS_AS(wilson_interval(1, 2, 1.0), DomainError);
    CHECK_THROWS_AS(wilson_interval(1, 2, 0.0), DomainError);

    gen::Rng rng(71);
    for (int round = 0; round < 1000; ++round) {
        const auto n = gen::uniform(rng, 1, 100000), s = gen::uniform(rng, 0, n);
        const auto ci = wilson_interval(s, n, 0.999);
        const double ph = static_cast<double>(s) / static_cast<double>(n);
        CHECK(ci.low <= ph);
        CHECK(ph <= ci.high);
        CHECK(ci.low >= 0);
        CHECK(ci.high <= 1);
    }
}

TEST_CASE("exact cover probabilities") {
    CHECK(cover_prob_exact(GroupSpec::cyclic(5), 3, SampleModel::Subset) == q(2, 5));
    CHECK(cover_prob_exact(GroupSpec::cyclic(5), 4, SampleModel::Subset) == 1);
    CHECK(cover_prob_exact(GroupSpec::cyclic(2), 1, SampleModel::Subset) == q(1, 2));
    CHECK(cover_prob_exact(GroupSpec::cyclic(2), 1, SampleModel::Iid) == q(1, 2));
    CHECK(cover_prob_exact(GroupSpec::cyclic(5), 0, SampleModel::Iid) == 0);

    const auto rec = cover_record_exact(GroupSpec::cyclic(5), 3, SampleModel::Subset);
    CHECK(rec.exact);
    CHECK(rec.trials == 10);
    CHECK(rec.successes == 4);
    CHECK(rec.ci_low == rec.ci_high);

    for (const auto& f : std::vector<std::vector<std::uint64_t>>{{2, 2}, {2, 2, 2}, {3, 3}, {4, 2}, {6}, {8}, {9}, {11}})
        for (std::uint64_t k = 0; k <= 5; ++k) {
            const GroupSpec g(f);
            INFO(g.to_string(), " k=", k);
            if (k <= g.order()) {
                const auto expected = oracle::cover_probability_subset(f, k);
                CHECK(cover_prob_exact(g, k, SampleModel::Subset) == expected);
                CHECK(cover_prob_exact(g, k, SampleModel::Subset, {}, Threads{1}) == expected);
                CHECK(oracle::ratio(reference::exact_cover_count(g, k, SampleModel::Subset), binomial(g.order(), k)) == expected);
            }
            if (k <= 4) CHECK(cover_prob_exact(g, k, SampleModel::Iid) == oracle::cover_probability_iid(f, k));
        }

    EnumLimits tight;
    tight.max_subsets = 5;
    CHECK_THROWS_AS(cover_prob_exact(GroupSpec::cyclic(5), 3, SampleModel::Subset, tight), CapacityError);
}

TEST_CASE("f_hat on small groups") {
    const auto z5 = f_hat(GroupSpec::cyclic(5), 1000, 1);
    CHECK(z5.f_hat == 4);
    CHECK(z5.per_k.front().exact);
    CHECK(f_hat(GroupSpec::cyclic(2), 1000, 1).f_hat == 1);

    // The least k whose enumerated probability reaches 1/2.
    for (const auto& f : std::vector<std::vector<std::uint64_t>>{{2, 2}, {2, 2, 2}, {3, 3}, {6}, {7}, {8}, {10}, {13}}) {
        const GroupSpec g(f);
        std::uint64_t expected = 0;
        while (oracle::cover_probability_subset(f, expected) < q(1, 2)) ++expected;
        CHECK(f_hat(g, 1000, 1).f_hat == expected);
    }

    FHatOptions mc;
    mc.prefer_exact = false;
    const auto z5mc = f_hat(GroupSpec::cyclic(5), 5000, 9, mc);
    CHECK(z5mc.f_hat == 4);
    CHECK_FALSE(z5mc.per_k.front().exact);

    CHECK_THROWS_AS(f_hat(GroupSpec::cyclic(5), 99, 1), DomainError);
    CHECK(parse_rule("ci-low") == DecisionRule::CiLow);
    CHECK_THROWS_AS(parse_rule("median"), DomainError);
}

TEST_CASE("decision rules order the estimate") {
    FHatOptions opts;
    opts.prefer_exact = false;
    const auto g = GroupSpec::cyclic(257);
    opts.rule = DecisionRule::CiHigh;
    const auto hi = f_hat(g, 500, 3, opts).f_hat;
    opts.rule = DecisionRule::Point;
    const auto pt = f_hat(g, 500, 3, opts).f_hat;
    opts.rule = DecisionRule::CiLow;
    const auto lo = f_hat(g, 500, 3, opts).f_hat;
    CHECK(hi <= pt);
    CHECK(pt <= lo);
}

TEST_CASE("monte carlo calibration against exact values") {
    for (const auto& [f, k] : std::vector<std::pair<std::vector<std::uint64_t>, std::uint64_t>>{
             {{5}, 3}, {{7}, 3}, {{11}, 4}, {{2, 2, 2}, 3}, {{3, 3}, 3}}) {
        const GroupSpec g(f);
        for (auto model : {SampleModel::Subset, SampleModel::Iid}) {
            const auto exact = cover_prob_exact(g, k, model);
            const auto est = cover_prob_mc(g, k, model, 20'000, 17, threads(0, 0.999));
            INFO(g.to_string(), " k=", k, " model=", to_string(model));
            CHECK(est.ci_low <= to_double(exact));
            CHECK(to_double(exact) <= est.ci_high);
        }
    }
}

TEST_CASE("thread count does not change monte carlo results") {
    const auto g = GroupSpec::cyclic(101);
    const auto one = cover_prob_mc(g, 9, SampleModel::Subset, 3000, 42, threads(1));
    for (int n : {2, 3, 8}) {
        const auto many = cover_prob_mc(g, 9, SampleModel::Subset, 3000, 42, threads(n));
        CHECK(many.successes == one.successes);
        CHECK(many.p_hat == one.p_hat);
        CHECK(many.ci_low == one.ci_low);
    }
    CHECK(reference::count_covering_trials(g, 9, SampleModel::Subset, 3000, 42) == one.successes);
}

TEST_CASE("nested samples make the estimate monotone in k") {
    for (auto model : {SampleModel::Subset, SampleModel::Iid}) {
        const auto g = GroupSpec({5, 7});
        std::uint64_t prev = 0;
        for (std::uint64_t k = 5; k <= 12; ++k) {
            const auto est = cover_prob_mc(g, k, model, 2000, 5, threads(0));
            CHECK(est.successes >= prev);
            prev = est.successes;
        }
    }
}

TEST_CASE("zero law skips the coverage kernel") {
    gen::Rng rng(73);
    for (int round = 0; round < 100; ++round) {
        const GroupSpec g(gen::factors(rng, 5000));
        if (g.order() < 3) continue;
        std::uint64_t k = 0;
        while ((std::uint64_t{1} << (k + 1)) < g.order()) ++k;
        k = gen::uniform(rng, 0, k);
        const auto est = cover_prob_mc(g, k, gen::uniform(rng, 0, 1) ? SampleModel::Iid : SampleModel::Subset, 50, round);
        CHECK(est.successes == 0);
        CHECK(est.coverage_evaluations == 0);
        CHECK(est.p_hat == 0);
    }
    const auto tight = cover_prob_mc(GroupSpec::cyclic(8), 3, SampleModel::Subset, 50, 1);
    CHECK(tight.coverage_evaluations == 50);
}

TEST_CASE("miss distribution") {
    const auto g = GroupSpec::cyclic(101);
    const auto md = miss_distribution(g, 7, 600, 5, 1);
    CHECK(md.lambda == q(127, 101));
    CHECK(md.pairs == 100);
    CHECK(md.pooled == 60'000);
    // Each nonempty subset sum is uniform under i.i.d. draws, so E X_x = M / p exactly.
    CHECK(std::abs(md.mean_X - 127.0 / 101) <= 5 * md.mean_X_stderr);
    double total = 0;
    for (const auto& [u, c] : md.hist_U) total += md.mass_U(u);
    CHECK(total == doctest::Approx(1.0));
    CHECK(md.poisson_reference == doctest::Approx(std::exp(-127.0 / 101)));
    CHECK(md.tv_vs_poisson >= 0);
    CHECK(md.tv_vs_poisson <= 1);

    const auto again = miss_distribution(g, 7, 600, 5, 1, SampleModel::Iid, Threads{1});
    CHECK(again.hist_U == md.hist_U);
    CHECK(again.hist_X == md.hist_X);
    CHECK(again.mean_X == md.mean_X);

    const auto pairs = miss_distribution(GroupSpec::cyclic(43), 6, 200, 2, 2);
    CHECK(pairs.pairs == 42 * 41 / 2);
    CHECK(std::abs(pairs.mean_X - 2 * 63.0 / 43) <= 5 * pairs.mean_X_stderr);
    CHECK(miss_distribution(GroupSpec::cyclic(53), 6, 20, 2, 2).pairs == 1000);

    const auto empty = miss_distribution(GroupSpec::cyclic(13), 0, 10, 1, 1);
    CHECK(empty.hist_U.size() == 1);
    CHECK(empty.hist_U.begin()->first == 12);
    CHECK(empty.p_miss_hat == 1);

    CHECK_THROWS_AS(miss_distribution(GroupSpec::cyclic(12), 3, 10, 1, 1), DomainError);
    CHECK_THROWS_AS(miss_distribution(GroupSpec({3, 3}), 3, 10, 1, 1), DomainError);
    CHECK_THROWS_AS(miss_distribution(GroupSpec::cyclic(13), 3, 10, 1, 3), DomainError);
}

TEST_CASE("scan records errors per prime and keeps going") {
    const std::vector<std::uint64_t> primes{101, 100, 3, 103};
    const std::vector<double> grid{0.3};
    FHatOptions opts;
    opts.prefer_exact = false;
    const auto entries = scan_second_order(primes, grid, 200, 7, opts);
    REQUIRE(entries.size() == 4);
    CHECK(entries[0].result);
    CHECK(entries[0].grid.size() == 1);
    CHECK(entries[0].grid[0].k == choose_k(101, 0.3).k);
    CHECK_FALSE(entries[1].result);
    CHECK_FALSE(entries[1].error.empty());
    CHECK_FALSE(entries[2].result);
    CHECK(entries[3].result);
    const double n = 101;
    CHECK(entries[0].result->second_order
          == doctest::Approx((static_cast<double>(entries[0].result->f_hat) - std::log2(n)) / std::log(std::log(n))));
}
