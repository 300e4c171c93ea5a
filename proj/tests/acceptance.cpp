// Acceptance suite: one PASS/FAIL line per criterion, each with its own runtime limit.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "oracles.hpp"
#include "subsum/coverage.hpp"
#include "subsum/estimator.hpp"
#include "subsum/exact_cover.hpp"
#include "subsum/linalg01.hpp"
#include "subsum/moments.hpp"
#include "subsum/sampling.hpp"
#include "subsum/series.hpp"

using namespace subsum;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limit_s) {
        out.ok = false;
        out.detail << " [over time limit " << limit_s << " s]";
    }
    if (!out.ok) ++failures;
    std::cout << (out.ok ? "PASS" : "FAIL") << "  " << std::setw(2) << id << "  " << name << "  (" << std::fixed
              << std::setprecision(2) << secs << " s / " << limit_s << " s)" << out.detail.str() << std::endl;
}

std::uint64_t f_hat_of(std::uint64_t n) { return f_hat(GroupSpec::cyclic(n), 1000, 1).f_hat; }

}  // namespace

int main() {
    criterion(1, "exact coverage on Z_5 and Z_2", 1.0, [](Outcome& o) {
        const auto z5_3 = cover_prob_exact(GroupSpec::cyclic(5), 3, SampleModel::Subset);
        const auto z5_4 = cover_prob_exact(GroupSpec::cyclic(5), 4, SampleModel::Subset);
        const auto z2_1 = cover_prob_exact(GroupSpec::cyclic(2), 1, SampleModel::Subset);
        o.require(z5_3 == mpq_class(2, 5), "P(Z_5, 3) = 2/5");
        o.require(z5_4 == 1, "P(Z_5, 4) = 1");
        o.require(z2_1 == mpq_class(1, 2), "P(Z_2, 1) = 1/2");
        const auto f5 = f_hat_of(5), f2 = f_hat_of(2);
        o.require(f5 == 4, "f(Z_5) = 4");
        o.require(f2 == 1, "f(Z_2) = 1");
        o.detail << " P(Z_5,3)=" << z5_3.get_str() << " P(Z_5,4)=" << z5_4.get_str() << " P(Z_2,1)=" << z2_1.get_str()
                 << " f(Z_5)=" << f5 << " f(Z_2)=" << f2;
    });

    criterion(2, "bitmap and counts vs 2^k enumeration (1000 cases)", 10.0, [](Outcome& o) {
        gen::Rng rng(20261016);
        int mismatches = 0, products = 0;
        for (int round = 0; round < 1000; ++round) {
            const auto f = gen::factors(rng, 32);
            const GroupSpec g(f);
            products += f.size() > 1;
            const auto idx = gen::indices(rng, g.order(), gen::uniform(rng, 0, 10));
            const auto a = gen::as_elements(idx);
            const auto expected = oracle::sum_counts(f, idx);
            const auto bitmap = sigma_bitmap(g, a);
            const auto counts = sigma_counts(g, a);
            bool same = true;
            for (std::uint64_t x = 0; x < g.order(); ++x)
                same = same && bitmap.contains(Element{x}) == (expected[x] > 0) && counts.count(Element{x}) == expected[x];
            mismatches += !same;
        }
        o.require(mismatches == 0, "all cases agree");
        o.detail << " mismatches=" << mismatches << " product_groups=" << products;
    });

    criterion(3, "factorial moment identity grid and closed forms", 120.0, [](Outcome& o) {
        int cases = 0, mismatches = 0, closed = 0;
        for (std::uint64_t p : {3, 5, 7})
            for (std::uint64_t k = 1; k <= 4; ++k)
                for (std::uint64_t m = 1; m <= 2; ++m) {
                    const std::vector<std::uint64_t> B = m == 1 ? std::vector<std::uint64_t>{1} : std::vector<std::uint64_t>{1, 2};
                    const mpz_class M = (mpz_class(1) << k) - 1;
                    for (std::uint64_t r = 1; r <= 3; ++r) {
                        ++cases;
                        const auto enumerated = factorial_moment_enum(p, k, B, r);
                        const auto rank = factorial_moment_rank(p, k, B, r).value_rank;
                        mismatches += enumerated != rank;
                        if (r == 1) closed += enumerated != oracle::ratio(m * M, p);
                        if (m == 1 && r == 2) closed += enumerated != oracle::ratio(M * (M - 1), p * p);
                    }
                }
        o.require(mismatches == 0, "rank formula equals enumeration");
        o.require(closed == 0, "closed forms");
        o.detail << " cases=" << cases << " mismatches=" << mismatches << " closed_form_failures=" << closed;
    });

    criterion(4, "E U as a sum of miss probabilities, x-symmetry", 60.0, [](Outcome& o) {
        int cases = 0, bad_sum = 0, asym = 0, bad_oracle = 0;
        for (std::uint64_t p : {2, 3, 5, 7, 11})
            for (std::uint64_t k = 1; k <= 4; ++k) {
                ++cases;
                const auto s = second_moment_summary(p, k);
                mpq_class sum = 0;
                const auto first = miss_probability_exact(p, k, 1);
                for (std::uint64_t x = 1; x < p; ++x) {
                    const auto px = miss_probability_exact(p, k, x);
                    sum += px;
                    asym += px != first || s.miss_probability[x] != px;
                }
                bad_sum += s.EU != sum;
                const auto [eu, euu] = oracle::missed_moments(p, k);
                bad_oracle += s.EU != eu || s.EUU != euu;
            }
        o.require(bad_sum == 0, "E U = sum_x P(X_x = 0)");
        o.require(asym == 0, "P(X_x = 0) independent of x");
        o.require(bad_oracle == 0, "E U and E U(U-1) match enumeration");
        o.detail << " cases=" << cases << " sum_failures=" << bad_sum << " asymmetric=" << asym
                 << " oracle_failures=" << bad_oracle;
    });

    criterion(5, "rank, support, lattice and census lemmas (r, k <= 4)", 300.0, [](Outcome& o) {
        const std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13};
        const auto rank = verify_rank_stability(4, 4, primes);
        o.require(rank.exhaustive && rank.violations == 0, "rank stability");
        const auto witness = IncidenceMatrix::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
        o.require(rank_over_q(witness) == 3 && rank_over_fp(witness, 2) == 2, "determinant-2 witness drops at p=2");
        o.require(rank.drops.at(2) > 0, "drops recorded at p=2");

        const auto sparse = verify_no_sparse(4, 4);
        o.require(sparse.violations == 0 && sparse.min_support >= kSupportAtLeast3, "no sparse orthogonal vector");

        const auto lattice = verify_34(4, 4);
        const auto tight = verify_34(3, 2);
        o.require(lattice.violations == 0, "3/4 bound");
        o.require(lattice.max_ratio == 1 && tight.max_ratio == 1, "ratio 1 attained");

        std::uint64_t census_cases = 0, census_violations = 0;
        for (std::uint64_t p : {3, 5, 7})
            for (std::uint64_t k = 1; k <= 4; ++k)
                for (std::uint64_t m = 1; m <= 2; ++m)
                    for (std::uint64_t r = 1; r <= 4; ++r) {
                        ++census_cases;
                        census_violations += tuple_census(p, k, m, r).bound_violations;
                    }
        o.require(census_violations == 0, "tuple census bound");
        o.detail << " matrices=" << rank.matrices << " rank_violations=" << rank.violations
                 << " drops_at_2=" << rank.drops.at(2) << " sparse_tuples=" << sparse.tuples
                 << " sparse_violations=" << sparse.violations << " lattice_tuples=" << lattice.tuples
                 << " lattice_violations=" << lattice.violations << " max_ratio=" << lattice.max_ratio.get_str()
                 << " census_cases=" << census_cases << " census_violations=" << census_violations;
    });

    criterion(6, "Bonferroni bracketing and Poisson truncation", 1.0, [](Outcome& o) {
        const std::vector<std::uint64_t> B{1};
        const std::uint64_t M = 3;
        const auto mom = factorial_moments_enum(5, 2, B, M + 1);
        const auto exact = zero_probability_enum(5, 2, B);
        o.require(exact == oracle::zero_probability(5, 2, B), "exact P(X_B = 0)");
        for (std::uint64_t R = 0; R <= M; ++R) {
            const auto part = bonferroni_partial(mom, R);
            mpq_class err = part.estimate - exact;
            o.require(R % 2 == 0 ? err >= 0 : err <= 0, "alternating side at R=" + std::to_string(R));
            if (err < 0) err = -err;
            o.require(err <= part.remainder_bound, "remainder bound at R=" + std::to_string(R));
        }
        o.require(bonferroni_partial(mom, M).estimate == exact, "finite inclusion-exclusion at R=M");

        std::vector<mpq_class> poisson(7, mpq_class(1));
        const auto five = bonferroni_partial(poisson, 5);
        const double gap = std::abs(to_double(five.estimate) - std::exp(-1.0));
        o.require(gap <= 1.0 / 720 + 1e-12, "|estimate - e^-1| <= 1/720");
        o.detail << " P(X_B=0)=" << exact.get_str() << " poisson_R5=" << five.estimate.get_str() << " gap=" << gap;
    });

    criterion(7, "coupling gap within twice the collision bound", 60.0, [](Outcome& o) {
        for (std::uint64_t n : {5, 7, 11}) {
            const auto c = coupling_gap_exact(GroupSpec::cyclic(n), 3);
            o.require(c.bound == 2 * collision_bound(3, n), "bound is 2 * collision bound");
            o.require(c.gap <= c.bound, "gap <= bound for N=" + std::to_string(n));
            o.detail << " N=" << n << ":gap=" << c.gap.get_str() << ",bound=" << c.bound.get_str();
        }
    });

    criterion(8, "Monte Carlo calibration and thread invariance", 120.0, [](Outcome& o) {
        const auto g = GroupSpec::cyclic(5);
        const auto one = cover_prob_mc(g, 3, SampleModel::Subset, 100'000, 20261016, McOptions{0.999, Threads{1}});
        const auto eight = cover_prob_mc(g, 3, SampleModel::Subset, 100'000, 20261016, McOptions{0.999, Threads{8}});
        o.require(one.ci_low <= 0.4 && 0.4 <= one.ci_high, "99.9% Wilson interval contains 2/5");
        o.require(one.successes == eight.successes && one.p_hat == eight.p_hat && one.ci_low == eight.ci_low
                      && one.ci_high == eight.ci_high,
                  "8 workers identical to 1");
        o.detail << " p_hat=" << one.p_hat.get_str() << " ci=[" << std::setprecision(5) << one.ci_low << ", "
                 << one.ci_high << "] |p_hat-0.4|=" << std::abs(to_double(one.p_hat) - 0.4);
    });

    criterion(9, "desk-scale f-hat corridor for 1031, 16411, 131101", 600.0, [](Outcome& o) {
        const std::vector<std::uint64_t> primes{1031, 16411, 131101};
        FHatOptions opts;
        opts.threads = Threads{1};
        const auto entries = scan_second_order(primes, {}, 10'000, 20261016, opts);
        for (const auto& e : entries) {
            o.require(e.error.empty() && e.result.has_value(), "estimate for p=" + std::to_string(e.p));
            if (!e.result) continue;
            const double lp = std::log2(static_cast<double>(e.p));
            const double upper = lp + std::log(std::log(static_cast<double>(e.p))) / std::log(2.0) + 10;
            const auto f = e.result->f_hat;
            o.require(f >= std::ceil(lp) && static_cast<double>(f) <= upper, "corridor for p=" + std::to_string(e.p));
            o.detail << " p=" << e.p << ":f=" << f << ",second_order=" << std::setprecision(4) << e.result->second_order;
        }
    });

    criterion(10, "zero law below capacity (100 random cases)", 60.0, [](Outcome& o) {
        gen::Rng rng(1016);
        int cases = 0, nonzero = 0, evaluated = 0;
        while (cases < 100) {
            const GroupSpec g(gen::factors(rng, 1'000'000));
            if (g.order() < 3) continue;
            std::uint64_t kmax = 0;
            while ((std::uint64_t{1} << (kmax + 1)) < g.order()) ++kmax;
            const auto k = gen::uniform(rng, 0, kmax);
            const auto model = gen::uniform(rng, 0, 1) ? SampleModel::Iid : SampleModel::Subset;
            const auto est = cover_prob_mc(g, k, model, 1000, cases);
            ++cases;
            nonzero += est.successes != 0;
            evaluated += est.coverage_evaluations > est.trials;
            o.require(est.coverage_evaluations == 0, "coverage path skipped");
        }
        o.require(nonzero == 0, "zero successes");
        o.require(evaluated == 0, "at most one coverage evaluation per trial");
        o.detail << " cases=" << cases << " nonzero=" << nonzero;
    });

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
