#include "subsum/moments.hpp"

#include <algorithm>
#include <bit>

#include <omp.h>

#include "subsum/coverage.hpp"
#include "subsum/errors.hpp"
#include "subsum/linalg01.hpp"
#include "subsum/numeric.hpp"

namespace subsum {

namespace {

void check_prime(std::uint64_t p) {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    if (p >= (std::uint64_t{1} << 32)) throw CapacityError("p must be below 2^32");
}

void check_targets(std::uint64_t p, std::span<const std::uint64_t> B) {
    check_prime(p);
    if (B.size() != 1 && B.size() != 2) throw DomainError("|B| must be 1 or 2");
    for (auto b : B) {
        if (b == 0) throw DomainError("B must avoid 0 (targets are nonzero residues)");
        if (b >= p) throw DomainError("target " + std::to_string(b) + " is not a residue mod " + std::to_string(p));
    }
    if (B.size() == 2 && B[0] == B[1]) throw DomainError("B must hold distinct residues");
}

std::uint64_t assignment_count(std::uint64_t p, std::uint64_t k, const EnumLimits& limits) {
    if (k >= 64 || pow_mpz(p, k) > to_mpz(limits.max_assignments))
        throw CapacityError("p^k = " + std::to_string(p) + "^" + std::to_string(k) + " exceeds the enumeration gate "
                            + std::to_string(limits.max_assignments));
    std::uint64_t n = 1;
    for (std::uint64_t i = 0; i < k; ++i) n *= p;
    return n;
}

void decode_assignment(std::uint64_t idx, std::uint64_t p, std::vector<Element>& a) {
    for (auto& x : a) {
        x = Element{idx % p};
        idx /= p;
    }
}

// Sums of all 2^k index subsets; sums[S] for S as a k-bit mask.
void all_subset_sums(const std::vector<Element>& a, std::uint64_t p, std::vector<std::uint64_t>& sums) {
    sums[0] = 0;
    for (std::uint64_t s = 1; s < sums.size(); ++s) {
        auto low = static_cast<std::size_t>(std::countr_zero(s));
        auto v = sums[s & (s - 1)] + a[low].index;
        sums[s] = v >= p ? v - p : v;
    }
}

u128 hits_of(const MultiplicityTable& t, std::span<const std::uint64_t> B) {
    u128 x = 0;
    for (auto b : B) x += t.nonempty_hits(Element{b});
    return x;
}

struct RankClasses {
    std::vector<std::uint64_t> consistent_by_rank;  // index d
    std::uint64_t inconsistent = 0;
    std::uint64_t full_rank = 0;
    std::uint64_t q_disagree = 0;
};

mpz_class tuple_total(std::uint64_t m, std::uint64_t k, std::uint64_t r) {
    mpz_class M = pow_mpz(2, k) - 1;
    return falling_factorial(M * m, r);
}

// Classifies every ordered r-tuple of distinct pairs (S_j, b_j), S_j a nonempty k-bit mask, b_j in B.
RankClasses classify_tuples(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> B, std::uint64_t r,
                            Threads threads) {
    const std::uint64_t m = B.size();
    const std::uint64_t pairs = ((std::uint64_t{1} << k) - 1) * m;
    RankClasses out;
    out.consistent_by_rank.assign(r + 1, 0);
    if (r == 0 || r > pairs) return out;
#pragma omp parallel num_threads(threads.resolve())
    {
        RankClasses mine;
        mine.consistent_by_rank.assign(r + 1, 0);
        std::vector<std::uint64_t> chosen(r), masks(r), rhs(r);
        std::vector<bool> used(pairs, false);
        auto leaf = [&] {
            for (std::uint64_t j = 0; j < r; ++j) {
                masks[j] = chosen[j] / m + 1;
                rhs[j] = B[chosen[j] % m];
            }
            auto v = IncidenceMatrix::from_masks(masks, k);
            auto d = rank_over_fp(v, p);
            if (rank_over_q(v) != d) ++mine.q_disagree;
            if (d == r) ++mine.full_rank;
            if (solve_consistency(v, rhs, p)) {
                ++mine.consistent_by_rank[d];
            } else {
                ++mine.inconsistent;
            }
        };
        auto walk = [&](auto&& self, std::uint64_t depth) -> void {
            if (depth == r) {
                leaf();
                return;
            }
            for (std::uint64_t q = 0; q < pairs; ++q) {
                if (used[q]) continue;
                used[q] = true;
                chosen[depth] = q;
                self(self, depth + 1);
                used[q] = false;
            }
        };
#pragma omp for schedule(dynamic, 1)
        for (std::uint64_t first = 0; first < pairs; ++first) {
            used[first] = true;
            chosen[0] = first;
            walk(walk, 1);
            used[first] = false;
        }
#pragma omp critical
        {
            for (std::uint64_t d = 0; d <= r; ++d) out.consistent_by_rank[d] += mine.consistent_by_rank[d];
            out.inconsistent += mine.inconsistent;
            out.full_rank += mine.full_rank;
            out.q_disagree += mine.q_disagree;
        }
    }
    return out;
}

void check_tuple_gate(std::uint64_t m, std::uint64_t k, std::uint64_t r, const EnumLimits& limits) {
    if (k >= 40 || tuple_total(m, k, r) > to_mpz(limits.max_tuples))
        throw CapacityError("(mM)_r tuples exceed the enumeration gate " + std::to_string(limits.max_tuples));
}

}  // namespace

std::vector<mpq_class> factorial_moments_enum(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> B,
                                              std::uint64_t rmax, const EnumLimits& limits, Threads threads) {
    check_targets(p, B);
    const auto total = assignment_count(p, k, limits);
    const auto g = GroupSpec::cyclic(p);
    std::vector<mpz_class> sums(rmax + 1, 0);
#pragma omp parallel num_threads(threads.resolve())
    {
        std::vector<mpz_class> mine(rmax + 1, 0);
        std::vector<Element> a(k);
        mpz_class ff;
#pragma omp for schedule(static)
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            decode_assignment(idx, p, a);
            const auto x = hits_of(sigma_counts(g, a), B);
            ff = 1;
            mine[0] += 1;
            for (std::uint64_t r = 1; r <= rmax; ++r) {
                if (x < r) break;  // (x)_r = 0 from here on
                ff *= to_mpz(x - (r - 1));
                mine[r] += ff;
            }
        }
#pragma omp critical
        for (std::uint64_t r = 0; r <= rmax; ++r) sums[r] += mine[r];
    }
    std::vector<mpq_class> out;
    const mpz_class denom = to_mpz(total);
    for (auto& s : sums) {
        mpq_class q(s, denom);
        q.canonicalize();
        out.push_back(q);
    }
    return out;
}

mpq_class factorial_moment_enum(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> B, std::uint64_t r,
                                const EnumLimits& limits, Threads threads) {
    if (r < 1) throw DomainError("factorial moment order must be >= 1");
    return factorial_moments_enum(p, k, B, r, limits, threads)[r];
}

MomentReport factorial_moment_rank(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> B, std::uint64_t r,
                                   const EnumLimits& limits, Threads threads) {
    check_targets(p, B);
    if (r < 1) throw DomainError("factorial moment order must be >= 1");
    const std::uint64_t m = B.size();
    check_tuple_gate(m, k, r, limits);
    MomentReport rep;
    rep.p = p;
    rep.k = k;
    rep.r = r;
    rep.B.assign(B.begin(), B.end());
    rep.total_tuples = tuple_total(m, k, r);

    auto classes = classify_tuples(p, k, B, r, threads);
    rep.value_rank = 0;
    for (std::uint64_t d = 1; d <= r; ++d) {
        rep.n_rd[d] = to_mpz(classes.consistent_by_rank[d]);
        rep.value_rank += mpq_class(rep.n_rd[d], pow_mpz(p, d));
    }
    rep.value_rank.canonicalize();
    rep.inconsistent = to_mpz(classes.inconsistent);
    rep.full_rank = to_mpz(classes.full_rank);
    rep.q_rank_disagreements = to_mpz(classes.q_disagree);

    if (k < 64 && pow_mpz(p, k) <= to_mpz(limits.max_assignments))
        rep.value_exact = factorial_moment_enum(p, k, B, r, limits, threads);

    mpq_class base(pow_mpz(2, k) - 1, to_mpz(p));
    base *= m;
    base.canonicalize();
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), r);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), r);
    rep.poisson_ref = mpq_class(num, den);
    rep.poisson_ref.canonicalize();
    const auto& value = rep.value_exact ? *rep.value_exact : rep.value_rank;
    rep.rel_error = abs(value - rep.poisson_ref) / rep.poisson_ref;
    return rep;
}

TupleCensus tuple_census(std::uint64_t p, std::uint64_t k, std::uint64_t m, std::uint64_t r, const EnumLimits& limits,
                         Threads threads) {
    check_prime(p);
    if (m != 1 && m != 2) throw DomainError("m must be 1 or 2");
    if (m == 2 && p < 3) throw DomainError("|B| = 2 needs p >= 3");
    if (r < 1) throw DomainError("census order r must be >= 1");
    check_tuple_gate(m, k, r, limits);
    if (m == 2 && tuple_total(m, k, r) * (p - 2) > to_mpz(limits.max_tuples))
        throw CapacityError("census over all B = {1,t} exceeds the tuple gate");

    TupleCensus c;
    c.p = p;
    c.k = k;
    c.m = m;
    c.r = r;
    c.total_tuples = tuple_total(m, k, r);

    // T_{r,d}: distinct nonempty subsets, rank over Q.
    const std::uint64_t limit = std::uint64_t{1} << k;
    std::vector<std::uint64_t> t(r + 1, 0);
#pragma omp parallel num_threads(threads.resolve())
    {
        std::vector<std::uint64_t> mine(r + 1, 0);
#pragma omp for schedule(dynamic, 1)
        for (std::uint64_t first = 1; first < limit; ++first)
            for_each_distinct_tuple_with_first(r, k, first, [&](const std::vector<std::uint64_t>& masks) {
                ++mine[rank_over_q(IncidenceMatrix::from_masks(masks, k))];
            });
#pragma omp critical
        for (std::uint64_t d = 0; d <= r; ++d) t[d] += mine[d];
    }
    for (std::uint64_t d = 1; d <= r; ++d) {
        c.t_rd[d] = to_mpz(t[d]);
        if (d < r) {
            // T <= 2^{r^2} (3/4 * 2^d)^k  <=>  T 4^k <= 2^{r^2} 3^k 2^{dk}
            mpz_class rhs = pow_mpz(2, r * r + d * k) * pow_mpz(3, k);
            mpz_class four_k = pow_mpz(4, k);
            c.t_bound[d] = rhs / four_k;
            if (c.t_rd[d] * four_k > rhs) ++c.bound_violations;
        }
    }

    c.canonical_B = m == 1 ? std::vector<std::uint64_t>{1} : std::vector<std::uint64_t>{1, 2};
    auto canonical = classify_tuples(p, k, c.canonical_B, r, threads);
    for (std::uint64_t d = 1; d <= r; ++d) {
        c.n_rd_canonical[d] = to_mpz(canonical.consistent_by_rank[d]);
        c.n_rd[d] = c.n_rd_canonical[d];
    }
    if (m == 2) {
        // Scaling by a unit maps {x, y} to {1, y/x}, so {1, t} for t = 2..p-1 covers every B.
        for (std::uint64_t tt = 3; tt < p; ++tt) {
            const std::uint64_t b[2] = {1, tt};
            auto cls = classify_tuples(p, k, b, r, threads);
            for (std::uint64_t d = 1; d <= r; ++d) c.n_rd[d] = std::max(c.n_rd[d], to_mpz(cls.consistent_by_rank[d]));
        }
    }
    c.full_rank_fraction = c.total_tuples == 0 ? mpq_class(0) : mpq_class(to_mpz(canonical.full_rank), c.total_tuples);
    c.full_rank_fraction.canonicalize();
    return c;
}

SecondMomentSummary second_moment_summary(std::uint64_t p, std::uint64_t k, const EnumLimits& limits, Threads threads) {
    check_prime(p);
    const auto total = assignment_count(p, k, limits);
    const auto g = GroupSpec::cyclic(p);
    std::vector<std::uint64_t> misses(p, 0);
    u128 sum_u = 0, sum_uu = 0;
#pragma omp parallel num_threads(threads.resolve())
    {
        std::vector<std::uint64_t> mine(p, 0);
        u128 su = 0, suu = 0;
        std::vector<Element> a(k);
#pragma omp for schedule(static)
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            decode_assignment(idx, p, a);
            auto table = sigma_counts(g, a);
            std::uint64_t u = 0;
            for (std::uint64_t x = 1; x < p; ++x) {
                if (table.nonempty_hits(Element{x}) == 0) {
                    ++u;
                    ++mine[x];
                }
            }
            su += u;
            suu += static_cast<u128>(u) * (u == 0 ? 0 : u - 1);
        }
#pragma omp critical
        {
            for (std::uint64_t x = 0; x < p; ++x) misses[x] += mine[x];
            sum_u += su;
            sum_uu += suu;
        }
    }
    SecondMomentSummary s;
    s.p = p;
    s.k = k;
    const mpz_class denom = to_mpz(total);
    s.EU = mpq_class(to_mpz(sum_u), denom);
    s.EU.canonicalize();
    s.EUU = mpq_class(to_mpz(sum_uu), denom);
    s.EUU.canonicalize();
    s.ratio = s.EU == 0 ? mpq_class(0) : mpq_class(s.EUU / (s.EU * s.EU));
    s.miss_probability.resize(p);
    for (std::uint64_t x = 0; x < p; ++x) {
        s.miss_probability[x] = mpq_class(to_mpz(x == 0 ? 0 : misses[x]), denom);
        s.miss_probability[x].canonicalize();
    }
    return s;
}

namespace {

mpq_class avoid_probability(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> targets,
                            const EnumLimits& limits) {
    check_prime(p);
    for (auto x : targets)
        if (x == 0 || x >= p) throw DomainError("targets must be nonzero residues");
    const auto total = assignment_count(p, k, limits);
    if (k > 26) throw CapacityError("direct subset enumeration needs k <= 26");
    std::uint64_t avoided = 0;
#pragma omp parallel reduction(+ : avoided)
    {
        std::vector<Element> a(k);
        std::vector<std::uint64_t> sums(std::uint64_t{1} << k);
#pragma omp for schedule(static)
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            decode_assignment(idx, p, a);
            all_subset_sums(a, p, sums);
            bool hit = false;
            for (std::size_t s = 1; s < sums.size() && !hit; ++s)
                hit = std::find(targets.begin(), targets.end(), sums[s]) != targets.end();
            if (!hit) ++avoided;
        }
    }
    mpq_class q(to_mpz(avoided), to_mpz(total));
    q.canonicalize();
    return q;
}

}  // namespace

mpq_class miss_probability_exact(std::uint64_t p, std::uint64_t k, std::uint64_t x, const EnumLimits& limits) {
    const std::uint64_t t[1] = {x};
    return avoid_probability(p, k, t, limits);
}

mpq_class joint_miss_probability_exact(std::uint64_t p, std::uint64_t k, std::uint64_t x, std::uint64_t y,
                                       const EnumLimits& limits) {
    if (x == y) throw DomainError("joint miss probability needs x != y");
    const std::uint64_t t[2] = {x, y};
    return avoid_probability(p, k, t, limits);
}

mpq_class zero_probability_enum(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> B,
                                const EnumLimits& limits) {
    check_targets(p, B);
    return avoid_probability(p, k, B, limits);
}

}  // namespace subsum
