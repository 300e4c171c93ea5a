#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "subsum/exact_cover.hpp"
#include "subsum/parallel.hpp"

namespace subsum {

/// E[(X_B)_r] over all p^k assignments a in F_p^k, X_B = sum_{x in B} X_x from sigma_counts.
/// B must hold 1 or 2 distinct nonzero residues mod a prime p.
mpq_class factorial_moment_enum(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> B, std::uint64_t r,
                                const EnumLimits& limits = {}, Threads threads = {});

struct MomentReport {
    std::uint64_t p = 0, k = 0, r = 0;
    std::vector<std::uint64_t> B;
    mpz_class total_tuples;                  // (mM)_r ordered tuples of distinct (S_j, b_j)
    std::map<std::uint64_t, mpz_class> n_rd; // d -> consistent tuples with F_p rank d
    mpz_class inconsistent;
    mpz_class full_rank;                     // tuples with rank r (always consistent)
    mpz_class q_rank_disagreements;          // tuples whose Q rank differs from the F_p rank
    mpq_class value_rank;                    // sum_d N_{r,d} / p^d
    std::optional<mpq_class> value_exact;    // from factorial_moment_enum when its gate allows
    mpq_class poisson_ref;                   // (m M / p)^r
    mpq_class rel_error;                     // |value - poisson_ref| / poisson_ref

    bool identity_holds() const { return !value_exact || *value_exact == value_rank; }
};

/// Rank decomposition of E[(X_B)_r], cross-checked against factorial_moment_enum when both gates allow.
MomentReport factorial_moment_rank(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> B, std::uint64_t r,
                                   const EnumLimits& limits = {}, Threads threads = {});

struct TupleCensus {
    std::uint64_t p = 0, k = 0, m = 0, r = 0;
    mpz_class total_tuples;                        // (mM)_r
    std::map<std::uint64_t, mpz_class> t_rd;       // d -> T_{r,d}, distinct subsets, Q rank
    std::map<std::uint64_t, mpz_class> t_bound;    // d < r -> 2^{r^2} ((3/4) 2^d)^k, rounded down
    std::uint64_t bound_violations = 0;
    std::map<std::uint64_t, mpz_class> n_rd;       // d -> max over B of N_{r,d}(B)
    std::vector<std::uint64_t> canonical_B;        // {1} or {1,2}
    std::map<std::uint64_t, mpz_class> n_rd_canonical;
    mpq_class full_rank_fraction;                  // #{rank r in T_r(canonical B)} / (mM)_r
};

TupleCensus tuple_census(std::uint64_t p, std::uint64_t k, std::uint64_t m, std::uint64_t r, const EnumLimits& limits = {},
                         Threads threads = {});

struct SecondMomentSummary {
    std::uint64_t p = 0, k = 0;
    mpq_class EU;                          // E[U]
    mpq_class EUU;                         // E[U(U-1)]
    mpq_class ratio;                       // E[U(U-1)] / (E U)^2
    std::vector<mpq_class> miss_probability; // index x: P(X_x = 0); entry 0 unused (zero)
};

SecondMomentSummary second_moment_summary(std::uint64_t p, std::uint64_t k, const EnumLimits& limits = {},
                                          Threads threads = {});

/// P(X_x = 0) alone, by its own enumeration.
mpq_class miss_probability_exact(std::uint64_t p, std::uint64_t k, std::uint64_t x, const EnumLimits& limits = {});
/// P(X_x = 0, X_y = 0), x != y.
mpq_class joint_miss_probability_exact(std::uint64_t p, std::uint64_t k, std::uint64_t x, std::uint64_t y,
                                       const EnumLimits& limits = {});

/// All moments E[(X_B)_r] for r = 0..rmax (entry 0 is 1), one enumeration pass.
std::vector<mpq_class> factorial_moments_enum(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> B,
                                              std::uint64_t rmax, const EnumLimits& limits = {}, Threads threads = {});

/// P(X_B = 0) by direct enumeration.
mpq_class zero_probability_enum(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> B,
                                const EnumLimits& limits = {});

}  // namespace subsum
