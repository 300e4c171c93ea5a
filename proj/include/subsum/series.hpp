#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gmpxx.h>

namespace subsum {

/// Working precision for logarithms and exponentials (50 decimal digits).
using ExtFloat = boost::multiprecision::cpp_bin_float_50;
/// Used to re-check floors that land within 1e-9 of an integer.
using WideFloat = boost::multiprecision::cpp_bin_float_100;

/// k = floor(log2 p + c log log p) and the quantities derived from it.
struct KChoice {
    std::uint64_t p = 0;
    double c = 0;
    std::uint64_t k = 0;
    ExtFloat theta;       // fractional part dropped by the floor, in [0, 1)
    mpz_class M;          // 2^k - 1
    mpq_class lambda;     // M / p
    double alpha = 0;     // c log 2
    bool outside_default_range = false;  // c >= 1/(2 log 2)
    bool refined = false;                // floor re-evaluated at WideFloat precision
};

/// Throws DomainError for p < 5, non-prime p, or c <= 0.
KChoice choose_k(std::uint64_t p, double c);

struct TruncationPlan {
    double beta = 0;
    std::uint64_t R = 0;  // floor((log p)^beta)
};

/// Default beta is the midpoint (alpha + 1/2) / 2. Throws DomainError unless alpha < beta < 1/2.
TruncationPlan truncation_plan(const KChoice& kc, std::optional<double> beta = std::nullopt);

struct FallingFactorialRatio {
    mpq_class ratio;       // (mM)_r / p^r
    mpq_class correction;  // (mM)_r / (mM)^r
};

/// m in {1, 2}. A falling factorial with mM < r is zero, and so is the result.
FallingFactorialRatio falling_factorial_ratio(unsigned m, const mpz_class& M, std::uint64_t r, std::uint64_t p);

struct BonferroniPartial {
    mpq_class estimate;         // sum_{r<=R} (-1)^r m_r / r!
    mpq_class remainder_bound;  // m_{R+1} / (R+1)!
};

/// moments[r] = E[(Z)_r], moments[0] = 1. Needs moments.size() >= R + 2 (ArityError otherwise).
BonferroniPartial bonferroni_partial(std::span<const mpq_class> moments, std::uint64_t R);

/// e^{-m lambda}.
ExtFloat poisson_miss_prediction(const mpq_class& lambda, unsigned m);
ExtFloat poisson_miss_prediction(const KChoice& kc, unsigned m);

ExtFloat to_ext(const mpq_class& q);

}  // namespace subsum
