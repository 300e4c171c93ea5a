#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace subsum {

using u128 = unsigned __int128;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

mpz_class to_mpz(u128 v);
mpz_class to_mpz(std::uint64_t v);
std::string to_string(u128 v);

/// C(n, k) exactly.
mpz_class binomial(std::uint64_t n, std::uint64_t k);

/// (y)_r = y (y-1) ... (y-r+1); zero once a factor hits zero.
mpz_class falling_factorial(const mpz_class& y, std::uint64_t r);

/// base^exp, exact.
mpz_class pow_mpz(std::uint64_t base, std::uint64_t exp);

/// ceil(log2(n)) for n >= 1.
unsigned ceil_log2(std::uint64_t n);

/// True iff 2^k < n, i.e. a k-element multiset cannot have n distinct subset sums.
inline bool below_capacity(unsigned k, std::uint64_t n) {
    return k < 64 && (std::uint64_t{1} << k) < n;
}

/// "num/den" (or "num" when the denominator is 1), as mpq_class::get_str renders it.
inline std::string rational_string(const mpq_class& q) { return q.get_str(); }

double to_double(const mpq_class& q);

}  // namespace subsum
