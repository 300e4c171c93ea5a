#include "subsum/numeric.hpp"

#include <algorithm>
#include <bit>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace subsum {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % q == 0) return n == q;
    }
    auto d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These twelve bases are a proven deterministic set below 3.3e24.
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        auto x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

mpz_class to_mpz(std::uint64_t v) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    return z;
}

mpz_class to_mpz(u128 v) {
    std::uint64_t parts[2] = {static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(v >> 64)};
    mpz_class z;
    mpz_import(z.get_mpz_t(), 2, -1, sizeof parts[0], 0, 0, parts);
    return z;
}

std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

mpz_class binomial(std::uint64_t n, std::uint64_t k) {
    mpz_class r;
    if (k > n) return 0;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

mpz_class falling_factorial(const mpz_class& y, std::uint64_t r) {
    mpz_class out = 1;
    for (std::uint64_t j = 0; j < r; ++j) {
        mpz_class f = y - to_mpz(j);
        if (f == 0) return 0;
        out *= f;
    }
    return out;
}

mpz_class pow_mpz(std::uint64_t base, std::uint64_t exp) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), to_mpz(base).get_mpz_t(), exp);
    return r;
}

unsigned ceil_log2(std::uint64_t n) {
    return n <= 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1));
}

// mpq_get_d truncates; go through a wider binary float so the result is rounded to nearest.
double to_double(const mpq_class& q) {
    using Wide = boost::multiprecision::cpp_bin_float_50;
    return (Wide(q.get_num().get_str()) / Wide(q.get_den().get_str())).convert_to<double>();
}

}  // namespace subsum
