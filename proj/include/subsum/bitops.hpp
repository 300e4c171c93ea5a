#pragma once

#include <bit>
#include <cstdint>
#include <span>

// Word-parallel helpers over little-endian bit arrays (bit i lives in word i/64, position i%64).

namespace subsum::bits {

using Word = std::uint64_t;
inline constexpr std::uint64_t kWordBits = 64;

constexpr std::size_t words_for(std::uint64_t nbits) { return static_cast<std::size_t>((nbits + 63) / 64); }

inline bool test(std::span<const Word> w, std::uint64_t i) { return (w[i >> 6] >> (i & 63)) & 1u; }
inline void set(std::span<Word> w, std::uint64_t i) { w[i >> 6] |= Word{1} << (i & 63); }

inline std::uint64_t popcount(std::span<const Word> w) {
    std::uint64_t c = 0;
    for (auto x : w) c += static_cast<std::uint64_t>(std::popcount(x));
    return c;
}

/// n (1..64) bits starting at pos, returned in the low bits.
inline Word read(std::span<const Word> w, std::uint64_t pos, unsigned n) {
    auto idx = pos >> 6;
    auto off = static_cast<unsigned>(pos & 63);
    Word v = w[idx] >> off;
    if (off != 0 && off + n > 64) v |= w[idx + 1] << (64 - off);
    if (n < 64) v &= (Word{1} << n) - 1;
    return v;
}

/// ORs the low n bits of v into positions [pos, pos+n). v must be masked to n bits.
inline void or_into(std::span<Word> w, std::uint64_t pos, Word v, unsigned n) {
    auto idx = pos >> 6;
    auto off = static_cast<unsigned>(pos & 63);
    w[idx] |= v << off;
    if (off != 0 && off + n > 64) w[idx + 1] |= v >> (64 - off);
}

/// Bits [base, base+len) of dst |= the same block of src rotated up by shift (0 <= shift < len):
/// dst[base + (j + shift) % len] |= src[base + j].
inline void or_rotated_block(std::span<Word> dst, std::span<const Word> src, std::uint64_t base, std::uint64_t len,
                             std::uint64_t shift) {
    for (std::uint64_t q = 0; q < len; q += kWordBits) {
        auto n = static_cast<unsigned>(len - q < kWordBits ? len - q : kWordBits);
        auto from = q >= shift ? q - shift : q + len - shift;
        Word v;
        if (from + n <= len) {
            v = read(src, base + from, n);
        } else {
            auto head = static_cast<unsigned>(len - from);
            v = read(src, base + from, head) | (read(src, base, n - head) << head);
        }
        or_into(dst, base + q, v, n);
    }
}

}  // namespace subsum::bits
