#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "subsum/parallel.hpp"

namespace subsum {

/// r x k matrix with 0/1 entries. Row j is the indicator vector of a subset S_j of [k].
class IncidenceMatrix {
public:
    IncidenceMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> entries);

    /// Rows given as k-bit masks; bit t of masks[j] is entry (j, t).
    static IncidenceMatrix from_masks(std::span<const std::uint64_t> masks, std::size_t cols);
    static IncidenceMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint8_t operator()(std::size_t j, std::size_t t) const { return entries_[j * cols_ + t]; }
    std::span<const std::uint8_t> entries() const { return entries_; }

    bool rows_distinct() const { return rows_distinct_; }
    bool rows_nonzero() const { return rows_nonzero_; }

    IncidenceMatrix transposed() const;

private:
    std::size_t rows_, cols_;
    std::vector<std::uint8_t> entries_;
    bool rows_distinct_ = true;
    bool rows_nonzero_ = true;
};

/// Rank over Q by fraction-free (Bareiss) elimination on integers.
std::size_t rank_over_q(const IncidenceMatrix& v);

/// Rank of v mod p. Throws DomainError unless p is a prime below 2^32.
std::size_t rank_over_fp(const IncidenceMatrix& v, std::uint64_t p);

struct RankProfile {
    std::size_t rank_q = 0;
    std::size_t rank_fp = 0;
    std::uint64_t prime = 0;
    mpz_class hadamard_bound;  // ceil(s^(s/2)), s = rank_q
};

/// ceil(s^(s/2)).
mpz_class hadamard_bound(std::size_t s);

RankProfile rank_profile(const IncidenceMatrix& v, std::uint64_t p);

/// True iff a . v(S_j) = b_j (mod p) is solvable for all j, i.e. rank(V) = rank([V | b]) over F_p.
bool solve_consistency(const IncidenceMatrix& v, std::span<const std::uint64_t> b, std::uint64_t p);

/// Smallest support of a nonzero vector in Col(V)^perp, capped: 1 (a zero row), 2 (two
/// proportional rows), or kSupportAtLeast3.
inline constexpr int kSupportAtLeast3 = 3;
int orthogonal_min_support(const IncidenceMatrix& v);

/// Integer basis of the left null space {y : y^T V = 0} over Q.
std::vector<std::vector<std::int64_t>> left_null_space(const IncidenceMatrix& v);

inline constexpr std::size_t kMaxLatticeRows = 24;

/// |Col_Q(V) intersect {0,1}^r|. Tests every 0/1 vector against a left null-space basis
/// (OpenMP over candidates). Throws CapacityError for r > kMaxLatticeRows.
std::uint64_t lattice_points_in_colspace(const IncidenceMatrix& v, Threads threads = {});

struct RankStabilityReport {
    std::uint64_t rmax = 0, kmax = 0;
    std::vector<std::uint64_t> primes;
    std::uint64_t matrices = 0;                        // distinct matrices examined
    bool exhaustive = true;
    std::map<std::uint64_t, std::uint64_t> asserted;   // prime -> matrices where p > r^(r/2) forced equality
    std::map<std::uint64_t, std::uint64_t> drops;      // prime -> matrices with rank_fp < rank_q
    std::uint64_t violations = 0;                      // drop where equality was forced, or rank_fp > rank_q
    std::optional<IncidenceMatrix> first_drop;
    std::uint64_t first_drop_prime = 0;
};

/// Exhaustive over every r x k 0/1 matrix with r <= rmax, k <= kmax when rmax, kmax <= 5; otherwise
/// `samples` random matrices per shape drawn from `seed`.
RankStabilityReport verify_rank_stability(std::uint64_t rmax, std::uint64_t kmax, std::span<const std::uint64_t> primes,
                                          std::uint64_t samples = 2000, std::uint64_t seed = 1, Threads threads = {});

struct NoSparseReport {
    std::uint64_t rmax = 0, kmax = 0;
    std::uint64_t tuples = 0;
    int min_support = kSupportAtLeast3;
    std::uint64_t violations = 0;
};

/// orthogonal_min_support over all ordered r-tuples of distinct nonzero k-bit rows, r <= rmax, k <= kmax.
NoSparseReport verify_no_sparse(std::uint64_t rmax, std::uint64_t kmax, Threads threads = {});

struct LatticeBoundReport {
    std::uint64_t rmax = 0, kmax = 0;
    std::uint64_t tuples = 0;         // tuples with distinct nonzero rows
    std::uint64_t rank_deficient = 0; // those with d < r (where the bound is asserted)
    std::uint64_t violations = 0;
    mpq_class max_ratio = 0;          // max |W cap {0,1}^r| / ((3/4) 2^d)
    std::vector<std::uint64_t> max_ratio_rows;
    std::uint64_t max_ratio_cols = 0;
};

/// The (3/4) 2^d bound over every ordered tuple of distinct nonzero rows with d < r.
LatticeBoundReport verify_34(std::uint64_t rmax, std::uint64_t kmax, Threads threads = {});

/// Calls f(masks) for every ordered r-tuple of distinct masks in [1, 2^k).
template <class F>
void for_each_distinct_tuple(std::size_t r, std::size_t k, F&& f);

}  // namespace subsum

#include "subsum/detail/tuples.hpp"
