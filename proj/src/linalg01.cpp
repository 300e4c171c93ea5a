#include "subsum/linalg01.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include <omp.h>

#include "subsum/errors.hpp"
#include "subsum/numeric.hpp"
#include "subsum/sampling.hpp"

namespace subsum {

IncidenceMatrix::IncidenceMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) throw ContractError("incidence matrix entry count does not match its shape");
    for (auto e : entries_)
        if (e > 1) throw ContractError("incidence matrix entries must be 0 or 1");
    for (std::size_t j = 0; j < rows_; ++j) {
        auto row = entries_.begin() + static_cast<std::ptrdiff_t>(j * cols_);
        if (std::all_of(row, row + static_cast<std::ptrdiff_t>(cols_), [](auto e) { return e == 0; })) rows_nonzero_ = false;
        for (std::size_t i = 0; i < j && rows_distinct_; ++i) {
            auto other = entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
            if (std::equal(row, row + static_cast<std::ptrdiff_t>(cols_), other)) rows_distinct_ = false;
        }
    }
}

IncidenceMatrix IncidenceMatrix::from_masks(std::span<const std::uint64_t> masks, std::size_t cols) {
    std::vector<std::uint8_t> e(masks.size() * cols);
    for (std::size_t j = 0; j < masks.size(); ++j)
        for (std::size_t t = 0; t < cols; ++t) e[j * cols + t] = static_cast<std::uint8_t>((masks[j] >> t) & 1u);
    return IncidenceMatrix(masks.size(), cols, std::move(e));
}

IncidenceMatrix IncidenceMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    std::size_t cols = rows.size() ? rows.begin()->size() : 0;
    std::vector<std::uint8_t> e;
    for (auto& row : rows) {
        if (row.size() != cols) throw ContractError("ragged incidence matrix");
        for (int x : row) e.push_back(static_cast<std::uint8_t>(x));
    }
    return IncidenceMatrix(rows.size(), cols, std::move(e));
}

IncidenceMatrix IncidenceMatrix::transposed() const {
    std::vector<std::uint8_t> e(entries_.size());
    for (std::size_t j = 0; j < rows_; ++j)
        for (std::size_t t = 0; t < cols_; ++t) e[t * rows_ + j] = (*this)(j, t);
    return IncidenceMatrix(cols_, rows_, std::move(e));
}

namespace {

// Bareiss elimination. Every intermediate entry is a minor of the input, so for 0/1 input with
// min(r, c) <= 24 Hadamard keeps them below 24^12 < 2^63; products are taken in 128 bits.
std::size_t bareiss_rank_small(std::vector<std::int64_t> m, std::size_t r, std::size_t c) {
    std::int64_t prev = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < c && row < r; ++col) {
        std::size_t piv = row;
        while (piv < r && m[piv * c + col] == 0) ++piv;
        if (piv == r) continue;
        if (piv != row)
            for (std::size_t j = 0; j < c; ++j) std::swap(m[piv * c + j], m[row * c + j]);
        const auto pv = m[row * c + col];
        for (std::size_t i = row + 1; i < r; ++i) {
            const auto lead = m[i * c + col];
            for (std::size_t j = col + 1; j < c; ++j) {
                __int128 num = static_cast<__int128>(pv) * m[i * c + j] - static_cast<__int128>(lead) * m[row * c + j];
                m[i * c + j] = static_cast<std::int64_t>(num / prev);
            }
            m[i * c + col] = 0;
        }
        prev = pv;
        ++row;
    }
    return row;
}

std::size_t bareiss_rank_big(std::vector<mpz_class> m, std::size_t r, std::size_t c) {
    mpz_class prev = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < c && row < r; ++col) {
        std::size_t piv = row;
        while (piv < r && m[piv * c + col] == 0) ++piv;
        if (piv == r) continue;
        if (piv != row)
            for (std::size_t j = 0; j < c; ++j) std::swap(m[piv * c + j], m[row * c + j]);
        const mpz_class pv = m[row * c + col];
        for (std::size_t i = row + 1; i < r; ++i) {
            const mpz_class lead = m[i * c + col];
            for (std::size_t j = col + 1; j < c; ++j) {
                mpz_class num = pv * m[i * c + j] - lead * m[row * c + j];
                mpz_divexact(m[i * c + j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            m[i * c + col] = 0;
        }
        prev = pv;
        ++row;
    }
    return row;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    std::uint64_t r = 1, e = p - 2;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

// Entries already reduced mod p; p < 2^32 keeps every product in 64 bits.
std::size_t rank_mod_p(std::vector<std::uint64_t> m, std::size_t r, std::size_t c, std::uint64_t p) {
    std::size_t row = 0;
    for (std::size_t col = 0; col < c && row < r; ++col) {
        std::size_t piv = row;
        while (piv < r && m[piv * c + col] == 0) ++piv;
        if (piv == r) continue;
        if (piv != row)
            for (std::size_t j = 0; j < c; ++j) std::swap(m[piv * c + j], m[row * c + j]);
        const auto inv = inv_mod(m[row * c + col], p);
        for (std::size_t j = col; j < c; ++j) m[row * c + j] = m[row * c + j] * inv % p;
        for (std::size_t i = row + 1; i < r; ++i) {
            const auto f = m[i * c + col];
            if (f == 0) continue;
            for (std::size_t j = col; j < c; ++j) m[i * c + j] = (m[i * c + j] + (p - f) * m[row * c + j]) % p;
        }
        ++row;
    }
    return row;
}

void check_prime_modulus(std::uint64_t p) {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    if (p >= (std::uint64_t{1} << 32)) throw CapacityError("modulus must be below 2^32");
}

}  // namespace

std::size_t rank_over_q(const IncidenceMatrix& v) {
    const auto r = v.rows(), c = v.cols();
    if (std::min(r, c) <= 24) return bareiss_rank_small({v.entries().begin(), v.entries().end()}, r, c);
    std::vector<mpz_class> m(v.entries().begin(), v.entries().end());
    return bareiss_rank_big(std::move(m), r, c);
}

std::size_t rank_over_fp(const IncidenceMatrix& v, std::uint64_t p) {
    check_prime_modulus(p);
    return rank_mod_p({v.entries().begin(), v.entries().end()}, v.rows(), v.cols(), p);
}

mpz_class hadamard_bound(std::size_t s) {
    mpz_class pw, root, rem;
    mpz_ui_pow_ui(pw.get_mpz_t(), s, s);
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), pw.get_mpz_t());
    if (rem != 0) root += 1;
    return root;
}

RankProfile rank_profile(const IncidenceMatrix& v, std::uint64_t p) {
    RankProfile rp;
    rp.prime = p;
    rp.rank_fp = rank_over_fp(v, p);
    rp.rank_q = rank_over_q(v);
    rp.hadamard_bound = hadamard_bound(rp.rank_q);
    return rp;
}

bool solve_consistency(const IncidenceMatrix& v, std::span<const std::uint64_t> b, std::uint64_t p) {
    check_prime_modulus(p);
    if (b.size() != v.rows()) throw ContractError("right-hand side length must equal the row count");
    const auto r = v.rows(), c = v.cols();
    std::vector<std::uint64_t> plain(v.entries().begin(), v.entries().end());
    std::vector<std::uint64_t> aug(r * (c + 1));
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t t = 0; t < c; ++t) aug[j * (c + 1) + t] = v(j, t);
        aug[j * (c + 1) + c] = b[j] % p;
    }
    return rank_mod_p(std::move(plain), r, c, p) == rank_mod_p(std::move(aug), r, c + 1, p);
}

int orthogonal_min_support(const IncidenceMatrix& v) {
    const auto r = v.rows(), c = v.cols();
    // e_i is orthogonal to Col(V) iff row i vanishes.
    for (std::size_t j = 0; j < r; ++j) {
        bool zero = true;
        for (std::size_t t = 0; t < c && zero; ++t) zero = v(j, t) == 0;
        if (zero) return 1;
    }
    // alpha e_i + beta e_j is orthogonal iff rows i and j are linearly dependent.
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i + 1; j < r; ++j) {
            std::vector<std::uint8_t> pair;
            pair.reserve(2 * c);
            for (std::size_t t = 0; t < c; ++t) pair.push_back(v(i, t));
            for (std::size_t t = 0; t < c; ++t) pair.push_back(v(j, t));
            if (rank_over_q(IncidenceMatrix(2, c, std::move(pair))) < 2) return 2;
        }
    }
    return kSupportAtLeast3;
}

std::vector<std::vector<std::int64_t>> left_null_space(const IncidenceMatrix& v) {
    // Solve V^T y = 0: a c x r system in the unknowns y_1..y_r.
    const auto r = v.rows(), c = v.cols();
    std::vector<std::vector<mpq_class>> a(c, std::vector<mpq_class>(r));
    for (std::size_t t = 0; t < c; ++t)
        for (std::size_t j = 0; j < r; ++j) a[t][j] = v(j, t);
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < r && row < c; ++col) {
        std::size_t piv = row;
        while (piv < c && a[piv][col] == 0) ++piv;
        if (piv == c) continue;
        std::swap(a[piv], a[row]);
        const mpq_class pv = a[row][col];
        for (auto& x : a[row]) x /= pv;
        for (std::size_t i = 0; i < c; ++i) {
            if (i == row || a[i][col] == 0) continue;
            const mpq_class f = a[i][col];
            for (std::size_t j = 0; j < r; ++j) a[i][j] -= f * a[row][j];
        }
        pivot_cols.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(r, false);
    for (auto pc : pivot_cols) is_pivot[pc] = true;
    std::vector<std::vector<std::int64_t>> basis;
    for (std::size_t free = 0; free < r; ++free) {
        if (is_pivot[free]) continue;
        std::vector<mpq_class> y(r, 0);
        y[free] = 1;
        for (std::size_t i = 0; i < pivot_cols.size(); ++i) y[pivot_cols[i]] = -a[i][free];
        mpz_class scale = 1;
        for (auto& q : y) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), q.get_den_mpz_t());
        std::vector<std::int64_t> out;
        out.reserve(r);
        for (auto& q : y) {
            mpz_class z = q.get_num() * (scale / q.get_den());
            if (!z.fits_slong_p()) throw CapacityError("null-space coefficient exceeds 64 bits");
            out.push_back(z.get_si());
        }
        basis.push_back(std::move(out));
    }
    return basis;
}

std::uint64_t lattice_points_in_colspace(const IncidenceMatrix& v, Threads threads) {
    const auto r = v.rows();
    if (r > kMaxLatticeRows)
        throw CapacityError("lattice-point census enumerates 2^r vectors; r=" + std::to_string(r) + " exceeds "
                            + std::to_string(kMaxLatticeRows));
    const auto basis = left_null_space(v);
    const std::uint64_t total = std::uint64_t{1} << r;
    if (basis.empty()) return total;
    std::uint64_t count = 0;
#pragma omp parallel for num_threads(threads.resolve()) reduction(+ : count) schedule(static)
    for (std::uint64_t u = 0; u < total; ++u) {
        bool member = true;
        for (const auto& y : basis) {
            std::int64_t dot = 0;
            for (auto bitsleft = u; bitsleft; bitsleft &= bitsleft - 1) dot += y[static_cast<std::size_t>(std::countr_zero(bitsleft))];
            if (dot != 0) {
                member = false;
                break;
            }
        }
        if (member) ++count;
    }
    return count;
}

RankStabilityReport verify_rank_stability(std::uint64_t rmax, std::uint64_t kmax, std::span<const std::uint64_t> primes,
                                          std::uint64_t samples, std::uint64_t seed, Threads threads) {
    if (rmax > 16) throw CapacityError("rank-stability census supports r <= 16");
    for (auto p : primes) check_prime_modulus(p);
    RankStabilityReport rep;
    rep.rmax = rmax;
    rep.kmax = kmax;
    rep.primes.assign(primes.begin(), primes.end());
    for (auto p : primes) {
        rep.asserted[p] = 0;
        rep.drops[p] = 0;
    }
    const auto np = primes.size();
    std::uint64_t shape_id = 0;
    for (std::uint64_t r = 1; r <= rmax; ++r) {
        std::uint64_t rr = 1;
        for (std::uint64_t i = 0; i < r; ++i) rr *= r;  // r^r; p > r^(r/2) iff p^2 > r^r
        for (std::uint64_t k = 1; k <= kmax; ++k, ++shape_id) {
            const bool exhaustive = r <= 5 && k <= 5;
            if (!exhaustive) rep.exhaustive = false;
            const std::uint64_t count = exhaustive ? std::uint64_t{1} << (r * k) : samples;
            std::vector<std::uint64_t> asserted(np, 0), drops(np, 0);
            std::uint64_t violations = 0;
            std::uint64_t first_drop_idx = UINT64_MAX, first_drop_p = 0;
#pragma omp parallel num_threads(threads.resolve())
            {
                std::vector<std::uint64_t> my_asserted(np, 0), my_drops(np, 0);
                std::uint64_t my_viol = 0, my_first = UINT64_MAX, my_first_p = 0;
                std::vector<std::uint8_t> e(r * k);
#pragma omp for schedule(static)
                for (std::uint64_t idx = 0; idx < count; ++idx) {
                    if (exhaustive) {
                        for (std::uint64_t b = 0; b < r * k; ++b) e[b] = static_cast<std::uint8_t>((idx >> b) & 1u);
                    } else {
                        TrialRng rng(SeedPlan{seed, shape_id * samples + idx});
                        for (auto& x : e) x = static_cast<std::uint8_t>(rng.below(2));
                    }
                    IncidenceMatrix v(r, k, e);
                    const auto rq = rank_over_q(v);
                    for (std::size_t pi = 0; pi < np; ++pi) {
                        const auto p = primes[pi];
                        const auto rf = rank_over_fp(v, p);
                        const bool forced = static_cast<u128>(p) * p > rr;
                        if (forced) ++my_asserted[pi];
                        if (rf < rq) {
                            ++my_drops[pi];
                            if (idx < my_first) {
                                my_first = idx;
                                my_first_p = p;
                            }
                        }
                        if (rf > rq || (forced && rf != rq)) ++my_viol;
                    }
                }
#pragma omp critical
                {
                    for (std::size_t pi = 0; pi < np; ++pi) {
                        asserted[pi] += my_asserted[pi];
                        drops[pi] += my_drops[pi];
                    }
                    violations += my_viol;
                    if (my_first < first_drop_idx) {
                        first_drop_idx = my_first;
                        first_drop_p = my_first_p;
                    }
                }
            }
            rep.matrices += count;
            rep.violations += violations;
            for (std::size_t pi = 0; pi < np; ++pi) {
                rep.asserted[primes[pi]] += asserted[pi];
                rep.drops[primes[pi]] += drops[pi];
            }
            if (!rep.first_drop && first_drop_idx != UINT64_MAX) {
                std::vector<std::uint8_t> e(r * k);
                if (exhaustive) {
                    for (std::uint64_t b = 0; b < r * k; ++b) e[b] = static_cast<std::uint8_t>((first_drop_idx >> b) & 1u);
                } else {
                    TrialRng rng(SeedPlan{seed, shape_id * samples + first_drop_idx});
                    for (auto& x : e) x = static_cast<std::uint8_t>(rng.below(2));
                }
                rep.first_drop.emplace(r, k, std::move(e));
                rep.first_drop_prime = first_drop_p;
            }
        }
    }
    return rep;
}

NoSparseReport verify_no_sparse(std::uint64_t rmax, std::uint64_t kmax, Threads threads) {
    if (kmax > 12) throw CapacityError("no-sparse census supports k <= 12");
    NoSparseReport rep;
    rep.rmax = rmax;
    rep.kmax = kmax;
    for (std::uint64_t k = 1; k <= kmax; ++k) {
        const std::uint64_t limit = std::uint64_t{1} << k;
        for (std::uint64_t r = 1; r <= rmax && r < limit; ++r) {
            std::uint64_t tuples = 0, viol = 0;
            int min_support = kSupportAtLeast3;
#pragma omp parallel for num_threads(threads.resolve()) schedule(dynamic, 1) \
    reduction(+ : tuples, viol) reduction(min : min_support)
            for (std::uint64_t first = 1; first < limit; ++first) {
                for_each_distinct_tuple_with_first(r, k, first, [&](const std::vector<std::uint64_t>& masks) {
                    auto s = orthogonal_min_support(IncidenceMatrix::from_masks(masks, k));
                    ++tuples;
                    min_support = std::min(min_support, s);
                    if (s < kSupportAtLeast3) ++viol;
                });
            }
            rep.tuples += tuples;
            rep.violations += viol;
            rep.min_support = std::min(rep.min_support, min_support);
        }
    }
    return rep;
}

LatticeBoundReport verify_34(std::uint64_t rmax, std::uint64_t kmax, Threads threads) {
    if (kmax > 12 || rmax > kMaxLatticeRows) throw CapacityError("lattice-bound census supports k <= 12, r <= 24");
    LatticeBoundReport rep;
    rep.rmax = rmax;
    rep.kmax = kmax;
    struct Best {
        mpq_class ratio = -1;
        std::vector<std::uint64_t> rows;
        std::uint64_t cols = 0;
    };
    auto better = [](const mpq_class& ratio, const std::vector<std::uint64_t>& rows, std::uint64_t cols, const Best& b) {
        if (ratio != b.ratio) return ratio > b.ratio;
        if (rows.size() != b.rows.size()) return rows.size() < b.rows.size();
        if (cols != b.cols) return cols < b.cols;
        return rows < b.rows;
    };
    Best best;
    for (std::uint64_t r = 1; r <= rmax; ++r) {
        for (std::uint64_t k = 1; k <= kmax; ++k) {
            const std::uint64_t limit = std::uint64_t{1} << k;
            if (r >= limit) continue;
            std::uint64_t tuples = 0, deficient = 0, viol = 0;
#pragma omp parallel num_threads(threads.resolve()) reduction(+ : tuples, deficient, viol)
            {
                Best mine;
#pragma omp for schedule(dynamic, 1)
                for (std::uint64_t first = 1; first < limit; ++first) {
                    for_each_distinct_tuple_with_first(r, k, first, [&](const std::vector<std::uint64_t>& masks) {
                        ++tuples;
                        auto v = IncidenceMatrix::from_masks(masks, k);
                        auto d = rank_over_q(v);
                        if (d >= r) return;
                        ++deficient;
                        auto pts = lattice_points_in_colspace(v, Threads{1});
                        // bound: pts <= (3/4) 2^d  <=>  4 pts <= 3 2^d
                        if (static_cast<u128>(4) * pts > static_cast<u128>(3) << d) ++viol;
                        mpq_class ratio(to_mpz(4 * pts), to_mpz(std::uint64_t{3} << d));
                        ratio.canonicalize();
                        if (better(ratio, masks, k, mine)) mine = Best{ratio, masks, k};
                    });
                }
#pragma omp critical
                if (mine.ratio >= 0 && better(mine.ratio, mine.rows, mine.cols, best)) best = mine;
            }
            rep.tuples += tuples;
            rep.rank_deficient += deficient;
            rep.violations += viol;
        }
    }
    if (best.ratio >= 0) {
        rep.max_ratio = best.ratio;
        rep.max_ratio_rows = best.rows;
        rep.max_ratio_cols = best.cols;
    }
    return rep;
}

}  // namespace subsum
