#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "subsum/group.hpp"
#include "subsum/parallel.hpp"
#include "subsum/sampling.hpp"

namespace subsum {

/// Enumeration gates. Exceeding one raises CapacityError before any work starts.
struct EnumLimits {
    std::uint64_t max_assignments = 100'000'000;  // N^k (i.i.d. tuples, assignments in F_p^k)
    std::uint64_t max_subsets = 10'000'000;       // C(N, k)
    std::uint64_t max_tuples = 100'000'000;       // (mM)_r ordered tuples
};

struct ExactCoverCount {
    mpz_class covering;  // samples with Sigma(A) = G
    mpz_class total;     // C(N,k) subsets or N^k tuples
    mpq_class probability() const;
};

/// True iff the exact enumeration for (g, k, model) fits the limits.
bool exact_cover_feasible(const GroupSpec& g, std::uint64_t k, SampleModel model, const EnumLimits& limits);

/// Full enumeration, depth-first with a bitmap per level. Prunes a branch once its bitmap is
/// full (every completion covers) or once |bitmap| * 2^(remaining) < N (none can). Top-level
/// branches run as OpenMP tasks over the first element.
ExactCoverCount exact_cover_count(const GroupSpec& g, std::uint64_t k, SampleModel model,
                                  const EnumLimits& limits = {}, Threads threads = {});

}  // namespace subsum
