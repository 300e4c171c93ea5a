#pragma once

// Single-threaded, unpruned counterparts of the OpenMP kernels. Tests check the kernels against
// these; the benchmark times them side by side.

#include <cstdint>

#include <gmpxx.h>

#include "subsum/group.hpp"
#include "subsum/linalg01.hpp"
#include "subsum/sampling.hpp"

namespace subsum::reference {

/// Covering trials among `trials` draws, each evaluated with covers(); same streams as cover_prob_mc.
std::uint64_t count_covering_trials(const GroupSpec& g, std::uint64_t k, SampleModel model, std::uint64_t trials,
                                    std::uint64_t seed);

/// Visits every k-subset (lexicographic) or every k-tuple and calls covers() on each. No pruning.
mpz_class exact_cover_count(const GroupSpec& g, std::uint64_t k, SampleModel model);

/// Membership of each 0/1 vector u decided by rank_Q([V | u]) == rank_Q(V).
std::uint64_t lattice_points_in_colspace(const IncidenceMatrix& v);

}  // namespace subsum::reference
