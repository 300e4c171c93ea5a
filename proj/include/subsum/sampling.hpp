#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "subsum/group.hpp"

namespace subsum {

/// SUBSET: uniform k-subset of G. IID: k independent uniform elements, repeats allowed.
enum class SampleModel { Subset, Iid };

std::string_view to_string(SampleModel m);
SampleModel parse_model(std::string_view text);

/// Identifies one trial's random stream. The stream is a pure function of both fields.
struct SeedPlan {
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
};

/// Per-trial generator: std::mt19937_64 seeded through std::seed_seq with the four 32-bit halves
/// of (master_seed, trial_index). Bounded draws use Lemire's multiply-shift rejection so the
/// streams do not depend on the standard library's distribution code.
class TrialRng {
public:
    explicit TrialRng(SeedPlan plan);

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

/// Draws with the given generator. The first j outputs of a (k+1)-draw equal a j-draw from the
/// same stream, for both models.
std::vector<Element> draw(const GroupSpec& g, std::uint64_t k, SampleModel model, TrialRng& rng);
std::vector<Element> draw(const GroupSpec& g, std::uint64_t k, SampleModel model, SeedPlan seed);

/// k(k-1)/(2N): union bound on P(two i.i.d. draws collide).
mpq_class collision_bound(std::uint64_t k, std::uint64_t n);

struct CouplingGap {
    mpq_class p_subset;
    mpq_class p_iid;
    mpq_class gap;
    mpq_class bound;  // 2 * collision_bound
    bool holds() const { return gap <= bound; }
};

struct EnumLimits;

/// Both cover probabilities by full enumeration. Gated on N^k <= max_assignments and
/// C(N,k) <= max_subsets.
CouplingGap coupling_gap_exact(const GroupSpec& g, std::uint64_t k);
CouplingGap coupling_gap_exact(const GroupSpec& g, std::uint64_t k, const EnumLimits& limits);

}  // namespace subsum
