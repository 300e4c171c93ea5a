#include "subsum/sampling.hpp"

#include <unordered_map>

#include "subsum/errors.hpp"
#include "subsum/exact_cover.hpp"
#include "subsum/numeric.hpp"

namespace subsum {

std::string_view to_string(SampleModel m) { return m == SampleModel::Subset ? "subset" : "iid"; }

SampleModel parse_model(std::string_view text) {
    if (text == "subset") return SampleModel::Subset;
    if (text == "iid") return SampleModel::Iid;
    throw DomainError("unknown sample model '" + std::string(text) + "' (expected subset|iid)");
}

namespace {

std::mt19937_64 seeded_engine(SeedPlan plan) {
    std::seed_seq seq{static_cast<std::uint32_t>(plan.master_seed), static_cast<std::uint32_t>(plan.master_seed >> 32),
                      static_cast<std::uint32_t>(plan.trial_index), static_cast<std::uint32_t>(plan.trial_index >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

TrialRng::TrialRng(SeedPlan plan) : engine_(seeded_engine(plan)) {}

std::uint64_t TrialRng::below(std::uint64_t bound) {
    u128 m = static_cast<u128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<u128>(next()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::vector<Element> draw(const GroupSpec& g, std::uint64_t k, SampleModel model, TrialRng& rng) {
    const auto n = g.order();
    std::vector<Element> out;
    if (model == SampleModel::Iid) {
        out.reserve(k);
        for (std::uint64_t i = 0; i < k; ++i) out.push_back(Element{rng.below(n)});
        return out;
    }
    if (k > n) throw DomainError("cannot draw " + std::to_string(k) + " distinct elements from a group of order "
                                 + std::to_string(n));
    out.reserve(k);
    // Partial Fisher-Yates over [0, N); only displaced positions are stored.
    std::unordered_map<std::uint64_t, std::uint64_t> moved;
    moved.reserve(2 * k);
    auto at = [&](std::uint64_t pos) {
        auto it = moved.find(pos);
        return it == moved.end() ? pos : it->second;
    };
    for (std::uint64_t i = 0; i < k; ++i) {
        auto j = i + rng.below(n - i);
        auto vj = at(j);
        moved[j] = at(i);
        out.push_back(Element{vj});
    }
    return out;
}

std::vector<Element> draw(const GroupSpec& g, std::uint64_t k, SampleModel model, SeedPlan seed) {
    TrialRng rng(seed);
    return draw(g, k, model, rng);
}

mpq_class collision_bound(std::uint64_t k, std::uint64_t n) {
    if (n < 2) throw DomainError("collision bound needs N >= 2");
    mpq_class q(binomial(k, 2), to_mpz(n));
    q.canonicalize();
    return q;
}

CouplingGap coupling_gap_exact(const GroupSpec& g, std::uint64_t k) { return coupling_gap_exact(g, k, EnumLimits{}); }

CouplingGap coupling_gap_exact(const GroupSpec& g, std::uint64_t k, const EnumLimits& limits) {
    if (k > g.order()) throw DomainError("coupling needs k <= N");
    if (!exact_cover_feasible(g, k, SampleModel::Subset, limits) || !exact_cover_feasible(g, k, SampleModel::Iid, limits))
        throw CapacityError("coupling enumeration for group " + g.to_string() + ", k=" + std::to_string(k)
                            + " exceeds the enumeration gate");
    CouplingGap r;
    r.p_subset = exact_cover_count(g, k, SampleModel::Subset, limits).probability();
    r.p_iid = exact_cover_count(g, k, SampleModel::Iid, limits).probability();
    r.gap = abs(r.p_subset - r.p_iid);
    r.bound = 2 * collision_bound(k, g.order());
    return r;
}

}  // namespace subsum
