#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "subsum/errors.hpp"
#include "subsum/exact_cover.hpp"
#include "subsum/group.hpp"
#include "subsum/numeric.hpp"
#include "subsum/parallel.hpp"
#include "subsum/sampling.hpp"

namespace subsum {

struct WilsonInterval {
    double low = 0, high = 1;
};

/// Wilson score interval for `successes` out of `trials` at two-sided `confidence` in (0, 1).
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence);

struct EstimateRecord {
    GroupSpec group{std::vector<std::uint64_t>{2}};
    std::uint64_t k = 0;
    SampleModel model = SampleModel::Subset;
    std::uint64_t trials = 0;      // for exact records: number of enumerated samples
    std::uint64_t successes = 0;
    mpq_class p_hat;
    double ci_low = 0, ci_high = 0;
    double confidence = 0.95;
    std::uint64_t seed = 0;
    double wall_time = 0;
    bool exact = false;
    std::uint64_t coverage_evaluations = 0;  // samples whose subset-sum bitmap was computed
};

struct McOptions {
    double confidence = 0.95;
    Threads threads;
};

/// Trial i uses the stream SeedPlan{seed, i}, for every k, so samples at k are prefixes of the
/// samples at k + 1 and the estimate is monotone in k. 2^k < N short-circuits to zero
/// successes without sampling.
EstimateRecord cover_prob_mc(const GroupSpec& g, std::uint64_t k, SampleModel model, std::uint64_t trials,
                             std::uint64_t seed, const McOptions& opts = {});

mpq_class cover_prob_exact(const GroupSpec& g, std::uint64_t k, SampleModel model, const EnumLimits& limits = {},
                           Threads threads = {});

/// cover_prob_exact as an EstimateRecord (trials = enumerated samples, degenerate interval).
EstimateRecord cover_record_exact(const GroupSpec& g, std::uint64_t k, SampleModel model, const EnumLimits& limits = {},
                                  Threads threads = {});

enum class DecisionRule { Point, CiLow, CiHigh };
std::string_view to_string(DecisionRule r);
DecisionRule parse_rule(std::string_view text);
bool meets_half(const EstimateRecord& rec, DecisionRule rule);

struct FHatResult {
    GroupSpec group{std::vector<std::uint64_t>{2}};
    std::uint64_t f_hat = 0;
    std::vector<EstimateRecord> per_k;
    double second_order = 0;  // (f_hat - log2 N) / log log N
    DecisionRule decision_rule = DecisionRule::Point;
    std::uint64_t bracket_low = 0, bracket_high = 0;
};

/// Raised when no k in the search bracket meets the decision rule.
class BracketError : public DomainError {
public:
    BracketError(const std::string& what, std::vector<EstimateRecord> per_k)
        : DomainError(what), per_k_(std::move(per_k)) {}
    const std::vector<EstimateRecord>& per_k() const { return per_k_; }

private:
    std::vector<EstimateRecord> per_k_;
};

struct FHatOptions {
    double confidence = 0.95;
    DecisionRule rule = DecisionRule::Point;
    EnumLimits limits;
    Threads threads;
    bool prefer_exact = true;
};

/// Search bracket [ceil(log2 N), ceil(log2 N) + ceil(2 log log N) + 10] (capped at N).
std::pair<std::uint64_t, std::uint64_t> f_hat_bracket(std::uint64_t n);

/// Least k in the bracket whose subset-model estimate meets the rule, scanning upward. per_k holds
/// every k from the bracket start to f_hat + 1 (when inside the bracket). Exact enumeration is used
/// wherever the gate allows.
FHatResult f_hat(const GroupSpec& g, std::uint64_t trials, std::uint64_t seed, const FHatOptions& opts = {});

struct ScanGridPoint {
    double c = 0;
    std::uint64_t k = 0;
    EstimateRecord estimate;
};

struct ScanEntry {
    std::uint64_t p = 0;
    std::optional<FHatResult> result;
    std::string error;
    std::vector<ScanGridPoint> grid;
};

/// f_hat per prime plus P(Sigma(A) = F_p) at k = choose_k(p, c).k for each c. Errors are recorded
/// per prime and the scan continues.
std::vector<ScanEntry> scan_second_order(std::span<const std::uint64_t> primes, std::span<const double> c_grid,
                                         std::uint64_t trials, std::uint64_t seed, const FHatOptions& opts = {});

struct MissDistribution {
    GroupSpec group{std::vector<std::uint64_t>{2}};
    std::uint64_t k = 0, trials = 0, seed = 0, m = 1;
    SampleModel model = SampleModel::Iid;
    std::map<std::uint64_t, std::uint64_t> hist_U;  // U -> trials
    std::map<u128, std::uint64_t> hist_X;          // X_B value -> pooled observations
    std::uint64_t pooled = 0;                       // observations in hist_X
    std::uint64_t pairs = 0;                        // B's per trial (N-1 for m=1)
    mpq_class lambda;                               // M / N
    double p_miss_hat = 0;                          // hist_X mass at 0
    double poisson_reference = 0;                   // e^{-m lambda}
    double tv_vs_poisson = 0;                       // total variation vs Poisson(m lambda)
    double mean_X = 0;                              // pooled sample mean of X_B
    double mean_X_stderr = 0;                       // from per-trial means

    double mass_U(std::uint64_t u) const;
    double mass_X(u128 x) const;
};

/// Pools X_B over every B = {x}, x != 0 (m = 1) or over min(1000, C(N-1, 2)) fixed pairs (m = 2).
/// Requires a prime cyclic group (DomainError otherwise) and k <= 120.
MissDistribution miss_distribution(const GroupSpec& g, std::uint64_t k, std::uint64_t trials, std::uint64_t seed,
                                   std::uint64_t m, SampleModel model = SampleModel::Iid, Threads threads = {});

}  // namespace subsum
