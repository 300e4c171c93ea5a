#include "subsum/estimator.hpp"

#include <chrono>
#include <cmath>
#include <set>

#include <boost/math/distributions/normal.hpp>
#include <omp.h>

#include "subsum/coverage.hpp"
#include "subsum/series.hpp"

namespace subsum {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void check_confidence(double c) {
    if (!(c > 0 && c < 1)) throw DomainError("confidence must lie strictly between 0 and 1");
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
    check_confidence(confidence);
    if (trials == 0) return {0, 1};
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2);
    const double n = static_cast<double>(trials);
    const double ph = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1 + z2 / n;
    const double center = (ph + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
    // Clamp so that rounding never puts p_hat outside its own interval.
    return {std::clamp(std::min(center - half, ph), 0.0, 1.0), std::clamp(std::max(center + half, ph), 0.0, 1.0)};
}

EstimateRecord cover_prob_mc(const GroupSpec& g, std::uint64_t k, SampleModel model, std::uint64_t trials,
                             std::uint64_t seed, const McOptions& opts) {
    if (trials < 1) throw DomainError("need at least one trial");
    check_confidence(opts.confidence);
    if (model == SampleModel::Subset && k > g.order())
        throw DomainError("cannot draw " + std::to_string(k) + " distinct elements from a group of order "
                          + std::to_string(g.order()));
    const auto t0 = Clock::now();
    EstimateRecord rec;
    rec.group = g;
    rec.k = k;
    rec.model = model;
    rec.trials = trials;
    rec.seed = seed;
    rec.confidence = opts.confidence;

    std::uint64_t successes = 0, evaluations = 0;
    if (!below_capacity(static_cast<unsigned>(std::min<std::uint64_t>(k, 64)), g.order())) {
        const auto n = g.order();
#pragma omp parallel num_threads(opts.threads.resolve()) reduction(+ : successes, evaluations)
        {
            SubsetSumKernel kernel(g);
#pragma omp for schedule(static)
            for (std::uint64_t i = 0; i < trials; ++i) {
                TrialRng rng(SeedPlan{seed, i});
                auto a = draw(g, k, model, rng);
                ++evaluations;
                if (kernel.run(a) == n) ++successes;
            }
        }
    }
    rec.successes = successes;
    rec.coverage_evaluations = evaluations;
    rec.p_hat = mpq_class(to_mpz(successes), to_mpz(trials));
    rec.p_hat.canonicalize();
    auto ci = wilson_interval(successes, trials, opts.confidence);
    rec.ci_low = ci.low;
    rec.ci_high = ci.high;
    rec.wall_time = seconds_since(t0);
    return rec;
}

mpq_class cover_prob_exact(const GroupSpec& g, std::uint64_t k, SampleModel model, const EnumLimits& limits,
                           Threads threads) {
    return exact_cover_count(g, k, model, limits, threads).probability();
}

EstimateRecord cover_record_exact(const GroupSpec& g, std::uint64_t k, SampleModel model, const EnumLimits& limits,
                                  Threads threads) {
    const auto t0 = Clock::now();
    auto count = exact_cover_count(g, k, model, limits, threads);
    EstimateRecord rec;
    rec.group = g;
    rec.k = k;
    rec.model = model;
    rec.exact = true;
    rec.trials = count.total.get_ui();
    rec.successes = count.covering.get_ui();
    rec.p_hat = count.probability();
    rec.ci_low = rec.ci_high = to_double(rec.p_hat);
    rec.confidence = 1;
    rec.wall_time = seconds_since(t0);
    return rec;
}

std::string_view to_string(DecisionRule r) {
    switch (r) {
        case DecisionRule::Point: return "point";
        case DecisionRule::CiLow: return "ci-low";
        case DecisionRule::CiHigh: return "ci-high";
    }
    return "point";
}

DecisionRule parse_rule(std::string_view text) {
    if (text == "point") return DecisionRule::Point;
    if (text == "ci-low") return DecisionRule::CiLow;
    if (text == "ci-high") return DecisionRule::CiHigh;
    throw DomainError("unknown decision rule '" + std::string(text) + "' (expected point|ci-low|ci-high)");
}

bool meets_half(const EstimateRecord& rec, DecisionRule rule) {
    if (rec.exact) return rec.p_hat >= mpq_class(1, 2);
    switch (rule) {
        case DecisionRule::Point: return rec.p_hat >= mpq_class(1, 2);
        case DecisionRule::CiLow: return rec.ci_low >= 0.5;
        case DecisionRule::CiHigh: return rec.ci_high >= 0.5;
    }
    return false;
}

std::pair<std::uint64_t, std::uint64_t> f_hat_bracket(std::uint64_t n) {
    const std::uint64_t lo = ceil_log2(n);
    const double ll = std::log(std::log(static_cast<double>(n)));
    const auto width = static_cast<std::uint64_t>(std::max(0.0, std::ceil(2 * ll)));
    return {lo, std::min<std::uint64_t>(lo + width + 10, n)};
}

namespace {

EstimateRecord estimate_at(const GroupSpec& g, std::uint64_t k, std::uint64_t trials, std::uint64_t seed,
                           const FHatOptions& opts) {
    if (opts.prefer_exact && exact_cover_feasible(g, k, SampleModel::Subset, opts.limits))
        return cover_record_exact(g, k, SampleModel::Subset, opts.limits, opts.threads);
    return cover_prob_mc(g, k, SampleModel::Subset, trials, seed, McOptions{opts.confidence, opts.threads});
}

}  // namespace

FHatResult f_hat(const GroupSpec& g, std::uint64_t trials, std::uint64_t seed, const FHatOptions& opts) {
    if (trials < 100) throw DomainError("f_hat needs at least 100 trials per k");
    FHatResult res;
    res.group = g;
    res.decision_rule = opts.rule;
    const auto [lo, hi] = f_hat_bracket(g.order());
    res.bracket_low = lo;
    res.bracket_high = hi;
    bool found = false;
    for (auto k = lo; k <= hi; ++k) {
        res.per_k.push_back(estimate_at(g, k, trials, seed, opts));
        if (found) break;
        if (meets_half(res.per_k.back(), opts.rule)) {
            res.f_hat = k;
            found = true;
        }
    }
    if (!found)
        throw BracketError("no k in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] reaches cover probability 1/2 for group "
                               + g.to_string() + " (bracket too small)",
                           std::move(res.per_k));
    const double n = static_cast<double>(g.order());
    res.second_order = (static_cast<double>(res.f_hat) - std::log2(n)) / std::log(std::log(n));
    return res;
}

std::vector<ScanEntry> scan_second_order(std::span<const std::uint64_t> primes, std::span<const double> c_grid,
                                         std::uint64_t trials, std::uint64_t seed, const FHatOptions& opts) {
    std::vector<ScanEntry> out;
    for (auto p : primes) {
        ScanEntry e;
        e.p = p;
        try {
            if (p < 5) throw DomainError("scan primes must be >= 5");
            if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
            const auto g = GroupSpec::cyclic(p);
            e.result = f_hat(g, trials, seed, opts);
            for (double c : c_grid) {
                auto kc = choose_k(p, c);
                e.grid.push_back(ScanGridPoint{c, kc.k, estimate_at(g, kc.k, trials, seed, opts)});
            }
        } catch (const Error& err) {
            e.error = err.what();
        }
        out.push_back(std::move(e));
    }
    return out;
}

double MissDistribution::mass_U(std::uint64_t u) const {
    auto it = hist_U.find(u);
    return it == hist_U.end() || trials == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(trials);
}

double MissDistribution::mass_X(u128 x) const {
    auto it = hist_X.find(x);
    return it == hist_X.end() || pooled == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(pooled);
}

MissDistribution miss_distribution(const GroupSpec& g, std::uint64_t k, std::uint64_t trials, std::uint64_t seed,
                                   std::uint64_t m, SampleModel model, Threads threads) {
    if (!g.is_prime_cyclic()) throw DomainError("miss distribution needs a cyclic group of prime order");
    if (m != 1 && m != 2) throw DomainError("m must be 1 or 2");
    if (k > kMaxExactCountK) throw CapacityError("miss distribution needs k <= " + std::to_string(kMaxExactCountK));
    if (trials < 1) throw DomainError("need at least one trial");
    const auto n = g.order();
    if (m == 2 && n < 3) throw DomainError("|B| = 2 needs N >= 3");
    if (model == SampleModel::Subset && k > n) throw DomainError("subset model needs k <= N");

    MissDistribution md;
    md.group = g;
    md.k = k;
    md.trials = trials;
    md.seed = seed;
    md.m = m;
    md.model = model;
    mpz_class M = pow_mpz(2, k) - 1;
    md.lambda = mpq_class(M, to_mpz(n));
    md.lambda.canonicalize();

    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    if (m == 2) {
        const auto all = binomial(n - 1, 2);
        if (all <= 1000) {
            for (std::uint64_t x = 1; x < n; ++x)
                for (std::uint64_t y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
        } else {
            // Trial index UINT64_MAX is reserved for the pair stream.
            TrialRng rng(SeedPlan{seed, UINT64_MAX});
            std::set<std::pair<std::uint64_t, std::uint64_t>> chosen;
            while (chosen.size() < 1000) {
                auto x = 1 + rng.below(n - 1), y = 1 + rng.below(n - 1);
                if (x == y) continue;
                chosen.emplace(std::min(x, y), std::max(x, y));
            }
            pairs.assign(chosen.begin(), chosen.end());
        }
    }
    md.pairs = m == 1 ? n - 1 : pairs.size();

    std::vector<double> trial_means(trials);
#pragma omp parallel num_threads(threads.resolve())
    {
        std::map<std::uint64_t, std::uint64_t> hu;
        std::map<u128, std::uint64_t> hx;
#pragma omp for schedule(static)
        for (std::uint64_t i = 0; i < trials; ++i) {
            auto a = draw(g, k, model, SeedPlan{seed, i});
            auto table = sigma_counts(g, a);
            std::uint64_t u = 0;
            long double total = 0;
            for (std::uint64_t x = 1; x < n; ++x) {
                auto h = table.nonempty_hits(Element{x});
                if (h == 0) ++u;
                if (m == 1) {
                    ++hx[h];
                    total += static_cast<long double>(h);
                }
            }
            if (m == 2) {
                for (auto [x, y] : pairs) {
                    auto h = table.nonempty_hits(Element{x}) + table.nonempty_hits(Element{y});
                    ++hx[h];
                    total += static_cast<long double>(h);
                }
            }
            ++hu[u];
            trial_means[i] = static_cast<double>(total / static_cast<long double>(md.pairs));
        }
#pragma omp critical
        {
            for (auto [key, c] : hu) md.hist_U[key] += c;
            for (auto [key, c] : hx) md.hist_X[key] += c;
        }
    }
    md.pooled = trials * md.pairs;
    md.p_miss_hat = md.mass_X(0);
    const double mu = static_cast<double>(m) * to_double(md.lambda);
    md.poisson_reference = std::exp(-mu);
    const double t = static_cast<double>(trials);
    double sum = 0;
    for (double v : trial_means) sum += v;
    md.mean_X = sum / t;
    double ss = 0;
    for (double v : trial_means) ss += (v - md.mean_X) * (v - md.mean_X);
    const double var = trials > 1 ? ss / (t - 1) : 0.0;
    md.mean_X_stderr = std::sqrt(var / t);

    // TV = 1/2 (sum over observed values |h - P| + Poisson mass off the observed support).
    double diff = 0, covered = 0;
    for (auto [key, c] : md.hist_X) {
        const double j = static_cast<double>(key);
        const double pj = mu == 0 ? (key == 0 ? 1.0 : 0.0) : std::exp(-mu + j * std::log(mu) - std::lgamma(j + 1));
        covered += pj;
        diff += std::abs(static_cast<double>(c) / static_cast<double>(md.pooled) - pj);
    }
    md.tv_vs_poisson = 0.5 * (diff + std::max(0.0, 1.0 - covered));
    return md;
}

}  // namespace subsum
