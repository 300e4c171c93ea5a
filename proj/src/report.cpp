#include "subsum/report.hpp"

#include <sstream>

namespace subsum::report {

Json rational(const mpq_class& q) { return q.get_str(); }

Json integer(const mpz_class& z) { return z.get_str(); }

Json ext_real(const ExtFloat& x) { return x.convert_to<double>(); }

Json to_json(const EstimateRecord& r, bool with_timing) {
    Json j;
    j["group"] = r.group.to_string();
    j["N"] = r.group.order();
    j["k"] = r.k;
    j["model"] = std::string(to_string(r.model));
    j["exact"] = r.exact;
    j["trials"] = r.trials;
    j["successes"] = r.successes;
    j["p_hat"] = rational(r.p_hat);
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    j["confidence"] = r.confidence;
    j["seed"] = r.seed;
    j["coverage_evaluations"] = r.coverage_evaluations;
    j["wall_time"] = with_timing ? Json(r.wall_time) : Json(nullptr);
    return j;
}

Json to_json(const FHatResult& r, bool with_timing) {
    Json j;
    j["group"] = r.group.to_string();
    j["N"] = r.group.order();
    j["f_hat"] = r.f_hat;
    j["second_order"] = r.second_order;
    j["decision_rule"] = std::string(to_string(r.decision_rule));
    j["bracket"] = {r.bracket_low, r.bracket_high};
    Json per = Json::array();
    for (const auto& e : r.per_k) per.push_back(to_json(e, with_timing));
    j["per_k"] = per;
    return j;
}

Json to_json(const ScanEntry& e, bool with_timing) {
    Json j;
    j["p"] = e.p;
    const double p = static_cast<double>(e.p);
    j["log2p"] = std::log2(p);
    j["loglogp"] = std::log(std::log(p));
    if (e.result) {
        j["f_hat"] = e.result->f_hat;
        j["second_order"] = e.result->second_order;
        j["upper_corridor"] = std::log2(p) + std::log(std::log(p)) / std::log(2.0) + 10;
        j["fhat"] = to_json(*e.result, with_timing);
    } else {
        j["f_hat"] = nullptr;
        j["second_order"] = nullptr;
    }
    Json grid = Json::array();
    for (const auto& g : e.grid) {
        Json row;
        row["c"] = g.c;
        row["k"] = g.k;
        row["estimate"] = to_json(g.estimate, with_timing);
        grid.push_back(row);
    }
    j["grid"] = grid;
    j["error"] = e.error.empty() ? Json(nullptr) : Json(e.error);
    return j;
}

Json to_json(const MissDistribution& d) {
    Json j;
    j["group"] = d.group.to_string();
    j["k"] = d.k;
    j["m"] = d.m;
    j["model"] = std::string(to_string(d.model));
    j["trials"] = d.trials;
    j["seed"] = d.seed;
    j["pairs_per_trial"] = d.pairs;
    j["lambda"] = rational(d.lambda);
    j["p_miss_hat"] = d.p_miss_hat;
    j["poisson_reference"] = d.poisson_reference;
    j["abs_diff"] = std::abs(d.p_miss_hat - d.poisson_reference);
    j["tv_vs_poisson"] = d.tv_vs_poisson;
    j["mean_X"] = d.mean_X;
    j["mean_X_stderr"] = d.mean_X_stderr;
    Json hu = Json::object(), hx = Json::object();
    for (auto [u, c] : d.hist_U) hu[std::to_string(u)] = static_cast<double>(c) / static_cast<double>(d.trials);
    for (auto [x, c] : d.hist_X) hx[subsum::to_string(x)] = static_cast<double>(c) / static_cast<double>(d.pooled);
    j["hist_U"] = hu;
    j["hist_X"] = hx;
    return j;
}

namespace {

Json count_map(const std::map<std::uint64_t, mpz_class>& m) {
    Json j = Json::object();
    for (const auto& [d, c] : m) j[std::to_string(d)] = integer(c);
    return j;
}

}  // namespace

Json to_json(const MomentReport& r) {
    Json j;
    j["p"] = r.p;
    j["k"] = r.k;
    j["B"] = r.B;
    j["r"] = r.r;
    j["total_tuples"] = integer(r.total_tuples);
    j["n_rd"] = count_map(r.n_rd);
    j["inconsistent"] = integer(r.inconsistent);
    j["full_rank"] = integer(r.full_rank);
    j["q_rank_disagreements"] = integer(r.q_rank_disagreements);
    j["value_rank"] = rational(r.value_rank);
    j["value_exact"] = r.value_exact ? rational(*r.value_exact) : Json(nullptr);
    j["identity_holds"] = r.identity_holds();
    j["poisson_ref"] = rational(r.poisson_ref);
    j["rel_error"] = rational(r.rel_error);
    j["rel_error_float"] = to_double(r.rel_error);
    return j;
}

Json to_json(const TupleCensus& c) {
    Json j;
    j["p"] = c.p;
    j["k"] = c.k;
    j["m"] = c.m;
    j["r"] = c.r;
    j["total_tuples"] = integer(c.total_tuples);
    j["t_rd"] = count_map(c.t_rd);
    j["t_bound"] = count_map(c.t_bound);
    j["bound_violations"] = c.bound_violations;
    j["n_rd_max_over_B"] = count_map(c.n_rd);
    j["canonical_B"] = c.canonical_B;
    j["n_rd_canonical"] = count_map(c.n_rd_canonical);
    j["full_rank_fraction"] = rational(c.full_rank_fraction);
    return j;
}

Json to_json(const SecondMomentSummary& s) {
    Json j;
    j["p"] = s.p;
    j["k"] = s.k;
    j["EU"] = rational(s.EU);
    j["EUU"] = rational(s.EUU);
    j["ratio"] = rational(s.ratio);
    j["ratio_float"] = to_double(s.ratio);
    Json miss = Json::array();
    for (std::size_t x = 1; x < s.miss_probability.size(); ++x) miss.push_back(rational(s.miss_probability[x]));
    j["miss_probability"] = miss;
    return j;
}

Json to_json(const KChoice& kc) {
    Json j;
    j["p"] = kc.p;
    j["c"] = kc.c;
    j["k"] = kc.k;
    j["theta"] = ext_real(kc.theta);
    j["M"] = integer(kc.M);
    j["lambda"] = rational(kc.lambda);
    j["lambda_float"] = to_double(kc.lambda);
    j["alpha"] = kc.alpha;
    j["outside_default_range"] = kc.outside_default_range;
    return j;
}

Json to_json(const TruncationPlan& t) {
    Json j;
    j["beta"] = t.beta;
    j["R"] = t.R;
    return j;
}

Json to_json(const CouplingGap& c) {
    Json j;
    j["p_subset"] = rational(c.p_subset);
    j["p_iid"] = rational(c.p_iid);
    j["gap"] = rational(c.gap);
    j["bound"] = rational(c.bound);
    j["holds"] = c.holds();
    return j;
}

Json to_json(const ExactCoverCount& c) {
    Json j;
    j["covering"] = integer(c.covering);
    j["total"] = integer(c.total);
    j["probability"] = rational(c.probability());
    return j;
}

Json to_json(const BonferroniPartial& b) {
    Json j;
    j["estimate"] = rational(b.estimate);
    j["remainder_bound"] = rational(b.remainder_bound);
    return j;
}

Json to_json(const IncidenceMatrix& v) {
    Json rows = Json::array();
    for (std::size_t j = 0; j < v.rows(); ++j) {
        Json row = Json::array();
        for (std::size_t t = 0; t < v.cols(); ++t) row.push_back(v(j, t));
        rows.push_back(row);
    }
    return rows;
}

Json to_json(const RankStabilityReport& r) {
    Json j;
    j["rmax"] = r.rmax;
    j["kmax"] = r.kmax;
    j["primes"] = r.primes;
    j["matrices"] = r.matrices;
    j["exhaustive"] = r.exhaustive;
    Json asserted = Json::object(), drops = Json::object();
    for (auto [p, c] : r.asserted) asserted[std::to_string(p)] = c;
    for (auto [p, c] : r.drops) drops[std::to_string(p)] = c;
    j["asserted"] = asserted;
    j["drops"] = drops;
    j["violations"] = r.violations;
    j["first_drop"] = r.first_drop ? to_json(*r.first_drop) : Json(nullptr);
    j["first_drop_prime"] = r.first_drop_prime;
    return j;
}

Json to_json(const NoSparseReport& r) {
    Json j;
    j["rmax"] = r.rmax;
    j["kmax"] = r.kmax;
    j["tuples"] = r.tuples;
    j["min_support"] = r.min_support;
    j["violations"] = r.violations;
    return j;
}

Json to_json(const LatticeBoundReport& r) {
    Json j;
    j["rmax"] = r.rmax;
    j["kmax"] = r.kmax;
    j["tuples"] = r.tuples;
    j["rank_deficient"] = r.rank_deficient;
    j["violations"] = r.violations;
    j["max_ratio"] = rational(r.max_ratio);
    j["max_ratio_rows"] = r.max_ratio_rows;
    j["max_ratio_cols"] = r.max_ratio_cols;
    return j;
}

}  // namespace subsum::report
