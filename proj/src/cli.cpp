#include "subsum/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <regex>

#include "CLI11.hpp"
#include "subsum/estimator.hpp"
#include "subsum/exact_cover.hpp"
#include "subsum/linalg01.hpp"
#include "subsum/moments.hpp"
#include "subsum/report.hpp"
#include "subsum/sampling.hpp"
#include "subsum/series.hpp"

#ifndef SUBSUM_GIT_DESCRIBE
#define SUBSUM_GIT_DESCRIBE "unknown"
#endif

namespace subsum::cli {
namespace {

using report::Json;
using Clock = std::chrono::steady_clock;

struct Common {
    std::string group;
    std::uint64_t seed = 0;
    std::uint64_t trials = 10'000;
    std::string model;  // empty: subcommand default
    double confidence = 0.95;
    std::string threads = "auto";
    std::string out_path;
    std::string format = "json";
    std::uint64_t max_enum = 100'000'000;
    bool no_timing = false;

    Threads thread_count() const {
        if (threads == "auto") return {};
        return Threads{std::stoi(threads)};
    }
    EnumLimits limits() const { return {max_enum, max_enum, max_enum}; }
    SampleModel sample_model(SampleModel fallback = SampleModel::Subset) const {
        return model.empty() ? fallback : parse_model(model);
    }
};

enum Flag : unsigned {
    kGroup = 1, kSeed = 2, kTrials = 4, kModel = 8, kConfidence = 16, kThreads = 32, kMaxEnum = 64,
    kMc = kGroup | kSeed | kTrials | kModel | kConfidence | kThreads,
};

void add_common(CLI::App* sub, Common& c, unsigned flags) {
    if (flags & kGroup) sub->add_option("--group", c.group, "Group as comma-separated cyclic factors, e.g. 101 or 2,2,2")->required();
    if (flags & kSeed) sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    if (flags & kTrials) sub->add_option("--trials", c.trials, "Monte Carlo trials")->capture_default_str()->check(CLI::PositiveNumber);
    if (flags & kModel) sub->add_option("--model", c.model, "Sampling model")->check(CLI::IsMember({"subset", "iid"}));
    if (flags & kConfidence)
        sub->add_option("--confidence", c.confidence, "Wilson interval confidence")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    if (flags & kThreads) {
        sub->add_option("--threads", c.threads, "Worker threads (n or auto)")
            ->capture_default_str()
            ->check(CLI::IsMember({"auto"}) | CLI::PositiveNumber);
    }
    if (flags & kMaxEnum) sub->add_option("--max-enum", c.max_enum, "Enumeration gate for exact modes")->capture_default_str();
    sub->add_option("--out", c.out_path, "Append JSONL to this file (CSV overwrites) instead of stdout");
    sub->add_option("--format", c.format, "Output format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--no-timing", c.no_timing, "Emit null started_at/wall_time so repeated runs are byte-identical");
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

std::string scalar_text(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (const auto& [key, v] : j.items()) flatten(v, prefix.empty() ? key : prefix + "." + key, out);
        return;
    }
    out.emplace_back(prefix, scalar_text(j));
}

class Sink {
public:
    Sink(std::ostream& fallback, const Common& c) : os_(&fallback), csv_(c.format == "csv") {
        if (!c.out_path.empty()) {
            file_.open(c.out_path, csv_ ? std::ios::trunc : std::ios::app);
            if (!file_) throw DomainError("cannot open output file '" + c.out_path + "'");
            os_ = &file_;
        }
    }

    void emit(const Json& record) {
        if (!csv_) {
            *os_ << record.dump() << '\n';
            os_->flush();
            return;
        }
        std::vector<std::pair<std::string, std::string>> cells;
        flatten(record, "", cells);
        if (header_.empty()) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                header_.push_back(cells[i].first);
                *os_ << (i ? "," : "") << csv_field(cells[i].first);
            }
            *os_ << '\n';
        }
        for (std::size_t i = 0; i < header_.size(); ++i) {
            std::string value;
            for (const auto& [k, v] : cells)
                if (k == header_[i]) value = v;
            *os_ << (i ? "," : "") << csv_field(value);
        }
        *os_ << '\n';
        os_->flush();
    }

private:
    std::ofstream file_;
    std::ostream* os_;
    bool csv_;
    std::vector<std::string> header_;
};

// One experiment record: timing is taken around the body.
struct Recorder {
    const Common& c;
    std::string command;
    Json params;
    std::string started_at = utc_now();
    Clock::time_point t0 = Clock::now();

    Json make(Json result) const {
        Json rec;
        rec["schema_version"] = report::kSchemaVersion;
        rec["command"] = command;
        rec["params"] = params;
        rec["result"] = std::move(result);
        if (c.no_timing) {
            rec["started_at"] = nullptr;
            rec["wall_time"] = nullptr;
        } else {
            rec["started_at"] = started_at;
            rec["wall_time"] = std::chrono::duration<double>(Clock::now() - t0).count();
        }
        rec["git_describe"] = SUBSUM_GIT_DESCRIBE;
        return rec;
    }
};

Json mc_params(const Common& c, SampleModel model) {
    Json p;
    p["group"] = GroupSpec::parse(c.group).to_string();
    p["model"] = std::string(to_string(model));
    p["trials"] = c.trials;
    p["seed"] = c.seed;
    p["confidence"] = c.confidence;
    p["threads"] = c.threads;
    return p;
}

mpq_class parse_rational(const std::string& text) {
    static const std::regex pattern(R"(-?\d+(/\d+)?)");
    if (!std::regex_match(text, pattern)) throw DomainError("expected a rational like 3/2, got '" + text + "'");
    mpq_class q(text);
    if (q.get_den() == 0) throw DomainError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

mpq_class abs_q(const mpq_class& q) { return q < 0 ? mpq_class(-q) : q; }

std::vector<std::uint64_t> odd_primes(const std::vector<std::uint64_t>& primes) {
    std::vector<std::uint64_t> out;
    for (auto p : primes)
        if (p >= 3 && is_prime(p)) out.push_back(p);
    return out;
}

// Exact factorial moments and rank formula agree on a (p, k, r, m) grid; closed forms for r=1 and
// (m=1, r=2) are checked alongside.
Json verify_moment_grid(const std::vector<std::uint64_t>& primes, std::uint64_t kmax, std::uint64_t rmax,
                        const EnumLimits& limits, Threads threads, std::uint64_t& violations) {
    std::uint64_t cases = 0, mismatches = 0, closed_form_failures = 0;
    for (auto p : primes)
        for (std::uint64_t k = 1; k <= kmax; ++k)
            for (std::uint64_t m = 1; m <= 2; ++m) {
                const std::vector<std::uint64_t> B = m == 1 ? std::vector<std::uint64_t>{1} : std::vector<std::uint64_t>{1, 2};
                const auto exact = factorial_moments_enum(p, k, B, rmax, limits, threads);
                const mpq_class M = (mpz_class(1) << k) - 1;
                for (std::uint64_t r = 1; r <= rmax; ++r) {
                    ++cases;
                    const auto rep = factorial_moment_rank(p, k, B, r, limits, threads);
                    if (rep.value_rank != exact[r]) ++mismatches;
                    if (r == 1 && exact[r] != mpq_class(m * M / p)) ++closed_form_failures;
                    if (m == 1 && r == 2 && exact[r] != mpq_class(M * (M - 1) / (p * p))) ++closed_form_failures;
                }
            }
    violations += mismatches + closed_form_failures;
    Json j;
    j["primes"] = primes;
    j["cases"] = cases;
    j["mismatches"] = mismatches;
    j["closed_form_failures"] = closed_form_failures;
    return j;
}

Json verify_census(const std::vector<std::uint64_t>& primes, std::uint64_t kmax, std::uint64_t rmax,
                   const EnumLimits& limits, Threads threads, std::uint64_t& violations) {
    std::uint64_t cases = 0, bound_violations = 0;
    for (auto p : primes)
        for (std::uint64_t k = 1; k <= kmax; ++k)
            for (std::uint64_t m = 1; m <= 2; ++m)
                for (std::uint64_t r = 1; r <= rmax; ++r) {
                    ++cases;
                    bound_violations += tuple_census(p, k, m, r, limits, threads).bound_violations;
                }
    violations += bound_violations;
    Json j;
    j["primes"] = primes;
    j["cases"] = cases;
    j["bound_violations"] = bound_violations;
    return j;
}

void print_usage_error(const CLI::App& app, const CLI::ParseError& e, std::ostream& err) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* target = &app;
    for (const auto* sub : app.get_subcommands()) target = sub;
    err << target->help();
}

}  // namespace

void export_csv(std::istream& in, std::span<const std::string> columns, std::ostream& out) {
    static const std::regex fraction(R"(-?\d+/\d+)");
    static const std::regex integer(R"(-?\d+)");

    std::vector<Json> records;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw DomainError("line " + std::to_string(lineno) + " is not valid JSON: " + e.what());
        }
    }

    auto lookup = [](const Json& rec, const std::string& col) -> const Json* {
        auto find_path = [](const Json* node, const std::string& path) -> const Json* {
            std::size_t start = 0;
            while (node) {
                const auto dot = path.find('.', start);
                const auto key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
                if (!node->is_object() || !node->contains(key)) return nullptr;
                node = &(*node)[key];
                if (dot == std::string::npos) return node;
                start = dot + 1;
            }
            return nullptr;
        };
        if (const Json* hit = find_path(&rec, col)) return hit;
        for (const char* scope : {"result", "params"})
            if (rec.is_object() && rec.contains(scope))
                if (const Json* hit = find_path(&rec[scope], col)) return hit;
        return nullptr;
    };

    std::vector<std::vector<const Json*>> cells(records.size());
    std::vector<bool> rational_column(columns.size(), false);
    for (std::size_t i = 0; i < records.size(); ++i)
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const Json* v = lookup(records[i], columns[c]);
            if (!v) throw DomainError("record " + std::to_string(i) + " has no column '" + columns[c] + "'");
            cells[i].push_back(v);
            if (v->is_string() && std::regex_match(v->get<std::string>(), fraction)) rational_column[c] = true;
        }

    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << csv_field(columns[c]);
        if (rational_column[c]) out << "," << csv_field(columns[c] + "_float");
    }
    out << '\n';

    for (const auto& row : cells) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const Json& v = *row[c];
            out << (c ? "," : "") << csv_field(scalar_text(v));
            if (!rational_column[c]) continue;
            out << ",";
            if (v.is_number()) {
                out << v.dump();
            } else if (v.is_string()) {
                const auto s = v.get<std::string>();
                if (std::regex_match(s, fraction) || std::regex_match(s, integer)) out << Json(to_double(parse_rational(s))).dump();
            }
        }
        out << '\n';
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random subset-sum coverage experiments on finite abelian groups", "subsum"};
    app.require_subcommand(1);
    Common c;

    auto* cover_prob = app.add_subcommand("cover-prob", "Monte Carlo estimate of P(Sigma(A) = G)");
    std::uint64_t k = 0;
    add_common(cover_prob, c, kMc);
    cover_prob->add_option("--k", k, "Sample size")->required();

    auto* cover_exact = app.add_subcommand("cover-exact", "Exact P(Sigma(A) = G) by enumeration");
    add_common(cover_exact, c, kGroup | kModel | kThreads | kMaxEnum);
    cover_exact->add_option("--k", k, "Sample size")->required();

    std::string rule = "point";
    bool no_exact = false;
    auto* estimate_f = app.add_subcommand("estimate-f", "Smallest k with coverage probability >= 1/2");
    add_common(estimate_f, c, kMc | kMaxEnum);
    estimate_f->add_option("--rule", rule, "Decision rule")->capture_default_str()->check(CLI::IsMember({"point", "ci-low", "ci-high"}));
    estimate_f->add_flag("--no-exact", no_exact, "Always use Monte Carlo, even where enumeration fits");

    std::vector<std::uint64_t> primes;
    std::vector<double> c_grid;
    auto* scan = app.add_subcommand("scan", "f-hat and its second-order term over a list of primes");
    add_common(scan, c, (kMc & ~kGroup) | kMaxEnum);
    scan->add_option("--primes", primes, "Primes to scan")->delimiter(',')->required();
    scan->add_option("--c-grid", c_grid, "Also estimate coverage at k = floor(log2 p + c log log p) for each c")->delimiter(',');
    scan->add_option("--rule", rule, "Decision rule")->capture_default_str()->check(CLI::IsMember({"point", "ci-low", "ci-high"}));
    scan->add_flag("--no-exact", no_exact, "Always use Monte Carlo");

    std::uint64_t m = 1;
    auto* miss_dist = app.add_subcommand("miss-dist", "Empirical law of U and pooled X_B against Poisson");
    add_common(miss_dist, c, kMc & ~kConfidence);
    miss_dist->add_option("--k", k, "Sample size")->required();
    miss_dist->add_option("--m", m, "|B|")->capture_default_str()->check(CLI::Range(1, 2));

    std::uint64_t p = 0, r = 0;
    std::vector<std::uint64_t> B{1};
    std::string method = "both";
    auto* moments = app.add_subcommand("moments", "Factorial moment E[(X_B)_r] by enumeration and by rank counting");
    add_common(moments, c, kThreads | kMaxEnum);
    moments->add_option("--p", p, "Prime modulus")->required();
    moments->add_option("--k", k, "Sample size")->required();
    moments->add_option("--b", B, "Target set B (one or two residues)")->delimiter(',')->capture_default_str();
    moments->add_option("--r", r, "Moment order")->required();
    moments->add_option("--method", method, "enum, rank, or both")->capture_default_str()->check(CLI::IsMember({"enum", "rank", "both"}));

    auto* census = app.add_subcommand("census", "Rank census of r-tuples of subset indicators");
    add_common(census, c, kThreads | kMaxEnum);
    census->add_option("--p", p, "Prime modulus")->required();
    census->add_option("--k", k, "Sample size")->required();
    census->add_option("--m", m, "|B|")->capture_default_str()->check(CLI::Range(1, 2));
    census->add_option("--r", r, "Tuple length")->required();

    std::uint64_t R = 5;
    std::string lambda_text;
    auto* bonferroni = app.add_subcommand("bonferroni", "Truncated inclusion-exclusion for P(X_B = 0)");
    add_common(bonferroni, c, kThreads | kMaxEnum);
    bonferroni->add_option("--p", p, "Prime modulus (exact moments)");
    bonferroni->add_option("--k", k, "Sample size (exact moments)");
    bonferroni->add_option("--b", B, "Target set B")->delimiter(',')->capture_default_str();
    bonferroni->add_option("--lambda", lambda_text, "Use Poisson moments lambda^r instead (rational, e.g. 1 or 127/101)");
    bonferroni->add_option("--R", R, "Largest truncation order")->capture_default_str();

    double c_param = 0;
    std::optional<double> beta;
    auto* predict = app.add_subcommand("predict", "k(p, c), lambda, truncation plan and the Poisson miss prediction");
    add_common(predict, c, 0);
    predict->add_option("--p", p, "Prime")->required();
    predict->add_option("--c", c_param, "Exponent in 2^k ~ p^c")->required();
    predict->add_option("--m", m, "|B|")->capture_default_str()->check(CLI::Range(1, 2));
    predict->add_option("--beta", beta, "Truncation exponent in (alpha, 1/2)");

    std::string suite = "lemmas";
    std::uint64_t rmax = 4, kmax = 4, samples = 2000, verify_seed = 1;
    std::vector<std::uint64_t> verify_primes{2, 3, 5, 7, 11, 13};
    auto* verify = app.add_subcommand("verify", "Exhaustive checks of the rank and moment lemmas");
    add_common(verify, c, kThreads | kMaxEnum);
    verify->add_option("--suite", suite, "lemmas, moments, census, or all")
        ->capture_default_str()
        ->check(CLI::IsMember({"lemmas", "moments", "census", "all"}));
    verify->add_option("--rmax", rmax, "Largest r")->capture_default_str();
    verify->add_option("--kmax", kmax, "Largest k")->capture_default_str();
    verify->add_option("--primes", verify_primes, "Primes")->delimiter(',')->capture_default_str();
    verify->add_option("--samples", samples, "Random matrices per shape beyond the exhaustive range")->capture_default_str();
    verify->add_option("--seed", verify_seed, "Seed for random matrices")->capture_default_str();

    auto* coupling = app.add_subcommand("coupling", "Exact subset vs i.i.d. coverage gap against the collision bound");
    add_common(coupling, c, kGroup | kThreads | kMaxEnum);
    coupling->add_option("--k", k, "Sample size")->required();

    std::string in_path = "-";
    std::vector<std::string> columns;
    auto* export_cmd = app.add_subcommand("export", "Convert JSONL records to CSV");
    export_cmd->add_option("--in", in_path, "JSONL input (- for stdin)")->capture_default_str();
    export_cmd->add_option("--columns", columns, "Columns to extract")->delimiter(',')->required();
    export_cmd->add_option("--out", c.out_path, "Write CSV here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        print_usage_error(app, e, err);
        return kExitUsage;
    }

    try {
        if (*export_cmd) {
            std::ifstream file;
            std::istream* in = &std::cin;
            if (in_path != "-") {
                file.open(in_path);
                if (!file) throw DomainError("cannot open input file '" + in_path + "'");
                in = &file;
            }
            std::ofstream out_file;
            std::ostream* os = &out;
            if (!c.out_path.empty()) {
                out_file.open(c.out_path, std::ios::trunc);
                if (!out_file) throw DomainError("cannot open output file '" + c.out_path + "'");
                os = &out_file;
            }
            export_csv(*in, columns, *os);
            return kExitOk;
        }

        Sink sink(out, c);
        const Threads threads = c.thread_count();
        const bool timing = !c.no_timing;

        if (*cover_prob) {
            const auto g = GroupSpec::parse(c.group);
            const auto model = c.sample_model();
            Recorder rec{c, "cover-prob", mc_params(c, model)};
            rec.params["k"] = k;
            const auto est = cover_prob_mc(g, k, model, c.trials, c.seed, McOptions{c.confidence, threads});
            sink.emit(rec.make(report::to_json(est, timing)));
            return kExitOk;
        }

        if (*cover_exact) {
            const auto g = GroupSpec::parse(c.group);
            const auto model = c.sample_model();
            Json params;
            params["group"] = g.to_string();
            params["k"] = k;
            params["model"] = std::string(to_string(model));
            params["max_enum"] = c.max_enum;
            Recorder rec{c, "cover-exact", params};
            const auto counts = exact_cover_count(g, k, model, c.limits(), threads);
            Json result;
            result["group"] = g.to_string();
            result["N"] = g.order();
            result["k"] = k;
            result["model"] = std::string(to_string(model));
            result["covering"] = report::integer(counts.covering);
            result["total"] = report::integer(counts.total);
            result["p"] = report::rational(counts.probability());
            result["p_float"] = to_double(counts.probability());
            sink.emit(rec.make(result));
            return kExitOk;
        }

        if (*estimate_f || *scan) {
            FHatOptions opts;
            opts.confidence = c.confidence;
            opts.rule = parse_rule(rule);
            opts.limits = c.limits();
            opts.threads = threads;
            opts.prefer_exact = !no_exact;
            Json params;
            if (*estimate_f) params["group"] = GroupSpec::parse(c.group).to_string();
            params["trials"] = c.trials;
            params["seed"] = c.seed;
            params["confidence"] = c.confidence;
            params["rule"] = rule;
            params["exact_where_feasible"] = !no_exact;
            params["max_enum"] = c.max_enum;
            params["threads"] = c.threads;

            if (*estimate_f) {
                Recorder rec{c, "estimate-f", params};
                try {
                    const auto res = f_hat(GroupSpec::parse(c.group), c.trials, c.seed, opts);
                    sink.emit(rec.make(report::to_json(res, timing)));
                } catch (const BracketError& e) {
                    Json trace = Json::array();
                    for (const auto& est : e.per_k()) trace.push_back(report::to_json(est, timing));
                    err << "error: " << e.what() << "\n" << trace.dump() << "\n";
                    return kExitFailure;
                }
                return kExitOk;
            }

            params["primes"] = primes;
            params["c_grid"] = c_grid;
            Recorder rec{c, "scan", params};
            const auto entries = scan_second_order(primes, c_grid, c.trials, c.seed, opts);
            bool failed = false;
            for (const auto& e : entries) {
                sink.emit(rec.make(report::to_json(e, timing)));
                if (!e.error.empty()) {
                    err << "error: p=" << e.p << ": " << e.error << "\n";
                    failed = true;
                }
            }
            return failed ? kExitFailure : kExitOk;
        }

        if (*miss_dist) {
            const auto g = GroupSpec::parse(c.group);
            const auto model = c.sample_model(SampleModel::Iid);
            Json params = mc_params(c, model);
            params.erase("confidence");
            params["k"] = k;
            params["m"] = m;
            Recorder rec{c, "miss-dist", params};
            const auto dist = miss_distribution(g, k, c.trials, c.seed, m, model, threads);
            sink.emit(rec.make(report::to_json(dist)));
            return kExitOk;
        }

        if (*moments) {
            Json params;
            params["p"] = p;
            params["k"] = k;
            params["B"] = B;
            params["r"] = r;
            params["method"] = method;
            params["max_enum"] = c.max_enum;
            Recorder rec{c, "moments", params};
            Json result;
            if (method == "enum") {
                const auto value = factorial_moment_enum(p, k, B, r, c.limits(), threads);
                result["p"] = p;
                result["k"] = k;
                result["B"] = B;
                result["r"] = r;
                result["value"] = report::rational(value);
                result["value_float"] = to_double(value);
                sink.emit(rec.make(result));
                return kExitOk;
            }
            auto rep = factorial_moment_rank(p, k, B, r, c.limits(), threads);
            if (method == "rank") rep.value_exact.reset();
            if (method == "both" && !rep.value_exact) rep.value_exact = factorial_moment_enum(p, k, B, r, c.limits(), threads);
            result = report::to_json(rep);
            result["value"] = report::rational(rep.value_rank);
            result["value_float"] = to_double(rep.value_rank);
            sink.emit(rec.make(result));
            if (!rep.identity_holds()) {
                err << "error: enumeration and rank formula disagree\n";
                return kExitFailure;
            }
            return kExitOk;
        }

        if (*census) {
            Json params;
            params["p"] = p;
            params["k"] = k;
            params["m"] = m;
            params["r"] = r;
            params["max_enum"] = c.max_enum;
            Recorder rec{c, "census", params};
            const auto cen = tuple_census(p, k, m, r, c.limits(), threads);
            sink.emit(rec.make(report::to_json(cen)));
            return cen.bound_violations == 0 ? kExitOk : kExitFailure;
        }

        if (*bonferroni) {
            Json params;
            params["R"] = R;
            Json result;
            Json rows = Json::array();
            bool all_hold = true;
            if (!lambda_text.empty()) {
                const mpq_class lambda = parse_rational(lambda_text);
                if (lambda < 0) throw DomainError("lambda must be nonnegative");
                params["lambda"] = lambda.get_str();
                Recorder rec{c, "bonferroni", params};
                std::vector<mpq_class> mom(R + 2);
                mom[0] = 1;
                for (std::size_t i = 1; i < mom.size(); ++i) mom[i] = mom[i - 1] * lambda;
                const ExtFloat reference = exp(-to_ext(lambda));
                for (std::uint64_t t = 0; t <= R; ++t) {
                    const auto part = bonferroni_partial(mom, t);
                    const ExtFloat error = abs(to_ext(part.estimate) - reference);
                    const bool holds = error <= to_ext(part.remainder_bound);
                    all_hold = all_hold && holds;
                    Json row;
                    row["R"] = t;
                    row["estimate"] = report::rational(part.estimate);
                    row["estimate_float"] = to_double(part.estimate);
                    row["remainder_bound"] = report::rational(part.remainder_bound);
                    row["error"] = report::ext_real(error);
                    row["holds"] = holds;
                    rows.push_back(row);
                }
                result["mode"] = "poisson";
                result["lambda"] = lambda.get_str();
                result["reference"] = report::ext_real(reference);
                result["truncations"] = rows;
                result["holds"] = all_hold;
                sink.emit(rec.make(result));
            } else {
                if (p == 0 || k == 0) throw DomainError("bonferroni needs --p and --k, or --lambda");
                params["p"] = p;
                params["k"] = k;
                params["B"] = B;
                params["max_enum"] = c.max_enum;
                Recorder rec{c, "bonferroni", params};
                const auto mom = factorial_moments_enum(p, k, B, R + 1, c.limits(), threads);
                const auto exact = zero_probability_enum(p, k, B, c.limits());
                for (std::uint64_t t = 0; t <= R; ++t) {
                    const auto part = bonferroni_partial(mom, t);
                    const mpq_class error = abs_q(part.estimate - exact);
                    const bool right_side = t % 2 == 0 ? part.estimate >= exact : part.estimate <= exact;
                    const bool holds = error <= part.remainder_bound && right_side;
                    all_hold = all_hold && holds;
                    Json row;
                    row["R"] = t;
                    row["estimate"] = report::rational(part.estimate);
                    row["remainder_bound"] = report::rational(part.remainder_bound);
                    row["error"] = report::rational(error);
                    row["side"] = part.estimate > exact ? "above" : part.estimate < exact ? "below" : "equal";
                    row["holds"] = holds;
                    rows.push_back(row);
                }
                result["mode"] = "exact";
                result["p"] = p;
                result["k"] = k;
                result["B"] = B;
                result["exact"] = report::rational(exact);
                result["exact_float"] = to_double(exact);
                result["truncations"] = rows;
                result["holds"] = all_hold;
                sink.emit(rec.make(result));
            }
            return all_hold ? kExitOk : kExitFailure;
        }

        if (*predict) {
            Json params;
            params["p"] = p;
            params["c"] = c_param;
            params["m"] = m;
            params["beta"] = beta ? Json(*beta) : Json(nullptr);
            Recorder rec{c, "predict", params};
            const auto kc = choose_k(p, c_param);
            Json result = report::to_json(kc);
            result["m"] = m;
            result["poisson_miss"] = report::ext_real(poisson_miss_prediction(kc, static_cast<unsigned>(m)));
            std::optional<TruncationPlan> plan;
            if (beta) {
                plan = truncation_plan(kc, beta);
            } else {
                try {
                    plan = truncation_plan(kc);
                } catch (const DomainError& e) {
                    result["truncation_note"] = e.what();
                }
            }
            if (plan) {
                result["truncation"] = report::to_json(*plan);
                const auto ff = falling_factorial_ratio(static_cast<unsigned>(m), kc.M, plan->R, p);
                result["falling_factorial_ratio"] = report::rational(ff.ratio);
                result["falling_factorial_ratio_float"] = to_double(ff.ratio);
                result["correction"] = report::rational(ff.correction);
                result["correction_float"] = to_double(ff.correction);
            } else {
                result["truncation"] = nullptr;
            }
            sink.emit(rec.make(result));
            return kExitOk;
        }

        if (*verify) {
            Json params;
            params["suite"] = suite;
            params["rmax"] = rmax;
            params["kmax"] = kmax;
            params["primes"] = verify_primes;
            params["samples"] = samples;
            params["seed"] = verify_seed;
            params["max_enum"] = c.max_enum;
            Recorder rec{c, "verify", params};
            std::uint64_t violations = 0;
            Json checks;
            if (suite == "lemmas" || suite == "all") {
                const auto rank = verify_rank_stability(rmax, kmax, verify_primes, samples, verify_seed, threads);
                const auto sparse = verify_no_sparse(rmax, kmax, threads);
                const auto lattice = verify_34(rmax, kmax, threads);
                violations += rank.violations + sparse.violations + lattice.violations;
                checks["rank_stability"] = report::to_json(rank);
                checks["no_sparse"] = report::to_json(sparse);
                checks["lattice"] = report::to_json(lattice);
            }
            const auto odd = odd_primes(verify_primes);
            if (suite == "moments" || suite == "all")
                checks["moments"] = verify_moment_grid(odd, kmax, rmax, c.limits(), threads, violations);
            if (suite == "census" || suite == "all")
                checks["census"] = verify_census(odd, kmax, rmax, c.limits(), threads, violations);
            Json result;
            result["suite"] = suite;
            result["violations"] = violations;
            result["checks"] = checks;
            sink.emit(rec.make(result));
            return violations == 0 ? kExitOk : kExitFailure;
        }

        if (*coupling) {
            const auto g = GroupSpec::parse(c.group);
            Json params;
            params["group"] = g.to_string();
            params["k"] = k;
            params["max_enum"] = c.max_enum;
            Recorder rec{c, "coupling", params};
            const auto gap = coupling_gap_exact(g, k, c.limits());
            Json result;
            result["group"] = g.to_string();
            result["k"] = k;
            result.update(report::to_json(gap));
            sink.emit(rec.make(result));
            return gap.holds() ? kExitOk : kExitFailure;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace subsum::cli
