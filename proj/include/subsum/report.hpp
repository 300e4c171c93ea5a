#pragma once

#include "json.hpp"

#include "subsum/estimator.hpp"
#include "subsum/exact_cover.hpp"
#include "subsum/linalg01.hpp"
#include "subsum/moments.hpp"
#include "subsum/sampling.hpp"
#include "subsum/series.hpp"

// JSON views of the library's result types. Exact rationals are strings ("6/25"), big integers
// are decimal strings, reals are numbers. Key order is fixed.

namespace subsum::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json rational(const mpq_class& q);
Json integer(const mpz_class& z);
Json ext_real(const ExtFloat& x);

Json to_json(const EstimateRecord& r, bool with_timing = true);
Json to_json(const FHatResult& r, bool with_timing = true);
Json to_json(const ScanEntry& e, bool with_timing = true);
Json to_json(const MissDistribution& d);
Json to_json(const MomentReport& r);
Json to_json(const TupleCensus& c);
Json to_json(const SecondMomentSummary& s);
Json to_json(const KChoice& kc);
Json to_json(const TruncationPlan& t);
Json to_json(const CouplingGap& c);
Json to_json(const ExactCoverCount& c);
Json to_json(const BonferroniPartial& b);
Json to_json(const RankStabilityReport& r);
Json to_json(const NoSparseReport& r);
Json to_json(const LatticeBoundReport& r);
Json to_json(const IncidenceMatrix& v);

}  // namespace subsum::report
