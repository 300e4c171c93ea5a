#include "subsum/series.hpp"

#include <cmath>

#include "subsum/errors.hpp"
#include "subsum/numeric.hpp"

namespace subsum {

namespace {

template <class Float>
Float k_argument(std::uint64_t p, double c) {
    const Float lp = log(Float(p));
    return lp / log(Float(2)) + Float(c) * log(lp);
}

}  // namespace

ExtFloat to_ext(const mpq_class& q) { return ExtFloat(q.get_num().get_str()) / ExtFloat(q.get_den().get_str()); }

KChoice choose_k(std::uint64_t p, double c) {
    if (p < 5) throw DomainError("choose_k needs p >= 5 so that log log p > 0");
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    if (!(c > 0)) throw DomainError("choose_k needs c > 0");
    KChoice kc;
    kc.p = p;
    kc.c = c;
    kc.alpha = c * std::log(2.0);
    kc.outside_default_range = c >= 1.0 / (2.0 * std::log(2.0));

    ExtFloat arg = k_argument<ExtFloat>(p, c);
    ExtFloat fl = floor(arg);
    ExtFloat frac = arg - fl;
    if (frac < ExtFloat("1e-9") || frac > 1 - ExtFloat("1e-9")) {
        WideFloat wide = k_argument<WideFloat>(p, c);
        WideFloat wfl = floor(wide);
        fl = ExtFloat(wfl);
        frac = ExtFloat(wide - wfl);
        kc.refined = true;
    }
    kc.k = fl.convert_to<std::uint64_t>();
    kc.theta = frac;
    if (kc.k >= 4096) throw CapacityError("k is implausibly large");
    mpz_class two_k;
    mpz_ui_pow_ui(two_k.get_mpz_t(), 2, kc.k);
    kc.M = two_k - 1;
    kc.lambda = mpq_class(kc.M, to_mpz(p));
    kc.lambda.canonicalize();
    return kc;
}

TruncationPlan truncation_plan(const KChoice& kc, std::optional<double> beta) {
    TruncationPlan plan;
    plan.beta = beta.value_or((kc.alpha + 0.5) / 2);
    if (!(plan.beta > kc.alpha && plan.beta < 0.5))
        throw DomainError("truncation exponent must satisfy alpha < beta < 1/2");
    ExtFloat R = pow(log(ExtFloat(kc.p)), ExtFloat(plan.beta));
    plan.R = floor(R).convert_to<std::uint64_t>();
    return plan;
}

FallingFactorialRatio falling_factorial_ratio(unsigned m, const mpz_class& M, std::uint64_t r, std::uint64_t p) {
    if (m != 1 && m != 2) throw DomainError("m must be 1 or 2");
    if (r < 1) throw DomainError("falling-factorial ratio needs r >= 1");
    if (p < 2) throw DomainError("p must be at least 2");
    const mpz_class mM = M * m;
    const mpz_class ff = falling_factorial(mM, r);
    mpz_class pr, mMr;
    mpz_pow_ui(pr.get_mpz_t(), to_mpz(p).get_mpz_t(), r);
    mpz_pow_ui(mMr.get_mpz_t(), mM.get_mpz_t(), r);
    FallingFactorialRatio out;
    out.ratio = mpq_class(ff, pr);
    out.ratio.canonicalize();
    if (mM == 0) {
        out.correction = 0;
    } else {
        out.correction = mpq_class(ff, mMr);
        out.correction.canonicalize();
    }
    return out;
}

BonferroniPartial bonferroni_partial(std::span<const mpq_class> moments, std::uint64_t R) {
    if (moments.empty() || moments[0] != 1) throw DomainError("the zeroth factorial moment must be 1");
    if (moments.size() < R + 2)
        throw ArityError("truncation at R=" + std::to_string(R) + " needs moments up to order " + std::to_string(R + 1)
                         + ", got " + std::to_string(moments.size() - 1));
    BonferroniPartial out;
    out.estimate = 0;
    mpz_class fact = 1;
    for (std::uint64_t r = 0; r <= R; ++r) {
        if (r > 0) fact *= to_mpz(r);
        mpq_class term = moments[r] / mpq_class(fact);
        if (r % 2 == 0) {
            out.estimate += term;
        } else {
            out.estimate -= term;
        }
    }
    fact *= to_mpz(R + 1);
    out.remainder_bound = moments[R + 1] / mpq_class(fact);
    return out;
}

ExtFloat poisson_miss_prediction(const mpq_class& lambda, unsigned m) {
    if (m != 1 && m != 2) throw DomainError("m must be 1 or 2");
    return exp(-ExtFloat(m) * to_ext(lambda));
}

ExtFloat poisson_miss_prediction(const KChoice& kc, unsigned m) { return poisson_miss_prediction(kc.lambda, m); }

}  // namespace subsum
