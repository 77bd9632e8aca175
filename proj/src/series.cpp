#include "fsum/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fsum {

namespace {

constexpr double kTrueMin = std::numeric_limits<double>::denorm_min();

// exp with a one-sided guard so the result stays an upper bound.
double exp_up(double x) {
    return std::exp(x) * (1.0 + 4e-13) + 2.0 * kTrueMin;
}

// Offset c for the power-comparison bound psi(k) <= (k+c)^{-a}.
double power_offset(PsiFamily f) {
    switch (f) {
    case PsiFamily::LogLogPower: return 2.0;
    case PsiFamily::ExpOverLog: return 1.0;
    default: return 0.0;
    }
}

// Smallest K beyond which the exponent ratio u(t)/ln(t+c) is nondecreasing,
// so the power comparison is rigorous.
std::int64_t power_bound_min_k(const PsiSequence& psi) {
    switch (psi.family()) {
    case PsiFamily::LogLogPower: return 1;
    case PsiFamily::ExpLogSquared: return 2;
    case PsiFamily::ExpOverLog: return 7; // needs ln(t+1) > 2
    case PsiFamily::GenPoisson: {
        // needs r ln t > 1
        const double t = std::exp(1.0 / psi.r());
        return t > 1e18 ? std::numeric_limits<std::int64_t>::max()
                        : static_cast<std::int64_t>(t) + 1;
    }
    default: return 1;
    }
}

// Ratio bound for gen_poisson with r >= 1: increments of k^r are
// nondecreasing, so psi(k+1)/psi(k) <= rho for all k >= K+1.
// weight_power selects sum k^w psi(k), w in {0,1,2}.
TailBound geometric_ratio_bounds(const PsiSequence& psi, std::int64_t K,
                                 int weight_power) {
    const double a = psi.alpha(), r = psi.r();
    const double inc = (std::pow(static_cast<double>(K + 2), r) -
                        std::pow(static_cast<double>(K + 1), r)) *
                       (1.0 - 1e-9);
    const double rho = std::exp(-a * inc);
    if (!(rho < 1.0)) return {};
    const double log_first = psi.log_value_at(K + 1);
    const double m = static_cast<double>(K + 1);
    const double om = 1.0 - rho;
    double factor = 0.0;
    switch (weight_power) {
    case 0: factor = 1.0 / om; break;
    case 1: factor = m / om + rho / (om * om); break;
    default:
        // sum (m+j)^2 rho^j = m^2/(1-rho) + 2m rho/(1-rho)^2 +
        //                     rho(1+rho)/(1-rho)^3
        factor = m * m / om + 2.0 * m * rho / (om * om) +
                 rho * (1.0 + rho) / (om * om * om);
        break;
    }
    TailBound tb;
    tb.valid = true;
    tb.bound = exp_up(log_first + std::log(factor));
    return tb;
}

// psi(k) <= (k+c)^{-a} for k >= K+1 with a = u(K+1)/ln(K+1+c); then the
// tail is dominated by a power integral. Needs a > weight_power + 1.
TailBound power_comparison_bounds(const PsiSequence& psi, std::int64_t K,
                                  int weight_power) {
    if (K + 1 < power_bound_min_k(psi)) return {};
    const double c = power_offset(psi.family());
    const double u = -psi.log_value_at(K + 1);
    const double lg = std::log(static_cast<double>(K + 1) + c);
    const double a = u / lg;
    const double need = 1.0 + static_cast<double>(weight_power);
    if (!(a > need + 1e-9)) return {};
    TailBound tb;
    tb.valid = true;
    tb.bound = exp_up((need - a) * std::log(static_cast<double>(K) + c) -
                      std::log(a - need));
    return tb;
}

// Direct integral bound for gen_poisson with r < 1. Integrating by parts,
//   I := int_K^inf e^{-a t^r} dt
//      = K^{1-r} e^{-a K^r}/(a r) + ((1-r)/(a r)) int_K^inf t^{-r} e^{-a t^r} dt,
// and the correction integral is at most K^{-r} I, so
//   I <= K^{1-r} e^{-a K^r} / (a r) / (1 - (1-r)/(a r K^r))
// whenever a r K^r > 1 - r.
TailBound gp_subexponential_integral_bound(const PsiSequence& psi,
                                           std::int64_t K) {
    const double a = psi.alpha(), r = psi.r();
    const double Kd = static_cast<double>(K);
    const double arkr = a * r * std::pow(Kd, r);
    if (!(arkr > (1.0 - r) * (1.0 + 1e-9))) return {};
    TailBound tb;
    tb.valid = true;
    tb.bound = exp_up((1.0 - r) * std::log(Kd) - a * std::pow(Kd, r) -
                      std::log(a * r) - std::log1p(-(1.0 - r) / arkr));
    return tb;
}

TailBound better(TailBound x, TailBound y) {
    if (!x.valid) return y;
    if (!y.valid) return x;
    return x.bound <= y.bound ? x : y;
}

TailBound far_bound_impl(const PsiSequence& psi, std::int64_t K,
                         int weight_power) {
    switch (psi.family()) {
    case PsiFamily::Custom:
        return {0.0, K >= psi.table_end()};
    case PsiFamily::GenPoisson:
        if (psi.r() >= 1.0)
            return geometric_ratio_bounds(psi, K, weight_power);
        if (weight_power == 0)
            return better(power_comparison_bounds(psi, K, weight_power),
                          gp_subexponential_integral_bound(psi, K));
        return power_comparison_bounds(psi, K, weight_power);
    default:
        return power_comparison_bounds(psi, K, weight_power);
    }
}

struct SumResult {
    Accumulator acc;
    std::int64_t last = 0; // last summed index
    double trunc = 0.0;    // certified bound on the dropped tail
};

// Sum term(k) for k = n.. with adaptive truncation: grow the horizon until
// the family far-tail bound drops below tol.
template <typename TermFn, typename BoundFn>
SumResult adaptive_sum(std::int64_t n, double tol, TermFn term, BoundFn bound,
                       const char* what) {
    SumResult res;
    res.last = n - 1;
    std::int64_t K = n + 63;
    while (true) {
        for (std::int64_t k = res.last + 1; k <= K; ++k) res.acc.add(term(k));
        res.last = K;
        const TailBound tb = bound(K);
        if (tb.valid && tb.bound <= tol) {
            res.trunc = tb.bound;
            return res;
        }
        if (K - n + 1 >= kMaxSeriesTerms) {
            std::ostringstream os;
            os << what << ": tolerance " << tol << " unreachable within "
               << kMaxSeriesTerms << " terms (bound "
               << (tb.valid ? tb.bound : std::numeric_limits<double>::infinity())
               << " at K=" << K << ")";
            throw TolUnreachable(os.str());
        }
        K = std::min(n + kMaxSeriesTerms - 1, K + std::max<std::int64_t>(K - n + 1, 64));
    }
}

CertifiedValue finish(const SumResult& r, std::int64_t n) {
    CertifiedValue cv;
    cv.value = r.acc.get();
    cv.radius = r.trunc + 8.0 * std::numeric_limits<double>::epsilon() *
                              std::abs(cv.value);
    cv.terms_used = r.last - n + 1;
    return cv;
}

void require_summable(const PsiSequence& psi) {
    if (!check_admissibility(psi, 32).summable)
        throw NotSummable("series: psi fails the summability condition");
}

} // namespace

TailBound far_tail_bound(const PsiSequence& psi, std::int64_t K) {
    return far_bound_impl(psi, K, 0);
}

TailBound far_weighted_tail_bound(const PsiSequence& psi, std::int64_t K) {
    return far_bound_impl(psi, K, 1);
}

TailBound far_k2_tail_bound(const PsiSequence& psi, std::int64_t K) {
    return far_bound_impl(psi, K, 2);
}

CertifiedValue tail_sum(const PsiSequence& psi, std::int64_t n, double tol) {
    if (n < 1) throw DomainError("tail_sum: n must be >= 1");
    if (!(tol > 0.0)) throw DomainError("tail_sum: tol must be positive");
    require_summable(psi);
    if (psi.is_custom() && psi.table_end() < n) return {0.0, 0.0, 0};
    const auto res = adaptive_sum(
        n, tol, [&](std::int64_t k) { return psi.value_at(k); },
        [&](std::int64_t K) { return far_tail_bound(psi, K); }, "tail_sum");
    return finish(res, n);
}

CertifiedValue weighted_tail_sum(const PsiSequence& psi, std::int64_t n,
                                 double tol) {
    if (n < 1) throw DomainError("weighted_tail_sum: n must be >= 1");
    if (!(tol > 0.0)) throw DomainError("weighted_tail_sum: tol must be positive");
    require_summable(psi);
    if (psi.is_custom() && psi.table_end() <= n) return {0.0, 0.0, 0};
    // sum_{k>=1} k psi(k+n); the dropped tail sum_{j>K} (j-n) psi(j) is
    // dominated by the unshifted weighted tail.
    const auto res = adaptive_sum(
        n + 1, tol,
        [&](std::int64_t j) {
            return static_cast<double>(j - n) * psi.value_at(j);
        },
        [&](std::int64_t K) { return far_weighted_tail_bound(psi, K); },
        "weighted_tail_sum");
    return finish(res, n + 1);
}

CertifiedValue weighted_tail_from(const PsiSequence& psi, std::int64_t n,
                                  double tol) {
    if (n < 1) throw DomainError("weighted_tail_from: n must be >= 1");
    if (!(tol > 0.0)) throw DomainError("weighted_tail_from: tol must be positive");
    require_summable(psi);
    if (psi.is_custom() && psi.table_end() < n) return {0.0, 0.0, 0};
    const auto res = adaptive_sum(
        n, tol,
        [&](std::int64_t k) { return static_cast<double>(k) * psi.value_at(k); },
        [&](std::int64_t K) { return far_weighted_tail_bound(psi, K); },
        "weighted_tail_from");
    return finish(res, n);
}

GeometricTails geometric_tail(double q, std::int64_t n) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("geometric_tail: q must lie in (0,1)");
    if (n < 1) throw DomainError("geometric_tail: n must be >= 1");
    const double qn = std::pow(q, static_cast<double>(n));
    GeometricTails g;
    g.tail = qn / (1.0 - q);
    g.weighted_tail =
        (static_cast<double>(n) * qn * (1.0 - q) + qn * q) / ((1.0 - q) * (1.0 - q));
    return g;
}

double poisson_tail_bound_r_gt_1(double alpha, double r, std::int64_t n) {
    if (!(r > 1.0)) throw DomainError("poisson_tail_bound_r_gt_1: need r > 1");
    if (!(alpha > 0.0)) throw DomainError("poisson_tail_bound_r_gt_1: need alpha > 0");
    if (n < 1) throw DomainError("poisson_tail_bound_r_gt_1: need n >= 1");
    const double np1 = static_cast<double>(n + 1);
    const double denom = alpha * r * std::pow(np1, r) - 2.0;
    if (!(denom > 0.0))
        throw DomainError("poisson_tail_bound_r_gt_1: need alpha*r*(n+1)^r > 2");
    const double log_e = -alpha * std::pow(np1, r);
    const double integral_factor =
        (1.0 + 2.0 / denom) / (alpha * r * std::pow(np1, r - 2.0));
    return exp_up(log_e + std::log(np1 + integral_factor)) /
           static_cast<double>(n);
}

} // namespace fsum
