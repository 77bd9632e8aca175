#pragma once

#include <cstdint>

#include "fsum/certified.hpp"
#include "fsum/psi.hpp"

namespace fsum {

/// Compensated (Neumaier) accumulator for long series.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double get() const { return sum + comp; }
};

/// Maximum number of summed terms before TolUnreachable.
inline constexpr std::int64_t kMaxSeriesTerms = 100'000'000;

/// Rigorous upper bound on sum_{k > K} psi(k). valid=false means the
/// bounding argument does not apply yet at this K (grow K and retry).
struct TailBound {
    double bound = 0.0;
    bool valid = false;
};

TailBound far_tail_bound(const PsiSequence& psi, std::int64_t K);

/// Rigorous upper bound on sum_{k > K} k psi(k).
TailBound far_weighted_tail_bound(const PsiSequence& psi, std::int64_t K);

/// Rigorous upper bound on sum_{k > K} k^2 psi(k). May stay invalid for the
/// slowest families at reachable K (callers fall back to first-order
/// Lipschitz arguments).
TailBound far_k2_tail_bound(const PsiSequence& psi, std::int64_t K);

/// sum_{k=n}^inf psi(k) with radius <= tol.
CertifiedValue tail_sum(const PsiSequence& psi, std::int64_t n, double tol);

/// sum_{k=1}^inf k psi(k+n) with radius <= tol (the remainder series).
CertifiedValue weighted_tail_sum(const PsiSequence& psi, std::int64_t n,
                                 double tol);

/// sum_{k=n}^inf k psi(k) with radius <= tol.
CertifiedValue weighted_tail_from(const PsiSequence& psi, std::int64_t n,
                                  double tol);

/// Exact closed forms for the geometric family:
/// tail = sum_{k=n}^inf q^k = q^n/(1-q),
/// weighted_tail = sum_{k=n}^inf k q^k = (n q^n (1-q) + q^{n+1})/(1-q)^2.
struct GeometricTails {
    double tail = 0.0;
    double weighted_tail = 0.0;
};
GeometricTails geometric_tail(double q, std::int64_t n);

/// The explicit integration-by-parts bound on (1/n) sum_{k>n} k e^{-a k^r}
/// for r > 1; requires a*r*(n+1)^r > 2.
double poisson_tail_bound_r_gt_1(double alpha, double r, std::int64_t n);

} // namespace fsum
