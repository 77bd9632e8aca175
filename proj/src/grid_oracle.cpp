#include "fsum/grid_oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fsum/series.hpp"

namespace fsum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double OracleResult::e_lower() const {
    return (max_val - min_val - 2.0 * point_radius) / kTwoPi;
}

double OracleResult::e_upper() const {
    return (max_val - min_val + 2.0 * lip_delta + 2.0 * point_radius) / kTwoPi;
}

OracleResult grid_oracle(const PsiSequence& psi, double beta, std::int64_t n,
                         std::int64_t points, double trunc_tol) {
    if (n < 1) throw DomainError("grid_oracle: n must be >= 1");
    if (points < 16) throw DomainError("grid_oracle: too few grid points");
    if (!(trunc_tol > 0.0)) throw DomainError("grid_oracle: bad trunc_tol");

    // truncation horizon by direct growth against the family tail bound
    std::int64_t K = psi.is_custom() ? std::max<std::int64_t>(psi.table_end(), n - 1)
                                     : n + 63;
    if (!psi.is_custom()) {
        while (true) {
            const TailBound tb = far_tail_bound(psi, K);
            if (tb.valid && tb.bound <= trunc_tol &&
                far_weighted_tail_bound(psi, K).valid)
                break;
            if (K - n + 1 >= kMaxSeriesTerms)
                throw TolUnreachable("grid_oracle: truncation unreachable");
            K += std::max<std::int64_t>(K - n + 1, 64);
        }
    }

    std::vector<double> coef;
    coef.reserve(static_cast<std::size_t>(std::max<std::int64_t>(K - n + 1, 0)));
    double abs_sum = 0.0, weighted = 0.0;
    for (std::int64_t k = n; k <= K; ++k) {
        const double p = psi.value_at(k);
        coef.push_back(p);
        abs_sum += p;
        weighted += static_cast<double>(k) * p;
    }
    const double trunc = psi.is_custom() ? 0.0 : far_tail_bound(psi, K).bound;
    const double wtrunc =
        psi.is_custom() ? 0.0 : far_weighted_tail_bound(psi, K).bound;
    const double lip = (weighted + wtrunc) * (1.0 + 1e-12);

    const double phase = beta * std::numbers::pi / 2.0;
    const double delta = kTwoPi / static_cast<double>(points);

    OracleResult res;
    res.points = points;
    res.terms = static_cast<std::int64_t>(coef.size());
    res.max_val = -std::numeric_limits<double>::infinity();
    res.min_val = std::numeric_limits<double>::infinity();
    if (coef.empty()) {
        res.max_val = res.min_val = 0.0;
        res.point_radius = trunc;
        res.lip_delta = 0.5 * lip * delta;
        return res;
    }

    for (std::int64_t j = 0; j < points; ++j) {
        const double t = static_cast<double>(j) * delta;
        // single-lane rotation, re-anchored every 512 terms
        double s = 0.0;
        const double cr = std::cos(t), ci = std::sin(t);
        double wre = 0.0, wim = 0.0;
        for (std::size_t m = 0; m < coef.size(); ++m) {
            if (m % 512 == 0) {
                const double ang =
                    static_cast<double>(n + static_cast<std::int64_t>(m)) * t -
                    phase;
                wre = std::cos(ang);
                wim = std::sin(ang);
            }
            s += coef[m] * wre;
            const double re = wre * cr - wim * ci;
            wim = wre * ci + wim * cr;
            wre = re;
        }
        if (s > res.max_val) res.max_val = s;
        if (s < res.min_val) res.min_val = s;
    }
    // plain accumulation over m terms plus the rotation drift per block
    const double fp = 4.0 * std::numeric_limits<double>::epsilon() *
                      (static_cast<double>(coef.size()) + 2048.0) * abs_sum;
    res.point_radius = trunc + fp;
    res.lip_delta = 0.5 * lip * delta;
    return res;
}

} // namespace fsum
