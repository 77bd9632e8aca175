#include <doctest.h>

#include <cmath>
#include <random>

#include "fsum/series.hpp"

using namespace fsum;

namespace {

// independent partial-sum oracle; for shifted=true sums (k-n) psi(k),
// i.e. the remainder series indexed from the absolute harmonic
double partial_sum(const PsiSequence& psi, std::int64_t n, std::int64_t K,
                   bool weighted, bool shifted = false) {
    long double s = 0.0L;
    for (std::int64_t k = n; k <= K; ++k) {
        const long double factor =
            shifted ? static_cast<long double>(k - n)
                    : (weighted ? static_cast<long double>(k) : 1.0L);
        s += factor * static_cast<long double>(psi.value_at(k));
    }
    return static_cast<double>(s);
}

} // namespace

TEST_CASE("geometric closed forms") {
    const GeometricTails g = geometric_tail(0.5, 3);
    CHECK(g.tail == doctest::Approx(0.25).epsilon(1e-15));
    // brute-force partial sum of sum_{k>=3} k q^k agrees with the closed form
    double brute = 0.0;
    for (int k = 3; k < 200; ++k) brute += k * std::pow(0.5, k);
    CHECK(g.weighted_tail == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.weighted_tail == doctest::Approx(brute).epsilon(1e-14));
    // full series: q/(1-q)^2 = 2
    CHECK(geometric_tail(0.5, 1).weighted_tail ==
          doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(geometric_tail(0.0, 1), DomainError);
    CHECK_THROWS_AS(geometric_tail(1.0, 1), DomainError);
    CHECK_THROWS_AS(geometric_tail(-0.5, 1), DomainError);
}

TEST_CASE("tail_sum certified against closed forms") {
    const PsiSequence psi = PsiSequence::gen_poisson(std::log(2.0), 1.0);
    const CertifiedValue cv = tail_sum(psi, 3, 1e-14);
    CHECK(std::abs(cv.value - 0.25) <= cv.radius + 1e-15);
    CHECK(cv.radius <= 1e-14);
    CHECK(cv.terms_used >= 1);
}

TEST_CASE("empty tails are exactly zero") {
    const PsiSequence psi = PsiSequence::custom({1.0, 0.5});
    const CertifiedValue t = tail_sum(psi, 5, 1e-12);
    CHECK(t.value == 0.0);
    CHECK(t.radius == 0.0);
    const CertifiedValue w = weighted_tail_sum(psi, 2, 1e-12);
    CHECK(w.value == 0.0);
}

TEST_CASE("weighted_tail_sum: geometric example") {
    // sum_{k>=1} k 2^{-(k+3)} = 2^{-3} sum k 2^{-k} = 1/4
    const PsiSequence psi = PsiSequence::gen_poisson(std::log(2.0), 1.0);
    const CertifiedValue cv = weighted_tail_sum(psi, 3, 1e-14);
    CHECK(std::abs(cv.value - 0.25) <= cv.radius + 1e-15);
}

TEST_CASE("gen_poisson r=1/2 tail matches the subexponential envelope") {
    // frozen from a 40-digit partial-sum evaluation
    const PsiSequence psi = PsiSequence::gen_poisson(1.0, 0.5);
    const CertifiedValue cv = tail_sum(psi, 100, 1e-12);
    CHECK(cv.value == doctest::Approx(0.001021687575548153).epsilon(1e-10));
    const double envelope = std::exp(-10.0) * std::pow(100.0, 0.5) / 0.5;
    const double rel_gap = std::abs(cv.value / envelope - 1.0);
    CHECK(rel_gap <= 0.2); // (n^-r + n^{r-1}) = 0.2 at n=100
}

TEST_CASE("loglog weighted tail: certified against deep partial sums") {
    const PsiSequence psi = PsiSequence::loglog_power();
    const CertifiedValue cv = weighted_tail_sum(psi, 50, 1e-3);
    // frozen: partial sum to 2e6 terms = 10.9295276772; far tail < 1e-4
    CHECK(cv.value == doctest::Approx(10.92952767723237).epsilon(2e-4));
    const double lower = partial_sum(psi, 50, 200000, false, true);
    CHECK(cv.value + cv.radius >= lower);
}

TEST_CASE("tail nesting is monotone") {
    const PsiSequence fams[] = {PsiSequence::gen_poisson(0.8, 1.0),
                                PsiSequence::loglog_power(),
                                PsiSequence::exp_over_log()};
    for (const PsiSequence& psi : fams) {
        for (std::int64_t n : {2, 7, 19}) {
            const CertifiedValue a = tail_sum(psi, n, 1e-9);
            const CertifiedValue b = tail_sum(psi, n + 1, 1e-9);
            CHECK(b.value <= a.value + a.radius + b.radius);
        }
    }
}

TEST_CASE("consistency identity: shifted weighted = weighted - n tail") {
    const PsiSequence fams[] = {PsiSequence::gen_poisson(1.0, 2.0),
                                PsiSequence::gen_poisson(0.3, 1.0),
                                PsiSequence::exp_log_squared()};
    for (const PsiSequence& psi : fams) {
        for (std::int64_t n : {1, 4, 9}) {
            const CertifiedValue ws = weighted_tail_sum(psi, n, 1e-11);
            const CertifiedValue wf = weighted_tail_from(psi, n, 1e-11);
            const CertifiedValue t = tail_sum(psi, n, 1e-11);
            const double rhs = wf.value - static_cast<double>(n) * t.value;
            const double slack = ws.radius + wf.radius +
                                 static_cast<double>(n) * t.radius + 1e-12;
            CHECK(std::abs(ws.value - rhs) <= slack);
        }
    }
}

TEST_CASE("certified radius brackets a deep partial-sum oracle") {
    const PsiSequence psi = PsiSequence::exp_over_log();
    const CertifiedValue cv = tail_sum(psi, 10, 1e-10);
    const double lower = partial_sum(psi, 10, 5000, false);
    CHECK(cv.value + cv.radius >= lower);
    CHECK(cv.value - cv.radius <= lower + 1e-10);
}

TEST_CASE("poisson_tail_bound_r_gt_1") {
    SUBCASE("domain checks") {
        CHECK_NOTHROW(poisson_tail_bound_r_gt_1(1.0, 2.0, 1)); // a r 2^2 = 8 > 2
        CHECK_THROWS_AS(poisson_tail_bound_r_gt_1(1e-3, 1.01, 1), DomainError);
        CHECK_THROWS_AS(poisson_tail_bound_r_gt_1(1.0, 1.0, 5), DomainError);
        CHECK_THROWS_AS(poisson_tail_bound_r_gt_1(-1.0, 2.0, 5), DomainError);
    }
    SUBCASE("dominates the directly summed series") {
        for (const auto& [a, r, n] :
             {std::tuple{1.0, 2.0, std::int64_t{5}},
              std::tuple{0.5, 3.0, std::int64_t{2}},
              std::tuple{2.0, 1.5, std::int64_t{8}}}) {
            const PsiSequence psi = PsiSequence::gen_poisson(a, r);
            const double direct =
                partial_sum(psi, n + 1, n + 400, true) / static_cast<double>(n);
            const double bound = poisson_tail_bound_r_gt_1(a, r, n);
            CHECK(bound >= direct);
        }
    }
    SUBCASE("frozen example alpha=1 r=2 n=5") {
        // direct sum = 2.7834e-16, bound = 3.0220e-16 (40-digit evaluation)
        const double bound = poisson_tail_bound_r_gt_1(1.0, 2.0, 5);
        CHECK(bound == doctest::Approx(3.022006887403050e-16).epsilon(1e-9));
        CHECK(bound >= 2.783434736334778e-16);
    }
}

TEST_CASE("far bounds are valid upper bounds on probed tails") {
    std::mt19937 rng(20240811);
    const PsiSequence fams[] = {
        PsiSequence::gen_poisson(1.0, 2.0), PsiSequence::gen_poisson(0.4, 1.0),
        PsiSequence::gen_poisson(1.0, 0.5), PsiSequence::exp_log_squared(),
        PsiSequence::exp_over_log()};
    for (const PsiSequence& psi : fams) {
        std::uniform_int_distribution<std::int64_t> pick(20, 400);
        for (int rep = 0; rep < 5; ++rep) {
            const std::int64_t K = pick(rng);
            const TailBound tb = far_tail_bound(psi, K);
            if (!tb.valid) continue;
            const double probe = partial_sum(psi, K + 1, K + 20000, false);
            CHECK(tb.bound >= probe);
            const TailBound wb = far_weighted_tail_bound(psi, K);
            if (wb.valid) {
                const double wprobe = partial_sum(psi, K + 1, K + 20000, true);
                CHECK(wb.bound >= wprobe);
            }
        }
    }
}

TEST_CASE("unreachable tolerance raises TolUnreachable") {
    // r = 0.1 decays so slowly that no certified bound fits the budget
    const PsiSequence psi = PsiSequence::gen_poisson(1.0, 0.1);
    CHECK_THROWS_AS(tail_sum(psi, 1, 1e-12), TolUnreachable);
}

TEST_CASE("invalid arguments") {
    const PsiSequence psi = PsiSequence::gen_poisson(1.0, 1.0);
    CHECK_THROWS_AS(tail_sum(psi, 0, 1e-6), DomainError);
    CHECK_THROWS_AS(tail_sum(psi, 3, 0.0), DomainError);
    CHECK_THROWS_AS(weighted_tail_sum(psi, 3, -1.0), DomainError);
}
