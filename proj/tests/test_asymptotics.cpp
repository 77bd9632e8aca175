#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fsum/asymptotics.hpp"
#include "fsum/exact.hpp"
#include "fsum/series.hpp"

using namespace fsum;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("formula names round-trip") {
    for (FormulaId f : {FormulaId::T1, FormulaId::C1, FormulaId::C01,
                        FormulaId::C2, FormulaId::C00, FormulaId::T2,
                        FormulaId::C3, FormulaId::C4, FormulaId::C5})
        CHECK(parse_formula(formula_name(f)) == f);
    CHECK_THROWS_AS(parse_formula("t3"), InvalidParameter);
}

TEST_CASE("t1: single harmonic is predicted exactly") {
    std::vector<double> table(4, 0.0);
    table[3] = 1.0;
    const PsiSequence psi = PsiSequence::custom(table);
    const Prediction p = predict_t1(psi, 4, 1e-12);
    CHECK(p.main_term == doctest::Approx(1.0 / kPi).epsilon(1e-13));
    CHECK(p.remainder_scale == 0.0);
    const ErrorEstimate est = best_constant_error({psi, 0.0, 4}, 1e-11);
    CHECK(std::abs(est.e_n.value - p.main_term) <= 1e-10);
}

TEST_CASE("t1: geometric closed-form example") {
    const PsiSequence psi = PsiSequence::gen_poisson(std::log(2.0), 1.0);
    const Prediction p = predict_t1(psi, 3, 1e-13);
    CHECK(p.main_term == doctest::Approx(0.25 / kPi).epsilon(1e-11));
    CHECK(p.remainder_scale == doctest::Approx(0.25 / 3.0).epsilon(1e-11));
}

TEST_CASE("t1: all-zero tail predicts zero") {
    const PsiSequence psi = PsiSequence::custom({1.0});
    const Prediction p = predict_t1(psi, 2, 1e-12);
    CHECK(p.main_term == 0.0);
    CHECK(p.remainder_scale == 0.0);
}

TEST_CASE("c1: superexponential main term and cross-checked remainder") {
    const PsiSequence psi = PsiSequence::gen_poisson(1.0, 2.0);
    const Prediction p = predict_c1(psi, 4, 1e-24);
    CHECK(p.main_term == doctest::Approx(std::exp(-16.0) / kPi).epsilon(1e-12));
    CHECK(p.validity_notes.empty());
    // remainder scale = (1/n) sum_{k>=n+1} k e^{-k^2}: partial-sum oracle
    long double direct = 0.0L;
    for (int k = 5; k < 40; ++k)
        direct += static_cast<long double>(k) * std::exp(-1.0L * k * k);
    CHECK(p.remainder_scale ==
          doctest::Approx(static_cast<double>(direct) / 4.0).epsilon(1e-10));
}

TEST_CASE("c1 flags a d0 violation but still computes") {
    const PsiSequence psi = PsiSequence::gen_poisson(std::log(2.0), 1.0);
    const Prediction p = predict_c1(psi, 3, 1e-12);
    CHECK(!p.validity_notes.empty());
    CHECK(p.main_term == doctest::Approx(0.125 / kPi));
}

TEST_CASE("c01 closed forms") {
    const Prediction p = predict_c01(1.0, 2.0, 3);
    CHECK(p.main_term == doctest::Approx(std::exp(-9.0) / kPi).epsilon(1e-13));
    // scale/main = pi e^{-a r n^{r-1}} (1 + 1/(a r (n+1)^{r-1}))
    const double expected_ratio = kPi * std::exp(-6.0) * (1.0 + 1.0 / 8.0);
    CHECK(p.remainder_scale / p.main_term ==
          doctest::Approx(expected_ratio).epsilon(1e-12));
    CHECK_THROWS_AS(predict_c01(1.0, 1.0, 3), DomainError);
    CHECK_THROWS_AS(predict_c01(1e-3, 1.01, 1), DomainError);
}

TEST_CASE("c01 consistency with exact errors for r=2") {
    const PsiSequence psi = PsiSequence::gen_poisson(1.0, 2.0);
    for (std::int64_t n = 3; n <= 8; ++n) {
        const double scale_est = tail_sum(psi, n, 1e250).value;
        const ErrorEstimate est =
            best_constant_error({psi, 0.0, n}, 1e-6 * scale_est);
        const Prediction p = predict_c01(1.0, 2.0, n);
        const double dev = std::abs(est.e_n.value - p.main_term);
        CHECK(p.remainder_scale >= dev); // O(1) constant is around 1 here
    }
}

TEST_CASE("c2 closed forms and the T1 identity") {
    const double alpha = std::log(2.0);
    const Prediction p = predict_c2(alpha, 3);
    CHECK(p.main_term == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-13));
    CHECK(p.remainder_scale == doctest::Approx(1.0 / 12.0).epsilon(1e-13));

    // T1 on the geometric family reproduces C2 exactly (f32 derivation)
    const PsiSequence psi = PsiSequence::gen_poisson(alpha, 1.0);
    for (std::int64_t n : {1, 3, 9, 17}) {
        const Prediction t1 = predict_t1(psi, n, 1e-15);
        const Prediction c2 = predict_c2(alpha, n);
        CHECK(t1.main_term == doctest::Approx(c2.main_term).epsilon(1e-11));
        CHECK(t1.remainder_scale ==
              doctest::Approx(c2.remainder_scale).epsilon(1e-10));
    }
    // alpha -> inf: main -> 0
    CHECK(predict_c2(500.0, 2).main_term == 0.0);
    CHECK(std::isfinite(predict_c2(500.0, 2).log_main));
    CHECK_THROWS_AS(predict_c2(0.0, 3), DomainError);
}

TEST_CASE("c00 closed forms") {
    const Prediction p = predict_c00(1.0, 0.5, 100);
    CHECK(p.main_term ==
          doctest::Approx(20.0 * std::exp(-10.0) / kPi).epsilon(1e-12));
    // symmetric envelope at r=1/2: n^{-r} + n^{r-1} = 2/sqrt(n)
    CHECK(p.remainder_scale / p.main_term ==
          doctest::Approx(0.2).epsilon(1e-12));
    CHECK_THROWS_AS(predict_c00(1.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(predict_c00(1.0, 1.5, 10), DomainError);
}

TEST_CASE("c00 main vs tail_sum at large n (z1 envelope)") {
    const PsiSequence psi = PsiSequence::gen_poisson(1.0, 0.5);
    const std::int64_t n = 10000;
    const CertifiedValue tail = tail_sum(psi, n, 1e-55);
    const Prediction p = predict_c00(1.0, 0.5, n);
    const double env = std::pow(10000.0, -0.5) + std::pow(10000.0, -0.5);
    CHECK(std::abs(tail.value / kPi / p.main_term - 1.0) <= 3.0 * env);
}

TEST_CASE("t2 matches the corollary main terms to first order") {
    SUBCASE("exp_log_squared equals c4's main modulo lower order") {
        const PsiSequence psi = PsiSequence::exp_log_squared();
        const auto prof = characteristics(psi);
        for (std::int64_t n : {100, 1000, 10000}) {
            const Prediction t2 = predict_t2(psi, prof, n);
            const Prediction c4 = predict_c4(n);
            // lambda(t) = t/(2 ln t) exactly, so the mains agree exactly
            CHECK(t2.main_term ==
                  doctest::Approx(c4.main_term).epsilon(1e-12));
        }
    }
    SUBCASE("exp_over_log ratio tends to 1") {
        const PsiSequence psi = PsiSequence::exp_over_log();
        const auto prof = characteristics(psi);
        double prev = 1e9;
        for (std::int64_t n : {100, 1000, 10000}) {
            const Prediction t2 = predict_t2(psi, prof, n);
            const Prediction c5 = predict_c5(n);
            const double gap = std::abs(t2.main_term / c5.main_term - 1.0);
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev <= 0.15);
    }
    SUBCASE("loglog_power ratio tends to 1") {
        const PsiSequence psi = PsiSequence::loglog_power();
        const auto prof = characteristics(psi);
        double prev = 1e9;
        for (std::int64_t n : {100, 1000, 10000}) {
            const Prediction t2 = predict_t2(psi, prof, n);
            const Prediction c3 = predict_c3(n);
            const double gap = std::abs(t2.main_term / c3.main_term - 1.0);
            CHECK(gap < prev);
            prev = gap;
        }
    }
}

TEST_CASE("t2 refuses custom tables") {
    const PsiSequence psi = PsiSequence::custom({1.0});
    CHECK_THROWS_AS(predict_t2(psi, CharacteristicProfile{}, 4),
                    NotDifferentiable);
}

TEST_CASE("c3/c4/c5 literal forms and domain cutoffs") {
    SUBCASE("c4 at n = round(e^4)") {
        const std::int64_t n = 55; // e^4 = 54.598
        const PsiSequence psi = PsiSequence::exp_log_squared();
        const Prediction p = predict_c4(n);
        const double expect = psi.value_at(n) * 55.0 /
                              (2.0 * kPi * std::log(55.0));
        CHECK(p.main_term == doctest::Approx(expect).epsilon(1e-12));
        CHECK(p.remainder_scale == doctest::Approx(psi.value_at(n)));
    }
    SUBCASE("c5 scale relative to main is 1/ln(n+1)") {
        for (std::int64_t n : {10, 100, 1000}) {
            const Prediction p = predict_c5(n);
            CHECK(p.remainder_scale / p.main_term ==
                  doctest::Approx(1.0 / std::log(n + 1.0)).epsilon(1e-12));
        }
    }
    SUBCASE("domain errors below the cutoffs") {
        CHECK_THROWS_AS(predict_c3(0), DomainError);
        CHECK_THROWS_AS(predict_c4(1), DomainError);
        CHECK_THROWS_AS(predict_c5(1), DomainError);
    }
}

TEST_CASE("log-domain columns stay finite through underflow") {
    // e^{-alpha n^r} underflows near n = 27 for alpha=1, r=2
    const Prediction p = predict_c01(1.0, 2.0, 50);
    CHECK(p.main_term == 0.0);
    CHECK(p.log_main == doctest::Approx(-2500.0 - std::log(kPi)));
    CHECK(std::isfinite(p.log_scale));
    CHECK(p.remainder_scale == 0.0);
    CHECK(p.main_term >= 0.0);
}
