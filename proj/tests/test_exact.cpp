#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fsum/exact.hpp"
#include "fsum/grid_oracle.hpp"
#include "fsum/series.hpp"

using namespace fsum;

namespace {

constexpr double kPi = std::numbers::pi;

PsiSequence single_harmonic(std::int64_t n) {
    std::vector<double> table(static_cast<std::size_t>(n), 0.0);
    table.back() = 1.0;
    return PsiSequence::custom(table);
}

PsiSequence geometric_half() {
    return PsiSequence::gen_poisson(std::log(2.0), 1.0);
}

} // namespace

TEST_CASE("single harmonic: e_n = 1/pi for any beta") {
    for (std::int64_t n : {1, 3, 10}) {
        for (double beta : {0.0, 1.0, 2.0, 3.0, 0.7}) {
            const KernelSpec spec{single_harmonic(n), beta, n};
            const ErrorEstimate est = best_constant_error(spec, 1e-11);
            CHECK(std::abs(est.e_n.value - 1.0 / kPi) <= 1e-10);
            CHECK(est.e_n.radius <= 1e-11);
        }
    }
}

TEST_CASE("single harmonic: extrema sit at the phase-shifted lattice") {
    const std::int64_t n = 3;
    const double beta = 1.0;
    const ExtremaResult ex =
        certified_extrema({single_harmonic(n), beta, n}, 1e-11);
    CHECK(ex.max_value.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ex.min_value.value == doctest::Approx(-1.0).epsilon(1e-10));
    // cos(nt - beta pi/2) = 1 at t = beta pi/(2n) + 2 pi j / n
    const double period = 2.0 * kPi / static_cast<double>(n);
    const double base = beta * kPi / (2.0 * static_cast<double>(n));
    const double dmax =
        std::remainder(ex.argmax - base, period);
    CHECK(std::abs(dmax) <= 1e-6);
    const double dmin =
        std::remainder(ex.argmin - base - period / 2.0, period);
    CHECK(std::abs(dmin) <= 1e-6);
}

TEST_CASE("all-zero tail degenerates to exact zero") {
    const PsiSequence psi = PsiSequence::custom({1.0});
    const ErrorEstimate est = best_constant_error({psi, 2.0, 4}, 1e-10);
    CHECK(est.e_n.value == 0.0);
    CHECK(est.e_n.radius == 0.0);
    CHECK(est.upper_sandwich.value == 0.0);
    CHECK(shift_lower_bound({psi, 2.0, 4}, 1e-10).value == 0.0);
}

TEST_CASE("geometric q=1/2, n=5: frozen dense-grid oracle value") {
    // 40-digit golden-section refinement of the closed-form kernel:
    // max = 1/16 at t=0, min = -0.0501381037822161, e_5 = 0.0179269109974376
    const ErrorEstimate est =
        best_constant_error({geometric_half(), 0.0, 5}, 1e-11);
    CHECK(std::abs(est.e_n.value - 0.01792691099743760) <=
          est.e_n.radius + 1e-13);
    const ExtremaResult ex = certified_extrema({geometric_half(), 0.0, 5}, 1e-11);
    CHECK(std::abs(ex.max_value.value - 0.0625) <= ex.max_value.radius + 1e-13);
    CHECK(std::abs(ex.min_value.value + 0.05013810378221610) <=
          ex.min_value.radius + 1e-12);
    // beta = 0 makes the kernel even: the minimum is attained at +-t*
    const double tstar = 0.5217964675115569;
    const double d1 = std::abs(ex.argmin - tstar);
    const double d2 = std::abs(ex.argmin - (2.0 * kPi - tstar));
    CHECK(std::min(d1, d2) <= 1e-6);
}

TEST_CASE("duality realization against the independent grid oracle") {
    struct Case {
        PsiSequence psi;
        double beta;
        std::int64_t n;
    };
    const Case cases[] = {{geometric_half(), 0.0, 5},
                          {geometric_half(), 1.0, 2},
                          {PsiSequence::gen_poisson(1.0, 2.0), 3.0, 2},
                          {PsiSequence::exp_over_log(), 0.7, 4},
                          {PsiSequence::exp_log_squared(), 2.0, 7},
                          {PsiSequence::loglog_power(), 1.0, 5}};
    for (const Case& c : cases) {
        const double scale = tail_sum(c.psi, c.n, 1e250).value;
        const OracleResult oracle =
            grid_oracle(c.psi, c.beta, c.n, 200'000, 1e-6 * scale);
        const ErrorEstimate est =
            best_constant_error({c.psi, c.beta, c.n}, 1e-7 * scale);
        CHECK(est.e_n.lower() <= oracle.e_upper());
        CHECK(oracle.e_lower() <= est.e_n.upper());
    }
}

TEST_CASE("sandwich and witness ordering across betas") {
    for (double beta : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        const ErrorEstimate est =
            best_constant_error({geometric_half(), beta, 4}, 1e-10);
        CHECK(est.lower_sandwich.value <=
              est.e_n.value + est.lower_sandwich.radius + est.e_n.radius);
        CHECK(est.e_n.value <= est.upper_sandwich.value + est.e_n.radius +
                                   est.upper_sandwich.radius);
        CHECK(est.witness_value.value <=
              est.upper_sandwich.value + est.witness_value.radius +
                  est.upper_sandwich.radius);
    }
}

TEST_CASE("single harmonic shifted difference is tight") {
    // Psi(t + pi/n) - Psi(t) = -2 cos(nt - beta pi/2): half sup-norm = 1,
    // so the lower bound hits e_n exactly
    const KernelSpec spec{single_harmonic(4), 0.0, 4};
    const CertifiedValue lb = shift_lower_bound(spec, 1e-10);
    CHECK(std::abs(lb.value - 1.0 / kPi) <= lb.radius + 1e-10);
}

TEST_CASE("t0 witness: single harmonic") {
    SUBCASE("beta = 0 fixes t0 = 0 with value 1") {
        const T0Witness w = t0_witness({single_harmonic(5), 0.0, 5}, 1e-11);
        CHECK(w.converged);
        CHECK(std::abs(w.t0) <= 1e-12);
        CHECK(w.value.value == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("beta = 1 fixes t0 = pi/(2n) with value 1") {
        const std::int64_t n = 5;
        const T0Witness w = t0_witness({single_harmonic(n), 1.0, n}, 1e-11);
        CHECK(w.converged);
        CHECK(w.t0 == doctest::Approx(kPi / (2.0 * n)).epsilon(1e-10));
        CHECK(w.value.value == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("t0 witness: geometric kernel satisfies the f9-f11 sandwich") {
    const std::int64_t n = 5;
    const KernelSpec spec{geometric_half(), 0.0, n};
    const T0Witness w = t0_witness(spec, 1e-11);
    CHECK(w.converged);
    const CertifiedValue tail = tail_sum(geometric_half(), n, 1e-13);
    const CertifiedValue wt = weighted_tail_sum(geometric_half(), n, 1e-13);
    // value >= g(0) - |t0| * sum k psi(k+n) - radii (mean value theorem,
    // with the fixed point's actual distance from the origin)
    const double slack = std::abs(w.t0) * (wt.value + wt.radius) +
                         w.value.radius + tail.radius;
    CHECK(w.value.value >= tail.value - slack);
    CHECK(w.value.value <= tail.value + tail.radius + w.value.radius);
}

TEST_CASE("witness_lower_bound") {
    const std::int64_t n = 5;
    const KernelSpec spec{geometric_half(), 0.0, n};
    const ErrorEstimate est = best_constant_error(spec, 1e-11);

    SUBCASE("zero polynomial gives zero") {
        const CertifiedValue wlb = witness_lower_bound(spec, TrigPoly{}, 1e-10);
        CHECK(wlb.value == 0.0);
        CHECK(0.0 <= est.e_n.value + est.e_n.radius);
    }
    SUBCASE("harmonics below n are annihilated") {
        // ||c sin(m.)||_1 = 4|c|, so c = 1/4 sits exactly on the unit ball
        TrigPoly phi;
        phi.sin_coef.assign(static_cast<std::size_t>(n - 1), 0.0);
        phi.sin_coef[static_cast<std::size_t>(n - 2)] = 0.25;
        const CertifiedValue wlb = witness_lower_bound(spec, phi, 1e-10);
        CHECK(wlb.value == 0.0);
    }
    SUBCASE("cos(n.)/4 is admissible and below e_n") {
        TrigPoly phi;
        phi.cos_coef.assign(static_cast<std::size_t>(n), 0.0);
        phi.cos_coef[static_cast<std::size_t>(n - 1)] = 0.25;
        CHECK(trig_poly_l1_norm(phi) == doctest::Approx(1.0).epsilon(1e-6));
        const CertifiedValue wlb = witness_lower_bound(spec, phi, 1e-10);
        // kernel harmonic n survives: value = psi(n)/4 = 2^{-5}/4
        CHECK(wlb.value ==
              doctest::Approx(0.25 * std::pow(0.5, 5.0)).epsilon(1e-8));
        CHECK(wlb.value <= est.e_n.value + est.e_n.radius + wlb.radius + 1e-9);
    }
    SUBCASE("an inflated polynomial is rejected") {
        TrigPoly phi;
        phi.cos_coef.assign(static_cast<std::size_t>(n), 0.0);
        phi.cos_coef[static_cast<std::size_t>(n - 1)] = 0.5;
        CHECK_THROWS_AS(witness_lower_bound(spec, phi, 1e-10), NotAdmissible);
    }
}

TEST_CASE("scaling equivariance: doubling psi doubles every output") {
    std::vector<double> base = {0.0, 0.3, 0.2, 0.1};
    std::vector<double> twice = {0.0, 0.6, 0.4, 0.2};
    const KernelSpec s1{PsiSequence::custom(base), 1.0, 2};
    const KernelSpec s2{PsiSequence::custom(twice), 1.0, 2};
    const ErrorEstimate a = best_constant_error(s1, 1e-11);
    const ErrorEstimate b = best_constant_error(s2, 2e-11);
    CHECK(b.e_n.value == doctest::Approx(2.0 * a.e_n.value).epsilon(1e-9));
    CHECK(b.upper_sandwich.value ==
          doctest::Approx(2.0 * a.upper_sandwich.value).epsilon(1e-9));
    CHECK(b.lower_sandwich.value ==
          doctest::Approx(2.0 * a.lower_sandwich.value).epsilon(1e-9));
    CHECK(b.witness_value.value ==
          doctest::Approx(2.0 * a.witness_value.value).epsilon(1e-9));
    const ExtremaResult ea = certified_extrema(s1, 1e-11);
    const ExtremaResult eb = certified_extrema(s2, 2e-11);
    CHECK(std::abs(ea.argmax - eb.argmax) <= 1e-7);
    CHECK(std::abs(ea.argmin - eb.argmin) <= 1e-7);
}

TEST_CASE("period invariance: search over [-pi, pi) matches [0, 2pi)") {
    const KernelSpec spec{PsiSequence::exp_over_log(), 2.0, 3};
    const ExtremaResult a = certified_extrema(spec, 1e-10, 0.0);
    const ExtremaResult b = certified_extrema(spec, 1e-10, -kPi);
    CHECK(std::abs(a.max_value.value - b.max_value.value) <=
          a.max_value.radius + b.max_value.radius);
    CHECK(std::abs(a.min_value.value - b.min_value.value) <=
          a.min_value.radius + b.min_value.radius);
    const double d = std::remainder(a.argmax - b.argmax, 2.0 * kPi);
    CHECK(std::abs(d) <= 1e-6);
}

TEST_CASE("extrema enclosures contain a fine independent scan") {
    const KernelSpec spec{PsiSequence::gen_poisson(0.4, 1.0), 2.3, 3};
    const ExtremaResult ex = certified_extrema(spec, 1e-9);
    const OracleResult oracle =
        grid_oracle(spec.psi, spec.beta, spec.n, 500'000, 1e-11);
    CHECK(oracle.max_val <=
          ex.max_value.value + ex.max_value.radius + oracle.point_radius);
    CHECK(oracle.min_val >=
          ex.min_value.value - ex.min_value.radius - oracle.point_radius);
}
