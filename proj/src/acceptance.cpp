#include "fsum/acceptance.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include "fsum/asymptotics.hpp"
#include "fsum/exact.hpp"
#include "fsum/grid_oracle.hpp"
#include "fsum/report.hpp"
#include "fsum/series.hpp"

namespace fsum {

namespace {

constexpr double kPi = std::numbers::pi;

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
    threads = std::min<int>(resolve_threads(threads),
                            static_cast<int>(count ? count : 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// crude magnitude of the kernel (first certified tail enclosure)
double kernel_scale(const PsiSequence& psi, std::int64_t n) {
    const CertifiedValue cv = tail_sum(psi, n, 1e250);
    return std::max(cv.value + cv.radius, 1e-300);
}

struct Check {
    bool ok = true;
    std::ostringstream detail;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }
};

using Clock = std::chrono::steady_clock;

CriterionResult finish(int id, const std::string& name, Check& chk,
                       Clock::time_point t0, double budget_s) {
    CriterionResult res;
    res.id = id;
    res.name = name;
    res.seconds =
        std::chrono::duration<double>(Clock::now() - t0).count();
    if (res.seconds >= budget_s) {
        chk.ok = false;
        if (chk.detail.tellp() > 0) chk.detail << "; ";
        chk.detail << "runtime " << res.seconds << "s exceeds budget "
                   << budget_s << "s";
    }
    res.pass = chk.ok;
    res.detail = chk.detail.str();
    if (res.pass) {
        std::ostringstream os;
        os << "ok in " << res.seconds << "s";
        res.detail = os.str();
    }
    return res;
}

CriterionResult c1_single_harmonic(int) {
    const auto t0 = Clock::now();
    Check chk;
    const double betas[] = {0.0, 1.0, 2.0, 3.0, 0.7};
    for (std::int64_t n : {1, 3, 10}) {
        std::vector<double> table(static_cast<std::size_t>(n), 0.0);
        table.back() = 1.0;
        const PsiSequence psi = PsiSequence::custom(table);
        for (double b : betas) {
            const ErrorEstimate est =
                best_constant_error({psi, b, n}, 1e-11);
            std::ostringstream what;
            what << "n=" << n << " beta=" << b << ": |e_n - 1/pi| = "
                 << std::abs(est.e_n.value - 1.0 / kPi);
            chk.expect(std::abs(est.e_n.value - 1.0 / kPi) <= 1e-10,
                       what.str());
        }
    }
    return finish(1, "single-harmonic exactness", chk, t0, 1.0);
}

CriterionResult c2_geometric_closed_forms(int) {
    const auto t0 = Clock::now();
    Check chk;
    for (double q : {0.1, 0.5, 0.9}) {
        const PsiSequence psi = PsiSequence::gen_poisson(-std::log(q), 1.0);
        for (std::int64_t n : {1, 5, 20}) {
            const GeometricTails g = geometric_tail(q, n);
            const double tol = 1e-14 * g.tail;
            const CertifiedValue t = tail_sum(psi, n, tol);
            const CertifiedValue wf =
                weighted_tail_from(psi, n, 1e-14 * g.weighted_tail);
            const double shifted = g.weighted_tail -
                                   static_cast<double>(n) * g.tail;
            const CertifiedValue ws = weighted_tail_sum(
                psi, n, std::max(1e-14 * shifted, 1e-18 * g.weighted_tail));
            std::ostringstream what;
            what << "q=" << q << " n=" << n;
            chk.expect(std::abs(t.value - g.tail) <= 1e-12 * g.tail,
                       what.str() + ": tail mismatch");
            chk.expect(std::abs(wf.value - g.weighted_tail) <=
                           1e-12 * g.weighted_tail,
                       what.str() + ": weighted tail mismatch");
            chk.expect(std::abs(ws.value - shifted) <=
                           1e-12 * std::max(shifted, g.weighted_tail * 1e-3),
                       what.str() + ": shifted weighted tail mismatch");
        }
    }
    return finish(2, "geometric closed forms", chk, t0, 1.0);
}

CriterionResult c3_sandwich(int threads) {
    const auto t0 = Clock::now();
    Check chk;
    std::vector<PsiSequence> families = {
        PsiSequence::gen_poisson(std::log(2.0), 1.0),
        PsiSequence::gen_poisson(1.0, 2.0),
        PsiSequence::loglog_power(),
    };
    struct Row {
        std::size_t fam;
        double beta;
        std::int64_t n;
        bool ok = false;
        std::string what;
    };
    std::vector<Row> rows;
    for (std::size_t f = 0; f < families.size(); ++f)
        for (double b : {0.0, 1.0, 2.0, 3.0})
            for (std::int64_t n = 4; n <= 16; ++n) rows.push_back({f, b, n});

    parallel_for(rows.size(), threads, [&](std::size_t i) {
        Row& row = rows[i];
        const PsiSequence& psi = families[row.fam];
        const double tol =
            std::max(1e-3 * kernel_scale(psi, row.n), 1e-290);
        const ErrorEstimate est =
            best_constant_error({psi, row.beta, row.n}, tol);
        const double slack_lo =
            est.lower_sandwich.radius + est.e_n.radius;
        const double slack_hi = est.e_n.radius + est.upper_sandwich.radius;
        const double slack_w =
            est.witness_value.radius + est.upper_sandwich.radius;
        const bool ok_lo =
            est.lower_sandwich.value <= est.e_n.value + slack_lo;
        const bool ok_hi = est.e_n.value <= est.upper_sandwich.value + slack_hi;
        const bool ok_w =
            est.witness_value.value <= est.upper_sandwich.value + slack_w;
        row.ok = ok_lo && ok_hi && ok_w;
        if (!row.ok) {
            std::ostringstream os;
            os << psi.name() << " beta=" << row.beta << " n=" << row.n
               << " (lo " << ok_lo << " hi " << ok_hi << " wit " << ok_w << ")";
            row.what = os.str();
        }
    });
    for (const Row& row : rows) chk.expect(row.ok, row.what);
    return finish(3, "sandwich invariant", chk, t0, 30.0);
}

CriterionResult c4_t1_remainder(int threads) {
    const auto t0 = Clock::now();
    Check chk;
    const PsiSequence psi = PsiSequence::gen_poisson(std::log(2.0), 1.0);
    struct Row {
        double beta;
        std::int64_t n;
        double dev = 0.0;
        bool finite = false;
    };
    std::vector<Row> rows;
    for (double b : {0.0, 1.0})
        for (std::int64_t n = 4; n <= 20; ++n) rows.push_back({b, n});

    parallel_for(rows.size(), threads, [&](std::size_t i) {
        Row& row = rows[i];
        const double scale = kernel_scale(psi, row.n);
        const ErrorEstimate est =
            best_constant_error({psi, row.beta, row.n}, 1e-6 * scale);
        const Prediction p = predict_t1(psi, row.n, 1e-8 * scale);
        row.dev = std::abs(est.e_n.value - p.main_term) / p.remainder_scale;
        row.finite = std::isfinite(row.dev);
    });
    double max_lo = 0.0, max_hi = 0.0, max_all = 0.0;
    for (const Row& row : rows) {
        std::ostringstream what;
        what << "beta=" << row.beta << " n=" << row.n << " dev=" << row.dev;
        chk.expect(row.finite, what.str() + " not finite");
        max_all = std::max(max_all, row.dev);
        if (row.n <= 12) max_lo = std::max(max_lo, row.dev);
        else max_hi = std::max(max_hi, row.dev);
    }
    {
        std::ostringstream what;
        what << "max dev " << max_all << " > 10";
        chk.expect(max_all <= 10.0, what.str());
    }
    {
        std::ostringstream what;
        what << "late-range max " << max_hi << " > 2 x early-range max "
             << max_lo;
        chk.expect(max_hi <= 2.0 * max_lo, what.str());
    }
    return finish(4, "Theorem 1 remainder boundedness", chk, t0, 30.0);
}

CriterionResult c5_poisson_ratio(int threads) {
    const auto t0 = Clock::now();
    Check chk;
    const double q = 0.5;
    const PsiSequence psi = PsiSequence::gen_poisson(std::log(2.0), 1.0);
    std::vector<double> gap(21, 0.0);
    std::vector<std::int64_t> ns;
    for (std::int64_t n = 5; n <= 20; ++n) ns.push_back(n);
    parallel_for(ns.size(), threads, [&](std::size_t i) {
        const std::int64_t n = ns[i];
        const double scale = kernel_scale(psi, n);
        const ErrorEstimate est = best_constant_error({psi, 0.0, n}, 1e-7 * scale);
        const double ratio = kPi * (1.0 - q) * est.e_n.value /
                             std::pow(q, static_cast<double>(n));
        gap[static_cast<std::size_t>(n)] = std::abs(ratio - 1.0);
    });
    {
        std::ostringstream what;
        what << "|ratio-1| at n=20 (" << gap[20]
             << ") not smaller than at n=5 (" << gap[5] << ")";
        chk.expect(gap[20] < gap[5], what.str());
    }
    for (std::int64_t n = 5; n <= 20; ++n) {
        const double v = gap[static_cast<std::size_t>(n)] *
                         static_cast<double>(n);
        std::ostringstream what;
        what << "n=" << n << ": |ratio-1|*n = " << v << " > 10";
        chk.expect(v <= 10.0, what.str());
    }
    return finish(5, "Corollary 2 ratio convergence", chk, t0, 10.0);
}

CriterionResult c6_c00_envelope(int threads) {
    const auto t0 = Clock::now();
    Check chk;
    const double alpha = 1.0, r = 0.5;
    const PsiSequence psi = PsiSequence::gen_poisson(alpha, r);
    const std::vector<std::int64_t> ns = {64, 128, 256};
    std::vector<std::string> fails(ns.size());
    std::vector<bool> oks(ns.size(), false);
    parallel_for(ns.size(), threads, [&](std::size_t i) {
        const std::int64_t n = ns[i];
        const Prediction p = predict_c00(alpha, r, n);
        const double tol = 2e-4 * std::exp(p.log_main);
        const ErrorEstimate est = best_constant_error({psi, 0.0, n}, tol);
        // log-domain normalization e_n * pi a r * n^{r-1} * e^{a n^r}
        const double nd = static_cast<double>(n);
        const double log_norm = std::log(est.e_n.value) +
                                std::log(kPi * alpha * r) +
                                (r - 1.0) * std::log(nd) +
                                alpha * std::pow(nd, r);
        const double lhs = std::abs(std::exp(log_norm) - 1.0);
        const double rhs =
            5.0 * (std::pow(nd, -r) + std::pow(nd, r - 1.0));
        oks[i] = lhs <= rhs;
        if (!oks[i]) {
            std::ostringstream os;
            os << "n=" << n << ": lhs " << lhs << " > " << rhs;
            fails[i] = os.str();
        }
    });
    for (std::size_t i = 0; i < ns.size(); ++i) chk.expect(oks[i], fails[i]);
    return finish(6, "Corollary 00 envelope (r = 1/2)", chk, t0, 120.0);
}

CriterionResult c7_theorem2_families(int threads) {
    const auto t0 = Clock::now();
    Check chk;
    std::vector<PsiSequence> families = {PsiSequence::loglog_power(),
                                         PsiSequence::exp_log_squared(),
                                         PsiSequence::exp_over_log()};
    struct Row {
        std::size_t fam;
        std::int64_t n;
        bool ok = false;
        std::string what;
    };
    std::vector<Row> rows;
    for (std::size_t f = 0; f < families.size(); ++f)
        for (std::int64_t n : {100, 1000}) rows.push_back({f, n});
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        Row& row = rows[i];
        const PsiSequence& psi = families[row.fam];
        const CharacteristicProfile prof = characteristics(psi);
        const double nd = static_cast<double>(row.n);
        const double lam = prof.lambda_at(nd);
        const double al = prof.alpha_at(nd);
        const double eps = prof.epsilon_n(row.n);
        const double main = psi.value_at(row.n) * lam / kPi;
        const ErrorEstimate est =
            best_constant_error({psi, 0.0, row.n}, 2e-3 * main);
        const double lhs =
            std::abs(est.e_n.value * kPi / (psi.value_at(row.n) * lam) - 1.0);
        const double rhs = 5.0 * (1.0 / lam + al + eps);
        row.ok = lhs <= rhs;
        if (!row.ok) {
            std::ostringstream os;
            os << psi.name() << " n=" << row.n << ": lhs " << lhs << " > "
               << rhs;
            row.what = os.str();
        }
    });
    for (const Row& row : rows) chk.expect(row.ok, row.what);
    return finish(7, "Theorem 2 family checks", chk, t0, 120.0);
}

CriterionResult c8_oracle_equivalence(int threads) {
    const auto t0 = Clock::now();
    Check chk;
    struct Spec {
        PsiSequence psi;
        double beta;
        std::int64_t n;
    };
    std::vector<double> single(3, 0.0);
    single[2] = 1.0;
    std::vector<Spec> specs;
    specs.push_back({PsiSequence::custom(single), 0.7, 3});
    specs.push_back({PsiSequence::gen_poisson(std::log(2.0), 1.0), 0.0, 5});
    specs.push_back({PsiSequence::gen_poisson(1.0, 2.0), 1.0, 3});
    specs.push_back({PsiSequence::gen_poisson(1.0, 0.5), 2.0, 16});
    specs.push_back({PsiSequence::loglog_power(), 3.0, 4});
    specs.push_back({PsiSequence::exp_log_squared(), 1.0, 30});
    specs.push_back({PsiSequence::exp_over_log(), 0.0, 20});
    std::vector<std::string> fails(specs.size());
    std::vector<bool> oks(specs.size(), false);
    parallel_for(specs.size(), threads, [&](std::size_t i) {
        const Spec& sp = specs[i];
        const double scale = kernel_scale(sp.psi, sp.n);
        const OracleResult oracle =
            grid_oracle(sp.psi, sp.beta, sp.n, 1'000'000, 1e-5 * scale);
        const ErrorEstimate est =
            best_constant_error({sp.psi, sp.beta, sp.n}, 1e-7 * scale);
        const bool overlap = est.e_n.lower() <= oracle.e_upper() &&
                             oracle.e_lower() <= est.e_n.upper();
        oks[i] = overlap;
        if (!overlap) {
            std::ostringstream os;
            os << sp.psi.name() << " beta=" << sp.beta << " n=" << sp.n
               << ": refined [" << est.e_n.lower() << ", " << est.e_n.upper()
               << "] vs oracle [" << oracle.e_lower() << ", "
               << oracle.e_upper() << "]";
            fails[i] = os.str();
        }
    });
    for (std::size_t i = 0; i < specs.size(); ++i) chk.expect(oks[i], fails[i]);
    return finish(8, "dense-grid oracle equivalence", chk, t0, 60.0);
}

CriterionResult c9_witness_soundness(int threads) {
    const auto t0 = Clock::now();
    Check chk;
    struct Spec {
        PsiSequence psi;
        double beta;
        std::int64_t n;
    };
    std::vector<Spec> specs;
    specs.push_back({PsiSequence::gen_poisson(std::log(2.0), 1.0), 0.0, 5});
    specs.push_back({PsiSequence::gen_poisson(std::log(2.0), 1.0), 1.0, 5});
    specs.push_back({PsiSequence::loglog_power(), 3.0, 6});
    specs.push_back({PsiSequence::exp_log_squared(), 1.0, 30});
    std::vector<std::string> fails(specs.size());
    std::vector<bool> oks(specs.size(), true);
    parallel_for(specs.size(), threads, [&](std::size_t i) {
        const Spec& sp = specs[i];
        const KernelSpec spec{sp.psi, sp.beta, sp.n};
        const double scale = kernel_scale(sp.psi, sp.n);
        const ErrorEstimate est = best_constant_error(spec, 1e-6 * scale);
        const std::size_t m = static_cast<std::size_t>(sp.n) + 1;
        std::vector<TrigPoly> phis(3);
        phis[0].cos_coef.assign(m, 0.0);
        phis[0].cos_coef[static_cast<std::size_t>(sp.n - 1)] = 0.25;
        phis[1].sin_coef.assign(m, 0.0);
        phis[1].sin_coef[static_cast<std::size_t>(sp.n - 1)] = 0.25;
        phis[2].cos_coef.assign(m, 0.0);
        phis[2].cos_coef[static_cast<std::size_t>(sp.n - 1)] = 1.0;
        phis[2].cos_coef[static_cast<std::size_t>(sp.n)] = 1.0;
        const double norm = trig_poly_l1_norm(phis[2]);
        for (double& c : phis[2].cos_coef) c /= norm * (1.0 + 1e-12);
        std::ostringstream os;
        for (const TrigPoly& phi : phis) {
            const CertifiedValue wlb =
                witness_lower_bound(spec, phi, 1e-8 * scale);
            if (!(wlb.value <= est.e_n.value + 1e-9 + wlb.radius +
                               est.e_n.radius)) {
                oks[i] = false;
                os << sp.psi.name() << " n=" << sp.n << ": wlb " << wlb.value
                   << " > e_n " << est.e_n.value << " + 1e-9; ";
            }
        }
        fails[i] = os.str();
    });
    for (std::size_t i = 0; i < specs.size(); ++i) chk.expect(oks[i], fails[i]);
    return finish(9, "witness soundness", chk, t0, 60.0);
}

CriterionResult c10_determinism(int) {
    const auto t0 = Clock::now();
    Check chk;
    nlohmann::json cj;
    cj["family"] = {{"name", "gen_poisson"}, {"alpha", std::log(2.0)}, {"r", 1.0}};
    cj["beta"] = {0.0, 1.0};
    cj["n_range"] = {{"start", 4}, {"stop", 10}};
    cj["tol"] = 1e-10;
    cj["formulas"] = {"t1", "c2"};
    ExperimentConfig cfg = config_from_json(cj);
    cfg.threads = 1;
    PredictionReport rep1 = run_experiment(cfg);
    cfg.threads = 0;
    PredictionReport rep_auto = run_experiment(cfg);
    auto strip = [](PredictionReport& r) {
        for (ReportRow& row : r.rows) row.wall_ms = 0.0;
    };
    strip(rep1);
    strip(rep_auto);
    std::ostringstream s1, s2;
    write_csv(rep1, s1);
    write_csv(rep_auto, s2);
    chk.expect(s1.str() == s2.str(),
               "csv output differs between 1 thread and auto threads");
    const std::string j1 = report_to_json(rep1).dump();
    const std::string j2 = report_to_json(rep_auto).dump();
    chk.expect(j1 == j2, "json output differs between 1 thread and auto");
    return finish(10, "thread-count determinism", chk, t0, 60.0);
}

} // namespace

std::vector<CriterionResult> run_acceptance(int threads) {
    std::vector<CriterionResult> results;
    results.push_back(c1_single_harmonic(threads));
    results.push_back(c2_geometric_closed_forms(threads));
    results.push_back(c3_sandwich(threads));
    results.push_back(c4_t1_remainder(threads));
    results.push_back(c5_poisson_ratio(threads));
    results.push_back(c6_c00_envelope(threads));
    results.push_back(c7_theorem2_families(threads));
    results.push_back(c8_oracle_equivalence(threads));
    results.push_back(c9_witness_soundness(threads));
    results.push_back(c10_determinism(threads));
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const CriterionResult& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace fsum
