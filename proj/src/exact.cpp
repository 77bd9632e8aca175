#include "fsum/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "fsum/series.hpp"

namespace fsum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::int64_t kMaxRefinement = 5'000'000;

struct Cell {
    double a, b;   // interval
    double fa, fb; // signed computed values at the ends
    double ub;     // upper bound on the signed max over [a,b]
};

struct CellOrder {
    bool operator()(const Cell& x, const Cell& y) const { return x.ub < y.ub; }
};

double cell_upper_bound(const Cell& c, double lip, double curv) {
    const double w = c.b - c.a;
    const double first = 0.5 * (c.fa + c.fb) + 0.5 * lip * w;
    const double second = std::max(c.fa, c.fb) + 0.125 * curv * w * w;
    return std::min(first, second);
}

struct OneExtremum {
    double arg = 0.0;
    double lb = 0.0; // computed-space enclosure of the signed max
    double ub = 0.0;
    std::int64_t iters = 0;
};

// Signed maximum of sign * f over [t_lo, t_lo + 2pi) given the phase-1
// uniform grid values. Lipschitz cells are split best-first until the
// enclosure gap closes; a derivative-sign bisection around the best grid
// point seeds a tight lower bound first.
OneExtremum search_max(const TrigSeriesEval& ev, int sign,
                       const std::vector<double>& grid, double t_lo,
                       double delta, double gap_target) {
    const std::int64_t M = static_cast<std::int64_t>(grid.size());
    const double lip = ev.lipschitz();
    const double curv = ev.curvature_bound();
    const double s = static_cast<double>(sign);

    OneExtremum out;
    std::int64_t jbest = 0;
    out.lb = s * grid[0];
    out.arg = t_lo;
    for (std::int64_t j = 1; j < M; ++j) {
        const double v = s * grid[j];
        if (v > out.lb) {
            out.lb = v;
            out.arg = t_lo + static_cast<double>(j) * delta;
            jbest = j;
        }
    }

    // derivative-sign bisection around the best grid cell
    {
        double a = t_lo + static_cast<double>(jbest - 1) * delta;
        double b = t_lo + static_cast<double>(jbest + 1) * delta;
        double da = s * ev.derivative(a);
        double db = s * ev.derivative(b);
        if (da > 0.0 && db < 0.0) {
            for (int it = 0; it < 90 && b - a > 1e-15; ++it) {
                const double m = 0.5 * (a + b);
                const double dm = s * ev.derivative(m);
                if (dm > 0.0) a = m;
                else b = m;
            }
            const double m = 0.5 * (a + b);
            const double vm = s * ev.value(m);
            if (vm > out.lb) {
                out.lb = vm;
                out.arg = m;
            }
        }
    }

    std::priority_queue<Cell, std::vector<Cell>, CellOrder> heap;
    auto push_cell = [&](double a, double b, double fa, double fb) {
        Cell c{a, b, fa, fb, 0.0};
        c.ub = cell_upper_bound(c, lip, curv);
        if (c.ub > out.lb) heap.push(c);
    };
    for (std::int64_t j = 0; j < M; ++j) {
        const double a = t_lo + static_cast<double>(j) * delta;
        const double b = (j + 1 == M) ? t_lo + kTwoPi : a + delta;
        const double fb = (j + 1 == M) ? s * grid[0] : s * grid[j + 1];
        push_cell(a, b, s * grid[j], fb);
    }

    out.ub = out.lb;
    while (!heap.empty()) {
        const Cell top = heap.top();
        if (top.ub <= out.lb + gap_target) {
            out.ub = std::max(out.lb, top.ub);
            return out;
        }
        heap.pop();
        if (++out.iters > kMaxRefinement) {
            std::ostringstream os;
            os << "extrema refinement: gap " << (top.ub - out.lb)
               << " has not closed to " << gap_target << " within "
               << kMaxRefinement << " splits";
            throw TolUnreachable(os.str());
        }
        const double m = 0.5 * (top.a + top.b);
        const double fm = s * ev.value(m);
        if (fm > out.lb) {
            out.lb = fm;
            out.arg = m;
        }
        push_cell(top.a, m, top.fa, fm);
        push_cell(m, top.b, fm, top.fb);
    }
    out.ub = out.lb; // every remaining cell was below the best point
    return out;
}

std::int64_t grid_size_for(std::int64_t dominant_freq) {
    const std::int64_t m = std::max<std::int64_t>(4096, 64 * dominant_freq);
    return std::min<std::int64_t>(m, std::int64_t{1} << 23);
}

ExtremaResult trivial_extrema(const TrigSeriesEval& ev, double t_lo) {
    ExtremaResult res;
    res.max_value = {0.0, ev.value_radius(), ev.terms()};
    res.min_value = {0.0, ev.value_radius(), ev.terms()};
    res.argmax = res.argmin = t_lo;
    return res;
}

} // namespace

ExtremaResult find_extrema(const TrigSeriesEval& ev, double tol,
                           std::int64_t min_grid, double t_lo) {
    if (!(tol > 0.0)) throw DomainError("find_extrema: tol must be positive");
    if (ev.coef_abs_sum() == 0.0) return trivial_extrema(ev, t_lo);

    const std::int64_t M = std::max<std::int64_t>(min_grid, 16);
    const double delta = kTwoPi / static_cast<double>(M);
    std::vector<double> grid(static_cast<std::size_t>(M));
    ev.value_grid(t_lo, delta, M, grid.data());

    const double gap = 0.5 * tol;
    const OneExtremum mx = search_max(ev, +1, grid, t_lo, delta, gap);
    const OneExtremum mn = search_max(ev, -1, grid, t_lo, delta, gap);

    ExtremaResult res;
    res.grid_points = M;
    res.refinement_iterations = mx.iters + mn.iters;
    const double r0 = ev.value_radius();
    res.max_value = {0.5 * (mx.lb + mx.ub), 0.5 * (mx.ub - mx.lb) + r0,
                     ev.terms()};
    res.argmax = mx.arg;
    res.min_value = {-0.5 * (mn.lb + mn.ub), 0.5 * (mn.ub - mn.lb) + r0,
                     ev.terms()};
    res.argmin = mn.arg;
    return res;
}

ExtremaResult certified_extrema(const KernelSpec& spec, double tol,
                                double t_lo) {
    const TrigSeriesEval ev = make_kernel_evaluator(spec, tol / 4.0);
    return find_extrema(ev, tol, grid_size_for(spec.n), t_lo);
}

CertifiedValue shift_lower_bound(const KernelSpec& spec, double tol) {
    if (!(tol > 0.0)) throw DomainError("shift_lower_bound: tol must be positive");
    // D(t) = Psi(t + pi/n) - Psi(t) has coefficients c_k (e^{ik pi/n} - 1);
    // the dropped tail is at most twice the kernel's.
    const double norm_tol = 2.0 * std::numbers::pi * tol;
    const TrigSeriesEval base = make_kernel_evaluator(spec, norm_tol / 8.0);
    const double shift = std::numbers::pi / static_cast<double>(spec.n);
    std::vector<double> cre(static_cast<std::size_t>(base.terms()));
    std::vector<double> cim(cre.size());
    for (std::int64_t j = 0; j < base.terms(); ++j) {
        const std::int64_t k = base.k0() + j;
        const double p = spec.psi.value_at(k);
        const double ang = static_cast<double>(k) * shift;
        cre[static_cast<std::size_t>(j)] = p * (std::cos(ang) - 1.0);
        cim[static_cast<std::size_t>(j)] = p * std::sin(ang);
    }
    const std::int64_t K = base.k0() + base.terms() - 1;
    const TailBound vb = far_tail_bound(spec.psi, K);
    const TailBound wb = far_weighted_tail_bound(spec.psi, K);
    const TailBound kb = far_k2_tail_bound(spec.psi, K);
    const TrigSeriesEval dev(
        spec.n, spec.beta * std::numbers::pi / 2.0, std::move(cre),
        std::move(cim), 2.0 * vb.bound, 2.0 * wb.bound,
        kb.valid ? 2.0 * kb.bound : std::numeric_limits<double>::infinity());

    const ExtremaResult ex = find_extrema(dev, norm_tol / 2.0,
                                          grid_size_for(spec.n));
    const double sup = std::max(std::abs(ex.max_value.value),
                                std::abs(ex.min_value.value));
    const double rad = std::max(ex.max_value.radius, ex.min_value.radius);
    CertifiedValue cv;
    cv.value = sup / (2.0 * std::numbers::pi);
    cv.radius = rad / (2.0 * std::numbers::pi);
    cv.terms_used = dev.terms();
    return cv;
}

T0Witness t0_witness(const KernelSpec& spec, double tol) {
    if (!(tol > 0.0)) throw DomainError("t0_witness: tol must be positive");
    const double pi = std::numbers::pi;
    const TrigSeriesEval gh = make_envelope_evaluator(spec, pi * tol / 4.0);
    const TrigSeriesEval kernel = make_kernel_evaluator(spec, pi * tol / 4.0);
    const double nd = static_cast<double>(spec.n);

    T0Witness w;
    w.t0_phase_at_origin = spec.beta * pi / (2.0 * nd);
    w.value_phase_at_origin = {kernel.value(w.t0_phase_at_origin),
                               kernel.value_radius(), kernel.terms()};

    double t = spec.beta * pi / (2.0 * nd);
    constexpr int kMaxIter = 200;
    constexpr double kDamping = 0.5;
    constexpr double kThreshold = 1e-12;
    double residual = 0.0;
    int it = 0;
    if (gh.coef_abs_sum() > 0.0) {
        for (it = 1; it <= kMaxIter; ++it) {
            const auto [re, im] = gh.complex_value(t);
            const double phase = std::atan2(-im, re);
            const double target = (spec.beta * pi / 2.0 + phase) / nd;
            const double step = kDamping * (target - t);
            t += step;
            residual = std::abs(step);
            if (residual < kThreshold) {
                w.converged = true;
                break;
            }
        }
    } else {
        w.converged = true;
    }
    w.t0 = t;
    w.residual = residual;
    w.iterations = it;
    w.value = {kernel.value(t), kernel.value_radius(), kernel.terms()};
    return w;
}

ErrorEstimate best_constant_error(const KernelSpec& spec, double tol) {
    if (!(tol > 0.0))
        throw DomainError("best_constant_error: tol must be positive");
    const double pi = std::numbers::pi;

    const TrigSeriesEval ev = make_kernel_evaluator(spec, pi * tol / 4.0);
    ErrorEstimate est;
    if (ev.coef_abs_sum() == 0.0 && ev.value_radius() == 0.0) {
        // degenerate kernel: the class error is exactly zero
        return est;
    }

    const ExtremaResult ex = find_extrema(ev, pi * tol, grid_size_for(spec.n));
    est.e_n.value = (ex.max_value.value - ex.min_value.value) / (2.0 * pi);
    est.e_n.radius = (ex.max_value.radius + ex.min_value.radius) / (2.0 * pi);
    est.e_n.terms_used = ev.terms();
    if (est.e_n.radius > tol) {
        std::ostringstream os;
        os << "best_constant_error: achieved radius " << est.e_n.radius
           << " exceeds tol " << tol << " (roundoff floor)";
        throw TolUnreachable(os.str());
    }

    est.upper_sandwich.value =
        std::max(std::abs(ex.max_value.value), std::abs(ex.min_value.value)) / pi;
    est.upper_sandwich.radius =
        std::max(ex.max_value.radius, ex.min_value.radius) / pi;
    est.upper_sandwich.terms_used = ev.terms();

    est.lower_sandwich = shift_lower_bound(spec, tol);

    const T0Witness w = t0_witness(spec, tol);
    est.witness_t0 = w.t0;
    est.witness_value = {std::abs(w.value.value) / pi, w.value.radius / pi,
                         w.value.terms_used};
    return est;
}

double trig_poly_l1_norm(const TrigPoly& phi) {
    const std::size_t m = std::max(phi.cos_coef.size(), phi.sin_coef.size());
    const std::int64_t M = 1 << 17;
    const double h = kTwoPi / static_cast<double>(M);
    double acc = 0.0;
    for (std::int64_t j = 0; j < M; ++j) {
        const double t = static_cast<double>(j) * h;
        double v = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double k = static_cast<double>(i + 1);
            if (i < phi.cos_coef.size()) v += phi.cos_coef[i] * std::cos(k * t);
            if (i < phi.sin_coef.size()) v += phi.sin_coef[i] * std::sin(k * t);
        }
        acc += std::abs(v);
    }
    return acc * h;
}

CertifiedValue witness_lower_bound(const KernelSpec& spec, const TrigPoly& phi,
                                   double tol) {
    if (!(tol > 0.0))
        throw DomainError("witness_lower_bound: tol must be positive");
    if (spec.n < 1) throw DomainError("witness_lower_bound: n must be >= 1");
    const double l1 = trig_poly_l1_norm(phi);
    if (l1 > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "witness_lower_bound: ||phi||_1 = " << l1 << " exceeds 1";
        throw NotAdmissible(os.str());
    }

    // coefficientwise convolution: harmonics below n are annihilated
    const std::size_t m = std::max(phi.cos_coef.size(), phi.sin_coef.size());
    const double pi = std::numbers::pi;
    std::vector<double> cre, cim;
    std::int64_t k_first = 0;
    std::int64_t k_max = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::int64_t k = static_cast<std::int64_t>(i) + 1;
        if (k < spec.n) continue;
        const double a = i < phi.cos_coef.size() ? phi.cos_coef[i] : 0.0;
        const double b = i < phi.sin_coef.size() ? phi.sin_coef[i] : 0.0;
        if (k_first == 0) k_first = k;
        const double p = spec.psi.value_at(k);
        cre.push_back(p * a);
        cim.push_back(-p * b);
        if (p * (std::abs(a) + std::abs(b)) != 0.0) k_max = k;
    }
    if (k_first == 0 || k_max == 0) return {0.0, 0.0, 0};

    const TrigSeriesEval ev(k_first, spec.beta * pi / 2.0, std::move(cre),
                            std::move(cim), 0.0, 0.0, 0.0);
    const ExtremaResult ex =
        find_extrema(ev, pi * tol, grid_size_for(k_max));
    CertifiedValue cv;
    cv.value =
        std::max(std::abs(ex.max_value.value), std::abs(ex.min_value.value)) / pi;
    cv.radius = std::max(ex.max_value.radius, ex.min_value.radius) / pi;
    cv.terms_used = ev.terms();
    return cv;
}

} // namespace fsum
