#include "fsum/trig_series.hpp"

#include <algorithm>
#include <cmath>

namespace fsum {

namespace {

// Rotation recurrences drift by O(steps * eps) and plain accumulation
// inside a block costs O(block * eps * sum|c|); lanes are re-anchored from
// sin/cos at every block boundary and block partials are combined with
// compensated addition. kFpCoef covers both contributions with margin.
constexpr std::int64_t kResync = 2048; // recurrence steps per lane per block
constexpr double kFpCoef = 8e-12;

struct BlockAccum {
    double block = 0.0;
    double total = 0.0;
    double comp = 0.0;
    void add(double x) { block += x; }
    void flush() {
        const double t = total + block;
        if (std::abs(total) >= std::abs(block))
            comp += (total - t) + block;
        else
            comp += (block - t) + total;
        total = t;
        block = 0.0;
    }
    double get() const { return total + comp; }
};

// One pass over the coefficients with 4 independent rotation lanes.
// Emit(j, wre, wim) receives e^{i((k0+j)t - phase)}; BlockEnd fires at
// every re-anchoring boundary.
template <typename Emit, typename BlockEnd>
void sweep(std::int64_t k0, double phase, double t, std::size_t m, Emit emit,
           BlockEnd block_end) {
    const double s4re = std::cos(4.0 * t), s4im = std::sin(4.0 * t);
    std::size_t j = 0;
    while (j < m) {
        const std::size_t block = std::min<std::size_t>(m - j, 4 * kResync);
        const double a0 =
            static_cast<double>(k0 + static_cast<std::int64_t>(j)) * t - phase;
        double wre[4], wim[4];
        for (int l = 0; l < 4; ++l) {
            wre[l] = std::cos(a0 + static_cast<double>(l) * t);
            wim[l] = std::sin(a0 + static_cast<double>(l) * t);
        }
        std::size_t b = 0;
        for (; b + 4 <= block; b += 4) {
            for (int l = 0; l < 4; ++l) emit(j + b + l, wre[l], wim[l]);
            for (int l = 0; l < 4; ++l) {
                const double re = wre[l] * s4re - wim[l] * s4im;
                const double im = wre[l] * s4im + wim[l] * s4re;
                wre[l] = re;
                wim[l] = im;
            }
        }
        for (; b < block; ++b) {
            const double a =
                static_cast<double>(k0 + static_cast<std::int64_t>(j + b)) * t -
                phase;
            emit(j + b, std::cos(a), std::sin(a));
        }
        j += block;
        block_end();
    }
    block_end();
}

} // namespace

TrigSeriesEval::TrigSeriesEval(std::int64_t k0, double phase_off,
                               std::vector<double> cre, std::vector<double> cim,
                               double value_trunc, double deriv_trunc,
                               double k2_trunc)
    : k0_(k0), phase_off_(phase_off), cre_(std::move(cre)),
      cim_(std::move(cim)), value_trunc_(value_trunc),
      deriv_trunc_(deriv_trunc) {
    if (cim_.empty()) cim_.assign(cre_.size(), 0.0);
    double s = 0.0, ws = 0.0, k2s = 0.0;
    for (std::size_t j = 0; j < cre_.size(); ++j) {
        const double a = std::hypot(cre_[j], cim_[j]);
        const double k = static_cast<double>(k0_ + static_cast<std::int64_t>(j));
        s += a;
        ws += k * a;
        k2s += k * k * a;
    }
    coef_abs_sum_ = s;
    weighted_abs_sum_ = ws;
    value_radius_ = value_trunc_ + kFpCoef * coef_abs_sum_;
    deriv_radius_ = deriv_trunc_ + kFpCoef * weighted_abs_sum_;
    lipschitz_ = (weighted_abs_sum_ + deriv_trunc_) * (1.0 + 1e-12) +
                 kFpCoef * weighted_abs_sum_;
    curvature_ = (k2s + k2_trunc) * (1.0 + 1e-12);
}

double TrigSeriesEval::value(double t) const {
    BlockAccum acc;
    sweep(
        k0_, phase_off_, t, cre_.size(),
        [&](std::size_t j, double wre, double wim) {
            acc.add(cre_[j] * wre - cim_[j] * wim);
        },
        [&] { acc.flush(); });
    return acc.get();
}

double TrigSeriesEval::derivative(double t) const {
    // d/dt Re[c e^{i(kt - phase)}] = -k (Re(c) sin + Im(c) cos)
    BlockAccum acc;
    sweep(
        k0_, phase_off_, t, cre_.size(),
        [&](std::size_t j, double wre, double wim) {
            const double k =
                static_cast<double>(k0_ + static_cast<std::int64_t>(j));
            acc.add(-k * (cre_[j] * wim + cim_[j] * wre));
        },
        [&] { acc.flush(); });
    return acc.get();
}

std::pair<double, double> TrigSeriesEval::complex_value(double t) const {
    BlockAccum re, im;
    sweep(
        k0_, 0.0, t, cre_.size(),
        [&](std::size_t j, double wre, double wim) {
            re.add(cre_[j] * wre - cim_[j] * wim);
            im.add(cre_[j] * wim + cim_[j] * wre);
        },
        [&] {
            re.flush();
            im.flush();
        });
    return {re.get(), im.get()};
}

void TrigSeriesEval::value_grid(double t0, double dt, std::int64_t count,
                                double* out) const {
    for (std::int64_t i = 0; i < count; ++i)
        out[i] = value(t0 + static_cast<double>(i) * dt);
}

} // namespace fsum
