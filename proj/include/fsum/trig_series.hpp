#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace fsum {

/// Truncated trigonometric series with certified truncation and round-off
/// radii, shared by the kernel and extrema machinery:
///
///   f(t) = Re[ e^{-i phase_off} * sum_{j=0}^{m-1} c_j e^{i (k0+j) t} ]
///
/// The truncation index is fixed at construction, so a batch of t values
/// shares one radius, uniform in t. Summation order is fixed; results do
/// not depend on any parallel schedule.
class TrigSeriesEval {
  public:
    TrigSeriesEval() = default;
    /// k2_trunc: certified bound on the k^2-weighted dropped tail, or +inf
    /// when no such bound is available (disables the curvature bound).
    TrigSeriesEval(std::int64_t k0, double phase_off, std::vector<double> cre,
                   std::vector<double> cim, double value_trunc,
                   double deriv_trunc,
                   double k2_trunc = std::numeric_limits<double>::infinity());

    double value(double t) const;
    double derivative(double t) const;

    /// Re and Im of sum c_j e^{i(k0+j)t} without the phase factor.
    std::pair<double, double> complex_value(double t) const;

    /// value(t0 + j dt) for j = 0..count-1.
    void value_grid(double t0, double dt, std::int64_t count, double* out) const;

    double value_radius() const { return value_radius_; }
    double deriv_radius() const { return deriv_radius_; }
    /// Certified upper bound on |f'| over the whole period.
    double lipschitz() const { return lipschitz_; }
    /// Certified upper bound on |f''| (+inf when unavailable).
    double curvature_bound() const { return curvature_; }
    /// sum |c_j| plus the value truncation bound: a certified upper bound
    /// on sup |f|.
    double sup_bound() const { return coef_abs_sum_ + value_trunc_; }
    double coef_abs_sum() const { return coef_abs_sum_; }

    std::int64_t k0() const { return k0_; }
    std::int64_t terms() const { return static_cast<std::int64_t>(cre_.size()); }
    double phase_offset() const { return phase_off_; }
    bool empty() const { return cre_.empty() && value_trunc_ == 0.0; }

  private:
    std::int64_t k0_ = 0;
    double phase_off_ = 0.0;
    std::vector<double> cre_, cim_;
    double value_trunc_ = 0.0;
    double deriv_trunc_ = 0.0;
    double coef_abs_sum_ = 0.0;
    double weighted_abs_sum_ = 0.0;
    double value_radius_ = 0.0;
    double deriv_radius_ = 0.0;
    double lipschitz_ = 0.0;
    double curvature_ = 0.0;
};

} // namespace fsum
