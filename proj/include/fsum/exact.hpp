#pragma once

#include <cstdint>
#include <vector>

#include "fsum/certified.hpp"
#include "fsum/kernel.hpp"
#include "fsum/trig_series.hpp"

namespace fsum {

/// Certified global extrema of a periodic function over one period.
struct ExtremaResult {
    CertifiedValue max_value;
    CertifiedValue min_value;
    double argmax = 0.0;
    double argmin = 0.0;
    std::int64_t grid_points = 0;
    std::int64_t refinement_iterations = 0;
};

/// The exact class error and the sandwich bounds around it:
///   e_n          = (1/pi) inf_lambda ||Psi_{beta,n} - lambda||_C
///   upper        = (1/pi) ||Psi_{beta,n}||_C
///   lower        = (1/2pi) ||Psi_{beta,n}(.+pi/n) - Psi_{beta,n}||_C
///   witness      = (1/pi) |Psi_{beta,n}(t0)|.
struct ErrorEstimate {
    CertifiedValue e_n;
    CertifiedValue upper_sandwich;
    CertifiedValue lower_sandwich;
    double witness_t0 = 0.0;
    CertifiedValue witness_value;
};

/// Result of the t0 fixed-point construction. On non-convergence the last
/// iterate is kept (any point yields a valid lower bound); converged and
/// residual report the outcome. The phase-at-origin alternative reading is
/// reported alongside for comparison.
struct T0Witness {
    double t0 = 0.0;
    CertifiedValue value; // Psi_{beta,n}(t0)
    bool converged = false;
    double residual = 0.0;
    int iterations = 0;
    double t0_phase_at_origin = 0.0;
    CertifiedValue value_phase_at_origin;
};

/// A trigonometric polynomial sum_k (a_k cos kt + b_k sin kt), k = 1..m
/// (index 0 holds k = 1). Mean-zero by construction.
struct TrigPoly {
    std::vector<double> cos_coef;
    std::vector<double> sin_coef;
};

/// Lipschitz-certified global extrema over [t_lo, t_lo + 2pi).
ExtremaResult certified_extrema(const KernelSpec& spec, double tol,
                                double t_lo = 0.0);

/// The generic search engine on any truncated series evaluator; min_grid
/// is the phase-1 uniform grid resolution.
ExtremaResult find_extrema(const TrigSeriesEval& ev, double tol,
                           std::int64_t min_grid, double t_lo = 0.0);

/// Exact E_n via the duality reduction: the best constant approximant of a
/// continuous periodic function is the midrange, so
/// e_n = (max - min) / (2 pi), with radius <= tol.
ErrorEstimate best_constant_error(const KernelSpec& spec, double tol);

/// The shifted-difference lower bound (1/2pi)||Psi(.+pi/n) - Psi||_C.
CertifiedValue shift_lower_bound(const KernelSpec& spec, double tol);

/// Damped fixed-point iteration for t0 = (beta pi/2 + phase(t0))/n.
T0Witness t0_witness(const KernelSpec& spec, double tol);

/// Lower bound on e_n from an admissible test polynomial phi
/// (||phi||_1 <= 1 + 1e-9, zero mean): the sup-norm of the coefficientwise
/// convolution divided by pi.
CertifiedValue witness_lower_bound(const KernelSpec& spec, const TrigPoly& phi,
                                   double tol);

/// Numerical L1 norm (1-periodic integral over [0,2pi)) of phi.
double trig_poly_l1_norm(const TrigPoly& phi);

} // namespace fsum
