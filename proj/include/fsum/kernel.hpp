#pragma once

#include <cstdint>

#include "fsum/certified.hpp"
#include "fsum/psi.hpp"
#include "fsum/trig_series.hpp"

namespace fsum {

/// The tail kernel Psi_{beta,n}(t) = sum_{k>=n} psi(k) cos(k t - beta pi/2).
/// beta is in units of pi/2 rotations.
struct KernelSpec {
    PsiSequence psi;
    double beta = 0.0;
    std::int64_t n = 1;
};

/// One envelope sample: Psi_{beta,n} = g cos(nt - beta pi/2) +
/// h sin(nt - beta pi/2) with amplitude sqrt(g^2+h^2) and phase arg(g+ih).
/// radius bounds the truncation+roundoff error of g and h individually.
struct EnvelopeSample {
    double t = 0.0;
    double g = 0.0;
    double h = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double radius = 0.0;
};

/// Truncated evaluator for the kernel itself; the truncation index is
/// chosen so the dropped value tail is <= value_tol, and is shared across
/// every t the evaluator touches.
TrigSeriesEval make_kernel_evaluator(const KernelSpec& spec, double value_tol);

/// Evaluator for g + ih (harmonics shifted down to k = 0, no phase).
TrigSeriesEval make_envelope_evaluator(const KernelSpec& spec, double value_tol);

CertifiedValue eval_kernel(const KernelSpec& spec, double t, double tol);

/// Psi'_{beta,n}(t) = -sum_{k>=n} k psi(k) sin(kt - beta pi/2).
CertifiedValue eval_kernel_derivative(const KernelSpec& spec, double t,
                                      double tol);

/// sum_{k>=n} k psi(k): a certified Lipschitz constant for the kernel.
/// tol < 0 selects an automatic relative tolerance.
CertifiedValue lipschitz_constant(const KernelSpec& spec, double tol = -1.0);

EnvelopeSample envelope(const KernelSpec& spec, double t, double tol);

} // namespace fsum
