#include "fsum/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fsum/series.hpp"

namespace fsum {

namespace {

void validate(const KernelSpec& spec) {
    if (spec.n < 1) throw DomainError("KernelSpec: n must be >= 1");
    if (!std::isfinite(spec.beta))
        throw DomainError("KernelSpec: beta must be finite");
}

// Smallest K with a valid far tail bound <= value_tol and a valid weighted
// far bound (any size), so the evaluator always carries a finite certified
// Lipschitz constant.
std::int64_t choose_truncation(const PsiSequence& psi, std::int64_t n,
                               double value_tol) {
    if (psi.is_custom()) return std::max<std::int64_t>(psi.table_end(), n - 1);
    std::int64_t K = n + 63;
    while (true) {
        const TailBound tb = far_tail_bound(psi, K);
        if (tb.valid && tb.bound <= value_tol &&
            far_weighted_tail_bound(psi, K).valid)
            return K;
        if (K - n + 1 >= kMaxSeriesTerms) {
            std::ostringstream os;
            os << "kernel truncation: tolerance " << value_tol
               << " unreachable within " << kMaxSeriesTerms << " terms";
            throw TolUnreachable(os.str());
        }
        K = std::min(n + kMaxSeriesTerms - 1,
                     K + std::max<std::int64_t>(K - n + 1, 64));
    }
}

} // namespace

TrigSeriesEval make_kernel_evaluator(const KernelSpec& spec, double value_tol) {
    validate(spec);
    const std::int64_t K = choose_truncation(spec.psi, spec.n, value_tol);
    std::vector<double> cre;
    cre.reserve(static_cast<std::size_t>(std::max<std::int64_t>(K - spec.n + 1, 0)));
    for (std::int64_t k = spec.n; k <= K; ++k)
        cre.push_back(spec.psi.value_at(k));
    const TailBound vb = far_tail_bound(spec.psi, K);
    const TailBound wb = far_weighted_tail_bound(spec.psi, K);
    const TailBound kb = far_k2_tail_bound(spec.psi, K);
    return TrigSeriesEval(spec.n, spec.beta * std::numbers::pi / 2.0,
                          std::move(cre), {}, vb.bound, wb.bound,
                          kb.valid ? kb.bound
                                   : std::numeric_limits<double>::infinity());
}

TrigSeriesEval make_envelope_evaluator(const KernelSpec& spec, double value_tol) {
    validate(spec);
    const std::int64_t K = choose_truncation(spec.psi, spec.n, value_tol);
    std::vector<double> cre;
    cre.reserve(static_cast<std::size_t>(std::max<std::int64_t>(K - spec.n + 1, 0)));
    for (std::int64_t k = spec.n; k <= K; ++k)
        cre.push_back(spec.psi.value_at(k));
    const TailBound vb = far_tail_bound(spec.psi, K);
    const TailBound wb = far_weighted_tail_bound(spec.psi, K);
    return TrigSeriesEval(0, 0.0, std::move(cre), {}, vb.bound, wb.bound);
}

CertifiedValue eval_kernel(const KernelSpec& spec, double t, double tol) {
    if (!(tol > 0.0)) throw DomainError("eval_kernel: tol must be positive");
    const TrigSeriesEval ev = make_kernel_evaluator(spec, tol);
    CertifiedValue cv;
    cv.value = ev.value(t);
    cv.radius = ev.value_radius();
    cv.terms_used = ev.terms();
    return cv;
}

CertifiedValue eval_kernel_derivative(const KernelSpec& spec, double t,
                                      double tol) {
    if (!(tol > 0.0))
        throw DomainError("eval_kernel_derivative: tol must be positive");
    validate(spec);
    // grow the horizon until the weighted far bound certifies the
    // derivative truncation
    std::int64_t K = choose_truncation(spec.psi, spec.n, tol);
    if (!spec.psi.is_custom()) {
        while (true) {
            const TailBound wb = far_weighted_tail_bound(spec.psi, K);
            if (wb.valid && wb.bound <= tol) break;
            if (K - spec.n + 1 >= kMaxSeriesTerms)
                throw TolUnreachable("eval_kernel_derivative: weighted tail "
                                     "tolerance unreachable");
            K = std::min(spec.n + kMaxSeriesTerms - 1,
                         K + std::max<std::int64_t>(K - spec.n + 1, 64));
        }
    }
    std::vector<double> cre;
    for (std::int64_t k = spec.n; k <= K; ++k)
        cre.push_back(spec.psi.value_at(k));
    const TailBound vb = far_tail_bound(spec.psi, K);
    const TailBound wb = far_weighted_tail_bound(spec.psi, K);
    const TrigSeriesEval ev(spec.n, spec.beta * std::numbers::pi / 2.0,
                            std::move(cre), {}, vb.bound, wb.bound);
    CertifiedValue cv;
    cv.value = ev.derivative(t);
    cv.radius = ev.deriv_radius();
    cv.terms_used = ev.terms();
    return cv;
}

CertifiedValue lipschitz_constant(const KernelSpec& spec, double tol) {
    validate(spec);
    if (tol > 0.0) return weighted_tail_from(spec.psi, spec.n, tol);
    // automatic: loosen to a relative tolerance against a first rough pass
    CertifiedValue rough = weighted_tail_from(spec.psi, spec.n, 1e250);
    const double want = std::max(1e-9 * (rough.value + rough.radius),
                                 1e-280);
    if (rough.radius <= want) return rough;
    return weighted_tail_from(spec.psi, spec.n, want);
}

EnvelopeSample envelope(const KernelSpec& spec, double t, double tol) {
    if (!(tol > 0.0)) throw DomainError("envelope: tol must be positive");
    const TrigSeriesEval ev = make_envelope_evaluator(spec, tol);
    const auto [re, im] = ev.complex_value(t);
    EnvelopeSample s;
    s.t = t;
    s.g = re;
    s.h = -im;
    s.amplitude = std::hypot(s.g, s.h);
    s.phase = std::atan2(s.h, s.g);
    s.radius = ev.value_radius();
    return s;
}

} // namespace fsum
