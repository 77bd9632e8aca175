#pragma once

#include <cstdint>
#include <string>

#include "fsum/psi.hpp"

namespace fsum {

enum class FormulaId { T1, C1, C01, C2, C00, T2, C3, C4, C5 };

const char* formula_name(FormulaId f);
FormulaId parse_formula(const std::string& name);

/// An asymptotic prediction: the main term and the quantity multiplying the
/// uniformly bounded factor. The hidden constants are unknowable, so
/// validation phrases every check as boundedness of
/// |exact - main| / remainder_scale. Log-domain copies stay finite far
/// below the underflow threshold.
struct Prediction {
    FormulaId formula = FormulaId::T1;
    double main_term = 0.0;
    double remainder_scale = 0.0;
    double log_main = 0.0;  // ln(main_term); -inf if the term is zero
    double log_scale = 0.0; // ln(remainder_scale)
    std::string validity_notes;
};

/// main = (1/pi) sum_{k>=n} psi(k); scale = (1/n) sum_{k>=1} k psi(k+n).
Prediction predict_t1(const PsiSequence& psi, std::int64_t n, double tol);

/// Superexponential decay (condition D0): main = psi(n)/pi,
/// scale = (1/n) sum_{k>=n+1} k psi(k). Computed even when D0 fails, with
/// the violation recorded in validity_notes.
Prediction predict_c1(const PsiSequence& psi, std::int64_t n, double tol);

/// Generalized Poisson, r > 1.
Prediction predict_c01(double alpha, double r, std::int64_t n);

/// Classical Poisson kernels (r = 1), q = e^{-alpha}: exact closed forms.
Prediction predict_c2(double alpha, std::int64_t n);

/// Generalized Poisson, 0 < r < 1: main = e^{-a n^r} n^{1-r}/(pi a r),
/// scale = main * (n^{-r} + n^{r-1}).
Prediction predict_c00(double alpha, double r, std::int64_t n);

/// main = psi(n) lambda(n) / pi; scale = psi(n) lambda(n)
/// (1/lambda(n) + alpha(n) + eps_n).
Prediction predict_t2(const PsiSequence& psi, const CharacteristicProfile& prof,
                      std::int64_t n);

/// The literal corollary main terms for the three named families.
Prediction predict_c3(std::int64_t n);
Prediction predict_c4(std::int64_t n);
Prediction predict_c5(std::int64_t n);

} // namespace fsum
