#include "fsum/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fsum/series.hpp"

namespace fsum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

Prediction from_logs(FormulaId id, double log_main, double log_scale) {
    Prediction p;
    p.formula = id;
    p.log_main = log_main;
    p.log_scale = log_scale;
    p.main_term = std::exp(log_main);
    p.remainder_scale = std::exp(log_scale);
    return p;
}

} // namespace

const char* formula_name(FormulaId f) {
    switch (f) {
    case FormulaId::T1: return "t1";
    case FormulaId::C1: return "c1";
    case FormulaId::C01: return "c01";
    case FormulaId::C2: return "c2";
    case FormulaId::C00: return "c00";
    case FormulaId::T2: return "t2";
    case FormulaId::C3: return "c3";
    case FormulaId::C4: return "c4";
    case FormulaId::C5: return "c5";
    }
    return "?";
}

FormulaId parse_formula(const std::string& name) {
    if (name == "t1") return FormulaId::T1;
    if (name == "c1") return FormulaId::C1;
    if (name == "c01") return FormulaId::C01;
    if (name == "c2") return FormulaId::C2;
    if (name == "c00") return FormulaId::C00;
    if (name == "t2") return FormulaId::T2;
    if (name == "c3") return FormulaId::C3;
    if (name == "c4") return FormulaId::C4;
    if (name == "c5") return FormulaId::C5;
    throw InvalidParameter("unknown formula id: " + name);
}

Prediction predict_t1(const PsiSequence& psi, std::int64_t n, double tol) {
    if (n < 1) throw DomainError("predict_t1: n must be >= 1");
    Prediction p;
    p.formula = FormulaId::T1;
    const CertifiedValue tail = tail_sum(psi, n, tol);
    const CertifiedValue wt = weighted_tail_sum(psi, n, tol);
    p.main_term = tail.value / kPi;
    p.remainder_scale = wt.value / static_cast<double>(n);
    p.log_main = safe_log(p.main_term);
    p.log_scale = safe_log(p.remainder_scale);
    return p;
}

Prediction predict_c1(const PsiSequence& psi, std::int64_t n, double tol) {
    if (n < 1) throw DomainError("predict_c1: n must be >= 1");
    Prediction p;
    p.formula = FormulaId::C1;
    p.main_term = psi.value_at(n) / kPi;
    const CertifiedValue wt = weighted_tail_from(psi, n + 1, tol);
    p.remainder_scale = wt.value / static_cast<double>(n);
    p.log_main = psi.log_value_at(n) - std::log(kPi);
    p.log_scale = safe_log(p.remainder_scale);
    const AdmissibilityReport rep = check_admissibility(psi, 32);
    if (!rep.d0)
        p.validity_notes = "D0 hypothesis fails for this family; the formula "
                           "is evaluated anyway";
    return p;
}

Prediction predict_c01(double alpha, double r, std::int64_t n) {
    if (!(r > 1.0)) throw DomainError("predict_c01: need r > 1");
    if (!(alpha > 0.0)) throw DomainError("predict_c01: need alpha > 0");
    if (n < 1) throw DomainError("predict_c01: need n >= 1");
    const double nd = static_cast<double>(n);
    if (!(alpha * r * std::pow(nd + 1.0, r) > 2.0))
        throw DomainError("predict_c01: need alpha*r*(n+1)^r > 2");
    const double lead = -alpha * std::pow(nd, r);
    const double log_main = lead - std::log(kPi);
    const double log_scale =
        lead - alpha * r * std::pow(nd, r - 1.0) +
        std::log1p(1.0 / (alpha * r * std::pow(nd + 1.0, r - 1.0)));
    return from_logs(FormulaId::C01, log_main, log_scale);
}

Prediction predict_c2(double alpha, std::int64_t n) {
    if (!(alpha > 0.0)) throw DomainError("predict_c2: need alpha > 0");
    if (n < 1) throw DomainError("predict_c2: need n >= 1");
    const double q = std::exp(-alpha);
    const double nd = static_cast<double>(n);
    const double log_main = -alpha * nd - std::log(kPi * (1.0 - q));
    const double log_scale = -alpha * (nd + 1.0) - std::log(nd) -
                             2.0 * std::log(1.0 - q);
    return from_logs(FormulaId::C2, log_main, log_scale);
}

Prediction predict_c00(double alpha, double r, std::int64_t n) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("predict_c00: need 0 < r < 1");
    if (!(alpha > 0.0)) throw DomainError("predict_c00: need alpha > 0");
    if (n < 1) throw DomainError("predict_c00: need n >= 1");
    const double nd = static_cast<double>(n);
    const double log_main = -alpha * std::pow(nd, r) +
                            (1.0 - r) * std::log(nd) -
                            std::log(kPi * alpha * r);
    const double envelope = std::pow(nd, -r) + std::pow(nd, r - 1.0);
    return from_logs(FormulaId::C00, log_main, log_main + std::log(envelope));
}

Prediction predict_t2(const PsiSequence& psi, const CharacteristicProfile& prof,
                      std::int64_t n) {
    if (!psi.has_derivative())
        throw NotDifferentiable("predict_t2: custom tables carry no derivative");
    const double nd = static_cast<double>(n);
    if (nd < prof.domain_min)
        throw DomainError("predict_t2: n below the family domain cutoff");
    const double lam = prof.lambda_at(nd);
    const double alph = prof.alpha_at(nd);
    const double eps = prof.epsilon_n(n);
    const double log_psi = psi.log_value_at(n);
    Prediction p = from_logs(FormulaId::T2,
                             log_psi + std::log(lam) - std::log(kPi),
                             log_psi + std::log(lam) +
                                 std::log(1.0 / lam + alph + eps));
    // empirical hypothesis probes on [n, 10n]
    std::ostringstream notes;
    const double a_far = prof.alpha_at(10.0 * nd);
    if (!(a_far < alph))
        notes << "alpha(t) not decreasing on [n,10n]; ";
    if (!(prof.lambda_at(10.0 * nd) > lam))
        notes << "lambda(t) not increasing on [n,10n]; ";
    p.validity_notes = notes.str();
    return p;
}

Prediction predict_c3(std::int64_t n) {
    if (n < 1) throw DomainError("predict_c3: need n >= 1");
    const PsiSequence psi = PsiSequence::loglog_power();
    const double nd = static_cast<double>(n);
    const double lll = std::log(std::log(nd + 2.0));
    if (!(lll > 0.0)) throw DomainError("predict_c3: need ln ln(n+2) > 0");
    const double log_psi = psi.log_value_at(n);
    return from_logs(FormulaId::C3,
                     log_psi + std::log(nd) - std::log(kPi * lll), log_psi);
}

Prediction predict_c4(std::int64_t n) {
    if (n < 2) throw DomainError("predict_c4: need n >= 2");
    const PsiSequence psi = PsiSequence::exp_log_squared();
    const double nd = static_cast<double>(n);
    const double log_psi = psi.log_value_at(n);
    return from_logs(FormulaId::C4,
                     log_psi + std::log(nd) -
                         std::log(2.0 * kPi * std::log(nd)),
                     log_psi);
}

Prediction predict_c5(std::int64_t n) {
    if (n < 2) throw DomainError("predict_c5: need n >= 2");
    const PsiSequence psi = PsiSequence::exp_over_log();
    const double nd = static_cast<double>(n);
    const double log_psi = psi.log_value_at(n);
    return from_logs(FormulaId::C5,
                     log_psi + std::log(std::log(nd + 1.0)) - std::log(kPi),
                     log_psi);
}

} // namespace fsum
