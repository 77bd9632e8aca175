#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fsum/errors.hpp"

namespace fsum {

enum class PsiFamily {
    GenPoisson,    // psi(k) = exp(-alpha * k^r), alpha > 0, r > 0
    LogLogPower,   // psi(k) = (k+2)^(-ln ln(k+2))
    ExpLogSquared, // psi(k) = exp(-ln^2 k)
    ExpOverLog,    // psi(k) = exp(-(k+1)/ln(k+1))
    Custom,        // finite nonnegative table psi(1..m)
};

const char* family_name(PsiFamily f);

/// A coefficient family psi: pointwise values psi(k), the continuous
/// extension psi(t) on [1, inf), and the wired derivative psi'(t) for the
/// built-in families. Immutable after construction; safe for concurrent
/// reads.
class PsiSequence {
  public:
    static PsiSequence gen_poisson(double alpha, double r);
    static PsiSequence loglog_power();
    static PsiSequence exp_log_squared();
    static PsiSequence exp_over_log();
    static PsiSequence custom(std::vector<double> table); // table[i] = psi(i+1)

    PsiFamily family() const { return family_; }
    double alpha() const { return alpha_; }
    double r() const { return r_; }

    /// psi(k) for integer k >= 1. Zero beyond a custom table's end.
    double value_at(std::int64_t k) const;

    /// log psi(k); -inf where psi(k) = 0. Exact in the exponent for
    /// GenPoisson, so usable far below the underflow threshold.
    double log_value_at(std::int64_t k) const;

    /// Continuous extension psi(t), t >= 1. Custom tables have none.
    double continuous_value(double t) const;

    bool has_derivative() const { return family_ != PsiFamily::Custom; }

    /// psi'(t) for the built-in families; throws NotDifferentiable for
    /// custom tables.
    double derivative(double t) const;

    /// Index of the last nonzero table entry (custom families), else 0.
    std::int64_t table_end() const { return table_end_; }

    bool is_custom() const { return family_ == PsiFamily::Custom; }

    std::string name() const { return family_name(family_); }

  private:
    PsiSequence() = default;

    PsiFamily family_ = PsiFamily::Custom;
    double alpha_ = 0.0;
    double r_ = 0.0;
    std::vector<double> table_;
    std::int64_t table_end_ = 0;
};

/// Factory from the canonical string names used by the CLI / config files:
/// "gen_poisson" (alpha, r), "loglog_power", "exp_log_squared",
/// "exp_over_log", "custom" (table).
PsiSequence make_psi(const std::string& family, double alpha = 0.0,
                     double r = 0.0, std::vector<double> table = {});

/// Numeric / analytic evidence for the summability and decay hypotheses.
struct AdmissibilityReport {
    bool summable = false;   // sum psi(k) < inf
    bool k_summable = false; // sum k psi(k) < inf
    bool d0 = false;         // psi(k) > 0 and psi(k+1)/psi(k) -> 0
    std::string evidence;    // probed ranges and bounding arguments per flag
};

/// probe_depth >= 10. Built-in families use closed-form ratio/comparison
/// arguments; custom tables get numeric evidence only, never a proof claim.
AdmissibilityReport check_admissibility(const PsiSequence& psi,
                                        std::int64_t probe_depth);

/// The decay characteristics lambda(t) = psi/|psi'|, alpha(t) = psi/(t|psi'|),
/// lambda'(t), and eps_n = sup_{t>=n} |lambda'(t)|.
struct CharacteristicProfile {
    std::function<double(double)> lambda_at;
    std::function<double(double)> alpha_at;
    std::function<double(double)> lambda_prime_at;
    std::function<double(std::int64_t)> epsilon_n;
    double domain_min = 1.0; // smallest t the closed forms accept
};

/// Closed forms per family; throws NotDifferentiable for custom tables.
CharacteristicProfile characteristics(const PsiSequence& psi);

} // namespace fsum
