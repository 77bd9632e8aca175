#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsum/asymptotics.hpp"
#include "fsum/certified.hpp"
#include "fsum/psi.hpp"

namespace fsum {

struct FamilyConfig {
    std::string name; // canonical family name
    double alpha = 0.0;
    double r = 0.0;
    std::vector<double> table; // custom families: psi(1..m)

    PsiSequence build() const;
};

/// Arithmetic (step) or geometric (factor) progression start..stop.
struct NRange {
    std::int64_t start = 1;
    std::int64_t stop = 1;
    std::int64_t step = 1;
    double factor = 0.0; // > 1 selects geometric growth

    std::vector<std::int64_t> values() const;
};

struct OutputConfig {
    std::string path;
    std::string format = "csv"; // "csv" | "json"
};

struct ExperimentConfig {
    FamilyConfig family;
    std::vector<double> beta_list;
    NRange n_range;
    double tol = 1e-8;
    std::vector<FormulaId> formulas;
    OutputConfig output;
    int threads = 1; // 0 means auto
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

struct FormulaCell {
    FormulaId id = FormulaId::T1;
    double main_term = 0.0;
    double remainder_scale = 0.0;
    double log_main = 0.0;
    double log_scale = 0.0;
    double dev = 0.0;        // |e_n - main| / scale, or absolute when scale=0
    bool linear_ok = true;   // false: main term below representable range
    bool scale_zero = false; // dev column holds the absolute deviation
    std::string notes;
};

struct ReportRow {
    std::string family;
    double beta = 0.0;
    std::int64_t n = 0;
    bool ok = false;
    std::string error; // per-row failure diagnostic, never aborts the sweep
    CertifiedValue e_n, lower_sandwich, upper_sandwich, witness;
    double witness_t0 = 0.0;
    double wall_ms = 0.0;
    std::vector<FormulaCell> formulas;
};

struct PredictionReport {
    ExperimentConfig config;
    std::vector<ReportRow> rows; // sorted by (beta, n)
};

/// Runs the sweep; rows are independent work items executed on a worker
/// pool, assembled back in (beta, n) order. Identical configs produce
/// identical numbers for any thread count.
PredictionReport run_experiment(const ExperimentConfig& config);

void write_csv(const PredictionReport& report, std::ostream& os);
nlohmann::json report_to_json(const PredictionReport& report);
PredictionReport report_from_json(const nlohmann::json& j);

/// Writes to config.output.path in config.output.format.
void write_report(const PredictionReport& report);

} // namespace fsum
