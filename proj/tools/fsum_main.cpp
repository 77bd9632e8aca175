#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsum/acceptance.hpp"
#include "fsum/asymptotics.hpp"
#include "fsum/exact.hpp"
#include "fsum/kernel.hpp"
#include "fsum/report.hpp"

namespace {

struct FamilyArgs {
    std::string family = "gen_poisson";
    double alpha = 1.0;
    double r = 1.0;
    std::vector<double> table;

    fsum::PsiSequence build() const {
        return fsum::make_psi(family, alpha, r, table);
    }
};

void add_family_options(CLI::App* cmd, FamilyArgs& fa) {
    cmd->add_option("--family", fa.family,
                    "gen_poisson | loglog_power | exp_log_squared | "
                    "exp_over_log | custom")
        ->required();
    cmd->add_option("--alpha", fa.alpha, "gen_poisson alpha (> 0)");
    cmd->add_option("--r", fa.r, "gen_poisson exponent r (> 0)");
    cmd->add_option("--table", fa.table,
                    "custom family coefficients psi(1), psi(2), ...");
}

nlohmann::json certified_json(const fsum::CertifiedValue& cv) {
    return {{"value", cv.value},
            {"radius", cv.radius},
            {"terms_used", cv.terms_used}};
}

int run(int argc, char** argv) {
    CLI::App app{"Exact worst-case Fourier-sum approximation errors on "
                 "convolution classes, with asymptotic-formula validation"};
    app.require_subcommand(1);

    // eval-kernel
    auto* eval_cmd = app.add_subcommand(
        "eval-kernel", "Evaluate the tail kernel at one point");
    FamilyArgs eval_fam;
    double eval_beta = 0.0, eval_t = 0.0, eval_tol = 1e-10;
    std::int64_t eval_n = 1;
    add_family_options(eval_cmd, eval_fam);
    eval_cmd->add_option("--beta", eval_beta, "phase parameter beta");
    eval_cmd->add_option("--n", eval_n, "first retained harmonic")->required();
    eval_cmd->add_option("--t", eval_t, "evaluation point (radians)")
        ->required();
    eval_cmd->add_option("--tol", eval_tol, "truncation tolerance");

    // exact
    auto* exact_cmd = app.add_subcommand(
        "exact", "Exact class error E_n with sandwich bounds (json)");
    FamilyArgs exact_fam;
    double exact_beta = 0.0, exact_tol = 1e-10;
    std::int64_t exact_n = 1;
    add_family_options(exact_cmd, exact_fam);
    exact_cmd->add_option("--beta", exact_beta, "phase parameter beta");
    exact_cmd->add_option("--n", exact_n, "Fourier sum order")->required();
    exact_cmd->add_option("--tol", exact_tol, "certified radius target");

    // predict
    auto* pred_cmd = app.add_subcommand(
        "predict", "Asymptotic prediction (main term + remainder scale)");
    FamilyArgs pred_fam;
    std::string pred_formula;
    double pred_tol = 1e-10;
    std::int64_t pred_n = 1;
    pred_cmd->add_option("--formula", pred_formula,
                         "t1|c1|c01|c2|c00|t2|c3|c4|c5")
        ->required();
    pred_cmd->add_option("--family", pred_fam.family,
                         "family (required for t1/c1/t2)");
    pred_cmd->add_option("--alpha", pred_fam.alpha, "gen_poisson alpha");
    pred_cmd->add_option("--r", pred_fam.r, "gen_poisson exponent");
    pred_cmd->add_option("--table", pred_fam.table, "custom coefficients");
    pred_cmd->add_option("--n", pred_n, "Fourier sum order")->required();
    pred_cmd->add_option("--tol", pred_tol, "series tolerance");

    // sweep
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Run an experiment config file");
    std::string sweep_config, sweep_output;
    sweep_cmd->add_option("--config", sweep_config, "json config path")
        ->required();
    sweep_cmd->add_option("--output", sweep_output,
                          "override output path from the config");

    // validate
    auto* val_cmd = app.add_subcommand(
        "validate", "Run the built-in acceptance suite");
    std::string val_threads = "auto";
    val_cmd->add_option("--threads", val_threads, "worker count or 'auto'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*eval_cmd) {
            const fsum::KernelSpec spec{eval_fam.build(), eval_beta, eval_n};
            const fsum::CertifiedValue cv =
                fsum::eval_kernel(spec, eval_t, eval_tol);
            std::cout << certified_json(cv).dump(2) << "\n";
            return 0;
        }
        if (*exact_cmd) {
            const fsum::KernelSpec spec{exact_fam.build(), exact_beta, exact_n};
            const fsum::ErrorEstimate est =
                fsum::best_constant_error(spec, exact_tol);
            nlohmann::json j;
            j["family"] = exact_fam.family;
            j["beta"] = exact_beta;
            j["n"] = exact_n;
            j["e_n"] = certified_json(est.e_n);
            j["upper_sandwich"] = certified_json(est.upper_sandwich);
            j["lower_sandwich"] = certified_json(est.lower_sandwich);
            j["witness_t0"] = est.witness_t0;
            j["witness_value"] = certified_json(est.witness_value);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*pred_cmd) {
            const fsum::FormulaId id = fsum::parse_formula(pred_formula);
            fsum::Prediction p;
            switch (id) {
            case fsum::FormulaId::C01:
                p = fsum::predict_c01(pred_fam.alpha, pred_fam.r, pred_n);
                break;
            case fsum::FormulaId::C2:
                p = fsum::predict_c2(pred_fam.alpha, pred_n);
                break;
            case fsum::FormulaId::C00:
                p = fsum::predict_c00(pred_fam.alpha, pred_fam.r, pred_n);
                break;
            case fsum::FormulaId::C3: p = fsum::predict_c3(pred_n); break;
            case fsum::FormulaId::C4: p = fsum::predict_c4(pred_n); break;
            case fsum::FormulaId::C5: p = fsum::predict_c5(pred_n); break;
            case fsum::FormulaId::T1:
                p = fsum::predict_t1(pred_fam.build(), pred_n, pred_tol);
                break;
            case fsum::FormulaId::C1:
                p = fsum::predict_c1(pred_fam.build(), pred_n, pred_tol);
                break;
            case fsum::FormulaId::T2: {
                const fsum::PsiSequence psi = pred_fam.build();
                p = fsum::predict_t2(psi, fsum::characteristics(psi), pred_n);
                break;
            }
            }
            nlohmann::json j;
            j["formula_id"] = fsum::formula_name(p.formula);
            j["n"] = pred_n;
            j["main_term"] = p.main_term;
            j["remainder_scale"] = p.remainder_scale;
            j["log_main"] = std::isfinite(p.log_main)
                                ? nlohmann::json(p.log_main)
                                : nlohmann::json(nullptr);
            j["log_scale"] = std::isfinite(p.log_scale)
                                 ? nlohmann::json(p.log_scale)
                                 : nlohmann::json(nullptr);
            if (!p.validity_notes.empty()) j["notes"] = p.validity_notes;
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*sweep_cmd) {
            fsum::ExperimentConfig cfg = fsum::load_config(sweep_config);
            if (!sweep_output.empty()) cfg.output.path = sweep_output;
            if (cfg.output.path.empty())
                throw fsum::ConfigError(
                    "no output path (config output.path or --output)");
            fsum::PredictionReport rep = fsum::run_experiment(cfg);
            rep.config.output = cfg.output;
            fsum::write_report(rep);
            std::size_t failed = 0;
            for (const auto& row : rep.rows)
                if (!row.ok) ++failed;
            std::cout << "wrote " << rep.rows.size() << " rows to "
                      << cfg.output.path;
            if (failed) std::cout << " (" << failed << " rows with errors)";
            std::cout << "\n";
            return 0;
        }
        if (*val_cmd) {
            int threads = 0;
            if (val_threads != "auto") threads = std::stoi(val_threads);
            const auto results = fsum::run_acceptance(threads);
            for (const auto& r : results) {
                std::printf("[%s] criterion %2d: %s — %s\n",
                            r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                            r.detail.c_str());
            }
            return fsum::all_passed(results) ? 0 : 1;
        }
    } catch (const fsum::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
