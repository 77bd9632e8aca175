#include "fsum/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "fsum/exact.hpp"
#include "fsum/series.hpp"

namespace fsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void config_fail(const std::string& field, const std::string& msg) {
    throw ConfigError("config." + field + ": " + msg);
}

double get_number(const nlohmann::json& j, const std::string& field) {
    if (!j.is_number()) config_fail(field, "expected a number");
    return j.get<double>();
}

std::string fmt_double(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

} // namespace

PsiSequence FamilyConfig::build() const {
    return make_psi(name, alpha, r, table);
}

std::vector<std::int64_t> NRange::values() const {
    std::vector<std::int64_t> out;
    if (factor > 1.0) {
        double v = static_cast<double>(start);
        std::int64_t last = -1;
        while (static_cast<std::int64_t>(v) <= stop) {
            const std::int64_t n = static_cast<std::int64_t>(v);
            if (n != last) out.push_back(n);
            last = n;
            v *= factor;
        }
    } else {
        for (std::int64_t n = start; n <= stop; n += step) out.push_back(n);
    }
    return out;
}

namespace {

void check_formula_family(FormulaId f, const FamilyConfig& fam) {
    const std::string& name = fam.name;
    auto need = [&](bool cond, const std::string& what) {
        if (!cond)
            config_fail("formulas", std::string(formula_name(f)) +
                                        " requires " + what + ", family is " +
                                        name);
    };
    switch (f) {
    case FormulaId::C2:
        need(name == "gen_poisson" && fam.r == 1.0, "gen_poisson with r = 1");
        break;
    case FormulaId::C01:
        need(name == "gen_poisson" && fam.r > 1.0, "gen_poisson with r > 1");
        break;
    case FormulaId::C00:
        need(name == "gen_poisson" && fam.r > 0.0 && fam.r < 1.0,
             "gen_poisson with 0 < r < 1");
        break;
    case FormulaId::C3: need(name == "loglog_power", "loglog_power"); break;
    case FormulaId::C4:
        need(name == "exp_log_squared", "exp_log_squared");
        break;
    case FormulaId::C5: need(name == "exp_over_log", "exp_over_log"); break;
    case FormulaId::T2: need(name != "custom", "a differentiable family"); break;
    default: break;
    }
}

} // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (!j.is_object()) throw ConfigError("config: expected a json object");

    if (!j.contains("family") || !j["family"].is_object())
        config_fail("family", "required object");
    const auto& fam = j["family"];
    if (!fam.contains("name") || !fam["name"].is_string())
        config_fail("family.name", "required string");
    cfg.family.name = fam["name"].get<std::string>();
    if (cfg.family.name == "gen_poisson") {
        if (!fam.contains("alpha")) config_fail("family.alpha", "required");
        cfg.family.alpha = get_number(fam["alpha"], "family.alpha");
        if (!fam.contains("r")) config_fail("family.r", "required");
        cfg.family.r = get_number(fam["r"], "family.r");
    } else if (cfg.family.name == "custom") {
        if (!fam.contains("table")) config_fail("family.table", "required");
        const auto& tb = fam["table"];
        if (tb.is_array()) {
            for (const auto& v : tb)
                cfg.family.table.push_back(get_number(v, "family.table[]"));
        } else if (tb.is_object()) {
            std::int64_t max_k = 0;
            for (const auto& [key, val] : tb.items()) {
                const std::int64_t k = std::stoll(key);
                if (k < 1) config_fail("family.table", "keys must be >= 1");
                max_k = std::max(max_k, k);
                (void)val;
            }
            cfg.family.table.assign(static_cast<std::size_t>(max_k), 0.0);
            for (const auto& [key, val] : tb.items())
                cfg.family.table[static_cast<std::size_t>(std::stoll(key) - 1)] =
                    get_number(val, "family.table{}");
        } else {
            config_fail("family.table", "expected array or object");
        }
    }
    try {
        (void)cfg.family.build();
    } catch (const Error& e) {
        config_fail("family", e.what());
    }

    if (!j.contains("beta") || !j["beta"].is_array() || j["beta"].empty())
        config_fail("beta", "required nonempty array");
    for (const auto& b : j["beta"])
        cfg.beta_list.push_back(get_number(b, "beta[]"));

    if (!j.contains("n_range") || !j["n_range"].is_object())
        config_fail("n_range", "required object");
    const auto& nr = j["n_range"];
    if (!nr.contains("start") || !nr.contains("stop"))
        config_fail("n_range", "needs start and stop");
    cfg.n_range.start = nr["start"].get<std::int64_t>();
    cfg.n_range.stop = nr["stop"].get<std::int64_t>();
    if (nr.contains("step")) cfg.n_range.step = nr["step"].get<std::int64_t>();
    if (nr.contains("factor"))
        cfg.n_range.factor = get_number(nr["factor"], "n_range.factor");
    if (cfg.n_range.start < 1) config_fail("n_range.start", "must be >= 1");
    if (cfg.n_range.step < 1 && !(cfg.n_range.factor > 1.0))
        config_fail("n_range.step", "must be >= 1");
    if (cfg.n_range.values().empty())
        config_fail("n_range", "empty range");

    if (j.contains("tol")) cfg.tol = get_number(j["tol"], "tol");
    if (!(cfg.tol > 0.0)) config_fail("tol", "must be positive");

    if (j.contains("formulas")) {
        if (!j["formulas"].is_array())
            config_fail("formulas", "expected array of formula ids");
        for (const auto& f : j["formulas"]) {
            if (!f.is_string()) config_fail("formulas", "entries are strings");
            FormulaId id;
            try {
                id = parse_formula(f.get<std::string>());
            } catch (const Error& e) {
                config_fail("formulas", e.what());
            }
            check_formula_family(id, cfg.family);
            cfg.formulas.push_back(id);
        }
    }

    if (j.contains("output")) {
        const auto& o = j["output"];
        if (o.contains("path")) cfg.output.path = o["path"].get<std::string>();
        if (o.contains("format")) {
            cfg.output.format = o["format"].get<std::string>();
            if (cfg.output.format != "csv" && cfg.output.format != "json")
                config_fail("output.format", "must be csv or json");
        }
    }

    if (j.contains("threads")) {
        if (j["threads"].is_string()) {
            if (j["threads"].get<std::string>() != "auto")
                config_fail("threads", "integer or \"auto\"");
            cfg.threads = 0;
        } else {
            cfg.threads = j["threads"].get<int>();
            if (cfg.threads < 1) config_fail("threads", "must be >= 1");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

namespace {

FormulaCell make_cell(FormulaId id, const PsiSequence& psi,
                      const FamilyConfig& fam, std::int64_t n, double tol,
                      const CertifiedValue& e_n, bool e_ok) {
    Prediction p;
    switch (id) {
    case FormulaId::T1: p = predict_t1(psi, n, tol); break;
    case FormulaId::C1: p = predict_c1(psi, n, tol); break;
    case FormulaId::C01: p = predict_c01(fam.alpha, fam.r, n); break;
    case FormulaId::C2: p = predict_c2(fam.alpha, n); break;
    case FormulaId::C00: p = predict_c00(fam.alpha, fam.r, n); break;
    case FormulaId::T2: p = predict_t2(psi, characteristics(psi), n); break;
    case FormulaId::C3: p = predict_c3(n); break;
    case FormulaId::C4: p = predict_c4(n); break;
    case FormulaId::C5: p = predict_c5(n); break;
    }
    FormulaCell cell;
    cell.id = id;
    cell.main_term = p.main_term;
    cell.remainder_scale = p.remainder_scale;
    cell.log_main = p.log_main;
    cell.log_scale = p.log_scale;
    cell.notes = p.validity_notes;
    // underflow rows keep only the log-domain columns
    cell.linear_ok = !(p.main_term == 0.0 && std::isfinite(p.log_main));
    if (!cell.linear_ok) {
        cell.dev = std::numeric_limits<double>::quiet_NaN();
        if (!cell.notes.empty()) cell.notes += "; ";
        cell.notes += "main term below representable range";
        return cell;
    }
    if (!e_ok) {
        cell.dev = std::numeric_limits<double>::quiet_NaN();
        return cell;
    }
    const double diff = std::abs(e_n.value - p.main_term);
    if (p.remainder_scale > 0.0) {
        cell.dev = diff / p.remainder_scale;
    } else {
        cell.scale_zero = true;
        cell.dev = diff;
        if (!cell.notes.empty()) cell.notes += "; ";
        cell.notes += "scale-zero: dev column holds the absolute deviation";
    }
    return cell;
}

ReportRow compute_row(const ExperimentConfig& cfg, const PsiSequence& psi,
                      double beta, std::int64_t n) {
    ReportRow row;
    row.family = cfg.family.name;
    row.beta = beta;
    row.n = n;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const KernelSpec spec{psi, beta, n};
        const ErrorEstimate est = best_constant_error(spec, cfg.tol);
        row.e_n = est.e_n;
        row.lower_sandwich = est.lower_sandwich;
        row.upper_sandwich = est.upper_sandwich;
        row.witness = est.witness_value;
        row.witness_t0 = est.witness_t0;
        row.ok = true;
    } catch (const Error& e) {
        row.error = e.what();
    }
    for (FormulaId id : cfg.formulas) {
        try {
            row.formulas.push_back(
                make_cell(id, psi, cfg.family, n, cfg.tol, row.e_n, row.ok));
        } catch (const Error& e) {
            FormulaCell cell;
            cell.id = id;
            cell.linear_ok = false;
            cell.dev = std::numeric_limits<double>::quiet_NaN();
            cell.notes = e.what();
            row.formulas.push_back(cell);
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    row.wall_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    return row;
}

} // namespace

PredictionReport run_experiment(const ExperimentConfig& config) {
    PredictionReport report;
    report.config = config;
    const PsiSequence psi = config.family.build();

    std::vector<double> betas = config.beta_list;
    std::sort(betas.begin(), betas.end());
    const std::vector<std::int64_t> ns = config.n_range.values();

    struct Item {
        double beta;
        std::int64_t n;
    };
    std::vector<Item> items;
    for (double b : betas)
        for (std::int64_t n : ns) items.push_back({b, n});
    report.rows.resize(items.size());

    int threads = config.threads;
    if (threads == 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;
    }
    threads = std::min<int>(threads, static_cast<int>(items.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size()) break;
            report.rows[i] = compute_row(config, psi, items[i].beta, items[i].n);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return report;
}

void write_csv(const PredictionReport& report, std::ostream& os) {
    os << "family,beta,n,e_n,e_n_radius,lower_sandwich,upper_sandwich,witness,"
          "formula_id,main_term,remainder_scale,dev,log_main,log_scale,notes\n";
    for (const ReportRow& row : report.rows) {
        std::ostringstream base;
        base << csv_quote(row.family) << ',' << fmt_double(row.beta) << ','
             << row.n << ',';
        if (row.ok) {
            base << fmt_double(row.e_n.value) << ','
                 << fmt_double(row.e_n.radius) << ','
                 << fmt_double(row.lower_sandwich.value) << ','
                 << fmt_double(row.upper_sandwich.value) << ','
                 << fmt_double(row.witness.value) << ',';
        } else {
            base << ",,,,,";
        }
        auto row_notes = [&](const std::string& cell_notes) {
            std::string notes = row.error;
            if (!cell_notes.empty()) {
                if (!notes.empty()) notes += "; ";
                notes += cell_notes;
            }
            return csv_quote(notes);
        };
        if (row.formulas.empty()) {
            os << base.str() << ",,,,,," << row_notes("") << "\n";
            continue;
        }
        for (const FormulaCell& cell : row.formulas) {
            os << base.str() << formula_name(cell.id) << ',';
            if (cell.linear_ok)
                os << fmt_double(cell.main_term) << ','
                   << fmt_double(cell.remainder_scale) << ',';
            else
                os << ",,";
            os << fmt_double(cell.dev) << ',' << fmt_double(cell.log_main)
               << ',' << fmt_double(cell.log_scale) << ','
               << row_notes(cell.notes) << "\n";
        }
    }
}

namespace {

nlohmann::json num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double null_to_num(const nlohmann::json& j, double fallback) {
    return j.is_null() ? fallback : j.get<double>();
}

nlohmann::json certified_to_json(const CertifiedValue& cv) {
    return {{"value", cv.value}, {"radius", cv.radius},
            {"terms_used", cv.terms_used}};
}

CertifiedValue certified_from_json(const nlohmann::json& j) {
    CertifiedValue cv;
    cv.value = j.at("value").get<double>();
    cv.radius = j.at("radius").get<double>();
    cv.terms_used = j.at("terms_used").get<std::int64_t>();
    return cv;
}

} // namespace

nlohmann::json report_to_json(const PredictionReport& report) {
    nlohmann::json j;
    const ExperimentConfig& c = report.config;
    j["config"]["family"]["name"] = c.family.name;
    if (c.family.name == "gen_poisson") {
        j["config"]["family"]["alpha"] = c.family.alpha;
        j["config"]["family"]["r"] = c.family.r;
    }
    if (!c.family.table.empty()) j["config"]["family"]["table"] = c.family.table;
    j["config"]["beta"] = c.beta_list;
    j["config"]["n_range"] = {{"start", c.n_range.start},
                              {"stop", c.n_range.stop},
                              {"step", c.n_range.step}};
    if (c.n_range.factor > 1.0)
        j["config"]["n_range"]["factor"] = c.n_range.factor;
    j["config"]["tol"] = c.tol;
    nlohmann::json fl = nlohmann::json::array();
    for (FormulaId f : c.formulas) fl.push_back(formula_name(f));
    j["config"]["formulas"] = fl;

    nlohmann::json rows = nlohmann::json::array();
    for (const ReportRow& row : report.rows) {
        nlohmann::json r;
        r["family"] = row.family;
        r["beta"] = row.beta;
        r["n"] = row.n;
        r["ok"] = row.ok;
        if (!row.error.empty()) r["error"] = row.error;
        r["e_n"] = certified_to_json(row.e_n);
        r["lower_sandwich"] = certified_to_json(row.lower_sandwich);
        r["upper_sandwich"] = certified_to_json(row.upper_sandwich);
        r["witness"] = certified_to_json(row.witness);
        r["witness_t0"] = row.witness_t0;
        r["wall_ms"] = row.wall_ms;
        nlohmann::json cells = nlohmann::json::array();
        for (const FormulaCell& cell : row.formulas) {
            nlohmann::json cj;
            cj["formula_id"] = formula_name(cell.id);
            cj["main_term"] = cell.main_term;
            cj["remainder_scale"] = cell.remainder_scale;
            cj["log_main"] = num_or_null(cell.log_main);
            cj["log_scale"] = num_or_null(cell.log_scale);
            cj["dev"] = num_or_null(cell.dev);
            cj["linear_ok"] = cell.linear_ok;
            cj["scale_zero"] = cell.scale_zero;
            if (!cell.notes.empty()) cj["notes"] = cell.notes;
            cells.push_back(cj);
        }
        r["formulas"] = cells;
        rows.push_back(r);
    }
    j["rows"] = rows;
    return j;
}

PredictionReport report_from_json(const nlohmann::json& j) {
    PredictionReport report;
    const auto& cj = j.at("config");
    nlohmann::json cfg_j = cj;
    if (!cfg_j.contains("beta") && cj.contains("beta"))
        cfg_j["beta"] = cj["beta"];
    report.config = config_from_json(cfg_j);
    for (const auto& r : j.at("rows")) {
        ReportRow row;
        row.family = r.at("family").get<std::string>();
        row.beta = r.at("beta").get<double>();
        row.n = r.at("n").get<std::int64_t>();
        row.ok = r.at("ok").get<bool>();
        if (r.contains("error")) row.error = r["error"].get<std::string>();
        row.e_n = certified_from_json(r.at("e_n"));
        row.lower_sandwich = certified_from_json(r.at("lower_sandwich"));
        row.upper_sandwich = certified_from_json(r.at("upper_sandwich"));
        row.witness = certified_from_json(r.at("witness"));
        row.witness_t0 = r.at("witness_t0").get<double>();
        row.wall_ms = r.at("wall_ms").get<double>();
        for (const auto& cjj : r.at("formulas")) {
            FormulaCell cell;
            cell.id = parse_formula(cjj.at("formula_id").get<std::string>());
            cell.main_term = cjj.at("main_term").get<double>();
            cell.remainder_scale = cjj.at("remainder_scale").get<double>();
            cell.log_main = null_to_num(cjj.at("log_main"), -kInf);
            cell.log_scale = null_to_num(cjj.at("log_scale"), -kInf);
            cell.dev = null_to_num(cjj.at("dev"),
                                   std::numeric_limits<double>::quiet_NaN());
            cell.linear_ok = cjj.at("linear_ok").get<bool>();
            cell.scale_zero = cjj.at("scale_zero").get<bool>();
            if (cjj.contains("notes"))
                cell.notes = cjj["notes"].get<std::string>();
            row.formulas.push_back(cell);
        }
        report.rows.push_back(row);
    }
    return report;
}

void write_report(const PredictionReport& report) {
    const std::string& path = report.config.output.path;
    if (path.empty()) throw ConfigError("output.path is empty");
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path);
    if (report.config.output.format == "json")
        os << report_to_json(report).dump(2) << "\n";
    else
        write_csv(report, os);
}

} // namespace fsum
