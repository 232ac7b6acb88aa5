// late: command-line front end for LATE sign-sensitivity analysis.
// Subcommands: estimate | boundary | forge | audit | simulate | dichotomize.
// Exit codes: 0 success or safe-side verdict, 2 danger-side verdict, 1 error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "late/errors.hpp"
#include "late/io.hpp"
#include "late/rng.hpp"
#include "late/version.hpp"

namespace {

using late::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDanger = 2;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("LATE_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw late::ParseError("LATE_SEED is not an unsigned integer");
        }
    }
    return 1;
}

void emit_json(const std::string& path, const json& doc) {
    const std::string text = late::canonical_dump(doc);
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw late::ParseError("cannot write '" + path + "'");
    out << text;
}

json make_report(const std::string& command, const std::string& input,
                 const std::string& config_text, std::uint64_t seed) {
    json doc;
    doc["schema"] = late::kReportSchema;
    doc["command"] = command;
    json prov;
    prov["input"] = input;
    prov["config_hash"] = late::config_hash(config_text);
    prov["seed"] = seed;
    prov["tool_version"] = late::kToolVersion;
    doc["provenance"] = prov;
    return doc;
}

late::SampleData read_input_csv(const std::string& path, const late::CsvOptions& options) {
    if (path == "-") return late::read_csv(std::cin, options);
    return late::read_csv_file(path, options);
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : "n/a"; }

void print_boundary_report(const late::BoundaryReport& report, const std::string& label) {
    std::cout << "boundary |beta|(k1-k2)   " << fmt(report.boundary) << "\n"
              << "compared quantity        " << fmt(report.compared) << "  [" << label
              << "]\n"
              << "margin                   " << fmt(report.margin) << "\n"
              << "verdict                  " << late::verdict_name(report.verdict)
              << (report.sufficient_only ? "  (sufficient condition only)" : "") << "\n";
    if (report.relabeled)
        std::cout << "note: beta > 0 was relabeled to the negative-outcome problem\n";
    if (!report.inputs_consistent)
        std::cout << "note: cell probability exceeds k2, impossible for one population "
                     "law; inputs look like estimates from different samples\n";
}

const char* compared_label(late::Regime regime) {
    switch (regime) {
        case late::Regime::InteriorK2: return "eta";
        case late::Regime::OneSided: return "P(Y=1,D=1|Z=0)";
        case late::Regime::GeneralBounded: return "2*M*eta";
    }
    return "?";
}

// -- estimate ---------------------------------------------------------------

struct EstimateArgs {
    std::string input;
    late::CsvOptions csv;
    std::size_t bootstrap_reps = 0;
    double level = 0.95;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string classify;  // "", interior, one-sided, general
    double eta = -1.0;
    double bound_m = 1.0;
    std::string json_path;
};

int run_estimate(const EstimateArgs& args) {
    const std::uint64_t seed = args.seed_set ? args.seed : default_seed();
    const late::SampleData data = read_input_csv(args.input, args.csv);
    const late::Estimates est = late::estimate(data);

    std::cout << "n                        " << est.n << "\n"
              << "P(Z=1)                   " << fmt(est.pz_hat) << "\n"
              << "k1 = P(D=1|Z=1)          " << fmt(est.k1_hat) << "\n"
              << "k2 = P(D=1|Z=0)          " << fmt(est.k2_hat) << "\n"
              << "ITT                      " << fmt(est.itt_hat) << "\n"
              << "beta (Wald)              " << fmt_opt(est.beta_hat) << "\n"
              << "gamma                    " << fmt_opt(est.gamma_hat) << "\n"
              << "|beta|*gamma lower bound " << fmt_opt(est.lower_bound_hat) << "\n"
              << "P(Y=1,D=1|Z=0)           " << fmt_opt(est.cell_prob_hat)
              << (est.y_binary ? "" : "  (outcome not 0/1)") << "\n";

    std::ostringstream config_text;
    config_text << args.input << '|' << args.csv.y_col << ',' << args.csv.d_col << ','
                << args.csv.z_col << '|' << args.bootstrap_reps << '|' << args.level << '|'
                << seed << '|' << args.classify << '|' << args.eta << '|' << args.bound_m;
    json report = make_report("estimate", args.input, config_text.str(), seed);
    report["estimates"] = late::estimates_to_json(est);
    report["bootstrap"] = json::array();
    report["boundary_reports"] = json::array();

    std::optional<late::BootstrapCI> beta_ci;
    if (args.bootstrap_reps > 0) {
        const std::vector<late::Statistic> stats = {
            late::Statistic::Beta, late::Statistic::Itt, late::Statistic::Gamma,
            late::Statistic::LowerBound};
        for (late::Statistic stat : stats) {
            try {
                const late::BootstrapCI ci = late::bootstrap(
                    data, stat, args.level, args.bootstrap_reps,
                    late::derive_seed(seed, late::statistic_name(stat), 0));
                report["bootstrap"].push_back(late::bootstrap_to_json(ci, stat));
                if (stat == late::Statistic::Beta) beta_ci = ci;
                std::cout << late::statistic_name(stat) << " " << fmt(args.level * 100)
                          << "% CI           [" << fmt(ci.lo) << ", " << fmt(ci.hi)
                          << "]\n";
            } catch (const late::Error& e) {
                std::cout << late::statistic_name(stat) << " CI unavailable: " << e.what()
                          << "\n";
            }
        }
    }

    int exit_code = kExitOk;
    if (!args.classify.empty()) {
        if (!est.beta_hat) throw late::WeakIV();
        auto classify_at = [&](double beta, const std::string& source) {
            late::BoundaryReport br;
            if (args.classify == "interior") {
                if (args.eta < 0.0)
                    throw late::InconsistentInputs("--eta is required for interior regime");
                br = late::classify_interior(beta, est.k1_hat, est.k2_hat, args.eta);
            } else if (args.classify == "one-sided") {
                if (!est.cell_prob_hat)
                    throw late::NotBinary(
                        "one-sided regime needs 0/1 outcomes; dichotomize first");
                br = late::classify_one_sided(beta, est.k1_hat, est.k2_hat,
                                              *est.cell_prob_hat);
            } else if (args.classify == "general") {
                if (args.eta < 0.0)
                    throw late::InconsistentInputs("--eta is required for general regime");
                br = late::classify_general_bounded(beta, est.k1_hat, est.k2_hat, args.eta,
                                                    args.bound_m);
            } else {
                throw late::InconsistentInputs("unknown regime '" + args.classify + "'");
            }
            std::cout << "--- classification at " << source << " (beta = " << fmt(beta)
                      << ") ---\n";
            print_boundary_report(br, compared_label(br.regime));
            json entry = late::boundary_report_to_json(br);
            entry["source"] = source;
            report["boundary_reports"].push_back(entry);
            if (br.verdict == late::Verdict::DangerSide) exit_code = kExitDanger;
        };
        classify_at(*est.beta_hat, "point");
        if (beta_ci) {
            // Extension beyond point-estimate classification: the CI endpoint
            // with the smaller |beta| gives the worst-case verdict. An
            // interval straddling zero leaves even the sign of beta open, so
            // the worst case degenerates to a zero boundary.
            if (beta_ci->lo <= 0.0 && 0.0 <= beta_ci->hi) {
                std::cout << "--- classification at ci-worst-case ---\n"
                          << "beta interval contains zero: boundary 0, danger-side\n";
                json entry;
                entry["regime"] = args.classify;
                entry["boundary"] = 0.0;
                entry["verdict"] = "danger-side";
                entry["source"] = "ci-worst-case";
                entry["beta_interval_contains_zero"] = true;
                report["boundary_reports"].push_back(entry);
                exit_code = kExitDanger;
            } else {
                const double worst = std::abs(beta_ci->lo) < std::abs(beta_ci->hi)
                                         ? beta_ci->lo
                                         : beta_ci->hi;
                classify_at(worst, "ci-worst-case");
            }
        }
    }

    if (!args.json_path.empty()) emit_json(args.json_path, report);
    return exit_code;
}

// -- boundary ---------------------------------------------------------------

struct BoundaryArgs {
    double beta = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double eta = -1.0;
    double cell_prob = -1.0;
    double bound_m = 1.0;
    std::string regime = "interior";
    std::string json_path;
};

int run_boundary(const BoundaryArgs& args) {
    late::BoundaryReport report;
    if (args.regime == "interior") {
        if (args.eta < 0.0)
            throw late::InconsistentInputs("--eta is required for interior regime");
        report = late::classify_interior(args.beta, args.k1, args.k2, args.eta);
    } else if (args.regime == "one-sided") {
        if (args.cell_prob < 0.0)
            throw late::InconsistentInputs("--cell-prob is required for one-sided regime");
        report = late::classify_one_sided(args.beta, args.k1, args.k2, args.cell_prob);
    } else if (args.regime == "general") {
        if (args.eta < 0.0)
            throw late::InconsistentInputs("--eta is required for general regime");
        report = late::classify_general_bounded(args.beta, args.k1, args.k2, args.eta,
                                                args.bound_m);
    } else {
        throw late::InconsistentInputs("unknown regime '" + args.regime + "'");
    }
    print_boundary_report(report, compared_label(report.regime));

    if (!args.json_path.empty()) {
        std::ostringstream config_text;
        config_text << args.beta << '|' << args.k1 << '|' << args.k2 << '|' << args.eta
                    << '|' << args.cell_prob << '|' << args.bound_m << '|' << args.regime;
        json doc = make_report("boundary", "", config_text.str(), 0);
        doc["boundary_reports"] = json::array({late::boundary_report_to_json(report)});
        emit_json(args.json_path, doc);
    }
    return report.verdict == late::Verdict::DangerSide ? kExitDanger : kExitOk;
}

// -- forge ------------------------------------------------------------------

struct ForgeArgs {
    std::string dgp_path;
    std::string mode = "continuous";
    double eta = 0.0;
    double eps1 = 0.2;
    double eps2 = 0.1;
    double delta_rule = 0.5;
    double bound_m = -1.0;
    double floor = 0.05;
    std::string out_path;
    std::string json_path;
};

int run_forge(const ForgeArgs& args) {
    const late::Dgp dgp = late::load_dgp_file(args.dgp_path);
    std::ostringstream config_text;
    config_text << args.dgp_path << '|' << args.mode << '|' << args.eta << '|' << args.eps1
                << '|' << args.eps2 << '|' << args.delta_rule << '|' << args.bound_m << '|'
                << args.floor;
    json report = make_report("forge", args.dgp_path, config_text.str(), 0);

    if (args.mode == "continuous") {
        if (!std::holds_alternative<late::Theta>(dgp))
            throw late::InconsistentInputs("continuous forge needs a kind=continuous DGP");
        const late::Theta& theta = std::get<late::Theta>(dgp);
        late::ForgeConfig config;
        config.eta = args.eta;
        config.eps1 = args.eps1;
        config.eps2 = args.eps2;
        config.delta_rule = args.delta_rule;
        config.M = args.bound_m > 0.0 ? args.bound_m : theta.M;
        const late::ForgeResult result = late::forge_continuous(theta, config);
        if (!args.out_path.empty())
            late::save_dgp_file(args.out_path, late::Dgp(result.twin));
        std::cout << "forged twin with defier share " << fmt(result.c_tilde) << "\n"
                  << "mu1(base) = beta = " << fmt(result.beta_base) << "\n"
                  << "mu1(twin) = " << fmt(result.mu1_twin)
                  << ", mu2(twin) = " << fmt(result.mu2_twin) << "\n"
                  << "equivalence distance = " << result.equivalence_distance << "\n"
                  << "membership all-clauses = "
                  << (result.membership.all() ? "true" : "false") << "\n";
        report["forge"] = late::forge_result_to_json(result);
    } else if (args.mode == "binary-interior" || args.mode == "binary-onesided") {
        if (!std::holds_alternative<late::BinaryTheta>(dgp))
            throw late::InconsistentInputs("binary forge needs a kind=binary DGP");
        const late::BinaryTheta& theta = std::get<late::BinaryTheta>(dgp);
        const late::BinaryForgeResult result =
            args.mode == "binary-interior"
                ? late::forge_binary_interior(theta, args.eta, args.floor)
                : late::forge_binary_onesided(theta, args.floor);
        if (!args.out_path.empty())
            late::save_dgp_file(args.out_path, late::Dgp(result.twin));
        std::cout << "forged twin with defier share " << fmt(result.c_tilde) << "\n"
                  << "mu1(base) = beta = " << fmt(result.beta_base) << "\n"
                  << "mu1(twin) = " << fmt(result.mu1_twin)
                  << ", mu2(twin) = " << fmt(result.mu2_twin) << "\n"
                  << "equivalence distance = " << result.equivalence_distance << "\n"
                  << "membership all-clauses = "
                  << (result.membership.all() ? "true" : "false") << "\n";
        report["forge"] = late::binary_forge_result_to_json(result);
    } else {
        throw late::InconsistentInputs("unknown forge mode '" + args.mode + "'");
    }

    if (!args.json_path.empty()) emit_json(args.json_path, report);
    return kExitOk;
}

// -- audit ------------------------------------------------------------------

struct AuditArgs {
    std::string base_path;
    std::string twin_path;
    double eta = -1.0;
    double bound_m = -1.0;
    double tol = 1e-12;
    std::string json_path;
};

late::Theta as_theta(const late::Dgp& dgp) {
    if (std::holds_alternative<late::Theta>(dgp)) return std::get<late::Theta>(dgp);
    return std::get<late::BinaryTheta>(dgp).to_theta();
}

int run_audit(const AuditArgs& args) {
    const late::Theta base = as_theta(late::load_dgp_file(args.base_path));
    const late::Theta twin = as_theta(late::load_dgp_file(args.twin_path));
    const double distance = late::verify_equivalence(base, twin);
    std::cout << "equivalence distance = " << distance << "\n";

    std::ostringstream config_text;
    config_text << args.base_path << '|' << args.twin_path << '|' << args.eta << '|'
                << args.bound_m << '|' << args.tol;
    json report = make_report("audit", args.base_path, config_text.str(), 0);
    report["equivalence_distance"] = distance;
    report["tolerance"] = args.tol;
    report["equivalent"] = distance <= args.tol;

    if (args.eta >= 0.0) {
        late::ForgeConfig config;
        config.eta = args.eta;
        config.M = args.bound_m > 0.0 ? args.bound_m : base.M;
        const double beta = late::iv_beta(base);
        const late::MembershipFlags flags = late::verify_membership(
            twin, config, beta, base.a + base.b, base.a + base.c);
        std::cout << "membership all-clauses = " << (flags.all() ? "true" : "false")
                  << "\n";
        report["membership"] = late::membership_to_json(flags);
    }
    if (!args.json_path.empty()) emit_json(args.json_path, report);
    return distance <= args.tol ? kExitOk : kExitDanger;
}

// -- simulate ---------------------------------------------------------------

late::Theta resolve_dgp(const json& value, const char* field) {
    if (value.is_string()) {
        const std::string text = value.get<std::string>();
        if (text == "builtin:binary-pair-base" || text == "builtin:binary-pair-twin") {
            const late::BinaryTheta base = late::BinaryTheta::make(
                0.3, 0.2, 0.0, 0.5, 0.5, 0.495, 0.0, 0.0, 0.0, 0.505, 0.0, 0.4);
            if (text == "builtin:binary-pair-base") return base.to_theta();
            return late::forge_binary_interior(base, 0.05).twin.to_theta();
        }
        return as_theta(late::load_dgp_file(text));
    }
    if (value.is_object()) return as_theta(late::dgp_from_json(value));
    throw late::ParseError(std::string("field '") + field +
                           "' must be a path, builtin name, or inline DGP object");
}

int run_simulate(const std::string& config_path, const std::string& json_path) {
    std::ifstream in(config_path);
    if (!in) throw late::ParseError("cannot open '" + config_path + "'");
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        throw late::ParseError(config_path + ": " + e.what());
    }
    if (config.value("schema", "") != late::kSimSchema)
        throw late::ParseError("expected schema '" + std::string(late::kSimSchema) + "'");
    const std::string mode = config.value("mode", "twin-experiment");

    json report = make_report("simulate", config_path, late::canonical_dump(config),
                              config.value("seed", 1ULL));
    report["mode"] = mode;

    if (mode == "twin-experiment" || mode == "twin-calibration") {
        if (!config.contains("base")) throw late::ParseError("missing field 'base'");
        const late::Theta base = resolve_dgp(config["base"], "base");
        const late::Theta twin = config.contains("twin")
                                     ? resolve_dgp(config["twin"], "twin")
                                     : resolve_dgp(json("builtin:binary-pair-twin"), "twin");
        late::ExperimentConfig experiment;
        experiment.n = config.value("n", 5000ULL);
        experiment.replications = config.value("replications", 400ULL);
        experiment.seed = config.value("seed", 1ULL);
        experiment.alpha = config.value("alpha", 0.05);
        experiment.procedure = config.value("procedure", "plug-in-sign");
        if (mode == "twin-experiment") {
            const late::TwinExperimentReport result =
                late::run_twin_experiment(base, twin, experiment);
            std::cout << "procedure " << experiment.procedure << ": coverage(base) = "
                      << fmt(result.base.coverage())
                      << ", coverage(twin) = " << fmt(result.twin.coverage())
                      << ", equality test " << (result.reject_1pct ? "REJECTS" : "holds")
                      << " at 1%, ledger " << (result.ledger_ok ? "ok" : "VIOLATED")
                      << "\n";
            report["experiment"] = late::twin_experiment_to_json(result);
        } else {
            const std::size_t num_seeds = config.value("num_seeds", 50ULL);
            const late::TwinCalibrationReport result =
                late::run_twin_calibration(base, twin, experiment, num_seeds);
            std::cout << "procedure " << experiment.procedure << ": " << result.rejects
                      << " of " << num_seeds << " seeds reject equality at 1%, ledgers "
                      << (result.all_ledgers_ok ? "ok" : "VIOLATED") << "\n";
            json runs = json::array();
            for (const auto& run : result.runs)
                runs.push_back(late::twin_experiment_to_json(run));
            report["calibration"]["rejects"] = result.rejects;
            report["calibration"]["num_seeds"] = num_seeds;
            report["calibration"]["all_ledgers_ok"] = result.all_ledgers_ok;
            report["calibration"]["runs"] = runs;
        }
    } else if (mode == "consistency") {
        if (!config.contains("theta")) throw late::ParseError("missing field 'theta'");
        const late::Theta theta = resolve_dgp(config["theta"], "theta");
        std::vector<std::size_t> sizes;
        for (const json& s : config.value("sizes", json::array()))
            sizes.push_back(s.get<std::size_t>());
        const late::ConsistencyReport result = late::run_consistency_sweep(
            theta, sizes, config.value("seeds", 50ULL), config.value("seed", 1ULL));
        for (const auto& row : result.rows) {
            std::cout << "n=" << row.n << "  mae(beta)=" << fmt(row.mae_beta)
                      << "  mae(k1)=" << fmt(row.mae_k1) << "  mae(k2)=" << fmt(row.mae_k2)
                      << "  mae(gamma)=" << fmt(row.mae_gamma)
                      << "  weak-iv=" << row.weak_iv << "\n";
        }
        std::cout << "monotone decay: " << (result.monotone_decay ? "yes" : "no") << "\n";
        report["consistency"] = late::consistency_to_json(result);
    } else {
        throw late::ParseError("unknown mode '" + mode + "'");
    }

    if (!json_path.empty()) emit_json(json_path, report);
    return kExitOk;
}

// -- dichotomize --------------------------------------------------------------

struct DichotomizeArgs {
    std::string input;
    double threshold = 0.0;
    std::string out_path;
    late::CsvOptions csv;
};

int run_dichotomize(const DichotomizeArgs& args) {
    const late::SampleData data = read_input_csv(args.input, args.csv);
    const late::SampleData cut = late::dichotomize(data, args.threshold);
    if (args.out_path.empty() || args.out_path == "-") {
        late::write_csv(std::cout, cut, args.csv);
    } else {
        std::ofstream out(args.out_path);
        if (!out) throw late::ParseError("cannot write '" + args.out_path + "'");
        late::write_csv(out, cut, args.csv);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LATE sign-sensitivity toolkit"};
    app.set_version_flag("--version", std::string("late ") + late::kToolVersion);
    app.require_subcommand(1);

    EstimateArgs est_args;
    CLI::App* est = app.add_subcommand("estimate", "Plug-in estimates from a CSV of (y,d,z)");
    est->add_option("input", est_args.input, "CSV path or - for stdin")->required();
    est->add_option("--y-col", est_args.csv.y_col, "outcome column name");
    est->add_option("--d-col", est_args.csv.d_col, "treatment column name");
    est->add_option("--z-col", est_args.csv.z_col, "instrument column name");
    est->add_option("--bootstrap", est_args.bootstrap_reps, "bootstrap replications (0 = off)");
    est->add_option("--level", est_args.level, "bootstrap confidence level");
    est->add_option("--seed", est_args.seed, "bootstrap seed (default env LATE_SEED or 1)")
        ->each([&est_args](const std::string&) { est_args.seed_set = true; });
    est->add_option("--classify", est_args.classify,
                    "also classify the boundary: interior | one-sided | general");
    est->add_option("--eta", est_args.eta, "defier tolerance for interior/general regimes");
    est->add_option("--M", est_args.bound_m, "outcome bound for the general regime");
    est->add_option("--json", est_args.json_path, "write machine report (path or -)");

    BoundaryArgs bd_args;
    CLI::App* bd = app.add_subcommand("boundary", "Phase-transition boundary from (beta,k1,k2)");
    bd->add_option("--beta", bd_args.beta)->required();
    bd->add_option("--k1", bd_args.k1)->required();
    bd->add_option("--k2", bd_args.k2)->required();
    bd->add_option("--eta", bd_args.eta, "defier tolerance");
    bd->add_option("--cell-prob", bd_args.cell_prob, "P(Y=1,D=1|Z=0)");
    bd->add_option("--M", bd_args.bound_m, "outcome bound (general regime)");
    bd->add_option("--regime", bd_args.regime, "interior | one-sided | general");
    bd->add_option("--json", bd_args.json_path, "write machine report (path or -)");

    ForgeArgs fg_args;
    CLI::App* fg = app.add_subcommand("forge", "Construct an observationally equivalent sign-flipped twin");
    fg->add_option("dgp", fg_args.dgp_path, "base DGP document")->required();
    fg->add_option("--mode", fg_args.mode, "continuous | binary-interior | binary-onesided");
    fg->add_option("--eta", fg_args.eta, "defier tolerance granted to the twin");
    fg->add_option("--eps1", fg_args.eps1, "quantile level of the overlap class");
    fg->add_option("--eps2", fg_args.eps2, "quantile gap of the overlap class");
    fg->add_option("--delta-rule", fg_args.delta_rule, "fraction of the admissible delta interval");
    fg->add_option("--M", fg_args.bound_m, "outcome bound (default: the DGP's M)");
    fg->add_option("--floor", fg_args.floor, "observable-cell floor (binary modes)");
    fg->add_option("--out", fg_args.out_path, "write the twin DGP document here");
    fg->add_option("--json", fg_args.json_path, "write certificate report (path or -)");

    AuditArgs au_args;
    CLI::App* au = app.add_subcommand("audit", "Verify observational equivalence of two DGPs");
    au->add_option("base", au_args.base_path)->required();
    au->add_option("twin", au_args.twin_path)->required();
    au->add_option("--eta", au_args.eta, "also check membership clauses at this eta");
    au->add_option("--M", au_args.bound_m, "outcome bound for membership checks");
    au->add_option("--tol", au_args.tol, "equivalence tolerance");
    au->add_option("--json", au_args.json_path, "write machine report (path or -)");

    std::string sim_config;
    std::string sim_json;
    CLI::App* sim = app.add_subcommand("simulate", "Run a simulation config");
    sim->add_option("config", sim_config, "JSON config")->required();
    sim->add_option("--json", sim_json, "write machine report (path or -)");

    DichotomizeArgs di_args;
    CLI::App* di = app.add_subcommand("dichotomize", "Replace y with 1{y >= threshold}");
    di->add_option("input", di_args.input, "CSV path or - for stdin")->required();
    di->add_option("--threshold", di_args.threshold)->required();
    di->add_option("--out", di_args.out_path, "output CSV (default stdout)");
    di->add_option("--y-col", di_args.csv.y_col);
    di->add_option("--d-col", di_args.csv.d_col);
    di->add_option("--z-col", di_args.csv.z_col);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitError;
    }

    try {
        if (*est) return run_estimate(est_args);
        if (*bd) return run_boundary(bd_args);
        if (*fg) return run_forge(fg_args);
        if (*au) return run_audit(au_args);
        if (*sim) return run_simulate(sim_config, sim_json);
        if (*di) return run_dichotomize(di_args);
    } catch (const late::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
