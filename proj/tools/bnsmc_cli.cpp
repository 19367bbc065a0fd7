// Command line front end for the bnsmc shared library. Subcommands:
//   validate          check the parameter-validity conditions, print margins
//   simulate          run one Monte Carlo experiment, emit CSV/JSON
//   price             price European / Asian calls at a strike, emit JSON
//   reproduce-tables  run the full benchmark grids for both algorithms
//   oracle-check      closed forms vs independent quadrature
//
// Exit codes: 0 success, 1 usage/parse error, 2 parameter validation failure,
// 3 engine/runtime failure, 4 oracle disagreement.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bnsmc.h"

namespace {

using ordered_json = nlohmann::ordered_json;

// INI sections become dotted key prefixes ("[model] s0" -> "model.s0"), which
// the dotted option aliases below pick up.
class SectionedConfig : public CLI::ConfigBase {
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::vector<CLI::ConfigItem> items = CLI::ConfigBase::from_config(input);
        std::vector<CLI::ConfigItem> out;
        for (CLI::ConfigItem& item : items) {
            if (item.name == "++" || item.name == "--") continue;  // section markers
            for (auto it = item.parents.rbegin(); it != item.parents.rend(); ++it) {
                item.name = *it + "." + item.name;
            }
            item.parents.clear();
            out.push_back(std::move(item));
        }
        return out;
    }
};

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitOracle = 4;

struct CliOptions {
    bnsmc_params params{468.40, 0.0041, 2.4958, 0.0872, 11.98, -4.7039, 0.1, 1.0};
    std::string algo = "algo2";
    std::uint64_t steps = 100;
    std::uint64_t paths = 100000;
    std::uint64_t seed = 20240921;
    int workers = 0;
    std::string out;
    std::string format = "csv";
};

struct ModelHandle {
    bnsmc_model* ptr = nullptr;
    ~ModelHandle() { bnsmc_model_free(ptr); }
};

const char* estimand_label(int estimand) {
    switch (estimand) {
        case BNSMC_ESTIMAND_TERMINAL_MEAN: return "terminal_mean";
        case BNSMC_ESTIMAND_ASIAN_MEAN: return "asian_mean";
        case BNSMC_ESTIMAND_EURO_CALL: return "euro_call";
        case BNSMC_ESTIMAND_ASIAN_CALL: return "asian_call";
    }
    return "unknown";
}

std::string fmt(double value, const char* spec = "%.9g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, value);
    return buf;
}

int algo_code(const std::string& algo) {
    if (algo == "algo1" || algo == "1") return BNSMC_ALGO_WEIGHTED;
    if (algo == "algo2" || algo == "2") return BNSMC_ALGO_DIRECT;
    return -1;
}

int exit_for_status(bnsmc_status status) {
    switch (status) {
        case BNSMC_OK: return kExitOk;
        case BNSMC_ERROR_BAD_ARGUMENT: return kExitUsage;
        case BNSMC_ERROR_CONDITION1_VIOLATED:
        case BNSMC_ERROR_CONDITION2_VIOLATED: return kExitValidation;
        default: return kExitRuntime;
    }
}

int report_failure(bnsmc_status status, const std::string& context) {
    std::cerr << "error: " << context << ": " << bnsmc_status_name(status) << ": "
              << bnsmc_last_error() << "\n";
    return exit_for_status(status);
}

int create_model(const CliOptions& opts, ModelHandle& handle) {
    const bnsmc_status status = bnsmc_model_create(&opts.params, &handle.ptr);
    if (status != BNSMC_OK) return report_failure(status, "model validation");
    return kExitOk;
}

// --- output ----------------------------------------------------------------

constexpr const char* kCsvHeader =
    "alpha,M,L,error_terminal_pct,error_asian_pct,stderr_terminal,stderr_asian,time_sec,seed";

// stderr columns are expressed in the same percent-of-S0 units as the errors
std::string csv_row(const CliOptions& opts, const bnsmc_estimate* terminal,
                    const bnsmc_estimate* asian, double time_sec) {
    const double nan = std::nan("");
    const double s0 = opts.params.s0;
    const double err_t = terminal ? terminal->error_percent : nan;
    const double err_a = asian ? asian->error_percent : nan;
    const double se_t = terminal ? terminal->std_error / s0 * 100.0 : nan;
    const double se_a = asian ? asian->std_error / s0 * 100.0 : nan;
    std::string row;
    row += fmt(opts.params.alpha, "%.9g");
    row += "," + std::to_string(opts.steps);
    row += "," + std::to_string(opts.paths);
    row += "," + fmt(err_t);
    row += "," + fmt(err_a);
    row += "," + fmt(se_t);
    row += "," + fmt(se_a);
    row += "," + fmt(time_sec, "%.6f");
    row += "," + std::to_string(opts.seed);
    return row;
}

ordered_json estimate_json(const bnsmc_estimate& e) {
    ordered_json j;
    j["estimand"] = estimand_label(e.estimand);
    j["algorithm"] = e.algorithm == BNSMC_ALGO_WEIGHTED ? "algo1" : "algo2";
    j["point"] = e.point;
    j["std_error"] = e.std_error;
    if (std::isnan(e.error_percent)) {
        j["error_percent"] = nullptr;
    } else {
        j["error_percent"] = e.error_percent;
    }
    if (std::isnan(e.strike)) {
        j["strike"] = nullptr;
    } else {
        j["strike"] = e.strike;
    }
    j["wall_time_sec"] = e.wall_time_sec;
    j["alpha"] = e.alpha;
    j["M"] = e.steps;
    j["L"] = e.paths;
    j["seed"] = e.seed;
    return j;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file " << path << "\n";
        return false;
    }
    out << content;
    return out.good();
}

// --- subcommands -------------------------------------------------------------

int cmd_validate(const CliOptions& opts) {
    bnsmc_assumption_report report{};
    const bnsmc_status status = bnsmc_assumption_check(&opts.params, &report);
    if (status != BNSMC_OK) return report_failure(status, "assumption check");
    std::cout << "condition 1: b^2/2 = " << fmt(report.condition1_lhs)
              << "  vs  2*max((1-e^{-lambda*T})/lambda, |rho|) = " << fmt(report.condition1_rhs)
              << "  [" << (report.condition1_ok ? "OK" : "VIOLATED") << ", margin "
              << fmt(report.condition1_margin) << "]\n";
    std::cout << "condition 2: alpha/(e^{-lambda*T}*sigma0_sq + C2) = "
              << fmt(report.condition2_ratio) << "  vs  bound " << fmt(report.condition2_bound)
              << "  [" << (report.condition2_ok ? "OK" : "VIOLATED") << ", margin "
              << fmt(report.condition2_margin) << "]\n";
    if (!report.condition1_ok || !report.condition2_ok) {
        std::cout << "parameters invalid (condition " << (report.condition1_ok ? 2 : 1) << ")\n";
        return kExitValidation;
    }
    std::cout << "parameters valid\n";
    return kExitOk;
}

int run_and_collect(const CliOptions& opts, const bnsmc_model* model,
                    const std::vector<bnsmc_request>& requests,
                    std::vector<bnsmc_estimate>& estimates, bnsmc_run_stats& stats) {
    bnsmc_run_config config{};
    config.algorithm = algo_code(opts.algo);
    if (config.algorithm < 0) {
        std::cerr << "error: --algo must be algo1 or algo2\n";
        return kExitUsage;
    }
    config.steps = opts.steps;
    config.paths = opts.paths;
    config.seed = opts.seed;
    config.workers = opts.workers;
    estimates.resize(requests.size());
    const bnsmc_status status =
        bnsmc_run(model, &config, requests.data(), requests.size(), estimates.data(), &stats);
    if (status != BNSMC_OK) return report_failure(status, "simulation");
    return kExitOk;
}

int cmd_simulate(const CliOptions& opts, const std::vector<std::string>& estimands) {
    ModelHandle model;
    if (int rc = create_model(opts, model); rc != kExitOk) return rc;

    std::vector<bnsmc_request> requests;
    for (const std::string& name : estimands) {
        if (name == "terminal_mean") {
            requests.push_back({BNSMC_ESTIMAND_TERMINAL_MEAN, std::nan("")});
        } else if (name == "asian_mean") {
            requests.push_back({BNSMC_ESTIMAND_ASIAN_MEAN, std::nan("")});
        } else {
            std::cerr << "error: unknown estimand '" << name
                      << "' (simulate supports terminal_mean, asian_mean)\n";
            return kExitUsage;
        }
    }

    std::vector<bnsmc_estimate> estimates;
    bnsmc_run_stats stats{};
    if (int rc = run_and_collect(opts, model.ptr, requests, estimates, stats); rc != kExitOk)
        return rc;

    const bnsmc_estimate* terminal = nullptr;
    const bnsmc_estimate* asian = nullptr;
    for (const auto& e : estimates) {
        if (e.estimand == BNSMC_ESTIMAND_TERMINAL_MEAN) terminal = &e;
        if (e.estimand == BNSMC_ESTIMAND_ASIAN_MEAN) asian = &e;
    }

    std::cout << kCsvHeader << "\n" << csv_row(opts, terminal, asian, stats.wall_time_sec) << "\n";
    if (stats.ar_proposals > 0) {
        const std::uint64_t accepted = stats.jumps1 + stats.jumps3;
        std::cout << "# correction jumps: " << stats.jumps1 << " (m=1) + " << stats.jumps3
                  << " (m=3); A/R proposals: " << stats.ar_proposals << " (overall acceptance "
                  << fmt(static_cast<double>(accepted) / static_cast<double>(stats.ar_proposals),
                         "%.4f")
                  << ")\n";
    }

    if (!opts.out.empty()) {
        std::string content;
        if (opts.format == "csv") {
            content = std::string(kCsvHeader) + "\n" +
                      csv_row(opts, terminal, asian, stats.wall_time_sec) + "\n";
        } else if (opts.format == "json") {
            ordered_json j = ordered_json::array();
            for (const auto& e : estimates) j.push_back(estimate_json(e));
            content = j.dump(2) + "\n";
        } else {
            std::cerr << "error: --format must be csv or json\n";
            return kExitUsage;
        }
        if (!write_file(opts.out, content)) return kExitRuntime;
    }
    return kExitOk;
}

int cmd_price(const CliOptions& opts, double strike, const std::string& payoff) {
    ModelHandle model;
    if (int rc = create_model(opts, model); rc != kExitOk) return rc;

    std::vector<bnsmc_request> requests;
    if (payoff == "euro_call" || payoff == "both") {
        requests.push_back({BNSMC_ESTIMAND_EURO_CALL, strike});
    }
    if (payoff == "asian_call" || payoff == "both") {
        requests.push_back({BNSMC_ESTIMAND_ASIAN_CALL, strike});
    }
    if (requests.empty()) {
        std::cerr << "error: --payoff must be euro_call, asian_call, or both\n";
        return kExitUsage;
    }

    std::vector<bnsmc_estimate> estimates;
    bnsmc_run_stats stats{};
    if (int rc = run_and_collect(opts, model.ptr, requests, estimates, stats); rc != kExitOk)
        return rc;

    ordered_json j = ordered_json::array();
    for (const auto& e : estimates) j.push_back(estimate_json(e));
    const std::string content = j.dump(2) + "\n";
    std::cout << content;
    if (!opts.out.empty() && !write_file(opts.out, content)) return kExitRuntime;
    return kExitOk;
}

struct TableRowSpec {
    double alpha;
    std::uint64_t steps;
    std::uint64_t paths;
};

int cmd_reproduce_tables(CliOptions opts, std::uint64_t scale, const std::string& out_dir) {
    static const std::vector<TableRowSpec> kTable1 = {
        {0.01, 100, 100000}, {0.05, 100, 100000}, {0.1, 100, 100000},
        {0.1, 500, 100000},  {1.0, 10000, 10000},
    };
    static const std::vector<TableRowSpec> kTable2 = {
        {0.1, 100, 100000}, {1.0, 100, 100000},  {5.0, 100, 100000},    {5.0, 500, 100000},
        {10.0, 100, 100000}, {10.0, 500, 100000}, {10.0, 1000, 100000}, {100.0, 20000, 10000},
    };

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    int worst_rc = kExitOk;
    for (int table = 1; table <= 2; ++table) {
        const auto& rows = table == 1 ? kTable1 : kTable2;
        opts.algo = table == 1 ? "algo1" : "algo2";
        std::string csv = std::string(kCsvHeader) + "\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            opts.params.alpha = rows[i].alpha;
            opts.steps = rows[i].steps;
            opts.paths = std::max<std::uint64_t>(2, rows[i].paths / std::max<std::uint64_t>(1, scale));

            ModelHandle model;
            std::vector<bnsmc_estimate> estimates;
            bnsmc_run_stats stats{};
            int rc = create_model(opts, model);
            if (rc == kExitOk) {
                const std::vector<bnsmc_request> requests = {
                    {BNSMC_ESTIMAND_TERMINAL_MEAN, std::nan("")},
                    {BNSMC_ESTIMAND_ASIAN_MEAN, std::nan("")},
                };
                rc = run_and_collect(opts, model.ptr, requests, estimates, stats);
            }
            const bool diverges = table == 1 && rows[i].alpha >= 1.0;
            if (rc == kExitOk) {
                csv += csv_row(opts, &estimates[0], &estimates[1], stats.wall_time_sec) + "\n";
                std::cout << "table" << table << " row " << (i + 1) << "/" << rows.size()
                          << ": alpha=" << fmt(rows[i].alpha, "%g") << " M=" << opts.steps
                          << " L=" << opts.paths << " error_terminal=" << fmt(estimates[0].error_percent)
                          << "% error_asian=" << fmt(estimates[1].error_percent) << "% ("
                          << fmt(stats.wall_time_sec, "%.2f") << "s)"
                          << (diverges ? " EXPECTED_DIVERGENCE" : "") << "\n";
            } else {
                // record the failed row and keep going
                csv += csv_row(opts, nullptr, nullptr, 0.0) + "\n";
                std::cout << "table" << table << " row " << (i + 1) << "/" << rows.size()
                          << ": alpha=" << fmt(rows[i].alpha, "%g") << " M=" << opts.steps
                          << " L=" << opts.paths << " FAILED\n";
                worst_rc = std::max(worst_rc, rc);
            }
        }
        const std::string path = out_dir + "/table" + std::to_string(table) + ".csv";
        if (!write_file(path, csv)) return kExitRuntime;
        std::cout << "wrote " << path << "\n";
    }
    return worst_rc;
}

int cmd_oracle_check(const CliOptions& opts, double delta) {
    ModelHandle model;
    if (int rc = create_model(opts, model); rc != kExitOk) return rc;

    std::size_t count = 0;
    bnsmc_status status = bnsmc_oracle_checks(model.ptr, delta, nullptr, 0, &count);
    if (status != BNSMC_OK) return report_failure(status, "oracle checks");
    std::vector<bnsmc_oracle_result> results(count);
    status = bnsmc_oracle_checks(model.ptr, delta, results.data(), results.size(), &count);
    if (status != BNSMC_OK) return report_failure(status, "oracle checks");

    bool all_pass = true;
    std::printf("%-28s %22s %22s %12s %10s %s\n", "quantity", "closed_form", "oracle", "rel_err",
                "tol", "status");
    for (const auto& r : results) {
        std::printf("%-28s %22.15g %22.15g %12.3e %10.1e %s\n", r.name, r.reference, r.value,
                    r.rel_err, r.tolerance, r.pass ? "PASS" : "FAIL");
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "all oracle checks passed" : "oracle disagreement detected") << "\n";
    return all_pass ? kExitOk : kExitOracle;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo engines for the IG-OU stochastic volatility model under its "
                 "minimal-martingale change of measure"};
    app.fallthrough();
    app.set_config("--config", "", "configuration file (INI; sections [model], [run], [output])");
    app.config_formatter(std::make_shared<SectionedConfig>());

    CliOptions opts;
    // model parameters; the dotted aliases serve the [model] config section
    app.add_option("--s0,--model.s0", opts.params.s0, "spot price");
    app.add_option("--sigma0-sq,--model.sigma0_sq", opts.params.sigma0_sq, "initial squared volatility");
    app.add_option("--lambda,--model.lambda", opts.params.lambda, "mean-reversion rate");
    app.add_option("--a,--model.a", opts.params.a, "IG parameter a");
    app.add_option("--b,--model.b", opts.params.b, "IG parameter b");
    app.add_option("--rho,--model.rho", opts.params.rho, "jump leverage (<= 0)");
    app.add_option("--alpha,--model.alpha", opts.params.alpha, "asset drift");
    app.add_option("--horizon,--model.horizon", opts.params.horizon, "maturity in years");
    // run parameters
    app.add_option("--algo,--run.algo", opts.algo, "algo1 (weighted paths) or algo2 (direct)");
    app.add_option("--steps,--run.steps", opts.steps, "time steps M");
    app.add_option("--paths,--run.paths", opts.paths, "Monte Carlo paths L");
    app.add_option("--seed,--run.seed", opts.seed, "master seed; stream id = path index");
    app.add_option("--workers,--run.workers", opts.workers, "worker threads (0 = auto)")
        ->envname("BNSMC_WORKERS");
    app.add_option("--out,--output.out", opts.out, "output file (simulate/price) or directory");
    app.add_option("--format,--output.format", opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* validate = app.add_subcommand("validate", "check parameter validity, print margins");

    auto* simulate = app.add_subcommand("simulate", "run one Monte Carlo experiment");
    std::vector<std::string> estimands = {"terminal_mean", "asian_mean"};
    simulate->add_option("--estimands", estimands, "estimands to compute")->delimiter(',');

    auto* price = app.add_subcommand("price", "price calls at a strike (JSON output)");
    double strike = 0.0;
    std::string payoff = "both";
    price->add_option("--strike", strike, "strike price")->required();
    price->add_option("--payoff", payoff, "euro_call, asian_call, or both");

    auto* reproduce = app.add_subcommand("reproduce-tables", "run the benchmark grids");
    std::uint64_t scale = 1;
    std::string out_dir = ".";
    reproduce->add_option("--scale", scale, "divide every L by this factor");
    reproduce->add_option("--out-dir", out_dir, "directory for table1.csv / table2.csv");

    auto* oracle = app.add_subcommand("oracle-check", "closed forms vs independent quadrature");
    double delta = 0.01;
    oracle->add_option("--delta", delta, "step length used by the delta-dependent checks");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            return app.exit(e);
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(opts);
        if (simulate->parsed()) return cmd_simulate(opts, estimands);
        if (price->parsed()) return cmd_price(opts, strike, payoff);
        if (reproduce->parsed()) return cmd_reproduce_tables(opts, scale, out_dir);
        if (oracle->parsed()) return cmd_oracle_check(opts, delta);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
