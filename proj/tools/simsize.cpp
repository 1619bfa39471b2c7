// simsize: adaptive simulation-based sample size estimation.
//
//   simsize run0d  --scenario unequal-t-test --nsims 2000 --cap-nn 5000 --seed 0 --out r.json
//   simsize run1d  --scenario unequal-t-test --optivar f1 --optiwin 0.2,0.8 --nsims 10000
//   simsize oracle --delta 0.125 --alpha 0.05 --power 0.9

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <ctime>
#include <limits>
#include <type_traits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simsize/driver.hpp"
#include "simsize/oracle.hpp"
#include "simsize/result_doc.hpp"
#include "simsize/scenarios.hpp"
#include "simsize/sims_file.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kOtherError = 1,
    kUsageError = 2,
    kSimulatorError = 3,
    kImpossible = 4,
};

/// Thrown for bad flag values discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<std::int64_t> parse_bound(const std::string& text, const char* flag) {
    if (text == "inf" || text == "Inf" || text == "infinity") return std::nullopt;
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(value) || value != std::floor(value)) {
            throw std::invalid_argument(text);
        }
        return static_cast<std::int64_t>(value);
    } catch (const std::logic_error&) {
        throw UsageError(std::string(flag) + ": expected an integer or 'inf', got '" + text + "'");
    }
}

struct CommonOptions {
    std::string scenario;
    std::vector<std::string> params;
    double tar_power = 0.9;
    std::int64_t nsims = 1000;
    std::string cap_nn = "2000";
    std::string imp_nn = "inf";
    bool keep_initiation = false;
    bool keep_sims = false;
    std::uint64_t seed = 0;
    std::string out;
    std::string sims_out;
    std::string resume;
    std::string diagnostics;
    bool verbose = false;
    unsigned workers = 1;
};

struct DesignOptions {
    std::string optivar;
    std::vector<double> optiwin{0.0, 1.0};
    bool optilog = false;
    bool optiround = false;
    int n_slope_coefs = 2;
    int n_size_coefs = 4;
};

struct OracleOptions {
    double delta = 0.2;
    double alpha = 0.05;
    double power = 0.9;
    double f1 = 0.5;
    int arms = 5;
    std::optional<double> n;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--scenario", o.scenario, "Built-in scenario: unequal-t-test, ranking, probit, constant")
        ->required();
    cmd.add_option("--param", o.params, "Scenario parameter override key=value (repeatable)");
    cmd.add_option("--tar-power", o.tar_power, "Target probability of success")->capture_default_str();
    cmd.add_option("--nsims", o.nsims, "Total number of simulations")->capture_default_str();
    cmd.add_option("--cap-nn", o.cap_nn, "Largest simulated size, or 'inf'")->capture_default_str();
    cmd.add_option("--imp-nn", o.imp_nn, "Size considered infeasible, or 'inf'")->capture_default_str();
    cmd.add_flag("--keep-initiation", o.keep_initiation, "Keep the initiation simulations in late fits");
    cmd.add_flag("--keep-sims", o.keep_sims, "Keep the simulation records (see --sims-out)");
    cmd.add_option("--seed", o.seed, "Master seed")->capture_default_str();
    cmd.add_option("--out", o.out, "Result document path (stdout if omitted)");
    cmd.add_option("--sims-out", o.sims_out, "Simulation records CSV (implies --keep-sims)");
    cmd.add_option("--resume", o.resume, "Continue from a simulation records CSV");
    cmd.add_option("--diagnostics", o.diagnostics, "Directory for per-batch CSV/SVG diagnostics");
    cmd.add_flag("--verbose", o.verbose, "Log every batch on stderr");
    cmd.add_option("--workers", o.workers, "Concurrent simulator calls per batch")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

simsize::SimulatorHandle make_simulator(const CommonOptions& o, simsize::SimulatorArity arity) {
    auto handle = simsize::builtin_scenario(o.scenario, arity);
    if (!handle) {
        std::string names;
        for (const auto& n : simsize::builtin_scenario_names()) names += (names.empty() ? "" : ", ") + n;
        throw UsageError("unknown scenario '" + o.scenario + "' (available: " + names + ")");
    }
    simsize::ParamSet overrides;
    for (const auto& kv : o.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError("--param expects key=value, got '" + kv + "'");
        }
        try {
            overrides.set(kv.substr(0, eq), simsize::parse_param_value(kv.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw UsageError("--param " + kv + ": " + e.what());
        }
    }
    try {
        return handle->with_params(overrides);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void fill_config(const CommonOptions& o, simsize::RunConfig& config) {
    config.target_power = o.tar_power;
    config.nsims = o.nsims;
    config.cap_nn = parse_bound(o.cap_nn, "--cap-nn");
    config.imp_nn = parse_bound(o.imp_nn, "--imp-nn");
    config.keep_initiation = o.keep_initiation;
    config.keep_sims = o.keep_sims || !o.sims_out.empty();
    config.master_seed = o.seed;
    config.verbose = o.verbose;
    config.workers = o.workers;
    if (!o.diagnostics.empty()) config.diagnostics_dir = o.diagnostics;
    if (!o.resume.empty()) config.prior_records = simsize::read_sims(std::filesystem::path(o.resume));
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <typename Config>
int run(const CommonOptions& o, const simsize::SimulatorHandle& simulator, const Config& config,
        simsize::Json config_echo) {
    config_echo["scenario"] = o.scenario;
    simsize::Json params = simsize::Json::object();
    for (const auto& [name, value] : simulator.params().values()) {
        if (const auto* x = std::get_if<double>(&value)) {
            params[name] = *x;
        } else {
            params[name] = std::get<std::vector<double>>(value);
        }
    }
    config_echo["params"] = std::move(params);

    const auto start = std::chrono::steady_clock::now();
    simsize::RunResult result;
    if constexpr (std::is_same_v<Config, simsize::RunConfig1d>) {
        result = simsize::run_1d(simulator, config);
    } else {
        result = simsize::run_0d(simulator, config);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto doc = simsize::make_result_document(result, std::move(config_echo),
                                                   {iso_timestamp(), elapsed, kVersion});
    if (o.out.empty()) {
        std::cout << simsize::serialize(doc);
    } else {
        simsize::write_result_document(o.out, doc);
        std::cout << "size estimate " << doc.size_estimate << " [" << doc.size_confint_lower
                  << ", " << doc.size_confint_higher << "] after " << doc.n_simulations
                  << " simulations\n";
    }
    if (!o.sims_out.empty() && result.sims) {
        simsize::write_sims(std::filesystem::path(o.sims_out), *result.sims);
    }
    return kOk;
}

int run_oracle(const OracleOptions& o) {
    simsize::OracleSpec spec{o.delta, o.alpha, o.power, o.f1};
    spec.validate();
    const double total = simsize::closed_form_total_size(spec);
    std::printf("total size          %.4f\n", total);
    if (o.f1 == 0.5) {
        const double per_group = simsize::closed_form_per_group_size(spec);
        std::printf("per-group size      %.4f\n", per_group);
        std::printf("%d-arm total        %.4f\n", o.arms, per_group * o.arms);
    } else {
        std::printf("arm sizes           %.4f, %.4f\n", total * o.f1, total * (1.0 - o.f1));
    }
    if (o.n) {
        std::printf("power at N=%g     %.6f\n", *o.n, simsize::closed_form_power(*o.n, spec));
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive simulation-based sample size estimation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOptions common0;
    auto* run0d = app.add_subcommand("run0d", "Size for a fixed design");
    add_common(*run0d, common0);

    CommonOptions common1;
    DesignOptions design;
    auto* run1d = app.add_subcommand("run1d", "Size curve along one design parameter");
    add_common(*run1d, common1);
    run1d->add_option("--optivar", design.optivar, "Scenario parameter to explore")->required();
    run1d->add_option("--optiwin", design.optiwin, "Exploration window low,high")
        ->delimiter(',')
        ->expected(2)
        ->capture_default_str();
    run1d->add_flag("--optilog", design.optilog, "Explore the window on the log scale");
    run1d->add_flag("--optiround", design.optiround, "Round design values to integers");
    run1d->add_option("--n-slope-coefs", design.n_slope_coefs, "Polynomial length of the log-slope")
        ->capture_default_str();
    run1d->add_option("--n-size-coefs", design.n_size_coefs, "Polynomial length of sqrt(size)")
        ->capture_default_str();

    OracleOptions oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Closed-form two-arm normal-outcome sizes");
    oracle_cmd->add_option("--delta", oracle.delta, "Effect size in SD units")->capture_default_str();
    oracle_cmd->add_option("--alpha", oracle.alpha, "Two-sided type I error")->capture_default_str();
    oracle_cmd->add_option("--power", oracle.power, "Target power")->capture_default_str();
    oracle_cmd->add_option("--f1", oracle.f1, "Fraction allocated to the first arm")->capture_default_str();
    oracle_cmd->add_option("--arms", oracle.arms, "Arms for the multi-arm total")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    oracle_cmd->add_option("--n", oracle.n, "Also report the power at this total size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*oracle_cmd) return run_oracle(oracle);
        if (*run0d) {
            const auto simulator = make_simulator(common0, simsize::SimulatorArity::SizeOnly);
            simsize::RunConfig config;
            fill_config(common0, config);
            return run(common0, simulator, config, simsize::config_to_json(config));
        }
        const auto simulator = make_simulator(common1, simsize::SimulatorArity::SizeAndDesign);
        simsize::RunConfig1d config;
        fill_config(common1, config);
        config.optivar = design.optivar;
        config.optiwin_low = design.optiwin.at(0);
        config.optiwin_high = design.optiwin.at(1);
        config.optilog = design.optilog;
        config.optiround = design.optiround;
        config.n_slope_coefs = design.n_slope_coefs;
        config.n_size_coefs = design.n_size_coefs;
        return run(common1, simulator, config, simsize::config_to_json(config));
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const simsize::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const simsize::SimulatorArityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const simsize::SimsFileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const simsize::SimulatorFailure& e) {
        std::cerr << "error: simulator produced no outcome at size " << e.size() << " with seed "
                  << e.seed() << " (simulation " << e.sim_index() << "): " << e.what() << '\n';
        return kSimulatorError;
    } catch (const simsize::ImpossibleSizeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kImpossible;
    } catch (const simsize::PersistentSeparationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kImpossible;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOtherError;
    }
}
