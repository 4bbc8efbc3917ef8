// Command-line front end: analytic sweeps, Monte Carlo comparison, invariant
// validation, and the effective harvesting range.
//
// Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ehcr/analysis.hpp"
#include "ehcr/commands.hpp"
#include "ehcr/config_io.hpp"
#include "ehcr/report.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_usage = 2;

struct Options {
    std::string config_path;
    std::string tau_grid{ehcr::config_io::default_tau_grid};
    std::optional<double> tau;
    std::optional<int> antennas;
    std::optional<bool> ideal;
    std::optional<double> rate;
    std::uint64_t placements = 2000;
    std::uint64_t slots = 2000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool strict_harvest_cap = false;
    std::string out_path;
    std::string format = "csv";
    double omega_fault = 1.0;
};

void add_config_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "key=value config file (defaults apply to missing keys)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--L", o.antennas, "beacon antenna count (overrides config)")->check(CLI::PositiveNumber);
    cmd->add_flag_callback("--ideal", [&o] { o.ideal = true; }, "ideal harvesting hardware");
    cmd->add_flag_callback("--non-ideal", [&o] { o.ideal = false; }, "apply rho and P_c overheads");
    cmd->add_option("--rate", o.rate, "target rate R in bps/Hz (overrides config)")->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--tau-grid", o.tau_grid, "switching times as a:b:step, a comma list, or one value")
        ->capture_default_str();
    cmd->add_option("--out", o.out_path, "write output to PATH instead of stdout");
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

ehcr::SystemConfig build_config(const Options& o) {
    ehcr::SystemConfig cfg = o.config_path.empty() ? ehcr::SystemConfig::defaults()
                                                   : ehcr::config_io::load_config(o.config_path);
    if (o.antennas) cfg = ehcr::config_io::with_antennas(cfg, *o.antennas);
    if (o.ideal) cfg.ideal = *o.ideal;
    if (o.rate) cfg.R = *o.rate;
    if (o.tau) cfg.tau = *o.tau;
    cfg.validate();
    return cfg;
}

void emit(const Options& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) throw ehcr::ConfigError("cannot write '" + o.out_path + "'");
    file << text;
}

std::string render(const Options& o, const ehcr::RunReport& r) {
    if (o.format == "json") return ehcr::report::to_json(r).dump(2) + "\n";
    return ehcr::report::to_csv(r);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-harvesting interweave cognitive-radio link metrics"};
    app.require_subcommand(1);
    Options o;

    auto* analyze = app.add_subcommand("analyze", "closed-form metrics over a tau grid (CSV/JSON)");
    add_config_options(analyze, o);
    add_output_options(analyze, o);

    auto* simulate = app.add_subcommand("simulate", "closed-form metrics plus Monte Carlo estimates");
    add_config_options(simulate, o);
    add_output_options(simulate, o);
    simulate->add_option("--placements", o.placements, "Monte Carlo placements")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--slots", o.slots, "slots per placement")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--seed", o.seed, "base random seed")->capture_default_str();
    simulate->add_option("--threads", o.threads, "worker threads (0 = hardware concurrency)");
    simulate->add_flag("--strict-harvest-cap", o.strict_harvest_cap, "also cap each slot's harvest at tau T M_eff");

    auto* validate = app.add_subcommand("validate", "run every invariant suite; exit 0 iff all pass");
    add_config_options(validate, o);
    validate->add_option("--out", o.out_path, "write the report to PATH");
    validate->add_option("--format", o.format, "report format (csv prints verdict lines)")
        ->check(CLI::IsMember({"csv", "json"}));
    validate->add_option("--seed", o.seed, "seed for the stochastic suites");
    validate->add_option("--omega-fault", o.omega_fault, "")->group("");  // fault-injection hook

    auto* range = app.add_subcommand("range", "print the effective harvesting range d* in meters");
    add_config_options(range, o);
    range->add_option("--tau", o.tau, "switching time (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        const ehcr::SystemConfig cfg = build_config(o);
        if (*range) {
            std::printf("%.17g\n", ehcr::analysis::effective_range(cfg));
            return exit_ok;
        }
        if (*validate) {
            ehcr::validation::ValidationOptions vo;
            vo.omega_fault_factor = o.omega_fault;
            if (o.seed != 1) vo.seed = o.seed;
            const ehcr::RunReport r = ehcr::commands::validate(cfg, vo);
            if (o.format == "json") {
                emit(o, render(o, r));
            } else {
                std::string lines;
                for (const auto& v : r.validation) {
                    lines += (v.pass ? "PASS " : "FAIL ") + v.suite + ": " + v.detail + "\n";
                }
                emit(o, lines);
            }
            return ehcr::commands::all_passed(r) ? exit_ok : exit_validation;
        }
        const auto grid = ehcr::config_io::parse_tau_grid(o.tau_grid);
        if (*analyze) {
            emit(o, render(o, ehcr::commands::analyze(cfg, grid)));
            return exit_ok;
        }
        ehcr::commands::SimulateOptions so;
        so.n_placements = o.placements;
        so.n_slots = o.slots;
        so.seed = o.seed;
        so.sim.threads = o.threads;
        so.sim.strict_harvest_cap = o.strict_harvest_cap;
        emit(o, render(o, ehcr::commands::simulate(cfg, grid, so)));
        return exit_ok;
    } catch (const ehcr::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ehcr::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    }
}
