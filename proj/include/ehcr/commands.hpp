#ifndef EHCR_COMMANDS_HPP
#define EHCR_COMMANDS_HPP

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "ehcr/analysis.hpp"
#include "ehcr/config.hpp"
#include "ehcr/report.hpp"
#include "ehcr/sim.hpp"
#include "ehcr/validation.hpp"

namespace ehcr::commands {

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Analytic sweep; rows follow the (ascending) grid order.
inline RunReport analyze(const SystemConfig& cfg, std::span<const double> tau_grid) {
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    RunReport r;
    r.config = cfg;
    const auto points = analysis::sweep(cfg, tau_grid);
    for (std::size_t i = 0; i < points.size(); ++i) {
        r.rows.push_back({tau_grid[i], points[i], std::nullopt});
    }
    r.wall_seconds = detail::seconds_since(start);
    return r;
}

struct SimulateOptions {
    std::uint64_t n_placements = 2000;
    std::uint64_t n_slots = 2000;
    std::uint64_t seed = 1;
    SimOptions sim;
};

/// Analytic sweep plus one Monte Carlo estimate per tau. Every tau point uses
/// the same seed, so each row is reproducible on its own.
inline RunReport simulate(const SystemConfig& cfg, std::span<const double> tau_grid, const SimulateOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    RunReport r = analyze(cfg, tau_grid);
    for (auto& row : r.rows) {
        row.sim = sim::run(analysis::with_tau(cfg, row.tau), opt.n_placements, opt.n_slots, opt.seed, opt.sim);
    }
    r.wall_seconds = detail::seconds_since(start);
    return r;
}

inline RunReport validate(const SystemConfig& cfg, const validation::ValidationOptions& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    RunReport r;
    r.config = cfg;
    r.validation = validation::run_all(cfg, opt);
    r.wall_seconds = detail::seconds_since(start);
    return r;
}

inline bool all_passed(const RunReport& r) {
    return std::all_of(r.validation.begin(), r.validation.end(), [](const Verdict& v) { return v.pass; });
}

}  // namespace ehcr::commands

#endif  // EHCR_COMMANDS_HPP
