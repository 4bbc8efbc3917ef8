// Acceptance checks: one [PASS]/[FAIL] line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ehcr/commands.hpp"
#include "ehcr/config_io.hpp"

#ifndef EHCR_CONFIG_DIR
#define EHCR_CONFIG_DIR "configs"
#endif

using namespace ehcr;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, double seconds, const std::string& detail) {
    std::printf("[%s] %d %s (%.2f s): %s\n", pass ? "PASS" : "FAIL", id, name, seconds, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::vector<SystemConfig> variants() {
    std::vector<SystemConfig> out;
    for (int L : {1, 16}) {
        for (bool ideal : {true, false}) {
            SystemConfig cfg = config_io::with_antennas(SystemConfig::defaults(), L);
            cfg.ideal = ideal;
            out.push_back(cfg);
        }
    }
    return out;
}

const char* variant_name(const SystemConfig& cfg) {
    if (cfg.antennas() == 1) return cfg.ideal ? "L=1 ideal" : "L=1 non-ideal";
    return cfg.ideal ? "L=16 ideal" : "L=16 non-ideal";
}

void distribution_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_mass = 0.0;
    double worst_mean = 0.0;
    double worst_p = 1.0;
    int below = 0;
    int sets = 0;
    for (double K : {0.5, 7.0}) {
        for (int mu : {1, 2, 16}) {
            for (int m = mu; m <= 20; ++m) {
                const FadingParams p(K, mu, m);
                worst_mass = std::max(worst_mass, std::abs(validation::pdf_mass(p) - 1.0));
                worst_mean = std::max(worst_mean, std::abs(fading::mean(p) - 1.0));
                RandomStream gen(20240601, static_cast<std::uint64_t>(sets));
                std::vector<double> draws(100000);
                for (auto& x : draws) x = fading::sample(p, gen);
                const double d = validation::ks_statistic(draws, [&](double x) { return fading::cdf(p, x); });
                const double pv = validation::kolmogorov_pvalue(d, draws.size());
                worst_p = std::min(worst_p, pv);
                if (pv <= 0.01) ++below;
                ++sets;
            }
        }
    }
    const double s = seconds_since(t0);
    report(1, "distribution correctness", worst_mass <= 1e-9 && worst_mean <= 1e-12 && worst_p > 0.01 && s < 30.0, s,
           fmt("%.0f parameter sets; max |mass-1| %.3g, max |mean-1| %.3g, min KS p %.4g", sets, worst_mass,
               worst_mean, worst_p) +
               fmt("; %.0f sets at p <= 0.01 (an exact sampler averages %.2f); Bonferroni-adjusted min p %.3g", below,
                   0.01 * sets, std::min(1.0, worst_p * sets)));
}

void closed_form_vs_quadrature() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const SystemConfig& base : variants()) {
        for (double tau : validation::paper_tau_grid()) {
            const SystemConfig cfg = analysis::with_tau(base, tau);
            worst = std::max(worst, validation::relative_difference(analysis::phi1(cfg), validation::phi1_quadrature(cfg)));
            worst = std::max(worst, validation::relative_difference(analysis::phi2(cfg), validation::phi2_quadrature(cfg)));
        }
    }
    const double s = seconds_since(t0);
    report(2, "closed-form phi vs quadrature", worst <= 1e-7 && s < 10.0, s, fmt("max relative gap %.3g (tol 1e-7)", worst));
}

void effective_range_consistency() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double tau : validation::paper_tau_grid()) {
        const SystemConfig cfg = analysis::with_tau(SystemConfig::defaults(), tau);
        worst = std::max(worst, validation::relative_difference(analysis::effective_range(cfg),
                                                                validation::effective_range_bisection(cfg)));
    }
    const double s = seconds_since(t0);
    report(3, "effective range vs bisection", worst <= 1e-8 && s < 1.0, s, fmt("max relative gap %.3g (tol 1e-8)", worst));
}

void analysis_simulation_agreement() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = validation::paper_tau_grid();
    commands::SimulateOptions opt;
    opt.n_placements = 2000;
    opt.n_slots = 2000;
    opt.seed = 1;
    bool pass = true;
    double worst_excess = -1.0;
    std::string worst_at;
    int misses = 0;
    for (const SystemConfig& cfg : variants()) {
        const RunReport r = commands::simulate(cfg, grid, opt);
        for (const ReportRow& row : r.rows) {
            const double gap = std::abs(row.analytic.p_out - row.sim->p_out_hat);
            const double tol = std::max(2.0 * row.sim->ci99_pout, 0.02);
            if (gap > tol) {
                pass = false;
                ++misses;
            }
            if (gap - tol > worst_excess) {
                worst_excess = gap - tol;
                worst_at = std::string(variant_name(cfg)) +
                           fmt(" tau=%.1f: analytic %.4f, simulated %.4f, tol %.4f", row.tau, row.analytic.p_out,
                               row.sim->p_out_hat, tol);
            }
        }
    }
    const double s = seconds_since(t0);
    pass = pass && s < 120.0;
    report(4, "analysis vs simulation p_out", pass, s,
           fmt("%.0f of %.0f points outside tolerance; worst ", misses, 4.0 * grid.size()) + worst_at);
}

void outage_trends() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = validation::paper_tau_grid();
    const auto v = variants();  // L=1 ideal, L=1 non-ideal, L=16 ideal, L=16 non-ideal
    bool increasing = true;
    bool antennas = true;
    bool hardware = true;
    for (double rate : {1.0, 2.0, 3.0}) {
        std::vector<std::vector<double>> p(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) {
            SystemConfig cfg = v[k];
            cfg.R = rate;
            for (const MetricPoint& mp : analysis::sweep(cfg, grid)) p[k].push_back(mp.p_out);
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (const auto& curve : p) {
                if (i > 0 && !(curve[i] > curve[i - 1])) increasing = false;
            }
            antennas = antennas && p[2][i] <= p[0][i] && p[3][i] <= p[1][i];
            hardware = hardware && p[1][i] >= p[0][i] && p[3][i] >= p[2][i];
        }
    }
    report(5, "outage trends", increasing && antennas && hardware, seconds_since(t0),
           std::string("strictly increasing in tau: ") + (increasing ? "yes" : "no") +
               "; L=16 <= L=1: " + (antennas ? "yes" : "no") + "; non-ideal >= ideal: " + (hardware ? "yes" : "no"));
}

void throughput_trends() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = validation::paper_tau_grid();
    bool pass = true;
    std::string detail;
    for (double rate : {1.0, 2.0, 3.0}) {
        SystemConfig cfg = SystemConfig::defaults();
        cfg.R = rate;
        const auto pts = analysis::sweep(cfg, grid);
        bool ok = true;
        for (std::size_t i = 1; i < pts.size(); ++i) ok = ok && pts[i].throughput > pts[i - 1].throughput;
        pass = pass && ok;
        detail += fmt("R=%.0f %.4f..%.4f", rate, pts.front().throughput, pts.back().throughput) +
                  (ok ? " increasing; " : " NOT increasing; ");
    }
    report(6, "throughput trends", pass, seconds_since(t0), detail);
}

void j_magnitude() {
    const auto t0 = std::chrono::steady_clock::now();
    double j2 = 0.0;
    double j3 = 0.0;
    double raw_extreme = 0.0;  // signed CDF difference before clamping, largest magnitude seen
    for (double tau : validation::paper_tau_grid()) {
        const SystemConfig cfg = analysis::with_tau(SystemConfig::defaults(), tau);
        j2 = std::max(j2, analysis::j_correction(cfg, 2, cfg.d_max));
        j3 = std::max(j3, analysis::j_correction(cfg, 3, cfg.d_max));
        const double x = analysis::full_slot_threshold(cfg) * std::pow(cfg.d_max, cfg.alpha);
        for (int l : {2, 3}) {
            const double raw = fading::cdf(fading::sum_params(cfg.fading_pb_st, l - 1), x) -
                               fading::cdf(fading::sum_params(cfg.fading_pb_st, l), x);
            if (std::abs(raw) > std::abs(raw_extreme)) raw_extreme = raw;
        }
    }
    report(7, "J magnitude", j2 <= 1e-5 && j3 <= 1e-7, seconds_since(t0),
           fmt("max over tau grid J(2,d_max) = %.3g (<= 1e-5), J(3,d_max) = %.3g (<= 1e-7); "
               "unclamped difference of largest magnitude %.3g",
               j2, j3, raw_extreme));
}

void imperfection_constant() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        const SystemConfig cfg = config_io::load_config(EHCR_CONFIG_DIR "/imperfect_1ms.cfg");
        const double mj = cfg.effective_tx_power() * cfg.T * 1e3;
        pass = mj >= 0.118 && mj <= 0.122;
        detail = fmt("M_eff T = %.6f mJ (window [0.118, 0.122])", mj);
    } catch (const std::exception& e) {
        detail = e.what();
    }
    report(8, "imperfection constant", pass, seconds_since(t0), detail);
}

void determinism() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> grid{0.1, 0.5, 0.9};
    commands::SimulateOptions opt;
    opt.n_placements = 200;
    opt.n_slots = 1000;
    opt.seed = 7;
    const std::string a = report::to_csv(commands::simulate(SystemConfig::defaults(), grid, opt));
    const std::string b = report::to_csv(commands::simulate(SystemConfig::defaults(), grid, opt));
    report(9, "determinism", a == b, seconds_since(t0), fmt("two runs, %.0f CSV bytes each, ", a.size()) +
                                                             (a == b ? "identical" : "different"));
}

}  // namespace

int main() {
    distribution_correctness();
    closed_form_vs_quadrature();
    effective_range_consistency();
    analysis_simulation_agreement();
    outage_trends();
    throughput_trends();
    j_magnitude();
    imperfection_constant();
    determinism();
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
