#ifndef EHCR_VALIDATION_HPP
#define EHCR_VALIDATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ehcr/analysis.hpp"
#include "ehcr/config.hpp"
#include "ehcr/fading.hpp"
#include "ehcr/numerics.hpp"
#include "ehcr/random.hpp"
#include "ehcr/report.hpp"
#include "ehcr/sim.hpp"

// Independent reference computations (quadrature, bisection, Monte Carlo,
// Kolmogorov-Smirnov) and the invariant suites built on them. None of these
// route through the closed forms they check.

namespace ehcr::validation {

/// Two-sided KS statistic of `samples` (sorted in place) against `cdf`.
template <typename Cdf>
double ks_statistic(std::vector<double>& samples, Cdf&& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
inline double kolmogorov_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 0.2) {
        return 1.0;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline numerics::AccuracySpec oracle_accuracy() { return {1e-11, 20000}; }

/// Placement-averaged survival by direct quadrature of the distance integral.
inline double placement_integral(const SystemConfig& cfg, double c, double lo, double hi) {
    if (!(lo < hi)) return 0.0;
    const double area = cfg.d_max * cfg.d_max - cfg.d_min * cfg.d_min;
    const FadingParams& p = cfg.fading_pb_st;
    return numerics::integrate_adaptive(
        [&](double x) { return fading::survival(p, c * std::pow(x, cfg.alpha)) * 2.0 * x / area; }, lo, hi,
        oracle_accuracy());
}

inline double phi1_quadrature(const SystemConfig& cfg) {
    const double d_star = analysis::effective_range(cfg);
    if (d_star < cfg.d_min) return 0.0;
    const double c = analysis::partial_slot_threshold(cfg);
    if (cfg.d_min == cfg.d_max) return fading::survival(cfg.fading_pb_st, c * std::pow(cfg.d_min, cfg.alpha));
    return placement_integral(cfg, c, cfg.d_min, std::min(d_star, cfg.d_max));
}

inline double phi2_quadrature(const SystemConfig& cfg) {
    const double d_star = analysis::effective_range(cfg);
    if (d_star > cfg.d_max) return 0.0;
    const double c = analysis::full_slot_threshold(cfg);
    if (cfg.d_min == cfg.d_max) {
        return d_star < cfg.d_min ? fading::survival(cfg.fading_pb_st, c * std::pow(cfg.d_min, cfg.alpha)) : 0.0;
    }
    return placement_integral(cfg, c, std::max(d_star, cfg.d_min), cfg.d_max);
}

/// Distance where capacity_lower_bound meets benchmark_capacity_lower_bound, by bisection in log-distance.
inline double effective_range_bisection(const SystemConfig& cfg) {
    const double target = analysis::benchmark_capacity_lower_bound(cfg);
    double lo = std::log(1e-9);
    double hi = std::log(1e9);
    for (int i = 0; i < 300 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        // The harvested-power bound decreases with distance.
        if (analysis::capacity_lower_bound(cfg, std::exp(mid)) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::exp(0.5 * (lo + hi));
}

struct MonteCarloMean {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Monte Carlo average of tau log2(1 + eta P_b (1-tau) g_p g_s / (tau N0 d^alpha d_s^alpha_s)).
inline MonteCarloMean capacity_monte_carlo(const SystemConfig& cfg, double d, std::size_t draws, std::uint64_t seed) {
    RandomStream gen(seed, 1);
    const double k = cfg.eta * cfg.P_b * (1.0 - cfg.tau) /
                     (cfg.tau * cfg.N0 * std::pow(d, cfg.alpha) * std::pow(cfg.d_STSR, cfg.alpha_s));
    double sum = 0.0;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double g = fading::sample(cfg.fading_pb_st, gen) * fading::sample(cfg.fading_st_sr, gen);
        const double c = cfg.tau * std::log2(1.0 + k * g);
        sum += c;
        sum2 += c * c;
    }
    const double n = static_cast<double>(draws);
    const double mean = sum / n;
    return {mean, std::sqrt(std::max(sum2 / n - mean * mean, 0.0) / n)};
}

/// Monte Carlo average of tau log2(1 + M_eff g_s / (N0 d_s^alpha_s)).
inline MonteCarloMean benchmark_monte_carlo(const SystemConfig& cfg, std::size_t draws, std::uint64_t seed) {
    RandomStream gen(seed, 2);
    const double k = cfg.effective_tx_power() / (cfg.N0 * std::pow(cfg.d_STSR, cfg.alpha_s));
    double sum = 0.0;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double c = cfg.tau * std::log2(1.0 + k * fading::sample(cfg.fading_st_sr, gen));
        sum += c;
        sum2 += c * c;
    }
    const double n = static_cast<double>(draws);
    const double mean = sum / n;
    return {mean, std::sqrt(std::max(sum2 / n - mean * mean, 0.0) / n)};
}

inline double relative_difference(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Integral of the density over [0, upper], with upper far into the tail.
inline double pdf_mass(const FadingParams& p) {
    const double upper = std::max(50.0, 40.0 * p.omega() * p.m());
    return numerics::integrate_adaptive([&](double x) { return fading::pdf(p, x); }, 0.0, upper, oracle_accuracy());
}

inline std::vector<double> paper_tau_grid() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }

struct ValidationOptions {
    /// Fault injection: multiplies the beacon-link omega before the suites run.
    double omega_fault_factor = 1.0;
    std::uint64_t seed = 20240601;
    std::size_t ks_draws = 100000;
    std::size_t jensen_draws = 1000000;
};

namespace detail {

inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

inline Verdict numerics_suite() {
    using namespace numerics;
    double reference = relative_difference(upper_incomplete_gamma(1.0, 2.0), std::exp(-2.0));
    double recurrence = 0.0;
    for (double s = 0.1; s <= 25.0; s += 0.7) {
        reference = std::max(reference, relative_difference(upper_incomplete_gamma(s, 0.0), std::exp(log_gamma(s))));
        for (const double x : {0.3, 1.7, 6.0, 30.0}) {
            const double lhs = upper_incomplete_gamma(s + 1.0, x);
            const double rhs = s * upper_incomplete_gamma(s, x) + std::pow(x, s) * std::exp(-x);
            recurrence = std::max(recurrence, relative_difference(lhs, rhs));
        }
    }
    const double s = 0.5 + 2.0 / 2.4;
    const double quad = integrate_adaptive([&](double t) { return std::pow(t, s - 1.0) * std::exp(-t); }, 1.3,
                                           1.3 + 200.0, oracle_accuracy());
    const double quadrature = relative_difference(upper_incomplete_gamma(s, 1.3), quad);
    double digamma_gap = 0.0;
    for (long n = 1; n < 60; ++n) {
        digamma_gap = std::max(digamma_gap, std::abs(digamma_integer(n + 1) - digamma_integer(n) - 1.0 / n));
    }
    const bool ok = reference <= 1e-12 && recurrence <= 1e-9 && quadrature <= 1e-10 && digamma_gap <= 1e-12 &&
                    std::abs(dbm_to_watts(30.0) - 1.0) < 1e-15;
    return {"numerics", ok,
            fmt("reference %.3g, recurrence %.3g, quadrature %.3g", reference, recurrence, quadrature) +
                fmt(", digamma step %.3g", digamma_gap)};
}

inline Verdict normalization_suite(const SystemConfig& cfg) {
    double worst_mass = 0.0;
    double worst_mean = 0.0;
    double worst_weights = 0.0;
    for (const FadingParams* p : {&cfg.fading_pb_st, &cfg.fading_st_sr}) {
        worst_mass = std::max(worst_mass, std::abs(pdf_mass(*p) - 1.0));
        worst_mean = std::max(worst_mean, std::abs(fading::mean(*p) - 1.0));
        double wsum = 0.0;
        for (const double w : p->weights()) wsum += w;
        worst_weights = std::max(worst_weights, std::abs(wsum - 1.0));
    }
    const bool ok = worst_mass <= 1e-9 && worst_mean <= 1e-12 && worst_weights <= 1e-12;
    return {"fading_normalization", ok,
            fmt("|mass-1| %.3g, |mean-1| %.3g, |sum C_j - 1| %.3g", worst_mass, worst_mean, worst_weights)};
}

inline Verdict ks_suite(const SystemConfig& cfg, const ValidationOptions& opt) {
    double worst_p = 1.0;
    for (const FadingParams* p : {&cfg.fading_pb_st, &cfg.fading_st_sr}) {
        RandomStream gen(opt.seed, 3);
        std::vector<double> draws(opt.ks_draws);
        for (auto& x : draws) x = fading::sample(*p, gen);
        const double d = ks_statistic(draws, [&](double x) { return fading::cdf(*p, x); });
        worst_p = std::min(worst_p, kolmogorov_pvalue(d, draws.size()));
    }
    return {"fading_ks", worst_p > 0.01, fmt("min KS p-value %.4g over %.0f draws per link", worst_p,
                                             static_cast<double>(opt.ks_draws))};
}

inline Verdict phi_suite(const SystemConfig& cfg) {
    double worst = 0.0;
    for (const bool ideal : {true, false}) {
        for (const double tau : paper_tau_grid()) {
            SystemConfig c = analysis::with_tau(cfg, tau);
            c.ideal = ideal;
            worst = std::max(worst, relative_difference(analysis::phi1(c), phi1_quadrature(c)));
            worst = std::max(worst, relative_difference(analysis::phi2(c), phi2_quadrature(c)));
        }
    }
    return {"phi_closed_form", worst <= 1e-7, fmt("max relative gap to quadrature %.3g", worst)};
}

inline Verdict range_suite(const SystemConfig& cfg) {
    double worst_range = 0.0;
    double worst_capacity = 0.0;
    for (const double tau : paper_tau_grid()) {
        const SystemConfig c = analysis::with_tau(cfg, tau);
        const double d_star = analysis::effective_range(c);
        worst_range = std::max(worst_range, relative_difference(d_star, effective_range_bisection(c)));
        worst_capacity = std::max(worst_capacity, relative_difference(analysis::capacity_lower_bound(c, d_star),
                                                                      analysis::benchmark_capacity_lower_bound(c)));
    }
    return {"effective_range", worst_range <= 1e-8 && worst_capacity <= 1e-9,
            fmt("bisection gap %.3g, capacity gap at d* %.3g", worst_range, worst_capacity)};
}

inline Verdict jensen_suite(const SystemConfig& cfg, const ValidationOptions& opt) {
    const double d = 0.5 * (cfg.d_min + cfg.d_max);
    const MonteCarloMean cap = capacity_monte_carlo(cfg, d, opt.jensen_draws, opt.seed);
    const MonteCarloMean bench = benchmark_monte_carlo(cfg, opt.jensen_draws, opt.seed);
    const double cl = analysis::capacity_lower_bound(cfg, d);
    const double cla = analysis::benchmark_capacity_lower_bound(cfg);
    const bool ok = cl <= cap.mean + 3.0 * cap.standard_error && cla <= bench.mean + 3.0 * bench.standard_error;
    return {"jensen_bounds", ok,
            fmt("C_L %.6g vs MC %.6g; C_L^A %.6g vs MC ", cl, cap.mean, cla) + fmt("%.6g", bench.mean)};
}

inline Verdict j_suite(const SystemConfig& cfg) {
    if (cfg.fading_pb_st.m() < 3) {
        return {"j_magnitude", true, "m < 3: J(3) undefined, skipped"};
    }
    const double j2 = analysis::j_correction(cfg, 2, cfg.d_max);
    const double j3 = analysis::j_correction(cfg, 3, cfg.d_max);
    return {"j_magnitude", j2 <= 1e-5 && j3 <= 1e-7, fmt("J(2,d_max) = %.3g, J(3,d_max) = %.3g", j2, j3)};
}

inline Verdict conservation_suite(const SystemConfig& cfg, const ValidationOptions& opt) {
    const double cap = cfg.effective_tx_power() * cfg.T;
    const double consumption = cfg.tau * cap;
    double worst_conservation = 0.0;
    bool bounds_ok = true;
    bool consumption_ok = true;
    for (std::uint64_t placement = 0; placement < 20; ++placement) {
        RandomStream gen(opt.seed, 100 + placement);
        const double d = sim::sample_distance(cfg, gen);
        EnergyBuffer buffer = EnergyBuffer::full_for(cfg);
        for (int slot = 0; slot < 2000; ++slot) {
            const double gp = fading::sample(cfg.fading_pb_st, gen);
            const double gs = fading::sample(cfg.fading_st_sr, gen);
            const SlotOutcome out = sim::step_slot(buffer, cfg, d, gp, gs);
            const double delta = out.buffer.stored - buffer.stored;
            worst_conservation = std::max(worst_conservation, std::abs(delta - (out.harvested - out.consumed)) / cap);
            bounds_ok = bounds_ok && out.buffer.stored >= 0.0 && out.buffer.stored <= out.buffer.capacity;
            consumption_ok = consumption_ok && (out.consumed == 0.0 || out.consumed == consumption);
            buffer = out.buffer;
        }
    }
    const SimEstimate est = sim::run(cfg, 50, 1000, opt.seed);
    const double identity_gap = std::abs(est.throughput_hat - cfg.tau * cfg.R * (1.0 - est.p_out_hat));
    const bool ok = bounds_ok && consumption_ok && worst_conservation <= 1e-12 && identity_gap <= 1e-12;
    return {"sim_conservation", ok,
            fmt("conservation gap %.3g (of capacity), throughput identity gap %.3g", worst_conservation, identity_gap) +
                (bounds_ok ? "" : ", buffer bounds violated")};
}

template <typename Suite>
Verdict guarded(const char* name, Suite&& suite) {
    try {
        return suite();
    } catch (const std::exception& e) {
        return {name, false, std::string("error: ") + e.what()};
    }
}

}  // namespace detail

/// Runs every invariant suite on `cfg`; one verdict per suite.
inline std::vector<Verdict> run_all(SystemConfig cfg, const ValidationOptions& opt = {}) {
    if (opt.omega_fault_factor != 1.0) {
        cfg.fading_pb_st = cfg.fading_pb_st.with_scaled_omega(opt.omega_fault_factor);
    }
    std::vector<Verdict> out;
    out.push_back(detail::guarded("numerics", [] { return detail::numerics_suite(); }));
    out.push_back(detail::guarded("fading_normalization", [&] { return detail::normalization_suite(cfg); }));
    out.push_back(detail::guarded("fading_ks", [&] { return detail::ks_suite(cfg, opt); }));
    out.push_back(detail::guarded("phi_closed_form", [&] { return detail::phi_suite(cfg); }));
    out.push_back(detail::guarded("effective_range", [&] { return detail::range_suite(cfg); }));
    out.push_back(detail::guarded("jensen_bounds", [&] { return detail::jensen_suite(cfg, opt); }));
    out.push_back(detail::guarded("j_magnitude", [&] { return detail::j_suite(cfg); }));
    out.push_back(detail::guarded("sim_conservation", [&] { return detail::conservation_suite(cfg, opt); }));
    return out;
}

}  // namespace ehcr::validation

#endif  // EHCR_VALIDATION_HPP
