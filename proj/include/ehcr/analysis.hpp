#ifndef EHCR_ANALYSIS_HPP
#define EHCR_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ehcr/config.hpp"
#include "ehcr/fading.hpp"
#include "ehcr/numerics.hpp"

namespace ehcr {

/// Closed-form metrics at a single operating point.
struct MetricPoint {
    double d_star = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double p_tr = 0.0;
    double f_snr = 0.0;
    double p_out = 1.0;
    double throughput = 0.0;

    friend bool operator==(const MetricPoint&, const MetricPoint&) = default;
};

namespace analysis {

/// Jensen lower bound on the harvested-power capacity at beacon distance d:
/// tau log2(1 + eta P_b (1 - tau) exp(E_p + E_s) / (tau N0 d^alpha d_s^alpha_s)).
inline double capacity_lower_bound(const SystemConfig& cfg, double d_pbst) {
    if (!(d_pbst > 0.0)) {
        throw DomainError("capacity_lower_bound: distance must be positive");
    }
    const double log_gain = fading::log_moment(cfg.fading_pb_st) + fading::log_moment(cfg.fading_st_sr);
    const double snr = cfg.eta * cfg.P_b * (1.0 - cfg.tau) * std::exp(log_gain) /
                       (cfg.tau * cfg.N0 * std::pow(d_pbst, cfg.alpha) * std::pow(cfg.d_STSR, cfg.alpha_s));
    return cfg.tau * std::log2(1.0 + snr);
}

/// Jensen lower bound on the fixed-power benchmark capacity. The transmit
/// power is the effective one, so the non-ideal case stays consistent with
/// effective_range.
inline double benchmark_capacity_lower_bound(const SystemConfig& cfg) {
    const double snr = cfg.effective_tx_power() * std::exp(fading::log_moment(cfg.fading_st_sr)) /
                       (cfg.N0 * std::pow(cfg.d_STSR, cfg.alpha_s));
    return cfg.tau * std::log2(1.0 + snr);
}

/// Effective harvesting range d*: the beacon distance at which the two
/// capacity bounds coincide.
inline double effective_range(const SystemConfig& cfg) {
    const double ratio = cfg.eta * cfg.P_b * (1.0 - cfg.tau) / (cfg.tau * cfg.effective_tx_power());
    return std::pow(ratio * std::exp(fading::log_moment(cfg.fading_pb_st)), 1.0 / cfg.alpha);
}

/// F_SNR(gamma_th). Radiated power is always M, even when the buffer threshold is rho M + P_c.
inline double snr_outage_cdf(const SystemConfig& cfg) {
    const double x = cfg.gamma_th() * cfg.N0 * std::pow(cfg.d_STSR, cfg.alpha_s) / cfg.M;
    return fading::cdf(cfg.fading_st_sr, x);
}

namespace detail {

// Integral over [lo, hi] of survival(c x^alpha) * 2x / (d_max^2 - d_min^2), in closed form.
inline double placement_averaged_survival(const SystemConfig& cfg, double c, double lo, double hi) {
    if (!(lo < hi)) {
        return 0.0;
    }
    const FadingParams& p = cfg.fading_pb_st;
    const double area = cfg.d_max * cfg.d_max - cfg.d_min * cfg.d_min;
    const double two_over_alpha = 2.0 / cfg.alpha;
    const double scale = c / p.omega();
    const double x_lo = scale * std::pow(lo, cfg.alpha);
    const double x_hi = scale * std::pow(hi, cfg.alpha);
    const double prefactor = 2.0 * std::pow(scale, -two_over_alpha) / (cfg.alpha * area);

    // Inner sums over r are shared between components: component j needs r < m_j.
    const int r_max = p.m();
    std::vector<double> partial(static_cast<std::size_t>(r_max) + 1, 0.0);
    double log_r_fact = 0.0;
    for (int r = 0; r < r_max; ++r) {
        if (r > 0) log_r_fact += std::log(static_cast<double>(r));
        const double term =
            numerics::incomplete_gamma_interval(r + two_over_alpha, x_lo, x_hi) * std::exp(-log_r_fact);
        partial[r + 1] = partial[r] + term;
    }
    double sum = 0.0;
    const auto w = p.weights();
    const auto s = p.shapes();
    for (std::size_t j = 0; j < w.size(); ++j) {
        sum += w[j] * partial[s[j]];
    }
    return prefactor * sum;
}

// Point-mass placement (d_min == d_max): the distance is known exactly.
inline double point_placement(const SystemConfig& cfg, double c) {
    return fading::survival(cfg.fading_pb_st, c * std::pow(cfg.d_min, cfg.alpha));
}

}  // namespace detail

/// Harvest-threshold constant for a post-transmission slot: tau M_eff / (eta P_b (1 - tau)).
inline double partial_slot_threshold(const SystemConfig& cfg) {
    return cfg.tau * cfg.effective_tx_power() / (cfg.eta * cfg.P_b * (1.0 - cfg.tau));
}

/// Harvest-threshold constant for a full harvesting slot: tau M_eff / (eta P_b).
inline double full_slot_threshold(const SystemConfig& cfg) {
    return cfg.tau * cfg.effective_tx_power() / (cfg.eta * cfg.P_b);
}

/// Probability that ST lies inside the effective range and refills its buffer
/// during the harvesting fraction of the previous slot. The upper distance
/// limit is min(d*, d_max) and the density is the annulus law on [d_min, d_max].
inline double phi1(const SystemConfig& cfg) {
    const double d_star = effective_range(cfg);
    if (d_star < cfg.d_min) {
        return 0.0;
    }
    const double c = partial_slot_threshold(cfg);
    if (cfg.d_min == cfg.d_max) {
        return detail::point_placement(cfg, c);
    }
    return detail::placement_averaged_survival(cfg, c, cfg.d_min, std::min(d_star, cfg.d_max));
}

/// Probability that ST lies beyond the effective range and a full slot of
/// harvesting refills the buffer.
inline double phi2(const SystemConfig& cfg) {
    const double d_star = effective_range(cfg);
    if (d_star > cfg.d_max) {
        return 0.0;
    }
    const double c = full_slot_threshold(cfg);
    if (cfg.d_min == cfg.d_max) {
        return d_star < cfg.d_min ? detail::point_placement(cfg, c) : 0.0;
    }
    return detail::placement_averaged_survival(cfg, c, std::max(d_star, cfg.d_min), cfg.d_max);
}

/// Multi-slot accumulation term for l consecutive harvesting slots at
/// distance d, using the l-fold sum law from fading::sum_params. The raw
/// difference of the two unit-mean CDFs can dip below zero, so the result is
/// clamped to a probability.
inline double j_correction(const SystemConfig& cfg, int l, double d) {
    if (l < 2 || l > cfg.fading_pb_st.m()) {
        throw DomainError("j_correction: l must lie in [2, m], got " + std::to_string(l));
    }
    if (!(d > 0.0)) {
        throw DomainError("j_correction: distance must be positive");
    }
    const double x = full_slot_threshold(cfg) * std::pow(d, cfg.alpha);
    const double raw = fading::cdf(fading::sum_params(cfg.fading_pb_st, l - 1), x) -
                       fading::cdf(fading::sum_params(cfg.fading_pb_st, l), x);
    return std::max(raw, 0.0);
}

/// P_tr ~ phi1 + phi2; the multi-slot term is neglected.
inline double transmission_probability(const SystemConfig& cfg) {
    return std::clamp(phi1(cfg) + phi2(cfg), 0.0, 1.0);
}

/// P_out = P_tr F_SNR + (1 - P_tr): a silent slot counts as an outage.
inline double outage_probability(double p_tr, double f_snr) { return p_tr * f_snr + (1.0 - p_tr); }

inline double outage_probability(const SystemConfig& cfg) {
    return outage_probability(transmission_probability(cfg), snr_outage_cdf(cfg));
}

inline double average_throughput(const SystemConfig& cfg, double p_out) { return cfg.tau * cfg.R * (1.0 - p_out); }

inline double average_throughput(const SystemConfig& cfg) {
    return average_throughput(cfg, outage_probability(cfg));
}

inline MetricPoint evaluate(const SystemConfig& cfg) {
    MetricPoint mp;
    mp.d_star = effective_range(cfg);
    mp.phi1 = phi1(cfg);
    mp.phi2 = phi2(cfg);
    mp.p_tr = std::clamp(mp.phi1 + mp.phi2, 0.0, 1.0);
    mp.f_snr = snr_outage_cdf(cfg);
    mp.p_out = outage_probability(mp.p_tr, mp.f_snr);
    mp.throughput = average_throughput(cfg, mp.p_out);
    return mp;
}

inline SystemConfig with_tau(SystemConfig cfg, double tau) {
    cfg.tau = tau;
    return cfg;
}

/// One MetricPoint per switching time, in grid order.
inline std::vector<MetricPoint> sweep(const SystemConfig& cfg, std::span<const double> tau_grid) {
    std::vector<MetricPoint> out;
    out.reserve(tau_grid.size());
    for (const double tau : tau_grid) {
        if (!(tau > 0.0 && tau < 1.0)) {
            throw DomainError("sweep: tau must lie in (0, 1), got " + std::to_string(tau));
        }
        out.push_back(evaluate(with_tau(cfg, tau)));
    }
    return out;
}

}  // namespace analysis
}  // namespace ehcr

#endif  // EHCR_ANALYSIS_HPP
