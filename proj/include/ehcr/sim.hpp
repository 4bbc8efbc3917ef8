#ifndef EHCR_SIM_HPP
#define EHCR_SIM_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "ehcr/analysis.hpp"
#include "ehcr/config.hpp"
#include "ehcr/fading.hpp"
#include "ehcr/random.hpp"

namespace ehcr {

/// Stored energy of the secondary transmitter, in joules.
struct EnergyBuffer {
    double stored = 0.0;
    double capacity = 0.0;

    static EnergyBuffer full_for(const SystemConfig& cfg) {
        const double cap = cfg.effective_tx_power() * cfg.T;
        return {cap, cap};
    }
    bool full() const { return stored >= capacity; }

    friend bool operator==(const EnergyBuffer&, const EnergyBuffer&) = default;
};

struct Placement {
    double d_pbst = 0.0;
    bool inside_effective_range = false;
};

struct SlotOutcome {
    bool transmitted = false;
    bool outage = true;
    EnergyBuffer buffer;
    double harvested = 0.0;
    double consumed = 0.0;
};

struct SimOptions {
    /// Also cap each slot's harvest at tau T M_eff, the literal per-slot cap of
    /// the harvesting model. Off by default: only the buffer capacity binds.
    bool strict_harvest_cap = false;
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Monte Carlo estimates with 99% normal-approximation half-widths.
struct SimEstimate {
    double p_tr_hat = 0.0;
    double p_out_hat = 0.0;
    double throughput_hat = 0.0;
    double ci99_ptr = 0.0;
    double ci99_pout = 0.0;
    double ci99_throughput = 0.0;
    /// Fraction of transmissions preceded by two or more idle slots.
    double multi_slot_share = 0.0;
    std::uint64_t n_slots = 0;
    std::uint64_t n_placements = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const SimEstimate&, const SimEstimate&) = default;
};

namespace sim {

inline constexpr double z99 = 2.5758293035489004;

inline double ci99_halfwidth(double p, double n) { return z99 * std::sqrt(std::max(p * (1.0 - p), 0.0) / n); }

/// Inverse CDF of the annulus placement law 2x / (d_max^2 - d_min^2) on [d_min, d_max].
inline double distance_from_uniform(const SystemConfig& cfg, double u) {
    const double lo2 = cfg.d_min * cfg.d_min;
    return std::sqrt(lo2 + u * (cfg.d_max * cfg.d_max - lo2));
}

inline double sample_distance(const SystemConfig& cfg, RandomStream& gen) {
    return distance_from_uniform(cfg, gen.uniform());
}

inline Placement place(const SystemConfig& cfg, RandomStream& gen) {
    const double d = sample_distance(cfg, gen);
    return {d, d <= analysis::effective_range(cfg)};
}

namespace detail {

// Per-placement constants so the slot loop avoids pow().
struct SlotConstants {
    double harvest_per_gain = 0.0;  // eta T P_b / d^alpha
    double snr_per_gain = 0.0;      // M / (d_s^alpha_s N0)
    double gamma_th = 0.0;
    double consumption = 0.0;       // tau M_eff T
    double tau = 0.0;
    double strict_cap = 0.0;        // tau T M_eff, or +inf
};

inline SlotConstants slot_constants(const SystemConfig& cfg, double d, const SimOptions& opt) {
    SlotConstants k;
    k.harvest_per_gain = cfg.eta * cfg.T * cfg.P_b / std::pow(d, cfg.alpha);
    k.snr_per_gain = cfg.M / (std::pow(cfg.d_STSR, cfg.alpha_s) * cfg.N0);
    k.gamma_th = cfg.gamma_th();
    k.consumption = cfg.tau * cfg.effective_tx_power() * cfg.T;
    k.tau = cfg.tau;
    k.strict_cap = opt.strict_harvest_cap ? k.consumption : INFINITY;
    return k;
}

inline SlotOutcome step(const EnergyBuffer& buffer, const SlotConstants& k, double gain_p, double gain_s) {
    SlotOutcome out;
    out.buffer = buffer;
    double harvest_fraction = 1.0;
    if (buffer.full()) {
        out.transmitted = true;
        out.outage = k.snr_per_gain * gain_s <= k.gamma_th;
        out.consumed = k.consumption;
        out.buffer.stored -= k.consumption;
        harvest_fraction = 1.0 - k.tau;
    }
    const double raw = std::min(harvest_fraction * k.harvest_per_gain * gain_p, k.strict_cap);
    const double free = out.buffer.capacity - out.buffer.stored;
    if (raw >= free) {
        out.harvested = free;
        out.buffer.stored = out.buffer.capacity;
    } else {
        out.harvested = raw;
        out.buffer.stored += raw;
    }
    assert(out.buffer.stored >= 0.0 && out.buffer.stored <= out.buffer.capacity);
    return out;
}

struct PlacementCounts {
    std::uint64_t transmitted = 0;
    std::uint64_t delivered = 0;  // transmitted without outage
    std::uint64_t multi_slot = 0;
};

inline PlacementCounts run_placement(const SystemConfig& cfg, std::uint64_t n_slots, std::uint64_t seed,
                                     std::uint64_t index, const SimOptions& opt) {
    RandomStream gen(seed, index);
    const double d = sample_distance(cfg, gen);
    const SlotConstants k = slot_constants(cfg, d, opt);
    const std::uint64_t warmup = std::max<std::uint64_t>(100, n_slots / 10);

    EnergyBuffer buffer = EnergyBuffer::full_for(cfg);
    PlacementCounts counts;
    std::uint64_t idle_run = 0;
    for (std::uint64_t slot = 0; slot < warmup + n_slots; ++slot) {
        const double gain_p = fading::sample(cfg.fading_pb_st, gen);
        const double gain_s = fading::sample(cfg.fading_st_sr, gen);
        const SlotOutcome out = step(buffer, k, gain_p, gain_s);
        buffer = out.buffer;
        if (slot >= warmup && out.transmitted) {
            ++counts.transmitted;
            if (!out.outage) ++counts.delivered;
            if (idle_run >= 2) ++counts.multi_slot;
        }
        idle_run = out.transmitted ? 0 : idle_run + 1;
    }
    return counts;
}

}  // namespace detail

/// Advances the energy buffer by one slot.
///
/// A full buffer transmits at power M for tau T, spending tau M_eff T, then
/// harvests during (1 - tau) T. Otherwise the slot is silent (an outage) and
/// harvests for the whole T. Harvest is capped by the free buffer capacity.
inline SlotOutcome step_slot(const EnergyBuffer& buffer, const SystemConfig& cfg, double d, double gain_p,
                             double gain_s, const SimOptions& opt = {}) {
    return detail::step(buffer, detail::slot_constants(cfg, d, opt), gain_p, gain_s);
}

/// Time-slotted Monte Carlo run. Each placement draws its distance once and
/// owns a random stream derived from (seed, placement index); buffers start
/// full and the first max(100, n_slots / 10) slots are discarded. Results are
/// bit-identical for identical inputs, independent of the thread count.
inline SimEstimate run(const SystemConfig& cfg, std::uint64_t n_placements, std::uint64_t n_slots,
                       std::uint64_t seed, const SimOptions& opt = {}) {
    if (n_placements == 0 || n_slots == 0) {
        throw ConfigError("sim::run: placement and slot counts must be positive");
    }
    cfg.validate();

    std::vector<detail::PlacementCounts> per_placement(n_placements);
    unsigned workers = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_placements));
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < n_placements; ++i) {
            per_placement[i] = detail::run_placement(cfg, n_slots, seed, i, opt);
        }
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t i = w; i < n_placements; i += workers) {
                    per_placement[i] = detail::run_placement(cfg, n_slots, seed, i, opt);
                }
            });
        }
    }

    detail::PlacementCounts total;
    for (const auto& c : per_placement) {
        total.transmitted += c.transmitted;
        total.delivered += c.delivered;
        total.multi_slot += c.multi_slot;
    }
    const double n = static_cast<double>(n_placements) * static_cast<double>(n_slots);

    SimEstimate est;
    est.n_slots = n_slots;
    est.n_placements = n_placements;
    est.seed = seed;
    est.p_tr_hat = static_cast<double>(total.transmitted) / n;
    const double delivered = static_cast<double>(total.delivered) / n;
    est.p_out_hat = 1.0 - delivered;
    est.throughput_hat = cfg.tau * cfg.R * delivered;
    est.ci99_ptr = ci99_halfwidth(est.p_tr_hat, n);
    est.ci99_pout = ci99_halfwidth(est.p_out_hat, n);
    est.ci99_throughput = cfg.tau * cfg.R * ci99_halfwidth(delivered, n);
    est.multi_slot_share =
        total.transmitted == 0 ? 0.0
                               : static_cast<double>(total.multi_slot) / static_cast<double>(total.transmitted);
    return est;
}

}  // namespace sim
}  // namespace ehcr

#endif  // EHCR_SIM_HPP
