#ifndef EHCR_CONFIG_HPP
#define EHCR_CONFIG_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "ehcr/fading.hpp"
#include "ehcr/numerics.hpp"

namespace ehcr {

/// Invalid or inconsistent system configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Link and energy-harvesting parameters, all in SI units (W, m, s).
struct SystemConfig {
    double P_b = numerics::dbm_to_watts(33.0);   // beacon transmit power
    double M = numerics::dbm_to_watts(20.0);     // secondary transmit power
    double eta = 0.85;                           // RF-to-DC conversion efficiency
    double tau = 0.5;                            // switching-time fraction
    double T = 1.0;                              // frame duration
    double N0 = numerics::dbm_to_watts(-101.0);  // noise power
    double R = 1.0;                              // target rate, bps/Hz
    double alpha = 2.4;                          // beacon -> ST path-loss exponent
    double alpha_s = 3.0;                        // ST -> SR path-loss exponent
    double d_min = 1.0;
    double d_max = 15.0;
    double d_STSR = 30.0;
    double rho = 1.2;                            // amplifier inefficiency
    double P_c = numerics::dbm_to_watts(-30.0);  // harvesting-circuit power
    bool ideal = true;
    FadingParams fading_pb_st{7.0, 1, 20};
    FadingParams fading_st_sr{7.0, 1, 20};

    static SystemConfig defaults() { return SystemConfig{}; }

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;

    double gamma_th() const { return std::exp2(R) - 1.0; }

    /// Power drawn while transmitting: M when ideal, rho M + P_c otherwise.
    double effective_tx_power() const { return ideal ? M : rho * M + P_c; }

    /// Number of beacon antennas, carried as the mu of the beacon link.
    int antennas() const { return fading_pb_st.mu(); }

    void validate() const {
        auto require = [](bool ok, const std::string& what) {
            if (!ok) throw ConfigError("invalid configuration: " + what);
        };
        auto positive = [&](double v, const char* name) {
            require(v > 0.0 && std::isfinite(v), std::string(name) + " > 0");
        };
        positive(P_b, "P_b");
        positive(M, "M");
        require(eta > 0.0 && eta <= 1.0, "0 < eta <= 1");
        require(tau > 0.0 && tau < 1.0, "0 < tau < 1");
        positive(T, "T");
        positive(N0, "N0");
        positive(R, "R");
        positive(alpha, "alpha");
        positive(alpha_s, "alpha_s");
        positive(d_min, "d_min");
        positive(d_max, "d_max");
        require(d_min <= d_max, "d_min <= d_max");
        positive(d_STSR, "d_STSR");
        require(rho >= 1.0 && std::isfinite(rho), "rho >= 1");
        require(P_c >= 0.0 && std::isfinite(P_c), "P_c >= 0");
    }
};

}  // namespace ehcr

#endif  // EHCR_CONFIG_HPP
