#ifndef EHCR_FADING_HPP
#define EHCR_FADING_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ehcr/numerics.hpp"
#include "ehcr/random.hpp"

namespace ehcr {

/// kappa-mu shadowed power-gain law with integer mu and m, represented as a
/// finite binomial mixture of gamma laws:
///
///   f(x) = sum_j C_j x^(m_j - 1) exp(-x / omega) / (omega^m_j (m_j - 1)!)
///
/// with N = m - mu, m_j = m - j, omega = (mu K + m) / (m mu (1 + K)) and
/// C_j = binom(N, j) (m / (mu K + m))^j (mu K / (mu K + m))^(N - j).
/// Every valid parameter set has unit mean. For a multi-antenna beacon, mu
/// holds the antenna count L.
class FadingParams {
public:
    FadingParams(double K, int mu, int m) : K_(K), mu_(mu), m_(m) {
        if (!(K > 0.0) || !std::isfinite(K)) {
            throw DomainError("FadingParams: K must be positive and finite");
        }
        if (mu < 1) {
            throw DomainError("FadingParams: mu must be >= 1");
        }
        if (m < mu) {
            throw DomainError("FadingParams: requires m >= mu (got m=" + std::to_string(m) +
                              ", mu=" + std::to_string(mu) + ")");
        }
        const double muK = mu * K;
        omega_ = (muK + m) / (static_cast<double>(m) * mu * (1.0 + K));

        const int n = m - mu;
        const double log_p = std::log(m / (muK + m));
        const double log_q = std::log(muK / (muK + m));
        const double log_n_fact = std::lgamma(n + 1.0);
        weights_.reserve(n + 1);
        shapes_.reserve(n + 1);
        for (int j = 0; j <= n; ++j) {
            const double log_binom = log_n_fact - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
            weights_.push_back(std::exp(log_binom + j * log_p + (n - j) * log_q));
            shapes_.push_back(m - j);
        }
        rebuild_cumulative();
    }

    double K() const { return K_; }
    int mu() const { return mu_; }
    int m() const { return m_; }
    /// N = m - mu; the mixture has N + 1 components.
    int n_terms() const { return m_ - mu_; }
    double omega() const { return omega_; }
    std::span<const double> weights() const { return weights_; }
    std::span<const int> shapes() const { return shapes_; }
    std::span<const double> cumulative_weights() const { return cumulative_; }

    /// Copy with omega multiplied by `factor`. Breaks the unit-mean invariant
    /// on purpose; only the validation fault-injection path uses it.
    FadingParams with_scaled_omega(double factor) const {
        FadingParams copy = *this;
        copy.omega_ *= factor;
        return copy;
    }

    friend bool operator==(const FadingParams&, const FadingParams&) = default;

private:
    void rebuild_cumulative() {
        cumulative_.resize(weights_.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < weights_.size(); ++j) {
            acc += weights_[j];
            cumulative_[j] = acc;
        }
    }

    double K_;
    int mu_;
    int m_;
    double omega_ = 1.0;
    std::vector<double> weights_;
    std::vector<int> shapes_;
    std::vector<double> cumulative_;
};

namespace fading {

namespace detail {

// Poisson weights e^-y y^r / r! for r = 0 .. count-1, underflow-safe for large y.
inline std::vector<double> poisson_terms(double y, std::size_t count) {
    std::vector<double> t(count, 0.0);
    if (count == 0) {
        return t;
    }
    if (y == 0.0) {
        t[0] = 1.0;
        return t;
    }
    if (y < 600.0) {
        t[0] = std::exp(-y);
        for (std::size_t r = 1; r < count; ++r) {
            t[r] = t[r - 1] * y / static_cast<double>(r);
        }
    } else {
        const double log_y = std::log(y);
        for (std::size_t r = 0; r < count; ++r) {
            t[r] = std::exp(-y + r * log_y - std::lgamma(r + 1.0));
        }
    }
    return t;
}

inline void check_nonnegative(double x, const char* what) {
    if (!(x >= 0.0)) {
        throw DomainError(std::string(what) + ": x must be nonnegative");
    }
}

}  // namespace detail

inline double pdf(const FadingParams& p, double x) {
    detail::check_nonnegative(x, "fading::pdf");
    if (std::isinf(x)) {
        return 0.0;
    }
    if (x == 0.0) {
        return 1.0;
    }
    const double y = x / p.omega();
    const auto t = detail::poisson_terms(y, static_cast<std::size_t>(p.m()));
    double sum = 0.0;
    const auto w = p.weights();
    const auto s = p.shapes();
    for (std::size_t j = 0; j < w.size(); ++j) {
        sum += w[j] * t[s[j] - 1];
    }
    return sum / p.omega();
}

/// Complementary CDF, summed as positive terms so tail values keep full relative precision.
inline double survival(const FadingParams& p, double x) {
    detail::check_nonnegative(x, "fading::survival");
    if (std::isinf(x)) {
        return 0.0;
    }
    if (x == 0.0) {
        return 1.0;
    }
    const double y = x / p.omega();
    const auto t = detail::poisson_terms(y, static_cast<std::size_t>(p.m()));
    std::vector<double> prefix(t.size());
    double acc = 0.0;
    for (std::size_t r = 0; r < t.size(); ++r) {
        acc += t[r];
        prefix[r] = acc;
    }
    double sum = 0.0;
    const auto w = p.weights();
    const auto s = p.shapes();
    for (std::size_t j = 0; j < w.size(); ++j) {
        sum += w[j] * prefix[s[j] - 1];
    }
    return std::min(sum, 1.0);
}

inline double cdf(const FadingParams& p, double x) {
    detail::check_nonnegative(x, "fading::cdf");
    const double y = x / p.omega();
    if (y >= static_cast<double>(p.m())) {
        return 1.0 - survival(p, x);
    }
    // Lower tail: sum the Poisson terms r >= m_j directly, avoiding 1 - (1 - eps).
    auto t = detail::poisson_terms(y, static_cast<std::size_t>(p.m()) + 1);
    double tail = 0.0;
    for (std::size_t r = static_cast<std::size_t>(p.mu()); r < t.size(); ++r) {
        tail += t[r];
    }
    // y < m here, so terms beyond index m decrease geometrically.
    while (t.back() > 1e-18 * tail) {
        const double next = t.back() * y / static_cast<double>(t.size());
        t.push_back(next);
        tail += next;
    }
    std::vector<double> suffix(t.size() + 1, 0.0);
    for (std::size_t r = t.size(); r-- > 0;) {
        suffix[r] = suffix[r + 1] + t[r];
    }
    double sum = 0.0;
    const auto w = p.weights();
    const auto s = p.shapes();
    for (std::size_t j = 0; j < w.size(); ++j) {
        sum += w[j] * suffix[s[j]];
    }
    return std::min(sum, 1.0);
}

/// sum_j C_j m_j omega; equals 1 for every valid parameter set.
inline double mean(const FadingParams& p) {
    double sum = 0.0;
    const auto w = p.weights();
    const auto s = p.shapes();
    for (std::size_t j = 0; j < w.size(); ++j) {
        sum += w[j] * s[j];
    }
    return sum * p.omega();
}

/// E[ln g] = sum_j C_j (psi(m_j) + ln omega). Non-positive for unit-mean laws.
inline double log_moment(const FadingParams& p) {
    double sum = 0.0;
    const auto w = p.weights();
    const auto s = p.shapes();
    const double log_omega = std::log(p.omega());
    for (std::size_t j = 0; j < w.size(); ++j) {
        sum += w[j] * (numerics::digamma_integer(s[j]) + log_omega);
    }
    return sum;
}

/// Unit-scale gamma variate with positive integer shape.
/// Shapes up to 32 use a product of uniforms; larger shapes use Marsaglia-Tsang.
inline double sample_gamma_integer(int shape, RandomStream& gen) {
    if (shape <= 32) {
        double prod = 1.0;
        double log_acc = 0.0;
        for (int i = 0; i < shape; ++i) {
            prod *= gen.uniform_open0();
            if (prod < 1e-280) {
                log_acc += std::log(prod);
                prod = 1.0;
            }
        }
        return -(log_acc + std::log(prod));
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = gen.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = gen.uniform_open0();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

/// Draws a mixture component with probability C_j, then a gamma(m_j, omega) variate.
inline double sample(const FadingParams& p, RandomStream& gen) {
    const auto cum = p.cumulative_weights();
    const double u = gen.uniform() * cum.back();
    std::size_t j = 0;
    while (j + 1 < cum.size() && u >= cum[j]) {
        ++j;
    }
    return sample_gamma_integer(p.shapes()[j], gen) * p.omega();
}

/// Parameter set used for an l-fold sum of gains: same K and m with mu
/// replaced by l, so N is recomputed as m - l. The result is unit-mean like
/// every other parameter set, unlike a literal sum of l unit-mean gains.
inline FadingParams sum_params(const FadingParams& p, int l) {
    if (l < 1 || l > p.m()) {
        throw DomainError("fading::sum_params: l must lie in [1, m], got " + std::to_string(l));
    }
    return FadingParams(p.K(), l, p.m());
}

}  // namespace fading
}  // namespace ehcr

#endif  // EHCR_FADING_HPP
