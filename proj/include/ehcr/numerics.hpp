#ifndef EHCR_NUMERICS_HPP
#define EHCR_NUMERICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehcr {

/// Raised when an argument lies outside a function's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an iterative method or quadrature fails to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace numerics {

inline constexpr double euler_gamma = 0.57721566490153286061;

/// Tolerance contract shared by every quadrature oracle.
struct AccuracySpec {
    double relative_tolerance = 1e-10;
    unsigned max_quadrature_subdivisions = 4096;

    void check() const {
        if (!(relative_tolerance > 0.0) || relative_tolerance > 1e-8) {
            throw DomainError("AccuracySpec: relative_tolerance must lie in (0, 1e-8]");
        }
        if (max_quadrature_subdivisions == 0) {
            throw DomainError("AccuracySpec: max_quadrature_subdivisions must be positive");
        }
    }
};

inline double log_gamma(double s) {
    if (!(s > 0.0)) {
        throw DomainError("log_gamma: s must be positive, got " + std::to_string(s));
    }
    return std::lgamma(s);
}

namespace detail {

inline constexpr int max_gamma_iterations = 10000;
inline constexpr double gamma_eps = 1e-16;

// Lower incomplete gamma gamma(s, x) by its power series; converges for any x but is used for x < s + 1.
inline double lower_gamma_series(double s, double x) {
    if (x == 0.0) {
        return 0.0;
    }
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < max_gamma_iterations; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * gamma_eps) {
            return sum * std::exp(-x + s * std::log(x));
        }
    }
    throw ConvergenceError("incomplete gamma series did not converge");
}

// Upper incomplete gamma Gamma(s, x) by modified Lentz continued fraction, for x >= s + 1.
inline double upper_gamma_continued_fraction(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_gamma_iterations; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < gamma_eps) {
            return std::exp(-x + s * std::log(x)) * h;
        }
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

inline void check_incomplete_gamma_args(double s, double x) {
    if (!(s > 0.0)) {
        throw DomainError("incomplete gamma: s must be positive, got " + std::to_string(s));
    }
    if (!(x >= 0.0)) {
        throw DomainError("incomplete gamma: x must be nonnegative, got " + std::to_string(x));
    }
}

}  // namespace detail

/// Upper incomplete gamma function Gamma(s, x) (not regularized).
inline double upper_incomplete_gamma(double s, double x) {
    detail::check_incomplete_gamma_args(s, x);
    if (std::isinf(x)) {
        return 0.0;
    }
    if (x < s + 1.0) {
        return std::exp(log_gamma(s)) - detail::lower_gamma_series(s, x);
    }
    return detail::upper_gamma_continued_fraction(s, x);
}

/// Gamma(s, lo) - Gamma(s, hi) for lo <= hi, i.e. the integral of t^(s-1) e^-t over [lo, hi].
/// Picks the representation that avoids subtracting two nearly equal large numbers.
inline double incomplete_gamma_interval(double s, double lo, double hi) {
    detail::check_incomplete_gamma_args(s, lo);
    detail::check_incomplete_gamma_args(s, hi);
    if (hi < lo) {
        throw DomainError("incomplete_gamma_interval: requires lo <= hi");
    }
    if (lo == hi) {
        return 0.0;
    }
    if (hi < s + 1.0) {
        return detail::lower_gamma_series(s, hi) - detail::lower_gamma_series(s, lo);
    }
    return upper_incomplete_gamma(s, lo) - upper_incomplete_gamma(s, hi);
}

/// psi(n) for integer n >= 1: -gamma + H_{n-1}.
inline double digamma_integer(long n) {
    if (n < 1) {
        throw DomainError("digamma_integer: n must be >= 1, got " + std::to_string(n));
    }
    // Summed smallest-first for accuracy at large n.
    double harmonic = 0.0;
    for (long k = n - 1; k >= 1; --k) {
        harmonic += 1.0 / static_cast<double>(k);
    }
    return harmonic - euler_gamma;
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

namespace detail {

struct QuadratureSegment {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

// 15-point Kronrod rule with its embedded 7-point Gauss rule; error is |K15 - G7|.
template <typename F>
QuadratureSegment gauss_kronrod_15(F& f, double a, double b) {
    static constexpr std::array<double, 8> nodes = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static constexpr std::array<double, 8> kronrod = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> gauss = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_center = f(center);
    double k_sum = kronrod[7] * f_center;
    double g_sum = gauss[3] * f_center;
    double abs_sum = kronrod[7] * std::abs(f_center);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * nodes[i];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        k_sum += kronrod[i] * (f1 + f2);
        abs_sum += kronrod[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1) {
            g_sum += gauss[i / 2] * (f1 + f2);
        }
    }
    return {a, b, k_sum * half, std::abs((k_sum - g_sum) * half), abs_sum * std::abs(half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integral of f over [a, b]. The
/// segment with the largest error estimate is bisected until the summed
/// estimate falls below relative_tolerance times the integral of |f|.
/// Throws ConvergenceError when the subdivision budget runs out first.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, const AccuracySpec& acc = {}) {
    acc.check();
    if (!(a <= b)) {
        throw DomainError("integrate_adaptive: requires a <= b");
    }
    if (a == b) {
        return 0.0;
    }
    auto by_error = [](const detail::QuadratureSegment& x, const detail::QuadratureSegment& y) {
        return x.error < y.error;
    };
    std::vector<detail::QuadratureSegment> heap{detail::gauss_kronrod_15(f, a, b)};
    double value = heap.front().value;
    double error = heap.front().error;
    double l1 = heap.front().l1;
    for (unsigned splits = 0;; ++splits) {
        if (!std::isfinite(value)) {
            throw ConvergenceError("integrate_adaptive: non-finite integrand");
        }
        // Below ~50 ulp of the magnitude the estimate is roundoff and cannot shrink further.
        const double target = std::max(acc.relative_tolerance, 50.0 * std::numeric_limits<double>::epsilon()) * l1;
        if (error <= target) {
            return value;
        }
        if (splits >= acc.max_quadrature_subdivisions) {
            throw ConvergenceError("integrate_adaptive: subdivision limit reached, relative error estimate " +
                                   std::to_string(error / std::max(l1, std::numeric_limits<double>::min())));
        }
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const detail::QuadratureSegment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        for (const auto& seg : {left, right}) {
            heap.push_back(seg);
            std::push_heap(heap.begin(), heap.end(), by_error);
        }
        if (error < 0.0) {
            // Running sums drifted; recompute from the segments.
            error = 0.0;
            for (const auto& seg : heap) error += seg.error;
        }
    }
}

}  // namespace numerics
}  // namespace ehcr

#endif  // EHCR_NUMERICS_HPP
