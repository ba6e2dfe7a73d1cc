#pragma once

#include <math.h>

#include <cmath>
#include <complex>
#include <numbers>

namespace basym::detail {

// atanh(r) - r without cancellation for small r. When r = sqrt(1 - z^2) is
// close to 1, atanh(r) = ln((1 + r) / z) avoids forming 1 - r.
inline double atanh_minus_r(double r, double z = 0.0) {
    if (r > 0.25) return (z > 0.0 ? std::log1p(r) - std::log(z) : std::atanh(r)) - r;
    const double r2 = r * r;
    double p = r * r2, sum = 0.0;
    for (int k = 1; k < 60; ++k) {
        const double t = p / (2 * k + 1);
        sum += t;
        if (t < 1e-18 * sum) break;
        p *= r2;
    }
    return sum;
}

// atanh(r) - r - r^3/3.
inline double atanh_minus_r3(double r, double z = 0.0) {
    if (r > 0.25) return (z > 0.0 ? std::log1p(r) - std::log(z) : std::atanh(r)) - r - r * r * r / 3.0;
    const double r2 = r * r;
    double p = r2 * r2 * r, sum = 0.0;
    for (int k = 2; k < 60; ++k) {
        const double t = p / (2 * k + 1);
        sum += t;
        if (t < 1e-18 * sum) break;
        p *= r2;
    }
    return sum;
}

// glibc's lgamma writes the global signgam; the _r form does not.
inline double lgamma_safe(double x) {
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

struct SignedLog {
    double log_abs;
    int sign;  // 0 at poles
};

// ln|Gamma(x)| with sign; reflection for x <= 0.
inline SignedLog lgamma_signed(double x) {
    if (x > 0.0) return {lgamma_safe(x), 1};
    if (x == std::floor(x)) return {INFINITY, 0};
    const double s = std::sin(std::numbers::pi * x);
    const double la = std::log(std::numbers::pi) - std::log(std::fabs(s)) - lgamma_safe(1.0 - x);
    return {la, s > 0 ? 1 : -1};
}

// nu ln(nu) - nu - ln Gamma(nu + 1), i.e. -(1/2)ln(2 pi nu) - Stirling tail.
inline double stirling_log_ratio(double nu) {
    if (nu < 10.0) return nu * std::log(nu) - nu - lgamma_safe(nu + 1.0);
    const double i = 1.0 / nu, i2 = i * i;
    const double tail = i * (1.0 / 12 + i2 * (-1.0 / 360 + i2 * (1.0 / 1260 + i2 * (-1.0 / 1680 + i2 * (1.0 / 1188)))));
    return -0.5 * std::log(2.0 * std::numbers::pi * nu) - tail;
}

// cos(pi k / 6) for integer k, exact zeros.
inline double cos_pi_sixth(long k) {
    static constexpr double h = 0.86602540378443864676;
    static constexpr double tab[12] = {1, h, 0.5, 0, -0.5, -h, -1, -h, -0.5, 0, 0.5, h};
    long r = k % 12;
    if (r < 0) r += 12;
    return tab[r];
}

// sin(pi k / 3) for integer k.
inline double sin_pi_third(long k) { return cos_pi_sixth(2 * k - 3); }

// exp(i pi t), exact on multiples of 1/2.
inline std::complex<double> cis_pi(double t) {
    double r = std::fmod(t, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0) return {1.0, 0.0};
    if (r == 0.5) return {0.0, 1.0};
    if (r == 1.0) return {-1.0, 0.0};
    if (r == 1.5) return {0.0, -1.0};
    return {std::cos(std::numbers::pi * r), std::sin(std::numbers::pi * r)};
}

inline std::complex<double> i_pow(long n) {
    long r = n % 4;
    if (r < 0) r += 4;
    static const std::complex<double> tab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return tab[r];
}

}  // namespace basym::detail
