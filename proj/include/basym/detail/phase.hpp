#pragma once

// Large oscillatory phases for x > nu, formed in extended precision and
// reduced into [-pi, pi] before anything is rounded to double.

#include <cmath>

#include "basym/mp.hpp"

namespace basym::detail {

struct AbovePhase {
    double t;        // sqrt(x^2 - nu^2)
    double reduced;  // phase mod 2 pi
};

// T - nu*beta, or T - T^3/(3 nu^2) - nu*beta when `watson` is set,
// with T = sqrt(x^2 - nu^2) and beta = atan2(T, nu).
inline AbovePhase reduced_phase(double nu, double x, int phase_digits, bool watson = false) {
    const int magnitude_bits = std::max(0, std::ilogb(x) + 1);
    const mpfr_prec_t prec = mp::bits_for_digits(phase_digits) + magnitude_bits;
    const mp::Float n(nu, prec), xf(x, prec);
    const mp::Float t = mp::sqrt((xf - n) * (xf + n));
    mp::Float ph = t - n * mp::atan2(t, n);
    if (watson) ph -= t * t * t / (n * n * 3.0);
    return {t.to_double(), mp::reduce_two_pi(ph).to_double()};
}

}  // namespace basym::detail
