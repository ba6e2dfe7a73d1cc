#pragma once

// Transition region x ~ nu: the epsilon expansion and Watson's formulas.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "basym/core.hpp"
#include "basym/detail/elementary.hpp"
#include "basym/detail/phase.hpp"
#include "basym/meissel.hpp"
#include "basym/oracle.hpp"

namespace basym {

// Default half-width of the epsilon-expansion window, in units of nu^(1/3).
inline constexpr double kEpsilonRadius = 2.4;

struct EpsilonCoefficients {
    static constexpr int count = 16;
    static constexpr int max_degree = 16;

    struct Poly {
        bool present;
        std::array<double, max_degree> c;  // c[p] multiplies w^p
    };

    static constexpr std::array<Poly, count> b = [] {
        std::array<Poly, count> t{};
        auto set = [&](int m, std::initializer_list<std::pair<int, double>> terms) {
            t[m].present = true;
            for (auto [p, v] : terms) t[m].c[p] = v;
        };
        set(0, {{0, 1.0}});
        set(1, {{1, 1.0}});
        set(3, {{3, 1.0 / 6}, {1, -1.0 / 15}});
        set(4, {{4, 1.0 / 24}, {2, -1.0 / 24}, {0, 1.0 / 280}});
        set(6, {{6, 1.0 / 720}, {4, -7.0 / 1440}, {2, 1.0 / 288}, {0, -1.0 / 3600}});
        set(7, {{7, 1.0 / 5040}, {5, -1.0 / 900}, {3, 19.0 / 12600}, {1, -13.0 / 31500}});
        set(9, {{9, 1.0 / 362880}, {7, -1.0 / 30240}, {5, 71.0 / 604800}, {3, -121.0 / 907200},
                {1, 7939.0 / 232848000}});
        set(10, {{10, 1.0 / 3628800}, {8, -11.0 / 2419200}, {6, 143.0 / 6048000}, {4, -803.0 / 18144000},
                 {2, 43.0 / 1728000}, {0, -1213.0 / 655200000}});
        set(12, {{12, 1.0 / 479001600}, {10, -13.0 / 217728000}, {8, 299.0 / 508032000},
                 {6, -377.0 / 155520000}, {4, 337207.0 / 83825280000}, {2, -59503.0 / 27941760000},
                 {0, 151439.0 / 977961600000}});
        set(13, {{13, 1.0 / 6227020800}, {11, -1.0 / 171072000}, {9, 11.0 / 145152000},
                 {7, -47.0 / 108864000}, {5, 25853.0 / 23950080000}, {3, -266303.0 / 259459200000},
                 {1, 169039.0 / 698544000000}});
        set(15, {{15, 1.0 / 1307674368000}, {13, -1.0 / 23351328000}, {11, 113.0 / 125737920000},
                 {9, -17.0 / 1905120000}, {7, 76841.0 / 1760330880000}, {5, -37021.0 / 371498400000},
                 {3, 5141933.0 / 57210753600000}, {1, -16720141.0 / 810485676000000}});
        return t;
    }();

    static double eval(int m, double w) {
        return detail::horner(b[m].c.data(), max_degree, w);
    }
};

struct WatsonBound {
    static double below(double nu, double x) {
        const double r = std::sqrt((nu - x) * (nu + x)) / nu;
        return 3.0 / nu * std::exp(-nu * detail::atanh_minus_r(r, x / nu));
    }
    static double above(double nu) { return 24.0 / nu; }
};

// radius is the allowed |x - nu| in units of nu^(1/3).
inline ExpansionResult epsilon_expansion(const BesselQuery& q, int m_max = 15, double radius = kEpsilonRadius) {
    detail::Stopwatch sw;
    detail::check_order(m_max, 15, "m_max");
    const int mm = q.policy().clamp_terms(m_max);
    const double nu = q.order(), x = q.argument();
    if (!(nu > 0.0 && x > 0.0)) throw Error(ErrorKind::InvalidInput, "epsilon expansion needs nu > 0, x > 0");
    const double w = x - nu;  // eps * z
    if (!(std::fabs(w) <= radius * std::cbrt(nu)))
        throw Error(ErrorKind::OutOfValidity, "|x - nu| = " + std::to_string(std::fabs(w)) +
                                                  " exceeds the epsilon-expansion radius; use Meissel instead");
    const double lz = std::log(x / 6.0);
    double sum = 0.0, last = 0.0;
    for (int m = 0; m <= mm; ++m) {
        const double sn = detail::sin_pi_third(m + 1);
        if (sn == 0.0 || !EpsilonCoefficients::b[m].present) continue;
        const double e = (m + 1.0) / 3.0;
        const double term = EpsilonCoefficients::eval(m, w) * sn * std::tgamma(e) * std::exp(-e * lz);
        sum += term;
        last = term;
    }
    ExpansionResult out;
    out.method = Method::Epsilon;
    out.terms_used = mm;
    out.value = sum / (3.0 * std::numbers::pi);
    out.scale = std::fabs(out.value);
    out.est_error = std::fabs(last) / (3.0 * std::numbers::pi);
    out.elapsed = sw.elapsed();
    return out;
}

inline ExpansionResult watson_below(const BesselQuery& q) {
    detail::Stopwatch sw;
    const double nu = q.order(), x = q.argument();
    if (!(nu > 0.0)) throw Error(ErrorKind::InvalidInput, "Watson needs nu > 0");
    if (!(x > 0.0 && x < nu)) throw Error(ErrorKind::WrongRegime, "watson_below needs 0 < x < nu");
    const double r = std::sqrt((nu - x) * (nu + x)) / nu;  // tanh(alpha_D)
    const double w = nu * r * r * r / 3.0;
    const double k = exact_K_third(w, 20).to_double();
    ExpansionResult out;
    out.method = Method::WatsonBelow;
    out.value = r / (std::numbers::pi * std::sqrt(3.0)) * std::exp(-nu * detail::atanh_minus_r3(r, x / nu)) * k;
    out.scale = std::fabs(out.value);
    out.est_error = WatsonBound::below(nu, x);
    out.rigorous = true;
    out.elapsed = sw.elapsed();
    return out;
}

inline ExpansionResult watson_above(const BesselQuery& q) {
    detail::Stopwatch sw;
    const double nu = q.order(), x = q.argument();
    if (!(nu > 0.0)) throw Error(ErrorKind::InvalidInput, "Watson needs nu > 0");
    if (!(x > nu)) throw Error(ErrorKind::WrongRegime, "watson_above needs x > nu");
    const auto ph = detail::reduced_phase(nu, x, q.policy().phase_digits, true);
    const double t = ph.t / nu;  // tan(beta)
    const double w = ph.t * ph.t * ph.t / (3.0 * nu * nu);
    if (w > 50.0)
        throw Error(ErrorKind::OutOfRange, "J_{+-1/3} argument " + std::to_string(w) +
                                               " exceeds 50; use meissel_second or debye_above");
    const double jm = exact_J_fractional_small(-1.0 / 3.0, w, 20).to_double();
    const double jp = exact_J_fractional_small(1.0 / 3.0, w, 20).to_double();
    ExpansionResult out;
    out.method = Method::WatsonAbove;
    out.value = t / 3.0 * std::cos(ph.reduced) * (jm + jp) + t / std::sqrt(3.0) * std::sin(ph.reduced) * (jm - jp);
    out.scale = std::fabs(out.value);
    out.est_error = WatsonBound::above(nu);
    out.rigorous = true;
    out.elapsed = sw.elapsed();
    return out;
}

}  // namespace basym
