#pragma once

// Debye's steepest-descent expansions on either side of the transition.

#include <array>
#include <cmath>
#include <numbers>

#include "basym/core.hpp"
#include "basym/detail/elementary.hpp"
#include "basym/detail/phase.hpp"
#include "basym/meissel.hpp"

namespace basym {

struct DebyeCoefficients {
    static constexpr int count = 5;
    static constexpr int max_degree = 5;

    // A_m(c) = sum_j a_below[m][j] c^j with c = coth^2(alpha_D)
    static constexpr std::array<std::array<double, max_degree>, count> a_below = {{
        {1.0, 0, 0, 0, 0},
        {1.0 / 8, -5.0 / 24, 0, 0, 0},
        {3.0 / 128, -77.0 / 576, 385.0 / 3456, 0, 0},
        {5.0 / 1024, -1521.0 / 25600, 17017.0 / 138240, -17017.0 / 248832, 0},
        {35.0 / 32768, -96833.0 / 4300800, 144001.0 / 1720320, -1062347.0 / 9953280, 1062347.0 / 23887872},
    }};

    // Same polynomials in u = cot^2(beta), all coefficients positive.
    static constexpr std::array<std::array<double, max_degree>, count> a_above = [] {
        auto a = a_below;
        for (auto& row : a)
            for (auto& c : row) c = c < 0 ? -c : c;
        return a;
    }();

    static double eval(const std::array<double, max_degree>& row, double c) {
        return detail::horner(row.data(), max_degree, c);
    }
};

namespace detail {
// Gamma(j + 1/2) / Gamma(1/2)
inline constexpr std::array<double, 5> half_pochhammer = {1.0, 0.5, 0.75, 1.875, 6.5625};
}  // namespace detail

inline ExpansionResult debye_below(const BesselQuery& q, int m_max = 4) {
    detail::Stopwatch sw;
    detail::check_order(m_max, 4, "m_max");
    const int mm = q.policy().clamp_terms(m_max);
    const double nu = q.order(), x = q.argument();
    if (!(nu > 0.0)) throw Error(ErrorKind::InvalidInput, "Debye needs nu > 0");
    if (!(x > 0.0 && x < nu)) throw Error(ErrorKind::WrongRegime, "debye_below needs 0 < x < nu");

    const double r = std::sqrt((nu - x) * (nu + x)) / nu;  // tanh(alpha_D)
    const double c = 1.0 / (r * r);
    const double h = 0.5 * nu * r;
    double sum = 0.0, last = 0.0, hp = 1.0;
    for (int m = 0; m <= mm; ++m) {
        last = detail::half_pochhammer[m] * DebyeCoefficients::eval(DebyeCoefficients::a_below[m], c) / hp;
        sum += last;
        hp *= h;
    }
    if (mm == 0) last = detail::half_pochhammer[1] * DebyeCoefficients::eval(DebyeCoefficients::a_below[1], c) / h;
    const double lead = std::exp(-nu * detail::atanh_minus_r(r, x / nu)) / std::sqrt(2.0 * std::numbers::pi * nu * r);
    ExpansionResult out;
    out.method = Method::DebyeBelow;
    out.terms_used = mm;
    out.value = lead * sum;
    out.scale = std::fabs(out.value);
    out.est_error = std::fabs(lead * last);
    if (r * r < 10.0 * std::pow(nu, -2.0 / 3.0)) out.warnings |= PrecisionLoss;
    if (out.value == 0.0) out.warnings |= UnderflowWarning;
    out.elapsed = sw.elapsed();
    return out;
}

inline ExpansionResult debye_above(const BesselQuery& q, int m_max = 4) {
    detail::Stopwatch sw;
    detail::check_order(m_max, 4, "m_max");
    const int mm = q.policy().clamp_terms(m_max);
    const double nu = q.order(), x = q.argument();
    if (!(x > nu)) throw Error(ErrorKind::WrongRegime, "debye_above needs x > nu");

    const auto ph = detail::reduced_phase(nu, x, q.policy().phase_digits);
    const double u = (nu / ph.t) * (nu / ph.t);  // cot^2(beta)
    const double h = 0.5 * ph.t;                 // (1/2) nu tan(beta)
    double cs = 0.0, sn = 0.0, last = 0.0, hp = 1.0;
    auto term = [&](int m, double hpow) {
        return detail::half_pochhammer[m] * DebyeCoefficients::eval(DebyeCoefficients::a_above[m], u) / hpow;
    };
    for (int m = 0; m <= mm; ++m) {
        const double sign = (m / 2) % 2 ? -1.0 : 1.0;
        last = sign * term(m, hp);
        (m % 2 ? sn : cs) += last;
        hp *= h;
    }
    if (mm == 0) last = term(1, h);
    const double amp = std::sqrt(2.0 / (std::numbers::pi * ph.t));
    const double phi = ph.reduced - std::numbers::pi / 4;
    ExpansionResult out;
    out.method = Method::DebyeAbove;
    out.terms_used = mm;
    out.value = amp * (std::cos(phi) * cs + std::sin(phi) * sn);
    out.scale = amp * std::hypot(cs, sn);
    out.est_error = amp * std::fabs(last);
    if (nu > 0.0 && x / nu - 1.0 < 10.0 * std::pow(nu, -2.0 / 3.0)) out.warnings |= PrecisionLoss;
    out.elapsed = sw.elapsed();
    return out;
}

}  // namespace basym
