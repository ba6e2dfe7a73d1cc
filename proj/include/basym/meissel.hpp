#pragma once

// Meissel's expansions: First (x < nu), Second (x > nu) and Third (x = nu).

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "basym/core.hpp"
#include "basym/detail/elementary.hpp"
#include "basym/detail/phase.hpp"

namespace basym {

namespace detail {

inline void check_order(int k, int k_hi, const char* what) {
    if (k < 0 || k > k_hi)
        throw Error(ErrorKind::InvalidInput, std::string(what) + " must lie in [0, " + std::to_string(k_hi) + "]");
}

inline double horner(const double* c, int n, double u) {
    double acc = 0.0;
    for (int i = n - 1; i >= 0; --i) acc = acc * u + c[i];
    return acc;
}

}  // namespace detail

struct MeisselFirstTerms {
    static constexpr int count = 8;

    // V_1..V_8 at (z, nu); index 0 unused.
    static std::array<double, 9> v(double z, double nu) {
        const double z2 = z * z;
        const double s = (1.0 - z) * (1.0 + z);
        const double rs = 1.0 / std::sqrt(s);
        const double s3 = s * s * s;
        std::array<double, 9> out{};
        double ni = 1.0 / nu, p = ni;
        static constexpr double c3[] = {16, -1512, -3654, -375};
        static constexpr double c4[] = {0, 32, 288, 232, 13};
        static constexpr double c5[] = {256, 78720, 1891200, 4744640, 1914210, 67599};
        static constexpr double c6[] = {0, 48, 2580, 14884, 17493, 4242, 103};
        static constexpr double c7[] = {-2048,      881664,     99783936,  1135145088,
                                        2884531440, 1965889800, 318291750, 5635995};
        static constexpr double c8[] = {0,        1024,     248320,  5095936, 24059968,
                                        34280896, 15252048, 1765936, 23797};
        out[1] = p * ((2.0 + 3.0 * z2) * rs * rs * rs - 2.0) / 24.0;
        p *= ni;
        out[2] = -p * (4.0 * z2 + z2 * z2) / (16.0 * s3);
        p *= ni;
        out[3] = -p * (detail::horner(c3, 4, z2) * std::pow(rs, 9) - 16.0) / 5760.0;
        p *= ni;
        out[4] = -p * detail::horner(c4, 5, z2) / (128.0 * s3 * s3);
        p *= ni;
        out[5] = p * (detail::horner(c5, 6, z2) * std::pow(rs, 15) / 322560.0 - 1.0 / 1260.0);
        p *= ni;
        out[6] = -p * detail::horner(c6, 7, z2) / (192.0 * s3 * s3 * s3);
        p *= ni;
        out[7] = p * (detail::horner(c7, 8, z2) * std::pow(rs, 21) / 3440640.0 + 1.0 / 1680.0);
        p *= ni;
        out[8] = -p * detail::horner(c8, 9, z2) / (4096.0 * s3 * s3 * s3 * s3);
        return out;
    }
};

// P_k and Q_k written over T = sqrt(x^2 - nu^2), c = cot(beta) = nu/T and
// y = csc(beta) = x/T so that nu = 0 stays finite.
struct MeisselSecondTerms {
    static constexpr int count = 4;

    std::array<double, 5> p{};  // P_1..P_4
    std::array<double, 5> q{};  // Q_1..Q_4 without the leading nu(tan beta - beta)

    static MeisselSecondTerms at(double nu, double t) {
        MeisselSecondTerms r;
        const double c2 = (nu / t) * (nu / t);
        const double x2 = nu * nu + t * t;
        const double y2 = x2 / (t * t);
        // rho^a sec^(2j) = c^(2(e - j)) y^(2j) / T^a, e = 2k for P_k, e = 2k - 1 for Q_k
        auto form = [&](const double* coef, int n, int e, int a) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                if (coef[j] == 0.0) continue;
                acc += coef[j] * std::pow(c2, e - j) * std::pow(y2, j);
            }
            return acc / std::pow(t, a);
        };
        static constexpr double p1[] = {0, 4, 1};
        static constexpr double p2[] = {0, 32, 288, 232, 13};
        static constexpr double p3[] = {0, 48, 2580, 14884, 17493, 4242, 103};
        static constexpr double p4[] = {0,        1024,     248320,  5095936, 24059968,
                                        34280896, 15252048, 1765936, 23797};
        static constexpr double q1[] = {2, 3};
        static constexpr double q2[] = {16, -1512, -3654, -375};
        static constexpr double q3[] = {256, 78720, 1891200, 4744640, 1914210, 67599};
        static constexpr double q4[] = {-2048,      881664,     99783936,  1135145088,
                                        2884531440, 1965889800, 318291750, 5635995};
        r.p[1] = form(p1, 3, 2, 2) / 16.0;
        r.p[2] = -form(p2, 5, 4, 4) / 128.0;
        r.p[3] = form(p3, 7, 6, 6) / 192.0;
        r.p[4] = -form(p4, 9, 8, 8) / 4096.0;
        r.q[1] = -form(q1, 2, 1, 1) / 24.0;
        r.q[2] = -form(q2, 4, 3, 3) / 5760.0;
        r.q[3] = -form(q3, 6, 5, 5) / 322560.0;
        r.q[4] = form(q4, 8, 7, 7) / 3440640.0;
        return r;
    }
};

struct MeisselThirdCoefficients {
    static constexpr int count = 8;
    // lambda_m as exact numerator / denominator pairs
    static constexpr std::array<std::array<double, 2>, 8> lambda = {{
        {1, 1},
        {1, 60},
        {1, 1400},
        {1, 25200},
        {43, 17248000},
        {1213, 7207200000.0},
        {151439, 12713500800000.0},
        {33227, 38118080000000.0},
    }};
    static double value(int m) { return lambda[m][0] / lambda[m][1]; }
};

inline ExpansionResult meissel_first(const BesselQuery& q, int k_max = 8) {
    detail::Stopwatch sw;
    detail::check_order(k_max, 8, "k_max");
    const int k = q.policy().clamp_terms(k_max);
    const double nu = q.order(), x = q.argument();
    if (!(nu > 0.0)) throw Error(ErrorKind::InvalidInput, "Meissel First needs nu > 0");
    if (!(x > 0.0 && x < nu)) throw Error(ErrorKind::WrongRegime, "Meissel First needs 0 < x < nu");

    const double z = x / nu;
    const double r = std::sqrt((nu - x) * (nu + x)) / nu;
    const double s = r * r;
    const auto v = MeisselFirstTerms::v(z, nu);
    double vsum = 0.0;
    for (int i = 1; i <= k; ++i) vsum += v[i];

    const double ln_j = -nu * detail::atanh_minus_r(r, z) + detail::stirling_log_ratio(nu) - 0.25 * std::log(s) - vsum;
    ExpansionResult out;
    out.method = Method::MeisselFirst;
    out.terms_used = k;
    out.value = std::exp(ln_j);
    out.scale = out.value;
    out.est_error = std::fabs(v[std::max(k, 1)]) * out.value;
    if (s < 10.0 * std::pow(nu, -2.0 / 3.0)) out.warnings |= PrecisionLoss;
    if (out.value == 0.0) out.warnings |= UnderflowWarning;
    out.elapsed = sw.elapsed();
    return out;
}

inline ExpansionResult meissel_second(const BesselQuery& q, int k_max = 4) {
    detail::Stopwatch sw;
    detail::check_order(k_max, 4, "k_max");
    const int k = q.policy().clamp_terms(k_max);
    const double nu = q.order(), x = q.argument();
    if (!(x > nu)) throw Error(ErrorKind::WrongRegime, "Meissel Second needs x > nu");

    const auto ph = detail::reduced_phase(nu, x, q.policy().phase_digits);
    const auto terms = MeisselSecondTerms::at(nu, ph.t);
    double psum = 0.0, qsum = 0.0;
    for (int i = 1; i <= k; ++i) {
        psum += terms.p[i];
        qsum += terms.q[i];
    }
    const double amp = std::sqrt(2.0 / (std::numbers::pi * ph.t)) * std::exp(-psum);
    ExpansionResult out;
    out.method = Method::MeisselSecond;
    out.terms_used = k;
    out.value = amp * std::cos(ph.reduced + qsum - std::numbers::pi / 4);
    out.scale = amp;
    const int last = std::max(k, 1);
    out.est_error = amp * (std::fabs(terms.p[last]) + std::fabs(terms.q[last]));
    if (nu > 0.0 && x / nu - 1.0 < 10.0 * std::pow(nu, -2.0 / 3.0)) out.warnings |= PrecisionLoss;
    out.elapsed = sw.elapsed();
    return out;
}

// J_n(n) from Meissel's Third expansion.
inline ExpansionResult meissel_third(double n, int m_max = 7, const PrecisionConfig& policy = {}) {
    detail::Stopwatch sw;
    detail::check_order(m_max, 7, "m_max");
    if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorKind::InvalidInput, "Meissel Third needs n > 0");
    const int mm = policy.clamp_terms(m_max);
    double sum = 0.0, last = 0.0;
    for (int m = 0; m <= mm; ++m) {
        const double c = detail::cos_pi_sixth(2 * m + 1);
        if (c == 0.0) continue;
        const double e = (2.0 * m + 1.0) / 3.0;
        const double term =
            MeisselThirdCoefficients::value(m) * std::tgamma(2.0 * m / 3.0 + 4.0 / 3.0) * std::pow(6.0 / n, e) * c;
        sum += term;
        last = term;
    }
    ExpansionResult out;
    out.method = Method::MeisselThird;
    out.terms_used = mm;
    out.value = sum / std::numbers::pi;
    out.scale = std::fabs(out.value);
    out.est_error = std::fabs(last) / std::numbers::pi;
    out.elapsed = sw.elapsed();
    return out;
}

}  // namespace basym
