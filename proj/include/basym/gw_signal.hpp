#pragma once

// Fourier transform of the Doppler-shifted pulsar GW signal as a truncated
// sum over (n, l, m) of psi0 * psi1 * psi2 * psi3 * psi4.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "basym/core.hpp"
#include "basym/detail/elementary.hpp"
#include "basym/evaluator.hpp"
#include "basym/keyvalue.hpp"
#include "basym/mp.hpp"

namespace basym {

using cplx = std::complex<double>;

struct GwParams {
    double f0 = 1000.0;
    std::optional<double> omega;  // analysis angular frequency; omega_0 when unset
    double T_rE = 86400.0;
    double omega_r = 2.0 * std::numbers::pi / 86400.0;
    double omega_orb = 2.0 * std::numbers::pi / (365.0 * 86400.0);
    double A = 1.5e11;
    double R_E = 6.371e6;
    double c = 299792458.0;
    double alpha = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    int R = 1;
    int n_min = -50;
    int n_max = 50;
    int l_max = 20;

    double omega0() const { return 2.0 * std::numbers::pi * f0; }
    double analysis_omega() const { return omega ? *omega : omega0(); }
    double k() const { return 4.0 * std::numbers::pi * f0 * R_E * std::sin(alpha) / c; }
    double bessel_arg() const { return 2.0 * std::numbers::pi * f0 * A * std::sin(theta) / c; }

    void validate() const {
        auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidInput, m); };
        if (!(f0 > 0) || !(analysis_omega() > 0) || !(omega_r > 0) || !(omega_orb > 0) || !(T_rE > 0))
            bad("frequencies and T_rE must be positive");
        if (!(A > 0) || !(R_E > 0) || !(c > 0)) bad("A, R_E and c must be positive");
        const double pi = std::numbers::pi;
        if (!(alpha >= 0 && alpha <= pi) || !(theta >= 0 && theta <= pi)) bad("alpha and theta must lie in [0, pi]");
        if (!(phi >= 0 && phi < 2 * pi)) bad("phi must lie in [0, 2 pi)");
        if (R < 1) bad("R must be >= 1");
        if (n_min > n_max) bad("n_min must not exceed n_max");
        if (l_max < 0) bad("l_max must be >= 0");
    }
};

inline GwParams gw_params_from(const KeyValues& kv) {
    GwParams p;
    std::optional<double> x_target, k_target;
    for (const auto& [key, value] : kv) {
        if (key == "f0") p.f0 = parse_real(value, key);
        else if (key == "omega") p.omega = parse_real(value, key);
        else if (key == "T_rE") p.T_rE = parse_real(value, key);
        else if (key == "omega_r") p.omega_r = parse_real(value, key);
        else if (key == "omega_orb") p.omega_orb = parse_real(value, key);
        else if (key == "A") p.A = parse_real(value, key);
        else if (key == "R_E") p.R_E = parse_real(value, key);
        else if (key == "c") p.c = parse_real(value, key);
        else if (key == "alpha") p.alpha = parse_real(value, key);
        else if (key == "theta") p.theta = parse_real(value, key);
        else if (key == "phi") p.phi = parse_real(value, key);
        else if (key == "R") p.R = static_cast<int>(parse_integer(value, key));
        else if (key == "n_min") p.n_min = static_cast<int>(parse_integer(value, key));
        else if (key == "n_max") p.n_max = static_cast<int>(parse_integer(value, key));
        else if (key == "l_max") p.l_max = static_cast<int>(parse_integer(value, key));
        else if (key == "bessel_arg") x_target = parse_real(value, key);
        else if (key == "k") k_target = parse_real(value, key);
        else throw Error(ErrorKind::MalformedFile, "unknown key '" + key + "'");
    }
    if (x_target) {
        if (kv.count("f0")) throw Error(ErrorKind::MalformedFile, "give either f0 or bessel_arg, not both");
        if (std::sin(p.theta) == 0.0) throw Error(ErrorKind::MalformedFile, "bessel_arg needs sin(theta) != 0");
        p.f0 = *x_target * p.c / (2.0 * std::numbers::pi * p.A * std::sin(p.theta));
    }
    if (k_target) {
        if (kv.count("R_E")) throw Error(ErrorKind::MalformedFile, "give either R_E or k, not both");
        if (std::sin(p.alpha) == 0.0) throw Error(ErrorKind::MalformedFile, "k needs sin(alpha) != 0");
        p.R_E = *k_target * p.c / (4.0 * std::numbers::pi * p.f0 * std::sin(p.alpha));
    }
    try {
        p.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::MalformedFile, e.what());
    }
    return p;
}

inline GwParams read_gw_params(std::istream& in) { return gw_params_from(parse_key_values(in)); }

inline double b_orb(const GwParams& p, int n, int m) {
    return 2.0 * ((p.analysis_omega() - p.omega0()) / p.omega_r + m / 2.0 + n * p.omega_orb / p.omega_r);
}

// Unnormalised P_l^m(u) with the Condon-Shortley phase.
inline double assoc_legendre(int l, int m, double u) {
    if (l < 0 || std::abs(m) > l) throw Error(ErrorKind::InvalidInput, "assoc_legendre needs |m| <= l, l >= 0");
    if (!(u >= -1.0 && u <= 1.0)) throw Error(ErrorKind::InvalidInput, "assoc_legendre needs u in [-1, 1]");
    const int am = std::abs(m);
    double pmm = 1.0;
    const double s = std::sqrt((1.0 - u) * (1.0 + u));
    for (int i = 1; i <= am; ++i) pmm *= -(2.0 * i - 1.0) * s;
    double result = pmm;
    if (l > am) {
        double prev = pmm, cur = u * (2.0 * am + 1.0) * pmm;
        for (int ll = am + 2; ll <= l; ++ll) {
            const double next = (u * (2.0 * ll - 1.0) * cur - (ll + am - 1.0) * prev) / (ll - am);
            prev = cur;
            cur = next;
        }
        result = cur;
    }
    if (m < 0) {
        const double ratio = std::exp(detail::lgamma_safe(l - am + 1.0) - detail::lgamma_safe(l + am + 1.0));
        result *= (am % 2 ? -1.0 : 1.0) * ratio;
    }
    return result;
}

inline double sph_norm(int l, int m) {
    return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) *
                     std::exp(detail::lgamma_safe(l - m + 1.0) - detail::lgamma_safe(l + m + 1.0)));
}

inline cplx spherical_harmonic(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw Error(ErrorKind::InvalidInput, "spherical_harmonic needs |m| <= l");
    const double a = sph_norm(l, m) * assoc_legendre(l, m, std::cos(theta));
    return {a * std::cos(m * phi), a * std::sin(m * phi)};
}

namespace detail {

inline bool nonpositive_integer(double b) { return b <= 0.0 && b == std::floor(b); }

inline double pfq_mp(double a, const double (&b)[3], double x, bool regularized, int digits) {
    long wp = digits;
    for (;;) {
        const mpfr_prec_t prec = mp::bits_for_digits(wp);
        const mp::Float xf(x, prec), af(a, prec);
        mp::Float t(1L, prec), sum(prec);
        // regularized in b2, b3: carry 1/(Gamma(b2+k) Gamma(b3+k)) per term
        auto rgamma = [&](double arg) {
            if (nonpositive_integer(arg)) return mp::Float(prec);
            return 1.0 / mp::gamma(mp::Float(arg, prec));
        };
        long max_exp = 0;
        bool any = false;
        const double kmin = std::cbrt(std::fabs(x)) + std::fabs(a) + std::fabs(b[0]) + std::fabs(b[1]) +
                            std::fabs(b[2]) + 4.0;
        for (long k = 0; k < 100000; ++k) {
            mp::Float term = t;
            if (regularized) term *= rgamma(b[1] + k) * rgamma(b[2] + k);
            sum += term;
            if (!term.is_zero()) {
                max_exp = any ? std::max(max_exp, term.exponent()) : term.exponent();
                any = true;
            }
            if (k > kmin && (term.is_zero() ? t.is_zero() : term.exponent() < sum.exponent() - static_cast<long>(prec)))
                break;
            t *= (af + static_cast<double>(k)) * xf;
            t /= static_cast<double>(k + 1);
            t /= mp::Float(b[0] + k, prec);
            if (!regularized) {
                t /= mp::Float(b[1] + k, prec);
                t /= mp::Float(b[2] + k, prec);
            }
        }
        if (sum.is_zero()) return 0.0;
        const long loss = static_cast<long>(std::ceil((max_exp - sum.exponent()) * 0.30103));
        if (wp - std::max(0L, loss) >= 17) return sum.to_double();
        wp += loss + 5;
        if (wp > kOracleMaxWorkingDigits) throw Error(ErrorKind::CapExceeded, "1F3 cancellation too severe");
    }
}

}  // namespace detail

inline constexpr double kHypergeomCap = 1e4;

inline double hypergeom_1F3(double a, double b1, double b2, double b3, double x) {
    if (detail::nonpositive_integer(b1) || detail::nonpositive_integer(b2) || detail::nonpositive_integer(b3))
        throw Error(ErrorKind::PoleInParameters, "1F3 lower parameter is a non-positive integer");
    if (!std::isfinite(x) || std::fabs(x) > kHypergeomCap)
        throw Error(ErrorKind::CapExceeded, "|x| exceeds the 1F3 cap; choose desk-scale parameters");
    if (x == 0.0) return 1.0;
    const double b[3] = {b1, b2, b3};
    if (b1 > 0 && b2 > 0 && b3 > 0) {
        double t = 1.0, sum = 1.0, tmax = 1.0;
        const double kmin = std::cbrt(std::fabs(x)) + std::fabs(a) + 4.0;
        for (int k = 0; k < 100000; ++k) {
            t *= (a + k) * x / ((k + 1.0) * (b1 + k) * (b2 + k) * (b3 + k));
            sum += t;
            tmax = std::max(tmax, std::fabs(t));
            if (k > kmin && std::fabs(t) < 1e-17 * std::fabs(sum)) break;
        }
        if (tmax <= 10.0 * std::fabs(sum)) return sum;
    }
    const int digits = 17 + static_cast<int>(std::ceil(1.8 * std::sqrt(std::fabs(x)))) + 5;
    return detail::pfq_mp(a, b, x, false, digits);
}

// 1F3 / (Gamma(b2) Gamma(b3)), finite for every b2, b3.
inline double hypergeom_1F3_regularized(double a, double b1, double b2, double b3, double x) {
    if (detail::nonpositive_integer(b1)) throw Error(ErrorKind::PoleInParameters, "b1 is a non-positive integer");
    if (!std::isfinite(x) || std::fabs(x) > kHypergeomCap) throw Error(ErrorKind::CapExceeded, "|x| exceeds the 1F3 cap");
    const double b[3] = {b1, b2, b3};
    const int digits = 17 + static_cast<int>(std::ceil(1.8 * std::sqrt(std::fabs(x)))) + 5;
    return detail::pfq_mp(a, b, x, true, digits);
}

inline cplx psi0(const GwParams& p, int l, int m) {
    return 4.0 * std::numbers::pi * detail::i_pow(l) * spherical_harmonic(l, m, p.theta, p.phi) * sph_norm(l, m) *
           assoc_legendre(l, m, std::cos(p.alpha));
}

struct Psi1 {
    cplx value;
    ExpansionResult bessel;  // J_|n|(X)
};

inline Psi1 psi1_detail(const GwParams& p, int n, const PrecisionConfig& prec = {}, const DispatchPolicy& policy = {}) {
    const double x = p.bessel_arg();
    const int an = std::abs(n);
    ExpansionResult j = eval_J(BesselQuery(an, x, prec), policy);
    double jn = j.value;
    if (n < 0 && an % 2) jn = -jn;
    const double ph = -x * std::cos(p.phi) - n * p.phi;
    const cplx v = p.T_rE * std::sqrt(std::numbers::pi / 2.0) * cplx(std::cos(ph), std::sin(ph)) * detail::i_pow(n) * jn;
    return {v, j};
}

inline cplx psi1(const GwParams& p, int n) { return psi1_detail(p, n).value; }

inline cplx psi2(const GwParams& p, int l, int n, int m) {
    const double b = b_orb(p, n, m);
    const double d = l - b;
    cplx s = 0.0;
    for (int j = 0; j < p.R; ++j) s += detail::cis_pi(d * j);
    return s * detail::cis_pi(-b / 2.0) / std::pow(4.0, l);
}

// Closed ratio form; undefined where l - B_orb is an even integer.
inline cplx psi2_ratio(const GwParams& p, int l, int n, int m) {
    const double b = b_orb(p, n, m);
    const double d = l - b;
    return (1.0 - detail::cis_pi(d * p.R)) / (1.0 - detail::cis_pi(d)) * detail::cis_pi(-b / 2.0) / std::pow(4.0, l);
}

namespace detail {
// log of k^(l+1/2) Gamma(l+1) / Gamma(l+3/2)
inline double psi3_log_head(double k, int l) {
    return (l + 0.5) * std::log(k) + lgamma_safe(l + 1.0) - lgamma_safe(l + 1.5);
}
}  // namespace detail

inline double psi3(const GwParams& p, int l, int n, int m) {
    const double b = b_orb(p, n, m);
    const double k = p.k();
    const auto g2 = detail::lgamma_signed((l + b + 2.0) / 2.0);
    const auto g3 = detail::lgamma_signed((l - b + 2.0) / 2.0);
    if (g2.sign == 0 || g3.sign == 0 || k == 0.0) return 0.0;
    return g2.sign * g3.sign * std::exp(detail::psi3_log_head(k, l) - g2.log_abs - g3.log_abs);
}

inline double psi4(const GwParams& p, int l, int n, int m) {
    const double b = b_orb(p, n, m);
    const double k = p.k();
    return hypergeom_1F3(l + 1.0, l + 1.5, (l + b + 2.0) / 2.0, (l - b + 2.0) / 2.0, -k * k / 16.0);
}

struct SignalTerm {
    int n = 0, l = 0, m = 0;
    double b_orb = 0.0;
    cplx psi0, psi1, psi2, psi3, psi4, product;
    bool regularized = false;  // psi3/psi4 refactored at a Gamma pole
};

struct FtOptions {
    PrecisionConfig precision{};
    DispatchPolicy dispatch{};
    bool keep_terms = false;
    size_t top = 10;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct FtResult {
    cplx total;
    std::vector<SignalTerm> terms;  // only with keep_terms, (n, l, m) order
    std::vector<SignalTerm> top;    // largest |product| first
    double tail_estimate = 0.0;     // |contribution of the l = l_max shell|
    bool truncation_warning = false;
    std::map<Method, int> bessel_methods;
};

inline SignalTerm make_term(const GwParams& p, int n, int l, int m, cplx p0, cplx p1) {
    SignalTerm t;
    t.n = n;
    t.l = l;
    t.m = m;
    t.b_orb = b_orb(p, n, m);
    t.psi0 = p0;
    t.psi1 = p1;
    t.psi2 = psi2(p, l, n, m);
    const double k = p.k();
    const double b2 = (l + t.b_orb + 2.0) / 2.0, b3 = (l - t.b_orb + 2.0) / 2.0;
    if (detail::nonpositive_integer(b2) || detail::nonpositive_integer(b3)) {
        t.regularized = true;
        t.psi3 = k == 0.0 ? 0.0 : std::exp(detail::psi3_log_head(k, l));
        t.psi4 = hypergeom_1F3_regularized(l + 1.0, l + 1.5, b2, b3, -k * k / 16.0);
    } else {
        t.psi3 = psi3(p, l, n, m);
        t.psi4 = psi4(p, l, n, m);
    }
    t.product = t.psi0 * t.psi1 * t.psi2 * t.psi3 * t.psi4;
    return t;
}

inline FtResult ft_signal(const GwParams& p, const FtOptions& opt = {}) {
    p.validate();
    const int L = p.l_max;
    std::vector<cplx> p0;
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) p0.push_back(psi0(p, l, m));

    const int nn = p.n_max - p.n_min + 1;
    std::vector<std::vector<SignalTerm>> by_n(static_cast<size_t>(nn));
    std::vector<Psi1> p1(static_cast<size_t>(nn));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (int i = next++; i < nn && !failed; i = next++) {
            try {
                const int n = p.n_min + i;
                p1[i] = psi1_detail(p, n, opt.precision, opt.dispatch);
                auto& row = by_n[i];
                row.reserve(p0.size());
                size_t idx = 0;
                for (int l = 0; l <= L; ++l)
                    for (int m = -l; m <= l; ++m, ++idx)
                        row.push_back(make_term(p, n, l, m, p0[idx], p1[i].value));
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = std::min<unsigned>(nt, static_cast<unsigned>(nn));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    // Sequential extended-precision accumulation in (n, l, m) order.
    const mpfr_prec_t prec = 160;
    mp::Float re(prec), im(prec), tre(prec), tim(prec);
    FtResult out;
    auto by_size = [](const SignalTerm& a, const SignalTerm& b) { return std::abs(a.product) > std::abs(b.product); };
    for (int i = 0; i < nn; ++i) {
        ++out.bessel_methods[p1[i].bessel.method];
        for (auto& t : by_n[i]) {
            re += t.product.real();
            im += t.product.imag();
            if (t.l == L) {
                tre += t.product.real();
                tim += t.product.imag();
            }
            if (opt.top > 0) {
                out.top.push_back(t);
                std::push_heap(out.top.begin(), out.top.end(), by_size);
                if (out.top.size() > opt.top) {
                    std::pop_heap(out.top.begin(), out.top.end(), by_size);
                    out.top.pop_back();
                }
            }
        }
        if (opt.keep_terms) {
            for (auto& t : by_n[i]) out.terms.push_back(std::move(t));
        }
        std::vector<SignalTerm>().swap(by_n[i]);
    }
    std::sort(out.top.begin(), out.top.end(), by_size);
    out.total = {re.to_double(), im.to_double()};
    out.tail_estimate = std::hypot(tre.to_double(), tim.to_double());
    out.truncation_warning = out.tail_estimate > 1e-6 * std::abs(out.total);
    return out;
}

inline void write_terms_csv(std::ostream& os, const std::vector<SignalTerm>& terms) {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "n,l,m,b_orb,re_psi0,im_psi0,re_psi1,im_psi1,re_psi2,im_psi2,re_psi3,im_psi3,re_psi4,im_psi4,"
          "re_product,im_product,regularized\n";
    for (const auto& t : terms) {
        os << t.n << ',' << t.l << ',' << t.m << ',' << num(t.b_orb);
        for (const cplx& z : {t.psi0, t.psi1, t.psi2, t.psi3, t.psi4, t.product})
            os << ',' << num(z.real()) << ',' << num(z.imag());
        os << ',' << (t.regularized ? 1 : 0) << '\n';
    }
}

}  // namespace basym
