#pragma once

// Arbitrary-precision reference values for J_nu(x), J_{+-1/3}(w) and K_{1/3}(w).

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "basym/core.hpp"
#include "basym/detail/elementary.hpp"
#include "basym/mp.hpp"

namespace basym {

inline constexpr int kOracleMaxDigits = 200;
inline constexpr long kOracleMaxWorkingDigits = 4000;

enum class OracleMethod { PowerSeries, BackwardRecurrence };

struct OracleValue {
    mp::Float value;
    int achieved_digits = 0;
    OracleMethod method = OracleMethod::PowerSeries;
    bool underflow = false;

    double to_double() const { return value.to_double(); }
};

namespace detail {

inline long series_guard_digits(double x) { return static_cast<long>(std::ceil(0.87 * x)) + 10; }

inline void check_digits(int digits) {
    if (digits < 1) throw Error(ErrorKind::InvalidInput, "digits must be positive");
    if (digits > kOracleMaxDigits)
        throw Error(ErrorKind::CapExceeded, "requested " + std::to_string(digits) + " digits, cap is " +
                                                std::to_string(kOracleMaxDigits));
}

inline void check_working(long wp) {
    if (wp > kOracleMaxWorkingDigits)
        throw Error(ErrorKind::CapExceeded, "needs " + std::to_string(wp) + " working digits, cap is " +
                                                std::to_string(kOracleMaxWorkingDigits) +
                                                "; use the asymptotic expansions here");
}

using OrderMaker = std::function<mp::Float(mpfr_prec_t)>;

// Ascending series sum_k (+-1)^k (x/2)^(nu+2k) / (k! Gamma(nu+k+1)), nu > -1.
// Precision grows until the observed cancellation leaves `digits` correct digits.
inline OracleValue ascending_series(const OrderMaker& make_nu, double x, int digits, long guard, bool modified) {
    long wp = digits + guard;
    check_working(wp);
    for (;;) {
        const mpfr_prec_t prec = mp::bits_for_digits(wp);
        const mp::Float nu = make_nu(prec);
        OracleValue out{mp::Float(prec), digits, OracleMethod::PowerSeries, false};
        if (x == 0.0) {
            out.value = mp::Float(nu.is_zero() ? 1L : 0L, prec);
            out.achieved_digits = static_cast<int>(wp);
            return out;
        }
        const mp::Float h = mp::Float(x, prec) / 2.0;
        const mp::Float q = h * h;
        mp::Float t = mp::exp(nu * mp::log(h) - mp::lngamma(nu + 1.0));
        mp::Float sum = t;
        long max_exp = t.exponent();
        const double half = x / 2.0;
        for (long k = 0;; ++k) {
            mp::Float d = (nu + static_cast<double>(k + 1)) * static_cast<double>(k + 1);
            t *= q;
            t /= d;
            if (!modified) t = -t;
            sum += t;
            if (!t.is_zero()) max_exp = std::max(max_exp, t.exponent());
            if (static_cast<double>(k) > half &&
                (t.is_zero() || (!sum.is_zero() && t.exponent() < sum.exponent() - static_cast<long>(prec) - 2)))
                break;
        }
        const long loss_digits = sum.is_zero() ? wp : static_cast<long>(std::ceil((max_exp - sum.exponent()) * 0.30103));
        const long achieved = wp - std::max(0L, loss_digits) - 2;
        if (achieved >= digits) {
            out.value = sum;
            out.achieved_digits = static_cast<int>(achieved);
            return out;
        }
        wp += (digits - achieved) + 10;
        check_working(wp);
    }
}

inline OrderMaker order_from_double(double nu) {
    return [nu](mpfr_prec_t prec) { return mp::Float(nu, prec); };
}

inline OrderMaker order_third(long sign) {
    return [sign](mpfr_prec_t prec) { return mp::Float(sign, prec) / 3.0; };
}

// Normalised values J_{f+k}(x), k = lo..hi, from Miller's backward recurrence.
// f in [0, 1); lo may be negative (recurrence continued below the normalising range).
inline std::vector<mp::Float> miller_sequence(double f, double x, long lo, long hi, int wp) {
    const mpfr_prec_t prec = mp::bits_for_digits(wp);
    const double top = std::max(static_cast<double>(hi) + f, x);
    long n = static_cast<long>(std::ceil(top)) + std::max(40L, static_cast<long>(std::ceil(10.0 * std::sqrt(x))));
    const double lnh = std::log(x / 2.0);
    const double nu_hi = static_cast<double>(hi) + f;
    const double ln_target = std::min(0.0, nu_hi * lnh - lgamma_safe(nu_hi + 1.0)) - (wp + 5) * std::log(10.0);
    while (n * lnh - lgamma_safe(n + 1.0) > ln_target) n += 10;
    if (n % 2) ++n;

    const mp::Float xf(x, prec);
    const mp::Float ff(f, prec);
    std::vector<mp::Float> out(static_cast<size_t>(hi - lo + 1), mp::Float(prec));
    mp::Float y_next(prec), y(1L, prec);  // y_{n+1}, y_n
    // Normalisation weights c_0 = Gamma(f+1), c_k = (f+2k) Gamma(f+k)/k!, walked downward by ratio.
    long kc = n / 2;
    mp::Float c = mp::gamma(ff + static_cast<double>(kc)) * (ff + static_cast<double>(2 * kc)) /
                  mp::gamma(mp::Float(static_cast<double>(kc + 1), prec));
    mp::Float norm(prec);
    auto visit = [&](long k, const mp::Float& v) {
        if (k >= 0 && k % 2 == 0) {
            const long j = k / 2;
            if (j == 0) {
                c = mp::gamma(ff + 1.0);
            } else {
                while (kc > j) {
                    const double m = static_cast<double>(kc - 1);
                    c *= (ff + 2.0 * m) * (m + 1.0);
                    c /= (ff + (2.0 * m + 2.0)) * (ff + m);
                    --kc;
                }
            }
            norm += c * v;
        }
        if (k >= lo && k <= hi) out[static_cast<size_t>(k - lo)] = v;
    };
    visit(n, y);
    for (long k = n; k > std::min(lo, 0L); --k) {
        mp::Float y_prev = (ff + static_cast<double>(k)) * 2.0 / xf * y - y_next;
        y_next = std::move(y);
        y = std::move(y_prev);
        visit(k - 1, y);
    }
    const mp::Float scale = mp::pow(xf / 2.0, ff) / norm;
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace detail

// J_nu(x) from the ascending series with guard digits ceil(0.87 x) + 10.
inline OracleValue exact_J(double nu, double x, int digits) {
    if (!std::isfinite(nu) || !std::isfinite(x) || nu < 0.0 || x < 0.0)
        throw Error(ErrorKind::InvalidInput, "exact_J needs finite nu >= 0 and x >= 0");
    detail::check_digits(digits);
    return detail::ascending_series(detail::order_from_double(nu), x, digits, detail::series_guard_digits(x), false);
}

// Independent path: normalised backward recurrence (any nu >= 0, x > 0).
inline OracleValue exact_J_backward(double nu, double x, int digits) {
    if (!std::isfinite(nu) || !std::isfinite(x) || nu < 0.0 || x < 0.0)
        throw Error(ErrorKind::InvalidInput, "exact_J_backward needs finite nu >= 0 and x >= 0");
    detail::check_digits(digits);
    const long wp = digits + 20;
    if (x == 0.0) {
        const mpfr_prec_t prec = mp::bits_for_digits(wp);
        return {mp::Float(nu == 0.0 ? 1L : 0L, prec), static_cast<int>(wp), OracleMethod::BackwardRecurrence, false};
    }
    detail::check_working(wp + static_cast<long>(nu + x) / 10);
    const double n = std::floor(nu);
    auto seq = detail::miller_sequence(nu - n, x, static_cast<long>(n), static_cast<long>(n), static_cast<int>(wp));
    return {std::move(seq.front()), digits, OracleMethod::BackwardRecurrence, false};
}

inline OracleValue exact_J_fractional_small(double order, double w, int digits) {
    long sign = 0;
    if (std::fabs(order - 1.0 / 3.0) < 1e-12) sign = 1;
    if (std::fabs(order + 1.0 / 3.0) < 1e-12) sign = -1;
    if (sign == 0) throw Error(ErrorKind::InvalidInput, "order must be +1/3 or -1/3");
    if (!(w >= 0.0 && w <= 50.0)) throw Error(ErrorKind::OutOfRange, "w must lie in [0, 50]");
    if (sign < 0 && w == 0.0) throw Error(ErrorKind::OutOfRange, "J_{-1/3}(w) diverges at w = 0");
    detail::check_digits(digits);
    return detail::ascending_series(detail::order_third(sign), w, digits, detail::series_guard_digits(w), false);
}

// K_{1/3}(w) = pi (I_{-1/3}(w) - I_{1/3}(w)) / sqrt(3).
inline OracleValue exact_K_third(double w, int digits) {
    if (!(w > 0.0 && w <= 700.0)) throw Error(ErrorKind::OutOfRange, "w must lie in (0, 700]");
    detail::check_digits(digits);
    long wp = digits + detail::series_guard_digits(w);
    for (;;) {
        detail::check_working(wp);
        auto im = detail::ascending_series(detail::order_third(-1), w, static_cast<int>(wp), 0, true);
        auto ip = detail::ascending_series(detail::order_third(1), w, static_cast<int>(wp), 0, true);
        const mpfr_prec_t prec = im.value.prec();
        mp::Float k = (im.value - ip.value) * mp::pi(prec) / mp::sqrt(mp::Float(3L, prec));
        const long loss = static_cast<long>(std::ceil((im.value.exponent() - k.exponent()) * 0.30103));
        const long achieved = wp - std::max(0L, loss) - 2;
        if (achieved >= digits) {
            OracleValue out{std::move(k), static_cast<int>(achieved), OracleMethod::PowerSeries, false};
            const double d = out.value.to_double();
            out.underflow = !(std::fabs(d) >= std::numeric_limits<double>::min());
            return out;
        }
        wp += (digits - achieved) + 10;
    }
}

// Working digits the series oracle would need, for cap checks before committing.
inline long oracle_working_digits(double x, int digits) { return digits + detail::series_guard_digits(x); }

inline bool oracle_within_cap(double x, int digits) {
    return digits <= kOracleMaxDigits && oracle_working_digits(x, digits) <= kOracleMaxWorkingDigits;
}

}  // namespace basym
