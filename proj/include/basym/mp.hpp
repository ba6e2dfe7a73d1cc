#pragma once

// Minimal value type over mpfr_t. Every object carries its own precision;
// binary operations produce the larger of the two operand precisions.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

namespace basym::mp {

inline constexpr mpfr_rnd_t rnd = MPFR_RNDN;

inline mpfr_prec_t bits_for_digits(long digits) {
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

class Float {
public:
    explicit Float(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Float(double d, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_d(v_, d, rnd);
    }
    Float(long n, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_si(v_, n, rnd);
    }
    Float(int n, mpfr_prec_t prec) : Float(static_cast<long>(n), prec) {}
    Float(const char* s, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_str(v_, s, 10, rnd);
    }
    Float(const Float& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, rnd);
    }
    // Copy of o rounded to a different precision.
    Float(const Float& o, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set(v_, o.v_, rnd);
    }
    Float(Float&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Float& operator=(const Float& o) {
        if (this != &o) {
            if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, rnd);
        }
        return *this;
    }
    Float& operator=(Float&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Float() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    double to_double() const { return mpfr_get_d(v_, rnd); }
    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    // Binary exponent e with 0.5 <= |v| 2^-e < 1; meaningless for zero.
    long exponent() const { return static_cast<long>(mpfr_get_exp(v_)); }

    std::string str(int digits) const {
        char* buf = nullptr;
        std::string fmt = "%." + std::to_string(digits) + "Re";
        mpfr_asprintf(&buf, fmt.c_str(), v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

    Float& operator+=(const Float& o) { widen(o); mpfr_add(v_, v_, o.v_, rnd); return *this; }
    Float& operator-=(const Float& o) { widen(o); mpfr_sub(v_, v_, o.v_, rnd); return *this; }
    Float& operator*=(const Float& o) { widen(o); mpfr_mul(v_, v_, o.v_, rnd); return *this; }
    Float& operator/=(const Float& o) { widen(o); mpfr_div(v_, v_, o.v_, rnd); return *this; }
    Float& operator+=(double d) { mpfr_add_d(v_, v_, d, rnd); return *this; }
    Float& operator-=(double d) { mpfr_sub_d(v_, v_, d, rnd); return *this; }
    Float& operator*=(double d) { mpfr_mul_d(v_, v_, d, rnd); return *this; }
    Float& operator/=(double d) { mpfr_div_d(v_, v_, d, rnd); return *this; }
    Float& operator*=(long n) { mpfr_mul_si(v_, v_, n, rnd); return *this; }
    Float& operator/=(long n) { mpfr_div_si(v_, v_, n, rnd); return *this; }

    Float operator-() const {
        Float r(*this);
        mpfr_neg(r.v_, r.v_, rnd);
        return r;
    }

private:
    void widen(const Float& o) {
        if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), rnd);
    }
    mpfr_t v_;
};

inline Float operator+(Float a, const Float& b) { return a += b; }
inline Float operator-(Float a, const Float& b) { return a -= b; }
inline Float operator*(Float a, const Float& b) { return a *= b; }
inline Float operator/(Float a, const Float& b) { return a /= b; }
inline Float operator+(Float a, double b) { return a += b; }
inline Float operator-(Float a, double b) { return a -= b; }
inline Float operator*(Float a, double b) { return a *= b; }
inline Float operator/(Float a, double b) { return a /= b; }
inline Float operator+(double a, Float b) { return b += a; }
inline Float operator*(double a, Float b) { return b *= a; }
inline Float operator-(double a, const Float& b) {
    Float r(b.prec());
    mpfr_d_sub(r.get(), a, b.get(), rnd);
    return r;
}
inline Float operator/(double a, const Float& b) {
    Float r(b.prec());
    mpfr_d_div(r.get(), a, b.get(), rnd);
    return r;
}

inline int cmp(const Float& a, const Float& b) { return mpfr_cmp(a.get(), b.get()); }
inline bool operator<(const Float& a, const Float& b) { return cmp(a, b) < 0; }
inline bool operator>(const Float& a, const Float& b) { return cmp(a, b) > 0; }
inline bool operator<=(const Float& a, const Float& b) { return cmp(a, b) <= 0; }
inline bool operator>=(const Float& a, const Float& b) { return cmp(a, b) >= 0; }
inline bool operator<(const Float& a, double b) { return mpfr_cmp_d(a.get(), b) < 0; }
inline bool operator>(const Float& a, double b) { return mpfr_cmp_d(a.get(), b) > 0; }

#define BASYM_MP_UNARY(name, fn)                  \
    inline Float name(const Float& a) {           \
        Float r(a.prec());                        \
        fn(r.get(), a.get(), rnd);                \
        return r;                                 \
    }
BASYM_MP_UNARY(abs, mpfr_abs)
BASYM_MP_UNARY(sqrt, mpfr_sqrt)
BASYM_MP_UNARY(exp, mpfr_exp)
BASYM_MP_UNARY(log, mpfr_log)
BASYM_MP_UNARY(log1p, mpfr_log1p)
BASYM_MP_UNARY(sin, mpfr_sin)
BASYM_MP_UNARY(cos, mpfr_cos)
BASYM_MP_UNARY(tan, mpfr_tan)
BASYM_MP_UNARY(atan, mpfr_atan)
BASYM_MP_UNARY(acos, mpfr_acos)
BASYM_MP_UNARY(atanh, mpfr_atanh)
BASYM_MP_UNARY(gamma, mpfr_gamma)
BASYM_MP_UNARY(lngamma, mpfr_lngamma)
#undef BASYM_MP_UNARY

inline Float atan2(const Float& y, const Float& x) {
    Float r(std::max(y.prec(), x.prec()));
    mpfr_atan2(r.get(), y.get(), x.get(), rnd);
    return r;
}
inline Float pow(const Float& a, const Float& b) {
    Float r(std::max(a.prec(), b.prec()));
    mpfr_pow(r.get(), a.get(), b.get(), rnd);
    return r;
}
inline Float pow(const Float& a, long n) {
    Float r(a.prec());
    mpfr_pow_si(r.get(), a.get(), n, rnd);
    return r;
}
inline Float pi(mpfr_prec_t prec) {
    Float r(prec);
    mpfr_const_pi(r.get(), rnd);
    return r;
}
// x - 2*pi*round(x / (2*pi)), result in [-pi, pi].
inline Float reduce_two_pi(const Float& x) {
    Float twopi = pi(x.prec()) * 2.0;
    Float r(x.prec());
    mpfr_remainder(r.get(), x.get(), twopi.get(), rnd);
    return r;
}

}  // namespace basym::mp
