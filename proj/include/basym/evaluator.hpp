#pragma once

// Regime classification and the single entry point eval_J.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "basym/core.hpp"
#include "basym/debye.hpp"
#include "basym/meissel.hpp"
#include "basym/oracle.hpp"
#include "basym/transition.hpp"

namespace basym {

struct DispatchPolicy {
    double transition_halfwidth = 3.0;  // units of nu^(1/3)
    double small_arg_factor = 0.5;      // x < factor * sqrt(nu + 1)
    double epsilon_radius = kEpsilonRadius;
    bool allow_oracle = true;
    std::vector<Method> below = {Method::MeisselFirst, Method::DebyeBelow};
    std::vector<Method> above = {Method::MeisselSecond, Method::DebyeAbove};
    std::vector<Method> transition_below = {Method::Epsilon, Method::WatsonBelow};
    std::vector<Method> transition_above = {Method::Epsilon, Method::WatsonAbove};
    std::vector<Method> diagonal = {Method::MeisselThird, Method::Epsilon};
};

inline Regime classify(double nu, double x, const DispatchPolicy& policy = {}) {
    if (!std::isfinite(nu) || !std::isfinite(x) || nu < 0.0 || x < 0.0)
        throw Error(ErrorKind::InvalidInput, "classify needs finite nu >= 0 and x >= 0");
    const double unit = std::cbrt(nu);
    double margin;
    if (unit > 0.0)
        margin = (x - nu) / unit;
    else
        margin = x > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    const double c = policy.transition_halfwidth;
    if (x < policy.small_arg_factor * std::sqrt(nu + 1.0)) return {RegimeTag::SmallArgument, margin};
    if (margin < -c) return {RegimeTag::Below, margin};
    if (margin < 0.0) return {RegimeTag::TransitionBelow, margin};
    if (margin <= c) return {RegimeTag::TransitionAbove, margin};
    return {RegimeTag::Above, margin};
}

// Ascending series in double precision; only used where x^2/4 << nu + 1.
inline ExpansionResult small_arg_series(const BesselQuery& q) {
    detail::Stopwatch sw;
    const double nu = q.order(), x = q.argument();
    ExpansionResult out;
    out.method = Method::SmallArgSeries;
    if (x == 0.0) {
        out.value = nu == 0.0 ? 1.0 : 0.0;
        out.scale = out.value;
        out.est_error = 0.0;
        out.elapsed = sw.elapsed();
        return out;
    }
    const double h = 0.5 * x, q2 = h * h;
    double t = std::exp(nu * std::log(h) - detail::lgamma_safe(nu + 1.0));
    double sum = t;
    int k = 0;
    for (; k < 200; ++k) {
        t *= -q2 / ((k + 1.0) * (nu + k + 1.0));
        if (std::fabs(t) <= 1e-17 * std::fabs(sum)) break;
        sum += t;
    }
    out.value = sum;
    out.terms_used = k + 1;
    out.scale = std::fabs(sum);
    out.est_error = std::fabs(t) + 4e-16 * std::fabs(sum);
    if (sum == 0.0) out.warnings |= UnderflowWarning;
    out.elapsed = sw.elapsed();
    return out;
}

inline ExpansionResult oracle_result(const BesselQuery& q, int digits) {
    detail::Stopwatch sw;
    const auto ov = exact_J(q.order(), q.argument(), digits);
    ExpansionResult out;
    out.method = Method::Oracle;
    out.value = ov.to_double();
    out.scale = std::fabs(out.value);
    out.est_error = std::fabs(out.value) * std::pow(10.0, -ov.achieved_digits) +
                    std::fabs(out.value) * std::numeric_limits<double>::epsilon() / 2;
    out.rigorous = true;
    out.terms_used = ov.achieved_digits;
    out.elapsed = sw.elapsed();
    return out;
}

// Run a named method at its default truncation.
inline ExpansionResult run_method(Method m, const BesselQuery& q, const DispatchPolicy& policy = {}) {
    switch (m) {
        case Method::MeisselFirst: return meissel_first(q);
        case Method::MeisselSecond: return meissel_second(q);
        case Method::MeisselThird: {
            if (q.argument() != q.order())
                throw Error(ErrorKind::WrongRegime, "Meissel Third needs x == nu");
            return meissel_third(q.order(), 7, q.policy());
        }
        case Method::DebyeBelow: return debye_below(q);
        case Method::DebyeAbove: return debye_above(q);
        case Method::Epsilon: return epsilon_expansion(q, 15, policy.epsilon_radius);
        case Method::WatsonBelow: return watson_below(q);
        case Method::WatsonAbove: return watson_above(q);
        case Method::Oracle: return oracle_result(q, q.policy().resolved_oracle_digits());
        case Method::SmallArgSeries: return small_arg_series(q);
    }
    throw Error(ErrorKind::InvalidInput, "unknown method");
}

namespace detail {

inline bool acceptable(const ExpansionResult& r, double target) {
    if (r.has(PrecisionLoss) || r.has(UnderflowWarning) || !std::isfinite(r.value)) return false;
    if (!r.est_error) return false;
    return *r.est_error <= target * r.scale;
}

inline double badness(const ExpansionResult& r) {
    if (!std::isfinite(r.value)) return std::numeric_limits<double>::infinity();
    const auto rel = r.rel_est_error();
    return rel ? *rel : std::numeric_limits<double>::max();
}

}  // namespace detail

inline ExpansionResult eval_J(const BesselQuery& q, const DispatchPolicy& policy = {}) {
    detail::Stopwatch sw;
    const double nu = q.order(), x = q.argument();
    const Regime regime = classify(nu, x, policy);
    const double target = q.policy().target_rel_error;

    std::vector<Method> candidates;
    if (x == nu && nu > 0.0) {
        candidates = policy.diagonal;
    } else {
        switch (regime.tag) {
            case RegimeTag::SmallArgument: candidates = {Method::SmallArgSeries}; break;
            case RegimeTag::Below: candidates = policy.below; break;
            case RegimeTag::TransitionBelow: candidates = policy.transition_below; break;
            case RegimeTag::TransitionAbove: candidates = policy.transition_above; break;
            case RegimeTag::Above: candidates = policy.above; break;
        }
    }

    std::optional<ExpansionResult> best;
    auto finish = [&](ExpansionResult r) {
        r.elapsed = sw.elapsed();
        return r;
    };
    for (Method m : candidates) {
        try {
            ExpansionResult r = run_method(m, q, policy);
            if (detail::acceptable(r, target)) return finish(r);
            if (!best || detail::badness(r) < detail::badness(*best)) best = r;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::InvalidInput) throw;
        }
    }
    const int digits = q.policy().resolved_oracle_digits();
    if (policy.allow_oracle && oracle_within_cap(x, digits)) return finish(oracle_result(q, digits));
    if (!best) throw Error(ErrorKind::NoMethodApplicable, "no method produced a value for nu=" +
                                                              std::to_string(nu) + ", x=" + std::to_string(x));
    best->warnings |= BestEffort;
    return finish(*best);
}

}  // namespace basym
