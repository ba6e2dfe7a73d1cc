#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace basym {

enum class ErrorKind {
    InvalidInput,
    WrongRegime,
    CapExceeded,
    OutOfRange,
    OutOfValidity,
    Underflow,
    PoleInParameters,
    NoMethodApplicable,
    MalformedFile,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::WrongRegime: return "WrongRegime";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::OutOfValidity: return "OutOfValidity";
        case ErrorKind::Underflow: return "Underflow";
        case ErrorKind::PoleInParameters: return "PoleInParameters";
        case ErrorKind::NoMethodApplicable: return "NoMethodApplicable";
        case ErrorKind::MalformedFile: return "MalformedFile";
    }
    return "?";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Non-fatal conditions attached to a result; combined as a bit set.
enum Warning : unsigned {
    PrecisionLoss = 1u << 0,
    UnderflowWarning = 1u << 1,
    BestEffort = 1u << 2,
    TruncationWarning = 1u << 3,
};

enum class Method {
    MeisselFirst,
    MeisselSecond,
    MeisselThird,
    DebyeBelow,
    DebyeAbove,
    Epsilon,
    WatsonBelow,
    WatsonAbove,
    Oracle,
    SmallArgSeries,
};

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::MeisselFirst: return "MeisselFirst";
        case Method::MeisselSecond: return "MeisselSecond";
        case Method::MeisselThird: return "MeisselThird";
        case Method::DebyeBelow: return "DebyeBelow";
        case Method::DebyeAbove: return "DebyeAbove";
        case Method::Epsilon: return "Epsilon";
        case Method::WatsonBelow: return "WatsonBelow";
        case Method::WatsonAbove: return "WatsonAbove";
        case Method::Oracle: return "Oracle";
        case Method::SmallArgSeries: return "SmallArgSeries";
    }
    return "?";
}

struct PrecisionConfig {
    double target_rel_error = 1e-10;
    int oracle_digits = 0;  // 0 means auto
    std::optional<int> max_terms;
    int phase_digits = 34;

    void validate() const {
        if (!(target_rel_error > 0.0 && target_rel_error < 1.0))
            throw Error(ErrorKind::InvalidInput, "target_rel_error must lie in (0, 1)");
        if (oracle_digits < 0) throw Error(ErrorKind::InvalidInput, "oracle_digits must be positive or auto");
        if (max_terms && *max_terms < 0) throw Error(ErrorKind::InvalidInput, "max_terms must be non-negative");
        if (phase_digits < 17) throw Error(ErrorKind::InvalidInput, "phase_digits must be at least 17");
    }

    // Auto rule: the digits implied by the target plus five guard digits.
    int resolved_oracle_digits() const {
        if (oracle_digits > 0) return oracle_digits;
        return static_cast<int>(std::ceil(-std::log10(target_rel_error))) + 5;
    }

    int clamp_terms(int requested) const {
        return max_terms ? std::min(requested, *max_terms) : requested;
    }
};

class BesselQuery {
public:
    BesselQuery(double order, double argument, PrecisionConfig policy = {})
        : nu_(order), x_(argument), policy_(policy) {
        if (!std::isfinite(order) || !std::isfinite(argument))
            throw Error(ErrorKind::InvalidInput, "order and argument must be finite");
        if (argument < 0.0) throw Error(ErrorKind::InvalidInput, "argument must be >= 0");
        if (order < 0.0) throw Error(ErrorKind::InvalidInput, "order must be >= 0");
        policy_.validate();
    }

    double order() const { return nu_; }
    double argument() const { return x_; }
    const PrecisionConfig& policy() const { return policy_; }

    double z() const { return x_ / nu_; }
    // sech(alpha_D) = z, defined for z < 1.
    double alpha_d() const { return std::acosh(nu_ / x_); }
    // sec(beta) = z, defined for z > 1.
    double beta() const { return std::atan2(std::sqrt((x_ - nu_) * (x_ + nu_)), nu_); }

private:
    double nu_;
    double x_;
    PrecisionConfig policy_;
};

struct ExpansionResult {
    double value = 0.0;
    Method method = Method::Oracle;
    int terms_used = 0;
    std::optional<double> est_error;  // absolute
    bool rigorous = false;
    // Magnitude the error is judged against: |value| for monotone regimes,
    // the local envelope for oscillatory ones.
    double scale = 0.0;
    unsigned warnings = 0;
    std::chrono::nanoseconds elapsed{0};

    bool has(Warning w) const { return (warnings & w) != 0; }
    std::optional<double> rel_est_error() const {
        if (!est_error) return std::nullopt;
        return scale > 0.0 ? *est_error / scale : *est_error;
    }
};

enum class RegimeTag { SmallArgument, Below, TransitionBelow, TransitionAbove, Above };

inline std::string_view to_string(RegimeTag t) {
    switch (t) {
        case RegimeTag::SmallArgument: return "SmallArgument";
        case RegimeTag::Below: return "Below";
        case RegimeTag::TransitionBelow: return "TransitionBelow";
        case RegimeTag::TransitionAbove: return "TransitionAbove";
        case RegimeTag::Above: return "Above";
    }
    return "?";
}

struct Regime {
    RegimeTag tag;
    double margin;
};

namespace detail {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    std::chrono::nanoseconds elapsed() const {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start_);
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail
}  // namespace basym
