#pragma once

// Pieces of the command-line front end that tests also exercise.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "basym/basym.hpp"

namespace basym::cli {

inline constexpr const char* kVersion = "1.0.0";

struct MethodChoice {
    std::string name;
    std::optional<Method> method;  // nullopt: auto dispatch
    bool watson_auto = false;      // pick WatsonBelow/Above by side
};

inline MethodChoice parse_method(const std::string& name) {
    static const std::vector<std::pair<std::string, Method>> table = {
        {"meissel1", Method::MeisselFirst},   {"meissel2", Method::MeisselSecond},
        {"meissel3", Method::MeisselThird},   {"debye-below", Method::DebyeBelow},
        {"debye-above", Method::DebyeAbove},  {"epsilon", Method::Epsilon},
        {"watson-below", Method::WatsonBelow}, {"watson-above", Method::WatsonAbove},
        {"oracle", Method::Oracle},           {"series", Method::SmallArgSeries},
    };
    if (name == "auto") return {name, std::nullopt, false};
    if (name == "watson") return {name, Method::WatsonAbove, true};
    for (const auto& [n, m] : table)
        if (n == name) return {name, m, false};
    throw Error(ErrorKind::InvalidInput, "unknown method '" + name + "'");
}

inline std::vector<MethodChoice> parse_method_list(const std::string& list) {
    std::vector<MethodChoice> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = detail::trim(item);
        if (!item.empty()) out.push_back(parse_method(item));
    }
    if (out.empty()) throw Error(ErrorKind::InvalidInput, "empty method list");
    return out;
}

// Evaluate one choice at its maximal truncation (or `terms` when given).
inline ExpansionResult run_choice(const MethodChoice& c, const BesselQuery& q, const DispatchPolicy& policy,
                                  std::optional<int> terms = std::nullopt) {
    if (!c.method) return eval_J(q, policy);
    Method m = *c.method;
    if (c.watson_auto) m = q.argument() < q.order() ? Method::WatsonBelow : Method::WatsonAbove;
    if (!terms) return run_method(m, q, policy);
    switch (m) {
        case Method::MeisselFirst: return meissel_first(q, *terms);
        case Method::MeisselSecond: return meissel_second(q, *terms);
        case Method::MeisselThird: {
            if (q.argument() != q.order()) throw Error(ErrorKind::WrongRegime, "Meissel Third needs x == nu");
            return meissel_third(q.order(), *terms, q.policy());
        }
        case Method::DebyeBelow: return debye_below(q, *terms);
        case Method::DebyeAbove: return debye_above(q, *terms);
        case Method::Epsilon: return epsilon_expansion(q, *terms, policy.epsilon_radius);
        default: return run_method(m, q, policy);
    }
}

struct Grid {
    double start = 0, stop = 0, step = 0;
    std::vector<double> points;
};

// "start:stop:step", stop inclusive when it lands on the lattice.
inline Grid parse_grid(const std::string& spec, bool allow_empty) {
    Grid g;
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw Error(ErrorKind::InvalidInput, "grid must be start:stop:step");
    try {
        g.start = std::stod(parts[0]);
        g.stop = std::stod(parts[1]);
        g.step = std::stod(parts[2]);
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput, "grid values must be numbers");
    }
    if (!(std::isfinite(g.start) && std::isfinite(g.stop) && std::isfinite(g.step)))
        throw Error(ErrorKind::InvalidInput, "grid values must be finite");
    if (!(g.step > 0)) throw Error(ErrorKind::InvalidInput, "x_step must be > 0");
    if (!(g.stop > g.start)) {
        if (allow_empty) return g;
        throw Error(ErrorKind::InvalidInput, "x_stop must exceed x_start");
    }
    const long n = static_cast<long>(std::floor((g.stop - g.start) / g.step + 1e-9)) + 1;
    if (n > 10'000'000) throw Error(ErrorKind::InvalidInput, "grid too large");
    for (long i = 0; i < n; ++i) g.points.push_back(g.start + static_cast<double>(i) * g.step);
    return g;
}

struct Settings {
    PrecisionConfig precision;
    DispatchPolicy dispatch;
};

inline void apply_policy(Settings& s, const KeyValues& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "transition_halfwidth") s.dispatch.transition_halfwidth = parse_real(value, key);
        else if (key == "small_arg_factor") s.dispatch.small_arg_factor = parse_real(value, key);
        else if (key == "epsilon_radius") s.dispatch.epsilon_radius = parse_real(value, key);
        else if (key == "allow_oracle") s.dispatch.allow_oracle = parse_integer(value, key) != 0;
        else if (key == "target_rel_error") s.precision.target_rel_error = parse_real(value, key);
        else if (key == "oracle_digits") s.precision.oracle_digits = static_cast<int>(parse_integer(value, key));
        else if (key == "max_terms") s.precision.max_terms = static_cast<int>(parse_integer(value, key));
        else if (key == "phase_digits") s.precision.phase_digits = static_cast<int>(parse_integer(value, key));
        else throw Error(ErrorKind::MalformedFile, "unknown policy key '" + key + "'");
    }
    try {
        s.precision.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::MalformedFile, e.what());
    }
}

inline Settings load_settings(const std::string& policy_file, std::optional<double> precision) {
    Settings s;
    if (!policy_file.empty()) {
        std::ifstream in(policy_file);
        if (!in) throw Error(ErrorKind::MalformedFile, "cannot open policy file '" + policy_file + "'");
        apply_policy(s, parse_key_values(in));
    }
    if (precision) {
        s.precision.target_rel_error = *precision;
        s.precision.validate();
    }
    return s;
}

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string short_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

inline std::string warning_list(unsigned w) {
    std::string out;
    auto add = [&](unsigned bit, const char* name) {
        if (w & bit) out += (out.empty() ? "" : ",") + std::string(name);
    };
    add(PrecisionLoss, "PrecisionLoss");
    add(UnderflowWarning, "Underflow");
    add(BestEffort, "BestEffort");
    add(TruncationWarning, "TruncationWarning");
    return out.empty() ? "none" : out;
}

inline std::string policy_summary(const Settings& s) {
    std::ostringstream os;
    os << "transition_halfwidth=" << s.dispatch.transition_halfwidth
       << " small_arg_factor=" << s.dispatch.small_arg_factor << " epsilon_radius=" << s.dispatch.epsilon_radius
       << " allow_oracle=" << (s.dispatch.allow_oracle ? 1 : 0)
       << " target_rel_error=" << s.precision.target_rel_error << " phase_digits=" << s.precision.phase_digits;
    return os.str();
}

inline std::string machine_summary() {
    std::ostringstream os;
#if defined(__clang__)
    os << "clang " << __clang_major__ << "." << __clang_minor__;
#elif defined(__GNUC__)
    os << "gcc " << __GNUC__ << "." << __GNUC_MINOR__;
#endif
#if defined(__x86_64__)
    os << " x86_64";
#elif defined(__aarch64__)
    os << " aarch64";
#endif
    os << " mpfr " << mpfr_get_version();
    return os.str();
}

}  // namespace basym::cli
