#pragma once

// `key = value` text files with `#` comments, shared by GW parameter
// files and dispatch-policy overrides.

#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <string>

#include "basym/core.hpp"

namespace basym {

using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_plain_number(const std::string& s, const std::string& key) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
        throw Error(ErrorKind::MalformedFile, "bad number '" + s + "' for key '" + key + "'");
    return v;
}

}  // namespace detail

inline KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::MalformedFile, "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorKind::MalformedFile, "line " + std::to_string(lineno) + ": empty key or value");
        if (!kv.emplace(key, value).second)
            throw Error(ErrorKind::MalformedFile, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return kv;
}

// number | [number *] pi [/ number]
inline double parse_real(const std::string& text, const std::string& key) {
    const std::string s = detail::trim(text);
    const auto p = s.find("pi");
    if (p == std::string::npos) return detail::parse_plain_number(s, key);
    double v = std::numbers::pi;
    std::string head = detail::trim(s.substr(0, p));
    std::string tail = detail::trim(s.substr(p + 2));
    if (!head.empty()) {
        if (head.back() != '*') throw Error(ErrorKind::MalformedFile, "bad value '" + s + "' for key '" + key + "'");
        head.pop_back();
        v *= detail::parse_plain_number(detail::trim(head), key);
    }
    if (!tail.empty()) {
        if (tail.front() != '/') throw Error(ErrorKind::MalformedFile, "bad value '" + s + "' for key '" + key + "'");
        const double d = detail::parse_plain_number(detail::trim(tail.substr(1)), key);
        if (d == 0.0) throw Error(ErrorKind::MalformedFile, "division by zero in '" + s + "'");
        v /= d;
    }
    return v;
}

inline long parse_integer(const std::string& text, const std::string& key) {
    const double v = detail::parse_plain_number(detail::trim(text), key);
    if (v != std::floor(v) || std::fabs(v) > 1e15)
        throw Error(ErrorKind::MalformedFile, "key '" + key + "' needs an integer, got '" + text + "'");
    return static_cast<long>(v);
}

}  // namespace basym
