#pragma once

// Small string helpers shared by the literal parsers.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace pedigrad::text {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

// Parses a non-negative decimal integer occupying the whole of `s`.
inline std::size_t parse_count(std::string_view s, std::size_t offset) {
    s = trim(s);
    if (s.empty()) throw ParseError("expected a number", offset);
    std::size_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw ParseError("expected a number, got '" + std::string(s) + "'", offset);
        if (v > (static_cast<std::size_t>(-1) - 9) / 10) throw ParseError("number too large", offset);
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
}

// Parses "[1,2,3]" (1-based indices, possibly empty) into 0-based values.
inline std::vector<std::size_t> parse_index_list(std::string_view s, std::size_t offset) {
    s = trim(s);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ParseError("expected an index list like [1,2,3]", offset);
    std::vector<std::size_t> out;
    const auto inner = trim(s.substr(1, s.size() - 2));
    if (inner.empty()) return out;
    for (auto item : split(inner, ',')) {
        const auto v = parse_count(item, offset);
        if (v == 0) throw ParseError("indices are 1-based; 0 is not allowed", offset);
        out.push_back(v - 1);
    }
    return out;
}

inline std::string format_index_list(const std::vector<std::size_t>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i] + 1);
    }
    return out + "]";
}

} // namespace pedigrad::text
