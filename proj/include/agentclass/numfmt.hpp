#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "agentclass/errors.hpp"

namespace agentclass {

// Shortest round-trip representation, locale independent. Everything that must
// re-load bit-exactly (snapshots, reports, exported tables) goes through this.
inline std::string fmt_shortest(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

// Fixed-point form for display tables ('.' decimal, no locale).
inline std::string fmt_fixed(double v, int precision) {
    char buf[512];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    (void)ec;
    return std::string(buf, p);
}

inline bool try_parse_double(std::string_view s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc{} && p == e;
}

inline bool try_parse_u64(std::string_view s, std::uint64_t& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc{} && p == e;
}

// FNV-1a, used for input/output digests in run manifests and run ids.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace agentclass
