#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

// Time arithmetic. All schedule computation is exact integer nanoseconds;
// divisions round toward +inf for upper bounds and toward -inf for lower
// bounds so that computed bounds stay conservative.

namespace elevation {

using Nanos = std::int64_t;   // duration in nanoseconds
using Instant = std::int64_t; // point in time, nanoseconds since epoch 0

constexpr Nanos kMicro = 1'000;
constexpr Nanos kMilli = 1'000'000;
constexpr Nanos kSecond = 1'000'000'000;

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    // b > 0; rounds toward -inf
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b)
{
    return -floor_div(-a, b);
}

constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t b)
{
    return a - floor_div(a, b) * b;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    __int128 p = static_cast<__int128>(a) * b;
    if (p > INT64_MAX || p < INT64_MIN)
        throw std::overflow_error("64-bit time arithmetic overflow");
    return static_cast<std::int64_t>(p);
}

// "200us", "5ms", "7", "1.5ms" -> nanoseconds. Fractions are accepted only
// when they resolve to a whole number of nanoseconds.
inline Nanos parse_duration(std::string_view s)
{
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    std::int64_t whole = 0;
    size_t digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        whole = whole * 10 + (s[i] - '0');
        ++i;
        ++digits;
    }
    std::int64_t frac = 0, frac_den = 1;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            frac = frac * 10 + (s[i] - '0');
            frac_den *= 10;
            ++i;
            ++digits;
        }
    }
    if (digits == 0)
        throw std::invalid_argument("bad duration: " + std::string(s));
    std::string_view unit = s.substr(i);
    Nanos scale;
    if (unit.empty() || unit == "ns")
        scale = 1;
    else if (unit == "us")
        scale = kMicro;
    else if (unit == "ms")
        scale = kMilli;
    else if (unit == "s")
        scale = kSecond;
    else
        throw std::invalid_argument("bad duration unit: " + std::string(s));
    if ((frac * scale) % frac_den != 0)
        throw std::invalid_argument("duration not a whole number of ns: " + std::string(s));
    Nanos v = checked_mul(whole, scale) + (frac * scale) / frac_den;
    return neg ? -v : v;
}

inline std::string format_duration(Nanos ns)
{
    auto fits = [&](Nanos unit) { return ns % unit == 0; };
    if (ns == 0)
        return "0";
    if (fits(kSecond))
        return std::to_string(ns / kSecond) + "s";
    if (fits(kMilli))
        return std::to_string(ns / kMilli) + "ms";
    if (fits(kMicro))
        return std::to_string(ns / kMicro) + "us";
    return std::to_string(ns) + "ns";
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b)
{
    while (b != 0) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

inline std::int64_t lcm_checked(std::int64_t a, std::int64_t b)
{
    return checked_mul(a / gcd64(a, b), b);
}

} // namespace elevation
