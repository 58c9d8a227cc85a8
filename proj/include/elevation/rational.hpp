#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "elevation/time.hpp"

namespace elevation {

// Exact non-negative rational, used for token rates (bits per second).
// Comparisons and rounding use 128-bit cross multiplication; no floating
// point enters schedule math.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d)
    {
        if (den == 0)
            throw std::invalid_argument("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        normalize();
    }
    static Rational from_int(std::int64_t n) { return Rational(n, 1); }

    void normalize()
    {
        if (num == 0) {
            den = 1;
            return;
        }
        std::int64_t g = gcd64(num, den);
        num /= g;
        den /= g;
    }

    bool is_zero() const { return num == 0; }

    friend bool operator==(const Rational& a, const Rational& b)
    {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b)
    {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const
    {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

inline std::int64_t i128_to_64(__int128 v)
{
    if (v > INT64_MAX || v < INT64_MIN)
        throw std::overflow_error("rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

inline Rational rat_add(const Rational& a, const Rational& b)
{
    __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    __int128 g = d; // reduce in 128 bits before narrowing
    __int128 x = n < 0 ? -n : n;
    while (x != 0) {
        __int128 t = g % x;
        g = x;
        x = t;
    }
    if (g == 0)
        g = 1;
    return Rational(i128_to_64(n / g), i128_to_64(d / g));
}

inline Rational rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// ceil(mult * num / den), all exact. den > 0.
inline std::int64_t ceil_mul_div(std::int64_t mult, std::int64_t num, std::int64_t den)
{
    __int128 n = static_cast<__int128>(mult) * num;
    __int128 q = n / den;
    if (n % den != 0 && n > 0)
        ++q;
    if (n % den != 0 && n < 0) { /* toward +inf already */
    }
    return i128_to_64(q);
}

} // namespace elevation
