#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "elevation/rational.hpp"
#include "elevation/stream.hpp"
#include "elevation/weakly_hard.hpp"

// Per-link token buckets (b, r) bounding elevated-traffic arrivals, computed
// from the mu-patterns of the streams traversing the link, plus the sporadic
// variant. Rates are exact rationals in bits per nanosecond.

namespace elevation {

struct TokenBucket {
    std::int64_t bucket_bits = 0; // b
    Rational rate_bits_per_ns;    // r

    bool is_zero() const { return bucket_bits == 0 && rate_bits_per_ns.is_zero(); }

    Rational rate_bits_per_s() const
    {
        return Rational(i128_to_64(static_cast<__int128>(rate_bits_per_ns.num) * kSecond),
                        rate_bits_per_ns.den);
    }
};

namespace detail {

// Breakpoints of t -> N_F([t,t]) within [0, horizon): releases and
// window ends (release + L), both taken mod nothing — frames enumerated
// directly over the horizon.
inline std::vector<Instant> elevation_breakpoints(const std::vector<Stream>& streams,
                                                  Instant horizon)
{
    std::set<Instant> pts;
    pts.insert(0);
    for (const auto& s : streams) {
        if (s.sporadic || s.mu.all_zero())
            continue;
        for (std::int64_t i = 0;; ++i) {
            Instant rel = frame_release(s, i);
            if (rel >= horizon)
                break;
            pts.insert(rel);
            if (rel + s.latency < horizon)
                pts.insert(rel + s.latency);
        }
    }
    return {pts.begin(), pts.end()};
}

inline std::int64_t elevated_bits(const std::vector<Stream>& streams, Instant t1, Instant t2,
                                  bool inclusive_low)
{
    std::int64_t bits = 0;
    for (const auto& s : streams) {
        if (s.sporadic || s.mu.all_zero())
            continue;
        bits += s.size_bits * detail::count_elevatable_impl(s, t1, t2, inclusive_low);
    }
    return bits;
}

} // namespace detail

// b(u,v) = max_t sum_F size_F * N_F([t,t]); N is piecewise constant between
// release/release+L instants, so evaluating at those breakpoints is exact.
// The first cycle is a startup transient (frames with negative indices do
// not exist), so the steady-state maximum is only reached from t >= L_max
// onward; scanning [0, 2H) covers one full steady cycle.
inline std::int64_t bucket_size(const std::vector<Stream>& streams, Nanos hypercycle)
{
    std::int64_t best = 0;
    for (Instant t : detail::elevation_breakpoints(streams, 2 * hypercycle))
        best = std::max(best, detail::elevated_bits(streams, t, t, false));
    return best;
}

// r(u,v) = sup over intervals spanning up to 2H of
// (sum_F size_F*N_F([t1,t2]) - b)/(t2-t1), floored at 0. The supremum is
// approached as t1 tends to a window end from below; counting frames
// inclusively at t1 (release + L >= t1) makes it attained exactly at the
// breakpoints. Intervals start at t1 >= H so the startup transient (see
// bucket_size) does not dilute the counts.
inline Rational token_rate(const std::vector<Stream>& streams, Nanos hypercycle,
                           std::int64_t bucket_bits)
{
    auto all = detail::elevation_breakpoints(streams, 3 * hypercycle);
    std::vector<Instant> pts;
    for (Instant t : all)
        if (t >= hypercycle)
            pts.push_back(t);
    Rational best(0, 1);
    for (size_t a = 0; a < pts.size(); ++a) {
        for (size_t b = a + 1; b < pts.size(); ++b) {
            std::int64_t w = detail::elevated_bits(streams, pts[a], pts[b], true);
            if (w <= bucket_bits)
                continue;
            best = rat_max(best, Rational(w - bucket_bits, pts[b] - pts[a]));
        }
    }
    return best;
}

// Sporadic arrivals: simultaneous release is possible, so b sums the sizes;
// the long-run rate sums size/min_inter_event.
inline TokenBucket sporadic_bucket(const std::vector<SporadicSpec>& sporadics)
{
    TokenBucket tb;
    for (const auto& sp : sporadics) {
        if (sp.min_inter_event <= 0)
            throw std::invalid_argument("sporadic min inter-event must be positive");
        tb.bucket_bits += sp.size_bits;
        tb.rate_bits_per_ns = rat_add(tb.rate_bits_per_ns, Rational(sp.size_bits, sp.min_inter_event));
    }
    return tb;
}

// Combined bucket for one link: elevated periodic traffic plus sporadic
// arrival curves, with the saturation check against the link rate.
inline TokenBucket link_token_bucket(const Link& link, const std::vector<Stream>& streams,
                                     const std::vector<SporadicSpec>& sporadics, Nanos hypercycle)
{
    TokenBucket tb;
    tb.bucket_bits = bucket_size(streams, hypercycle);
    tb.rate_bits_per_ns = token_rate(streams, hypercycle, tb.bucket_bits);
    TokenBucket sp = sporadic_bucket(sporadics);
    tb.bucket_bits += sp.bucket_bits;
    tb.rate_bits_per_ns = rat_add(tb.rate_bits_per_ns, sp.rate_bits_per_ns);
    Rational link_rate(link.rate_bps, kSecond); // bits per ns
    if (!(tb.rate_bits_per_ns < link_rate))
        throw std::runtime_error("elevated traffic saturates link " + link.src + "->" + link.dst);
    return tb;
}

// ceil(bits / (R - r)) in ns, with R the link rate in bits/s and r in bits/ns.
inline Nanos burst_delay(std::int64_t bits, std::int64_t rate_bps, const Rational& r)
{
    if (bits == 0)
        return 0;
    // R - r = (rate_bps*den - num*1e9) / (den * 1e9) bits per ns
    __int128 num = static_cast<__int128>(rate_bps) * r.den - static_cast<__int128>(r.num) * kSecond;
    if (num <= 0)
        throw std::runtime_error("elevated traffic saturates link");
    __int128 n = static_cast<__int128>(bits) * r.den * kSecond;
    __int128 q = n / num;
    if (n % num != 0)
        ++q;
    return i128_to_64(q);
}

// ceil(d * r / (R - r)) in ns: tokens accumulating over a duration d,
// re-expressed as extra blocking time.
inline Nanos accumulation_delay(Nanos d, std::int64_t rate_bps, const Rational& r)
{
    if (d == 0 || r.is_zero())
        return 0;
    __int128 denom = static_cast<__int128>(rate_bps) * r.den - static_cast<__int128>(r.num) * kSecond;
    if (denom <= 0)
        throw std::runtime_error("elevated traffic saturates link");
    __int128 n = static_cast<__int128>(d) * r.num * kSecond;
    __int128 q = n / denom;
    if (n % denom != 0)
        ++q;
    return i128_to_64(q);
}

} // namespace elevation
