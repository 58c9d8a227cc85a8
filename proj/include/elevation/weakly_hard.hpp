#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "elevation/stream.hpp"
#include "elevation/time.hpp"

// mu-pattern semantics: per-frame eligibility, the elevation-count function
// N_F over time intervals, and the (m,k)-firm verdict over delivery traces.

namespace elevation {

struct MkRequirement {
    int m = 1;
    int k = 1;

    MkRequirement() = default;
    MkRequirement(int m_, int k_) : m(m_), k(k_)
    {
        if (m < 1 || m > k)
            throw std::invalid_argument("(m,k) requires 1 <= m <= k");
    }
};

enum class Outcome { Met, Missed };

struct DeliveryTrace {
    StreamId stream;
    std::vector<Outcome> outcomes; // indexed by frame index, contiguous from 0
};

// Frame i may be elevated iff mu_{i mod k} = 1.
inline bool eligible(const MuPattern& mu, std::int64_t i)
{
    if (i < 0)
        throw std::invalid_argument("frame index must be >= 0");
    return mu.bit(i);
}

namespace detail {

// Lowest/highest frame indices of a stream whose elevation window
// [release, release+L) can intersect [t1, t2]. Strict at the lower edge
// (release + L > t1); `inclusive_low` switches to release + L >= t1, which
// realizes the interval supremum used by the token-rate computation.
inline std::pair<std::int64_t, std::int64_t> elevatable_index_range(const Stream& s, Instant t1,
                                                                    Instant t2, bool inclusive_low)
{
    std::int64_t l;
    if (inclusive_low)
        l = ceil_div(t1 - s.phase - s.latency, s.period);
    else
        l = floor_div(t1 - s.phase - s.latency, s.period) + 1;
    std::int64_t h = floor_div(t2 - s.phase, s.period);
    if (l < 0)
        l = 0; // no frames before index 0
    return {l, h};
}

inline std::int64_t count_elevatable_impl(const Stream& s, Instant t1, Instant t2,
                                          bool inclusive_low)
{
    if (t1 > t2)
        throw std::invalid_argument("count_elevatable: t1 <= t2 required");
    auto [l, h] = elevatable_index_range(s, t1, t2, inclusive_low);
    if (h < l)
        return 0;
    std::int64_t k = s.mu.k();
    // Full pattern repetitions plus the remainder, without iterating frames.
    std::int64_t total = h - l + 1;
    std::int64_t full = total / k;
    std::int64_t count = full * s.mu.popcount();
    for (std::int64_t i = l + full * k; i <= h; ++i)
        count += s.mu.bit(i) ? 1 : 0;
    return count;
}

} // namespace detail

// N_F([t1, t2]): number of frames of `s` that can arrive elevated during
// the interval.
inline std::int64_t count_elevatable(const Stream& s, Instant t1, Instant t2)
{
    return detail::count_elevatable_impl(s, t1, t2, false);
}

struct MkVerdict {
    bool pass = true;
    std::optional<std::int64_t> first_violation; // window start index

    explicit operator bool() const { return pass; }
};

// Every window of k consecutive outcomes must contain >= m met. Only
// full-length windows are evaluated.
inline MkVerdict check_mk(const DeliveryTrace& trace, const MkRequirement& req)
{
    if (trace.outcomes.empty())
        throw std::invalid_argument("check_mk: empty trace");
    const auto& o = trace.outcomes;
    const std::int64_t n = static_cast<std::int64_t>(o.size());
    std::int64_t met = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        if (o[i] == Outcome::Met)
            ++met;
        if (i >= req.k && o[i - req.k] == Outcome::Met)
            --met;
        if (i >= req.k - 1 && met < req.m)
            return {false, i - req.k + 1};
    }
    return {true, std::nullopt};
}

// Cyclic-window validity: every k consecutive pattern positions (wrapping)
// contain >= m ones. Stronger than the popcount condition and what the
// policy needs, since frame indices run over all residues.
inline bool mu_satisfies(const MuPattern& mu, const MkRequirement& req)
{
    if (mu.k() != req.k)
        throw std::invalid_argument("mu_satisfies: pattern length must equal k");
    for (int start = 0; start < req.k; ++start) {
        int ones = 0;
        for (int j = 0; j < req.k; ++j)
            ones += mu.bits[(start + j) % req.k] ? 1 : 0;
        if (ones < req.m)
            return false;
    }
    return true;
}

// Simplified popcount condition, exposed for comparison; equivalent to the
// cyclic-window check when the pattern length equals k.
inline bool mu_popcount_satisfies(const MuPattern& mu, const MkRequirement& req)
{
    if (mu.k() != req.k)
        throw std::invalid_argument("mu_popcount_satisfies: pattern length must equal k");
    return mu.popcount() >= req.m;
}

} // namespace elevation
