#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "elevation/network.hpp"
#include "elevation/time.hpp"

namespace elevation {

using StreamId = std::string;

// k-bit word selecting which frame indices (mod k) may be elevated.
// mu = "0" means never elevate; mu = "1" means every frame is eligible.
struct MuPattern {
    std::vector<bool> bits;

    MuPattern() : bits{false} {}
    explicit MuPattern(const std::string& word)
    {
        if (word.empty())
            throw std::invalid_argument("mu-pattern must have k >= 1");
        for (char c : word) {
            if (c != '0' && c != '1')
                throw std::invalid_argument("mu-pattern must be a 0/1 word: " + word);
            bits.push_back(c == '1');
        }
    }

    int k() const { return static_cast<int>(bits.size()); }
    int popcount() const { return static_cast<int>(std::count(bits.begin(), bits.end(), true)); }
    bool all_zero() const { return popcount() == 0; }

    bool bit(std::int64_t i) const { return bits[static_cast<size_t>(floor_mod(i, k()))]; }

    std::string str() const
    {
        std::string s;
        for (bool b : bits)
            s += b ? '1' : '0';
        return s;
    }
};

struct Stream {
    StreamId id;
    std::vector<VertexId> route; // talker first, listener last
    int pcp = 0;                 // 0..7
    Nanos period = 0;            // T
    Nanos phase = 0;             // phi, 0 <= phi < T
    std::int64_t size_bits = 0;
    Nanos latency = 0; // L <= T
    MuPattern mu;
    bool sporadic = false;          // sporadic streams are elevated traffic, not scheduled
    Nanos min_inter_event = 0;      // sporadic only

    const VertexId& talker() const { return route.front(); }
    const VertexId& listener() const { return route.back(); }
    size_t hops() const { return route.size() - 1; }

    void validate(const NetworkGraph& net) const
    {
        if (route.size() < 2)
            throw std::invalid_argument(id + ": route needs at least talker and listener");
        if (pcp < 0 || pcp > 7)
            throw std::invalid_argument(id + ": pcp out of range");
        if (!sporadic) {
            if (period <= 0)
                throw std::invalid_argument(id + ": period must be positive");
            if (latency > period)
                throw std::invalid_argument(id + ": latency must not exceed period");
            if (phase < 0 || phase >= period)
                throw std::invalid_argument(id + ": phase must satisfy 0 <= phi < T");
        } else if (min_inter_event <= 0) {
            throw std::invalid_argument(id + ": sporadic stream needs min inter-event time");
        }
        std::vector<VertexId> seen;
        for (size_t i = 0; i + 1 < route.size(); ++i) {
            if (!net.has_link(route[i], route[i + 1]))
                throw std::invalid_argument(id + ": route hop " + route[i] + "->" + route[i + 1] +
                                            " is not a link");
            if (std::find(seen.begin(), seen.end(), route[i]) != seen.end())
                throw std::invalid_argument(id + ": route is not a simple path");
            seen.push_back(route[i]);
        }
    }
};

// Sporadic arrival bound: at most one frame of size_bits per min_inter_event.
struct SporadicSpec {
    StreamId stream;
    std::int64_t size_bits = 0;
    Nanos min_inter_event = 0;
};

struct FrameInstance {
    StreamId stream;
    std::int64_t index = 0; // 0-based
    Instant release = 0;    // phi + i*T
};

// lcm of all periods; errors on 64-bit overflow.
inline Nanos hypercycle(const std::vector<Stream>& streams)
{
    Nanos h = 0;
    bool any = false;
    for (const auto& s : streams) {
        if (s.sporadic)
            continue;
        if (s.period <= 0)
            throw std::invalid_argument("hypercycle: period must be positive");
        any = true;
        try {
            h = h == 0 ? s.period : lcm_checked(h, s.period);
        } catch (const std::overflow_error&) {
            throw std::overflow_error("hypercycle overflow");
        }
    }
    if (!any)
        throw std::invalid_argument("hypercycle: empty stream set");
    return h;
}

// lcm of the elevation-behavior periods: a stream with a non-trivial
// mu-pattern of length k repeats its eligibility only every k*T, so any
// cyclic schedule or arrival bound must cover k*T, not just T.
inline Nanos elevation_hypercycle(const std::vector<Stream>& streams)
{
    Nanos h = 0;
    bool any = false;
    for (const auto& s : streams) {
        if (s.sporadic)
            continue;
        if (s.period <= 0)
            throw std::invalid_argument("hypercycle: period must be positive");
        any = true;
        Nanos span = s.mu.all_zero() ? s.period : checked_mul(s.period, s.mu.k());
        try {
            h = h == 0 ? span : lcm_checked(h, span);
        } catch (const std::overflow_error&) {
            throw std::overflow_error("hypercycle overflow");
        }
    }
    if (!any)
        throw std::invalid_argument("hypercycle: empty stream set");
    return h;
}

inline Instant frame_release(const Stream& s, std::int64_t i)
{
    if (i < 0)
        throw std::invalid_argument("frame index must be >= 0");
    return s.phase + checked_mul(i, s.period);
}

// Deadline check: arrival strictly before release + L (half-open interval).
inline bool meets_deadline(Instant release, Instant arrival, Nanos latency)
{
    return arrival < release + latency;
}

} // namespace elevation
