#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "elevation/network.hpp"
#include "elevation/schedule.hpp"
#include "elevation/token_bucket.hpp"

// Single-egress-port schedule augmentation: iterative prolongation and
// deferment of scheduled transmission slots, emitting augmented GCL and
// PSFP windows.

namespace elevation {

struct ScheduledTx {
    StreamId stream;
    std::int64_t frame_index = 0;
    Instant release = 0;
    Nanos latency = 0;
    int pcp = 0;
    std::int64_t size_bits = 0;
    bool elevation_eligible = false; // mu bit of this frame index
    Instant open = 0;                // o_i
    Instant close = 0;               // c_i
};

struct AugmentedTx {
    ScheduledTx tx;
    Instant new_open = 0;  // o~_i
    Instant new_close = 0; // c~_i
    Instant theta = 0;     // worst-case transmission start
};

// [theta + d_max, release + L); empty when the prolonged start already
// exhausts the deadline budget.
inline Window elevate_window(Instant release, Nanos latency, Instant theta, Nanos d_max)
{
    return {theta + d_max, release + latency};
}

// Prolongs and defers the port's transmission slots so that, for any
// elevated-arrival process conforming to (b, r), every scheduled frame still
// completes by its new close time and the initial transmission order is
// preserved.
inline std::vector<AugmentedTx> augment_port(const Link& port, std::vector<ScheduledTx> txs,
                                             const TokenBucket& tb)
{
    for (size_t i = 1; i < txs.size(); ++i)
        if (txs[i - 1].open > txs[i].open)
            throw std::invalid_argument("augment_port: transmissions must be sorted by open time");
    Rational link_rate(port.rate_bps, kSecond);
    if (!(tb.rate_bits_per_ns < link_rate))
        throw std::runtime_error("elevated traffic saturates link " + port.src + "->" + port.dst);

    const Nanos burst = burst_delay(tb.bucket_bits, port.rate_bps, tb.rate_bits_per_ns);
    std::vector<AugmentedTx> out;
    out.reserve(txs.size());
    for (size_t i = 0; i < txs.size(); ++i) {
        AugmentedTx a;
        a.tx = txs[i];
        a.new_open = txs[i].open;
        if (!out.empty())
            a.new_open = std::max(a.new_open, out.back().new_open); // keep ordering on equal opens
        // Deferment: a higher-priority successor must not become eligible
        // while this slot can still be transmitting.
        if (!out.empty() && txs[i].pcp > txs[i - 1].pcp)
            a.new_open = std::max(a.new_open, out.back().new_close);

        const Nanos ser = port.serialization(txs[i].size_bits);
        // Direct delay: the full bucket drains at the gate opening.
        Instant theta = a.new_open + burst;
        // Indirect delay: the previous transmission runs late and tokens
        // accumulated while it was transmitting.
        if (!out.empty() && a.new_open <= out.back().new_close) {
            const Nanos prev_ser = port.serialization(txs[i - 1].size_bits);
            Instant t2 = out.back().new_close +
                         accumulation_delay(prev_ser, port.rate_bps, tb.rate_bits_per_ns);
            theta = std::max(theta, t2);
        }
        a.theta = theta;
        a.new_close = std::max(theta + ser, a.new_open + (txs[i].close - txs[i].open));
        out.push_back(a);
    }
    return out;
}

// Adds the augmented port's GCL and downstream PSFP entries. PSFP lives on
// bridges (incl. TSN translators); end devices get none.
inline void emit_port_entries(const NetworkGraph& net, const Link& port,
                              const std::vector<AugmentedTx>& txs, Schedule& schedule)
{
    const bool dst_has_psfp = net.vertices.at(port.dst) != VertexKind::EndDevice;
    for (const auto& a : txs) {
        schedule.add_gcl({port.src, port.dst}, a.tx.pcp, {a.new_open, a.new_close});
        if (!dst_has_psfp)
            continue;
        const Nanos dmin = port.d_min(a.tx.size_bits);
        const Nanos dmax = port.d_max(a.tx.size_bits);
        schedule.add_psfp(port.dst, a.tx.stream, {a.new_open + dmin, a.theta + dmax},
                          PsfpAction::Forward, a.tx.size_bits);
        if (a.tx.elevation_eligible)
            schedule.add_psfp(port.dst, a.tx.stream,
                              elevate_window(a.tx.release, a.tx.latency, a.theta, dmax),
                              PsfpAction::Elevate, a.tx.size_bits);
    }
}

} // namespace elevation
