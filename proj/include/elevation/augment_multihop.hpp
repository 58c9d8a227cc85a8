#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "elevation/augment_port.hpp"
#include "elevation/network.hpp"
#include "elevation/schedule.hpp"
#include "elevation/stream.hpp"
#include "elevation/token_bucket.hpp"
#include "elevation/transmission_graph.hpp"

// Network-wide schedule augmentation over the transmission graph: a single
// topological pass maintains per-operation critical costs (earliest starts)
// and per-port prolongation delays (latest starts under elevated traffic),
// emitting the augmented GCL/PSFP entries as it goes.

namespace elevation {

// Per-operation results of the augmentation, keyed like PrimarySchedule.
struct OpResult {
    Instant critical_cost = 0; // earliest transmission start
    Instant theta = 0;         // latest transmission start
    Instant close = 0;         // latest transmission completion (theta + ser)
    Window gcl_window;         // emitted gate window
};

struct AugmentResult {
    Schedule schedule;
    std::map<std::tuple<StreamId, std::int64_t, size_t>, OpResult> ops;
    std::map<PortId, TokenBucket> buckets;

    const OpResult& op(const StreamId& s, std::int64_t i, size_t hop) const
    {
        return ops.at({s, i, hop});
    }
};

// Token buckets for every port traversed by some stream: the elevated
// periodic traffic through the port plus sporadic specs whose streams use it.
inline std::map<PortId, TokenBucket> port_token_buckets(const NetworkGraph& net,
                                                        const std::vector<Stream>& streams,
                                                        const std::vector<SporadicSpec>& sporadics,
                                                        Nanos hypercycle)
{
    std::map<PortId, std::vector<Stream>> periodic;
    std::map<PortId, std::vector<SporadicSpec>> spor;
    for (const auto& s : streams) {
        for (size_t h = 0; h + 1 < s.route.size(); ++h) {
            PortId p{s.route[h], s.route[h + 1]};
            if (s.sporadic) {
                for (const auto& sp : sporadics)
                    if (sp.stream == s.id)
                        spor[p].push_back(sp);
            } else {
                periodic[p].push_back(s);
            }
        }
    }
    std::map<PortId, TokenBucket> out;
    for (const auto& s : streams) {
        for (size_t h = 0; h + 1 < s.route.size(); ++h) {
            PortId p{s.route[h], s.route[h + 1]};
            if (out.count(p))
                continue;
            out[p] = link_token_bucket(net.link(p.first, p.second), periodic[p], spor[p],
                                       hypercycle);
        }
    }
    return out;
}

inline AugmentResult augment_multihop(const NetworkGraph& net, const std::vector<Stream>& streams,
                                      const PrimarySchedule& primary,
                                      const std::vector<SporadicSpec>& sporadics = {})
{
    TransmissionGraph g = build_graph(primary, streams, net);
    auto order = topo_sort(g);

    AugmentResult res;
    res.schedule.hypercycle = primary.hypercycle;
    res.buckets = port_token_buckets(net, streams, sporadics, primary.hypercycle);

    std::vector<Instant> cost(g.node_count(), 0);
    std::vector<OpResult> op_res(g.node_count());
    std::map<PortId, Instant> theta;

    for (NodeId n : order) {
        const size_t ni = static_cast<size_t>(n);
        if (n == TransmissionGraph::kSink)
            continue;
        if (n == TransmissionGraph::kSource) {
            // Releases (and release-order FIFO bounds) seed the successors.
            for (size_t ei : g.out_edges[ni]) {
                const TgEdge& e = g.edges[ei];
                cost[static_cast<size_t>(e.to)] =
                    std::max(cost[static_cast<size_t>(e.to)], e.weight);
            }
            continue;
        }

        const OpNode& op = g.nodes[ni];
        const Link& link = net.link(op.port.first, op.port.second);
        const TokenBucket& tb = res.buckets.at(op.port);
        const Nanos ser = link.serialization(op.size_bits);
        const Nanos dmax = link.d_max(op.size_bits);
        const Nanos dmin = link.d_min(op.size_bits);

        // 1) Prolongation: the full bucket may drain right when the gate
        // opens at the earliest start. Exclusive ports share one egress
        // queue, so deferment carries over between transmissions (running
        // max); non-exclusive media transmit independently and defer each
        // frame on its own.
        const Nanos burst = burst_delay(tb.bucket_bits, link.rate_bps, tb.rate_bits_per_ns);
        Instant th = cost[ni] + burst;
        if (link.exclusive()) {
            Instant& shared = theta[op.port];
            shared = std::max(shared, th);
            th = shared;
        }

        // 2) Emit entries for this operation.
        Window gate{cost[ni], th + dmax};
        res.schedule.add_gcl(op.port, op.pcp, gate);
        if (net.vertices.at(op.port.second) != VertexKind::EndDevice) {
            res.schedule.add_psfp(op.port.second, op.stream, {cost[ni] + dmin, th + dmax},
                                  PsfpAction::Forward, op.size_bits);
            if (op.elevation_eligible)
                res.schedule.add_psfp(op.port.second, op.stream,
                                      elevate_window(op.release, op.latency, th, dmax),
                                      PsfpAction::Elevate, op.size_bits);
        }
        op_res[ni] = {cost[ni], th, th + ser, gate};
        res.ops[{op.stream, op.frame_index, op.hop}] = op_res[ni];

        // 3) Deferment of successors.
        for (size_t ei : g.out_edges[ni]) {
            const TgEdge& e = g.edges[ei];
            const size_t to = static_cast<size_t>(e.to);
            bool overlap_allowed = false;
            if (e.kind == EdgeKind::Disjunctive) {
                const OpNode& succ = g.nodes[to];
                overlap_allowed = succ.pcp <= op.pcp;
            }
            if (overlap_allowed) {
                cost[to] = std::max(cost[to], cost[ni] + e.weight);
                // If the successor's slot can still overlap this prolonged
                // transmission, tokens accumulated while it was serializing
                // add to the port's worst-case backlog.
                if (cost[to] <= op_res[ni].close) {
                    th = std::max(th, op_res[ni].close +
                                          accumulation_delay(ser, link.rate_bps,
                                                             tb.rate_bits_per_ns));
                    // disjunctive edges only exist on exclusive ports
                    theta[op.port] = std::max(theta[op.port], th);
                }
            } else {
                cost[to] = std::max(cost[to], th + e.weight);
            }
        }
    }

    res.schedule.merge_gcl();
    res.schedule.validate();
    return res;
}

// Worst-case arrival bound at the listener for one frame: latest start at
// the final hop plus that hop's d_max.
inline Instant worst_arrival(const NetworkGraph& net, const Stream& s, const AugmentResult& res,
                             std::int64_t frame_index)
{
    const size_t last_hop = s.route.size() - 2;
    const OpResult& op = res.op(s.id, frame_index, last_hop);
    const Link& link = net.link(s.route[last_hop], s.route.back());
    return op.theta + link.d_max(s.size_bits);
}

struct LatencyCheck {
    StreamId stream;
    std::int64_t frame_index = 0;
    Instant release = 0;
    Instant bound = 0; // worst-case arrival
    Nanos slack = 0;   // release + latency - bound; negative = violated
};

// Verifies that every scheduled frame's worst-case (non-elevated) arrival
// meets its latency requirement; returns per-frame slack, worst first.
inline std::vector<LatencyCheck> verify_latency(const NetworkGraph& net,
                                                const std::vector<Stream>& streams,
                                                const AugmentResult& res, Nanos hypercycle)
{
    std::vector<LatencyCheck> out;
    for (const auto& s : streams) {
        if (s.sporadic)
            continue;
        const std::int64_t n = hypercycle / s.period;
        for (std::int64_t i = 0; i < n; ++i) {
            LatencyCheck c;
            c.stream = s.id;
            c.frame_index = i;
            c.release = frame_release(s, i);
            c.bound = worst_arrival(net, s, res, i);
            c.slack = c.release + s.latency - c.bound;
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end(), [](const LatencyCheck& a, const LatencyCheck& b) {
        return std::tie(a.slack, a.stream, a.frame_index) <
               std::tie(b.slack, b.stream, b.frame_index);
    });
    return out;
}

} // namespace elevation
