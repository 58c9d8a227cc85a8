#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "elevation/network.hpp"
#include "elevation/stream.hpp"
#include "elevation/weakly_hard.hpp"

// Transmission Graph of an input schedule: one operation per frame-hop,
// conjunctive edges along routes, disjunctive edges ordering transmissions
// that share an exclusive link, and FIFO edges enforcing queue order for
// equal-priority frames. Longest paths over this DAG drive the multi-hop
// augmentation.

namespace elevation {

// Start times assigned by the primary scheduler: (stream, frame index,
// hop) -> transmission start, where hop h uses port (route[h], route[h+1]).
struct PrimarySchedule {
    Nanos hypercycle = 0;
    std::map<std::tuple<StreamId, std::int64_t, size_t>, Instant> starts;

    Instant start(const StreamId& s, std::int64_t i, size_t hop) const
    {
        auto it = starts.find({s, i, hop});
        if (it == starts.end())
            throw std::out_of_range("primary schedule misses " + s + "#" + std::to_string(i) +
                                    " hop " + std::to_string(hop));
        return it->second;
    }
};

using NodeId = std::int32_t;

enum class EdgeKind { Conjunctive, Disjunctive, Fifo };

struct TgEdge {
    NodeId from = 0;
    NodeId to = 0;
    EdgeKind kind = EdgeKind::Conjunctive;
    Nanos weight = 0; // FIFO weights may be negative
};

struct OpNode {
    StreamId stream;
    std::int64_t frame_index = 0;
    size_t hop = 0; // egress port (route[hop], route[hop+1])
    PortId port;
    int pcp = 0;
    std::int64_t size_bits = 0;
    Instant release = 0;
    Nanos latency = 0;
    bool elevation_eligible = false;
    Instant primary_start = 0;
};

struct TransmissionGraph {
    static constexpr NodeId kSource = 0;
    static constexpr NodeId kSink = 1;

    std::vector<OpNode> nodes; // [0]=source, [1]=sink placeholders
    std::vector<TgEdge> edges;
    std::vector<std::vector<size_t>> out_edges; // node -> edge indices
    // Compact disjunctive representation: per exclusive port, node ids in
    // transmission order; only adjacent pairs carry explicit edges.
    std::map<PortId, std::vector<NodeId>> port_sequence;

    size_t node_count() const { return nodes.size(); }

    NodeId add_node(OpNode n)
    {
        nodes.push_back(std::move(n));
        out_edges.emplace_back();
        return static_cast<NodeId>(nodes.size() - 1);
    }

    void add_edge(NodeId from, NodeId to, EdgeKind kind, Nanos weight)
    {
        edges.push_back({from, to, kind, weight});
        out_edges[static_cast<size_t>(from)].push_back(edges.size() - 1);
    }
};

namespace detail {

struct FrameCtx {
    const Stream* stream = nullptr;
    std::int64_t index = 0;
    Instant release = 0;
    std::vector<NodeId> hop_nodes;
};

} // namespace detail

inline TransmissionGraph build_graph(const PrimarySchedule& primary,
                                     const std::vector<Stream>& streams, const NetworkGraph& net)
{
    TransmissionGraph g;
    g.add_node({}); // source
    g.add_node({}); // sink

    std::vector<detail::FrameCtx> frames;
    for (const auto& s : streams) {
        if (s.sporadic)
            continue;
        const std::int64_t n_frames = primary.hypercycle / s.period;
        for (std::int64_t i = 0; i < n_frames; ++i) {
            detail::FrameCtx fc;
            fc.stream = &s;
            fc.index = i;
            fc.release = frame_release(s, i);
            for (size_t h = 0; h + 1 < s.route.size(); ++h) {
                OpNode op;
                op.stream = s.id;
                op.frame_index = i;
                op.hop = h;
                op.port = {s.route[h], s.route[h + 1]};
                op.pcp = s.pcp;
                op.size_bits = s.size_bits;
                op.release = fc.release;
                op.latency = s.latency;
                op.elevation_eligible = eligible(s.mu, i);
                op.primary_start = primary.start(s.id, i, h);
                fc.hop_nodes.push_back(g.add_node(std::move(op)));
            }
            frames.push_back(std::move(fc));
        }
    }

    // Conjunctive edges: source -> first hop (release), hop -> next hop
    // (d_max of the hop), last hop -> sink (d_max of the final hop).
    for (const auto& fc : frames) {
        const Stream& s = *fc.stream;
        g.add_edge(TransmissionGraph::kSource, fc.hop_nodes.front(), EdgeKind::Conjunctive,
                   fc.release);
        for (size_t h = 0; h + 1 < fc.hop_nodes.size(); ++h) {
            const Link& link = net.link(s.route[h], s.route[h + 1]);
            g.add_edge(fc.hop_nodes[h], fc.hop_nodes[h + 1], EdgeKind::Conjunctive,
                       link.d_max(s.size_bits));
        }
        const Link& last = net.link(s.route[s.route.size() - 2], s.route.back());
        g.add_edge(fc.hop_nodes.back(), TransmissionGraph::kSink, EdgeKind::Conjunctive,
                   last.d_max(s.size_bits));
    }

    // Per-port transmission sequences, ordered by the input schedule's start
    // times (ties: pcp descending, stream id, frame index). Only exclusive
    // (wired) links serialize transmissions.
    std::map<PortId, std::vector<NodeId>> seqs;
    for (NodeId id = 2; id < static_cast<NodeId>(g.node_count()); ++id) {
        const OpNode& op = g.nodes[static_cast<size_t>(id)];
        if (net.link(op.port.first, op.port.second).exclusive())
            seqs[op.port].push_back(id);
    }
    for (auto& [port, seq] : seqs) {
        std::sort(seq.begin(), seq.end(), [&](NodeId a, NodeId b) {
            const OpNode& x = g.nodes[static_cast<size_t>(a)];
            const OpNode& y = g.nodes[static_cast<size_t>(b)];
            return std::tie(x.primary_start, y.pcp, x.stream, x.frame_index) <
                   std::tie(y.primary_start, x.pcp, y.stream, y.frame_index);
        });
        for (size_t i = 0; i + 1 < seq.size(); ++i) {
            const OpNode& from = g.nodes[static_cast<size_t>(seq[i])];
            const Link& link = net.link(port.first, port.second);
            g.add_edge(seq[i], seq[i + 1], EdgeKind::Disjunctive, link.d_max(from.size_bits));
        }
    }
    g.port_sequence = seqs;

    // FIFO edges for every ordered equal-PCP pair on a port. Frames sharing
    // the previous link instead require the upstream disjunctive orientation
    // to be consistent.
    auto find_frame = [&](const OpNode& op) -> const detail::FrameCtx& {
        for (const auto& fc : frames)
            if (fc.stream->id == op.stream && fc.index == op.frame_index)
                return fc;
        throw std::logic_error("frame context lookup failed");
    };
    for (const auto& [port, seq] : seqs) {
        for (size_t a = 0; a < seq.size(); ++a) {
            for (size_t b = a + 1; b < seq.size(); ++b) {
                const OpNode& f = g.nodes[static_cast<size_t>(seq[a])];
                const OpNode& fp = g.nodes[static_cast<size_t>(seq[b])];
                if (f.pcp != fp.pcp)
                    continue;
                const detail::FrameCtx& fc = find_frame(f);
                const detail::FrameCtx& fpc = find_frame(fp);
                const bool f_first_hop = f.hop == 0;
                const bool fp_first_hop = fp.hop == 0;
                if (f_first_hop && fp_first_hop) {
                    // Shared talker egress: queue order is release order.
                    if (f.release > fp.release)
                        throw std::runtime_error("fifo violation at " + port.first + "->" +
                                                 port.second + ": " + f.stream + "#" +
                                                 std::to_string(f.frame_index) + " vs " + fp.stream +
                                                 "#" + std::to_string(fp.frame_index));
                    continue;
                }
                const Stream& sf = *fc.stream;
                const Stream& sfp = *fpc.stream;
                if (!f_first_hop && !fp_first_hop &&
                    sf.route[f.hop - 1] == sfp.route[fp.hop - 1]) {
                    // Shared previous link: the upstream disjunctive pair must
                    // have the same orientation.
                    PortId prev{sf.route[f.hop - 1], sf.route[f.hop]};
                    auto it = seqs.find(prev);
                    if (it != seqs.end()) {
                        const auto& pseq = it->second;
                        auto pa = std::find(pseq.begin(), pseq.end(), fc.hop_nodes[f.hop - 1]);
                        auto pb = std::find(pseq.begin(), pseq.end(), fpc.hop_nodes[fp.hop - 1]);
                        if (pa > pb)
                            throw std::runtime_error("fifo violation at " + port.first + "->" +
                                                     port.second + ": upstream order of " +
                                                     f.stream + " and " + fp.stream + " inverted");
                    }
                    continue;
                }
                if (!f_first_hop && !fp_first_hop) {
                    const Link& prev_f = net.link(sf.route[f.hop - 1], sf.route[f.hop]);
                    const Link& prev_fp = net.link(sfp.route[fp.hop - 1], sfp.route[fp.hop]);
                    g.add_edge(fc.hop_nodes[f.hop - 1], fpc.hop_nodes[fp.hop - 1], EdgeKind::Fifo,
                               prev_f.d_max(f.size_bits) - prev_fp.d_min(fp.size_bits));
                    continue;
                }
                if (f_first_hop) {
                    // f enqueues at its release; f' must not be enqueued earlier.
                    const Link& prev_fp = net.link(sfp.route[fp.hop - 1], sfp.route[fp.hop]);
                    g.add_edge(TransmissionGraph::kSource, fpc.hop_nodes[fp.hop - 1], EdgeKind::Fifo,
                               f.release - prev_fp.d_min(fp.size_bits));
                } else {
                    // f' enqueues at its release, which cannot be deferred;
                    // verify f's worst-case enqueue precedes it.
                    const Link& prev_f = net.link(sf.route[f.hop - 1], sf.route[f.hop]);
                    if (g.nodes[static_cast<size_t>(fc.hop_nodes[f.hop - 1])].primary_start +
                            prev_f.d_max(f.size_bits) >
                        fp.release)
                        throw std::runtime_error("fifo violation at " + port.first + "->" +
                                                 port.second + ": transit frame " + f.stream +
                                                 " cannot be ordered before release of " + fp.stream);
                }
            }
        }
    }
    return g;
}

// Kahn topological sort; errors on cycles (an inconsistent input ordering).
inline std::vector<NodeId> topo_sort(const TransmissionGraph& g)
{
    std::vector<int> indeg(g.node_count(), 0);
    for (const auto& e : g.edges)
        ++indeg[static_cast<size_t>(e.to)];
    std::vector<NodeId> order;
    std::vector<NodeId> ready;
    for (size_t i = 0; i < g.node_count(); ++i)
        if (indeg[i] == 0)
            ready.push_back(static_cast<NodeId>(i));
    while (!ready.empty()) {
        // smallest id first keeps the order deterministic
        auto it = std::min_element(ready.begin(), ready.end());
        NodeId n = *it;
        ready.erase(it);
        order.push_back(n);
        for (size_t ei : g.out_edges[static_cast<size_t>(n)]) {
            NodeId to = g.edges[ei].to;
            if (--indeg[static_cast<size_t>(to)] == 0)
                ready.push_back(to);
        }
    }
    if (order.size() != g.node_count())
        throw std::runtime_error("transmission graph contains a cycle");
    return order;
}

// Longest source->node path cost for every node; source is 0.
inline std::vector<Nanos> critical_path_costs(const TransmissionGraph& g)
{
    auto order = topo_sort(g);
    constexpr Nanos kUnreached = INT64_MIN;
    std::vector<Nanos> cost(g.node_count(), kUnreached);
    cost[TransmissionGraph::kSource] = 0;
    for (NodeId n : order) {
        if (cost[static_cast<size_t>(n)] == kUnreached)
            continue;
        for (size_t ei : g.out_edges[static_cast<size_t>(n)]) {
            const TgEdge& e = g.edges[ei];
            cost[static_cast<size_t>(e.to)] =
                std::max(cost[static_cast<size_t>(e.to)], cost[static_cast<size_t>(n)] + e.weight);
        }
    }
    return cost;
}

inline Nanos critical_path_cost(const TransmissionGraph& g, NodeId node)
{
    auto costs = critical_path_costs(g);
    if (costs[static_cast<size_t>(node)] == INT64_MIN)
        throw std::runtime_error("node unreachable from source");
    return costs[static_cast<size_t>(node)];
}

// Debug export: node/edge list with weights.
inline void export_dot(const TransmissionGraph& g, std::ostream& os)
{
    os << "digraph transmission {\n";
    for (size_t i = 0; i < g.node_count(); ++i) {
        if (i == TransmissionGraph::kSource)
            os << "  n0 [label=\"source\"];\n";
        else if (i == TransmissionGraph::kSink)
            os << "  n1 [label=\"sink\"];\n";
        else {
            const OpNode& op = g.nodes[i];
            os << "  n" << i << " [label=\"" << op.stream << "#" << op.frame_index << "@"
               << op.port.first << "->" << op.port.second << "\"];\n";
        }
    }
    for (const auto& e : g.edges) {
        const char* style = e.kind == EdgeKind::Conjunctive ? "solid"
                            : e.kind == EdgeKind::Disjunctive ? "bold"
                                                              : "dashed";
        os << "  n" << e.from << " -> n" << e.to << " [label=\"" << e.weight << "\", style="
           << style << "];\n";
    }
    os << "}\n";
}

} // namespace elevation
