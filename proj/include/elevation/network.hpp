#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "elevation/rational.hpp"
#include "elevation/time.hpp"

namespace elevation {

using VertexId = std::string;

enum class VertexKind { Bridge, EndDevice, DsTt, NwTt };

inline const char* to_string(VertexKind k)
{
    switch (k) {
    case VertexKind::Bridge: return "bridge";
    case VertexKind::EndDevice: return "end-device";
    case VertexKind::DsTt: return "ds-tt";
    case VertexKind::NwTt: return "nw-tt";
    }
    return "?";
}

inline VertexKind vertex_kind_from(const std::string& s)
{
    if (s == "bridge") return VertexKind::Bridge;
    if (s == "end-device") return VertexKind::EndDevice;
    if (s == "ds-tt") return VertexKind::DsTt;
    if (s == "nw-tt") return VertexKind::NwTt;
    throw std::invalid_argument("unknown vertex kind: " + s);
}

enum class LinkKind { Wired, Wireless };

// Directed port (u,v). Each full-duplex physical link appears as two
// directed edges.
//
// Wired links store the non-serialization delay components; the per-frame
// bounds are assembled as serialization(size) + prop + proc (+ delay_var for
// the upper bound). Wireless links carry configured percentile bounds
// directly and are non-exclusive media: concurrent frames do not serialize
// against each other.
struct Link {
    VertexId src;
    VertexId dst;
    LinkKind kind = LinkKind::Wired;
    std::int64_t rate_bps = 100'000'000; // R_(u,v)
    Nanos prop_delay = 0;
    Nanos proc_delay = 0;
    Nanos delay_var = 0;    // wired: d_max - d_min
    Nanos wireless_min = 0; // wireless: configured percentile bounds
    Nanos wireless_max = 0;

    bool exclusive() const { return kind == LinkKind::Wired; }

    Nanos serialization(std::int64_t size_bits) const
    {
        return ceil_mul_div(size_bits, kSecond, rate_bps);
    }

    Nanos d_min(std::int64_t size_bits) const
    {
        if (kind == LinkKind::Wireless)
            return wireless_min;
        return serialization(size_bits) + prop_delay + proc_delay;
    }

    Nanos d_max(std::int64_t size_bits) const
    {
        if (kind == LinkKind::Wireless)
            return wireless_max;
        return serialization(size_bits) + prop_delay + proc_delay + delay_var;
    }
};

using PortId = std::pair<VertexId, VertexId>;

struct NetworkGraph {
    std::map<VertexId, VertexKind> vertices;
    std::map<PortId, Link> links;

    void add_vertex(const VertexId& id, VertexKind kind) { vertices[id] = kind; }

    void add_link(Link l)
    {
        if (!vertices.count(l.src) || !vertices.count(l.dst))
            throw std::invalid_argument("link references unknown vertex: " + l.src + "->" + l.dst);
        if (l.wireless_max < l.wireless_min || l.wireless_min < 0)
            throw std::invalid_argument("link delay bounds must satisfy 0 <= d_min <= d_max");
        links[{l.src, l.dst}] = std::move(l);
    }

    // Adds both directions with identical parameters.
    void add_duplex(Link l)
    {
        Link rev = l;
        std::swap(rev.src, rev.dst);
        add_link(std::move(l));
        add_link(std::move(rev));
    }

    const Link& link(const VertexId& u, const VertexId& v) const
    {
        auto it = links.find({u, v});
        if (it == links.end())
            throw std::out_of_range("no link " + u + "->" + v);
        return it->second;
    }

    bool has_link(const VertexId& u, const VertexId& v) const
    {
        return links.count({u, v}) != 0;
    }

    std::vector<VertexId> neighbors(const VertexId& u) const
    {
        std::vector<VertexId> out;
        for (auto it = links.lower_bound({u, std::string()}); it != links.end() && it->first.first == u; ++it)
            out.push_back(it->first.second);
        return out;
    }

    // BFS shortest path, lexicographic next-hop tie-break.
    std::optional<std::vector<VertexId>> shortest_path(const VertexId& from, const VertexId& to) const;
};

inline std::optional<std::vector<VertexId>> NetworkGraph::shortest_path(const VertexId& from,
                                                                        const VertexId& to) const
{
    std::map<VertexId, VertexId> prev;
    std::vector<VertexId> frontier{from};
    std::map<VertexId, bool> seen{{from, true}};
    while (!frontier.empty()) {
        std::vector<VertexId> next;
        for (const auto& u : frontier) {
            for (const auto& v : neighbors(u)) { // neighbors() is sorted by id
                if (seen.count(v))
                    continue;
                seen[v] = true;
                prev[v] = u;
                next.push_back(v);
            }
        }
        frontier = std::move(next);
    }
    if (!seen.count(to))
        return std::nullopt;
    std::vector<VertexId> path;
    for (VertexId v = to; v != from; v = prev[v])
        path.push_back(v);
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace elevation
