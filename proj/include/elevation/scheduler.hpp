#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "elevation/network.hpp"
#include "elevation/schedule.hpp"
#include "elevation/stream.hpp"
#include "elevation/transmission_graph.hpp"

// Primary time-driven scheduler: greedy as-soon-as-possible placement with
// append-only per-port reservations. Frames are placed in a fixed global
// order, so every shared port sees the same relative order on every hop,
// which keeps the resulting schedule FIFO-consistent by construction.

namespace elevation {

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline PrimarySchedule schedule_primary(const NetworkGraph& net, const std::vector<Stream>& streams)
{
    PrimarySchedule out;
    std::vector<const Stream*> periodic;
    for (const auto& s : streams) {
        s.validate(net);
        if (!s.sporadic)
            periodic.push_back(&s);
    }
    if (periodic.empty())
        throw std::invalid_argument("schedule_primary: no periodic streams");
    std::vector<Stream> per;
    for (auto* p : periodic)
        per.push_back(*p);
    // The cycle must cover every stream's full mu-pattern: otherwise the
    // repeating configuration would disagree with per-index eligibility.
    out.hypercycle = elevation_hypercycle(per);

    struct Job {
        const Stream* s;
        std::int64_t index;
        Instant release;
        Instant deadline;
    };
    std::vector<Job> jobs;
    for (const Stream* s : periodic) {
        const std::int64_t n = out.hypercycle / s->period;
        for (std::int64_t i = 0; i < n; ++i) {
            Instant rel = frame_release(*s, i);
            jobs.push_back({s, i, rel, rel + s->latency});
        }
    }
    // Release order first: with the per-port cursor below, placement order
    // equals transmission order, so earlier releases must be placed earlier
    // or they would queue behind frames that are not even available yet.
    // Priority and deadline only break ties between simultaneous releases.
    std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
        return std::tie(a.release, b.s->pcp, a.deadline, a.s->id, a.index) <
               std::tie(b.release, a.s->pcp, b.deadline, b.s->id, b.index);
    });

    std::map<PortId, Instant> port_free; // end of last reservation per port
    for (const Job& j : jobs) {
        const Stream& s = *j.s;
        Instant t = j.release; // earliest enqueue at the next port
        std::vector<std::pair<PortId, Instant>> placed;
        for (size_t h = 0; h + 1 < s.route.size(); ++h) {
            PortId p{s.route[h], s.route[h + 1]};
            const Link& link = net.link(p.first, p.second);
            Instant start = t;
            if (link.exclusive()) {
                auto it = port_free.find(p);
                if (it != port_free.end())
                    start = std::max(start, it->second);
            }
            placed.emplace_back(p, start);
            t = start + link.d_max(s.size_bits);
        }
        if (t > j.deadline)
            throw InfeasibleError("infeasible: " + s.id + "#" + std::to_string(j.index) +
                                  " worst-case arrival " + std::to_string(t) + " ns exceeds deadline " +
                                  std::to_string(j.deadline) + " ns");
        for (size_t h = 0; h < placed.size(); ++h) {
            const auto& [p, start] = placed[h];
            const Link& link = net.link(p.first, p.second);
            if (link.exclusive())
                port_free[p] = start + link.serialization(s.size_bits);
            out.starts[{s.id, j.index, h}] = start;
        }
    }
    return out;
}

// Expands a primary schedule into a TSN configuration: exact gate windows
// [start, start + ser) per transmission, and (optionally) strict PSFP that
// forwards within [start + d_min, start + d_max) and discards otherwise.
inline Schedule primary_schedule_config(const NetworkGraph& net, const std::vector<Stream>& streams,
                                        const PrimarySchedule& primary, bool with_psfp)
{
    Schedule sched;
    sched.hypercycle = primary.hypercycle;
    for (const auto& s : streams) {
        if (s.sporadic)
            continue;
        const std::int64_t n = primary.hypercycle / s.period;
        for (std::int64_t i = 0; i < n; ++i) {
            for (size_t h = 0; h + 1 < s.route.size(); ++h) {
                PortId p{s.route[h], s.route[h + 1]};
                const Link& link = net.link(p.first, p.second);
                Instant start = primary.start(s.id, i, h);
                const Nanos ser = link.serialization(s.size_bits);
                // Non-exclusive links carry no serialization slot; keep the
                // gate open for the enqueue instant.
                sched.add_gcl(p, s.pcp, {start, start + std::max<Nanos>(ser, 1)});
                if (with_psfp && net.vertices.at(p.second) != VertexKind::EndDevice)
                    sched.add_psfp(p.second, s.id,
                                   {start + link.d_min(s.size_bits), start + link.d_max(s.size_bits)},
                                   PsfpAction::Forward, s.size_bits);
            }
        }
    }
    sched.merge_gcl();
    sched.validate();
    return sched;
}

} // namespace elevation
