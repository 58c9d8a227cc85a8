#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "elevation/network.hpp"
#include "elevation/stream.hpp"
#include "elevation/time.hpp"

namespace elevation {

// Half-open window [start, end) on the modular timeline.
struct Window {
    Instant start = 0;
    Instant end = 0;

    Nanos length() const { return end - start; }
    bool empty() const { return end <= start; }
    bool contains(Instant t) const { return start <= t && t < end; }
    bool overlaps(const Window& o) const { return start < o.end && o.start < end; }
};

struct GclEntry {
    int queue = 0; // pcp 0..7
    Window window;
};

enum class PsfpAction { Forward, Elevate };

// Time not covered by any window for a (bridge, stream) with entries means
// discard (default-closed). max_bits caps how much may pass per window
// instance per cycle; 0 means unbounded.
struct PsfpEntry {
    StreamId stream;
    Window window;
    PsfpAction action = PsfpAction::Forward;
    std::int64_t max_bits = 0;
};

// Augmented TSN configuration: per-port GCLs and per-bridge PSFP entries,
// valid modulo the hypercycle H. Wrap-around windows are split into two
// modular entries on insertion.
struct Schedule {
    Nanos hypercycle = 0;
    std::map<PortId, std::vector<GclEntry>> gcl;
    std::map<VertexId, std::vector<PsfpEntry>> psfp;

    void add_gcl(const PortId& port, int queue, Window w)
    {
        for (const Window& part : split_mod(w))
            gcl[port].push_back({queue, part});
    }

    void add_psfp(const VertexId& bridge, const StreamId& stream, Window w, PsfpAction action,
                  std::int64_t max_bits)
    {
        for (const Window& part : split_mod(w))
            psfp[bridge].push_back({stream, part, action, max_bits});
    }

    // Normalizes to 0 <= start < H, splitting wrapped windows.
    std::vector<Window> split_mod(Window w) const
    {
        std::vector<Window> out;
        if (w.empty())
            return out;
        if (hypercycle <= 0)
            throw std::logic_error("schedule hypercycle not set");
        if (w.length() >= hypercycle) { // covers the whole cycle
            out.push_back({0, hypercycle});
            return out;
        }
        Instant s = floor_mod(w.start, hypercycle);
        Nanos len = w.length();
        if (s + len <= hypercycle) {
            out.push_back({s, s + len});
        } else {
            out.push_back({s, hypercycle});
            out.push_back({0, s + len - hypercycle});
        }
        return out;
    }

    // Same-queue windows on one port may abut or overlap after augmentation;
    // gates are a union, so merge them.
    void merge_gcl()
    {
        for (auto& [port, entries] : gcl) {
            std::vector<GclEntry> merged;
            for (int q = 0; q < 8; ++q) {
                std::vector<Window> ws;
                for (const auto& e : entries)
                    if (e.queue == q)
                        ws.push_back(e.window);
                std::sort(ws.begin(), ws.end(),
                          [](const Window& a, const Window& b) { return a.start < b.start; });
                for (const auto& w : ws) {
                    if (!merged.empty() && merged.back().queue == q &&
                        merged.back().window.end >= w.start)
                        merged.back().window.end = std::max(merged.back().window.end, w.end);
                    else
                        merged.push_back({q, w});
                }
            }
            entries = std::move(merged);
        }
    }

    // PSFP windows for one (bridge, stream) must be pairwise disjoint.
    void validate() const
    {
        for (const auto& [bridge, entries] : psfp) {
            std::map<StreamId, std::vector<Window>> per_stream;
            for (const auto& e : entries) {
                if (e.window.empty() || e.window.start < 0 || e.window.end > hypercycle)
                    throw std::invalid_argument("psfp window not normalized at " + bridge);
                per_stream[e.stream].push_back(e.window);
            }
            for (auto& [stream, ws] : per_stream) {
                std::sort(ws.begin(), ws.end(),
                          [](const Window& a, const Window& b) { return a.start < b.start; });
                for (size_t i = 1; i < ws.size(); ++i)
                    if (ws[i - 1].end > ws[i].start)
                        throw std::invalid_argument(
                            "overlapping psfp windows for " + stream + " at " + bridge + ": [" +
                            std::to_string(ws[i - 1].start) + ", " + std::to_string(ws[i - 1].end) +
                            ") and [" + std::to_string(ws[i].start) + ", " +
                            std::to_string(ws[i].end) + ")");
            }
        }
        for (const auto& [port, entries] : gcl)
            for (const auto& e : entries)
                if (e.window.empty() || e.window.start < 0 || e.window.end > hypercycle)
                    throw std::invalid_argument("gcl window not normalized at " + port.first + "->" +
                                                port.second);
    }
};

} // namespace elevation
