#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "elevation/network.hpp"
#include "elevation/schedule.hpp"
#include "elevation/stream.hpp"
#include "elevation/weakly_hard.hpp"

// Discrete-event simulator for augmented 5G-TSN configurations: per-port
// strict-priority transmission selection over gated FIFO queues, PSFP
// stream filtering with forward/elevate/discard semantics, configurable
// per-link delay models, and a flat event trace for offline analysis.

namespace elevation {

// Per-hop delay models. Samples are full hop delays (transmission start to
// enqueue at the next node). Histograms are (cumulative probability, delay)
// inverse-CDF tables, interpolated linearly. The epochal model switches
// between a stable and an unstable base model according to periodic
// unstable bursts.
struct BaseDelay {
    enum class Kind { Deterministic, Histogram };
    Kind kind = Kind::Deterministic;
    Nanos value = 0;
    std::vector<std::pair<double, Nanos>> cdf; // ascending cumulative prob

    Nanos sample(double u) const
    {
        if (kind == Kind::Deterministic)
            return value;
        if (cdf.empty())
            throw std::invalid_argument("histogram delay model without cdf points");
        double prev_p = 0.0;
        Nanos prev_d = cdf.front().second;
        for (const auto& [p, d] : cdf) {
            if (u <= p) {
                if (p <= prev_p)
                    return d;
                double frac = (u - prev_p) / (p - prev_p);
                return prev_d + static_cast<Nanos>(frac * static_cast<double>(d - prev_d));
            }
            prev_p = p;
            prev_d = d;
        }
        return cdf.back().second;
    }
};

struct DelayModel {
    enum class Kind { Default, Deterministic, Histogram, Epochal };
    Kind kind = Kind::Default;
    BaseDelay base;              // Deterministic/Histogram
    BaseDelay stable, unstable;  // Epochal
    Nanos epoch_period = 0;      // period of the unstable burst pattern
    Window unstable_window;      // burst interval within each epoch period

    bool unstable_at(Instant t) const
    {
        if (epoch_period <= 0)
            return false;
        Instant pos = floor_mod(t, epoch_period);
        return unstable_window.contains(pos);
    }

    Nanos sample(Instant now, double u) const
    {
        switch (kind) {
        case Kind::Default:
            throw std::logic_error("default delay model must be resolved per link");
        case Kind::Deterministic:
        case Kind::Histogram:
            return base.sample(u);
        case Kind::Epochal:
            return unstable_at(now) ? unstable.sample(u) : stable.sample(u);
        }
        return 0;
    }
};

// Externally injected frames (e.g. adversarial elevated traffic). Elevated
// injections enter queue 7 and bypass PSFP, like genuinely elevated frames.
struct Injection {
    StreamId id;
    Instant time = 0;
    std::vector<VertexId> route;
    int pcp = 7;
    std::int64_t size_bits = 0;
    bool elevated = true;
};

struct SimConfig {
    Nanos horizon = 0;   // simulated time span
    std::uint64_t seed = 1;
    std::map<VertexId, Nanos> clock_skew;   // local = global + skew
    std::map<PortId, DelayModel> delay_models;
    // Per-stream overrides take precedence over the port-wide model; used to
    // degrade a single stream's channel without touching the others.
    std::map<std::pair<PortId, StreamId>, DelayModel> stream_delay_models;
    std::vector<Injection> injections;
};

namespace detail {

// splitmix64: counter-based randomness so each (stream, frame, hop) draw is
// independent of simulation event order and of other streams' draws.
inline std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v)
{
    return mix64(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

inline std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s)
        h = (h ^ c) * 1099511628211ULL;
    return h;
}

inline double to_unit(std::uint64_t bits)
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace detail

enum class SimEventKind {
    Release,
    TxStart,
    TxEnd,
    Arrival,
    Forwarded,
    Elevated,
    Discarded,
    Delivered
};

inline const char* to_string(SimEventKind k)
{
    switch (k) {
    case SimEventKind::Release: return "release";
    case SimEventKind::TxStart: return "tx_start";
    case SimEventKind::TxEnd: return "tx_end";
    case SimEventKind::Arrival: return "arrival";
    case SimEventKind::Forwarded: return "forwarded";
    case SimEventKind::Elevated: return "elevated";
    case SimEventKind::Discarded: return "discarded";
    case SimEventKind::Delivered: return "delivered";
    }
    return "?";
}

struct SimRecord {
    Instant time = 0;
    SimEventKind kind = SimEventKind::Release;
    VertexId node;      // where it happened (src vertex for tx events)
    VertexId peer;      // dst vertex for tx/arrival events
    StreamId stream;
    std::int64_t frame_index = 0;
    int pcp = 0;
    std::string info;
};

struct StreamStats {
    std::int64_t released = 0;
    std::int64_t delivered = 0;
    std::int64_t met = 0;
    std::int64_t missed = 0;    // delivered late or never delivered
    std::int64_t discarded = 0; // dropped by PSFP
    std::int64_t elevated = 0;
    Nanos max_latency = 0;
    Nanos min_latency = std::numeric_limits<Nanos>::max();
};

struct SimResult {
    std::vector<SimRecord> trace;
    std::map<StreamId, StreamStats> stats;
    std::map<StreamId, DeliveryTrace> outcomes; // per frame index, Met/Missed
    std::int64_t frames_in_flight = 0;          // undelivered at horizon

    void export_csv(std::ostream& os) const
    {
        os << "time_ns,event,stream,frame_index,node,pcp,detail\n";
        for (const auto& r : trace) {
            std::string detail = r.info;
            if (!r.peer.empty())
                detail = detail.empty() ? "peer=" + r.peer : detail + ";peer=" + r.peer;
            os << r.time << ',' << to_string(r.kind) << ',' << r.stream << ',' << r.frame_index
               << ',' << r.node << ',' << r.pcp << ',' << detail << '\n';
        }
    }
};

namespace detail {

struct SimFrame {
    StreamId stream;
    std::int64_t frame_index = 0;
    std::vector<VertexId> route;
    size_t hop = 0; // next egress hop
    int pcp = 0;
    std::int64_t size_bits = 0;
    Instant release = 0;
    Nanos latency = 0; // 0 = no deadline (injection)
    bool elevated = false;
    bool tracked = true; // injections are not counted as stream frames
    std::uint64_t seq = 0;
};

struct SimEvent {
    Instant time = 0;
    int rank = 0; // tx_end=0, poke=1, ingress=2, tx_start=3
    std::string key;
    std::uint64_t seq = 0;
    enum class Kind { TxEnd, Poke, Release, Arrival, WirelessStart } kind = Kind::Poke;
    size_t frame = SIZE_MAX; // index into frame pool
    PortId port;

    bool operator>(const SimEvent& o) const
    {
        return std::tie(time, rank, key, seq) > std::tie(o.time, o.rank, o.key, o.seq);
    }
};

struct PortState {
    bool exclusive = true;
    Instant busy_until = std::numeric_limits<Instant>::min();
    size_t transmitting = SIZE_MAX;
    std::vector<std::deque<size_t>> queues{8};
    std::vector<std::vector<Window>> gate; // per queue, merged, sorted
};

} // namespace detail

class Simulator {
  public:
    Simulator(const NetworkGraph& net, std::vector<Stream> streams, const Schedule& schedule,
              SimConfig config)
        : net_(net), streams_(std::move(streams)), schedule_(schedule), cfg_(std::move(config))
    {
        if (cfg_.horizon <= 0)
            throw std::invalid_argument("simulation horizon must be positive");
        if (schedule_.hypercycle <= 0)
            throw std::invalid_argument("schedule hypercycle must be positive");
    }

    SimResult run()
    {
        init_ports();
        init_releases();
        init_injections();
        while (!events_.empty()) {
            detail::SimEvent ev = events_.top();
            events_.pop();
            if (ev.time >= cfg_.horizon)
                break;
            dispatch(ev);
        }
        finalize();
        return std::move(result_);
    }

  private:
    using FrameIdx = size_t;

    const NetworkGraph& net_;
    std::vector<Stream> streams_;
    Schedule schedule_;
    SimConfig cfg_;

    std::vector<detail::SimFrame> frames_;
    std::map<PortId, detail::PortState> ports_;
    std::map<std::tuple<VertexId, size_t, std::int64_t>, std::int64_t> psfp_used_;
    std::priority_queue<detail::SimEvent, std::vector<detail::SimEvent>, std::greater<>> events_;
    std::uint64_t seq_ = 0;
    SimResult result_;

    Nanos skew(const VertexId& v) const
    {
        auto it = cfg_.clock_skew.find(v);
        return it == cfg_.clock_skew.end() ? 0 : it->second;
    }

    const Stream* find_stream(const StreamId& id) const
    {
        for (const auto& s : streams_)
            if (s.id == id)
                return &s;
        return nullptr;
    }

    void record(Instant t, SimEventKind kind, const VertexId& node, const VertexId& peer,
                const detail::SimFrame& f, std::string info = {})
    {
        result_.trace.push_back({t, kind, node, peer, f.stream, f.frame_index, f.pcp,
                                 std::move(info)});
    }

    void push(detail::SimEvent ev)
    {
        ev.seq = seq_++;
        events_.push(std::move(ev));
    }

    void init_ports()
    {
        Schedule merged = schedule_;
        merged.merge_gcl();
        for (const auto& [port, entries] : merged.gcl) {
            detail::PortState& ps = ports_[port];
            ps.exclusive = net_.link(port.first, port.second).exclusive();
            ps.gate.assign(8, {});
            for (const auto& e : entries)
                ps.gate[static_cast<size_t>(e.queue)].push_back(e.window);
            for (auto& ws : ps.gate)
                std::sort(ws.begin(), ws.end(),
                          [](const Window& a, const Window& b) { return a.start < b.start; });
        }
    }

    detail::PortState& port_state(const PortId& p)
    {
        auto it = ports_.find(p);
        if (it != ports_.end())
            return it->second;
        detail::PortState& ps = ports_[p];
        ps.exclusive = net_.link(p.first, p.second).exclusive();
        ps.gate.assign(8, {});
        return ps;
    }

    void init_releases()
    {
        for (const auto& s : streams_) {
            s.validate(net_);
            if (s.sporadic) {
                // Elevated sporadic arrivals: inter-event gaps in
                // [min_inter_event, 2*min_inter_event), from a per-stream
                // random sequence independent of other streams.
                std::uint64_t h = detail::hash_combine(cfg_.seed, detail::fnv1a(s.id));
                std::uint64_t ctr = 0;
                auto u01 = [&] { return detail::to_unit(detail::mix64(h ^ ctr++)); };
                Instant t = static_cast<Instant>(u01() * static_cast<double>(s.min_inter_event));
                std::int64_t i = 0;
                while (t < cfg_.horizon) {
                    queue_release(s, i++, t, /*elevated=*/true);
                    t += s.min_inter_event +
                         static_cast<Nanos>(u01() * static_cast<double>(s.min_inter_event));
                }
            } else {
                for (std::int64_t i = 0;; ++i) {
                    // local = global + skew: a release at local time t_l
                    // happens at global t_l - skew.
                    Instant rel = frame_release(s, i) - skew(s.talker());
                    if (rel >= cfg_.horizon)
                        break;
                    queue_release(s, i, rel, /*elevated=*/false);
                }
            }
        }
    }

    void queue_release(const Stream& s, std::int64_t index, Instant t, bool elevated)
    {
        detail::SimFrame f;
        f.stream = s.id;
        f.frame_index = index;
        f.route = s.route;
        f.pcp = elevated ? 7 : s.pcp;
        f.size_bits = s.size_bits;
        f.release = t;
        f.latency = s.latency;
        f.elevated = elevated;
        frames_.push_back(std::move(f));
        detail::SimEvent ev;
        ev.time = t;
        ev.rank = 2;
        ev.key = s.id;
        ev.kind = detail::SimEvent::Kind::Release;
        ev.frame = frames_.size() - 1;
        push(ev);
    }

    void init_injections()
    {
        for (const auto& inj : cfg_.injections) {
            if (inj.route.size() < 2)
                throw std::invalid_argument("injection route needs at least two vertices");
            detail::SimFrame f;
            f.stream = inj.id;
            f.route = inj.route;
            f.pcp = inj.elevated ? 7 : inj.pcp;
            f.size_bits = inj.size_bits;
            f.release = inj.time;
            f.elevated = inj.elevated;
            f.tracked = false;
            frames_.push_back(std::move(f));
            detail::SimEvent ev;
            ev.time = inj.time;
            ev.rank = 2;
            ev.key = inj.id;
            ev.kind = detail::SimEvent::Kind::Release;
            ev.frame = frames_.size() - 1;
            push(ev);
        }
    }

    // Earliest local-clock-consistent global time >= t at which a frame of
    // `ser` bits-time fits a gate window of queue q on the port. Queue 7 is
    // always open. Returns nullopt when no window can ever fit.
    std::optional<Instant> fit_time(const PortId& port, const detail::PortState& ps, int q,
                                    Instant t, Nanos ser) const
    {
        if (q == 7)
            return t;
        const auto& ws = ps.gate[static_cast<size_t>(q)];
        if (ws.empty())
            return std::nullopt;
        const Nanos H = schedule_.hypercycle;
        const Nanos sk = skew(port.first);
        Instant local = t + sk;
        Instant base = floor_div(local, H) * H;
        // Wrapped schedules are stored split at the cycle boundary; stitch
        // [x, H) + [0, y) across consecutive cycles by extending window ends.
        auto window_end = [&](size_t wi, Instant cycle_base) -> Instant {
            Instant end = cycle_base + ws[wi].end;
            if (ws[wi].end == H && ws.front().start == 0)
                end = cycle_base + H + ws.front().end;
            return end;
        };
        for (int c = 0; c < 3; ++c) {
            Instant cb = base + static_cast<Instant>(c) * H;
            for (size_t wi = 0; wi < ws.size(); ++wi) {
                Instant s = std::max(local, cb + ws[wi].start);
                if (s + ser <= window_end(wi, cb))
                    return s - sk;
            }
        }
        return std::nullopt;
    }

    void dispatch(const detail::SimEvent& ev)
    {
        switch (ev.kind) {
        case detail::SimEvent::Kind::Release: {
            detail::SimFrame& f = frames_[ev.frame];
            if (f.tracked) {
                auto& st = result_.stats[f.stream];
                ++st.released;
                if (f.elevated)
                    ++st.elevated;
            }
            record(ev.time, SimEventKind::Release, f.route.front(), {}, f);
            enqueue(ev.frame, ev.time);
            break;
        }
        case detail::SimEvent::Kind::Arrival:
            on_arrival(ev.frame, ev.time);
            break;
        case detail::SimEvent::Kind::TxEnd: {
            detail::PortState& ps = ports_.at(ev.port);
            const detail::SimFrame& f = frames_[ev.frame];
            record(ev.time, SimEventKind::TxEnd, ev.port.first, ev.port.second, f);
            ps.transmitting = SIZE_MAX;
            try_start(ev.port, ev.time);
            break;
        }
        case detail::SimEvent::Kind::Poke:
            try_start(ev.port, ev.time);
            break;
        case detail::SimEvent::Kind::WirelessStart:
            start_wireless(ev.port, ev.frame, ev.time);
            break;
        }
    }

    void enqueue(FrameIdx fi, Instant t)
    {
        detail::SimFrame& f = frames_[fi];
        PortId port{f.route[f.hop], f.route[f.hop + 1]};
        detail::PortState& ps = port_state(port);
        if (!ps.exclusive) {
            // Non-exclusive (wireless) port: frames depart independently
            // once their gate window is reached.
            auto st = fit_time(port, ps, f.pcp, t, 0);
            if (!st)
                return; // gate never opens; frame is stuck
            if (*st == t) {
                start_wireless(port, fi, t);
            } else {
                detail::SimEvent ev;
                ev.time = *st;
                ev.rank = 3;
                ev.key = port.first + ">" + port.second;
                ev.kind = detail::SimEvent::Kind::WirelessStart;
                ev.frame = fi;
                ev.port = port;
                push(ev);
            }
            return;
        }
        ps.queues[static_cast<size_t>(f.pcp)].push_back(fi);
        try_start(port, t);
    }

    void start_wireless(const PortId& port, FrameIdx fi, Instant t)
    {
        detail::SimFrame& f = frames_[fi];
        record(t, SimEventKind::TxStart, port.first, port.second, f);
        schedule_arrival(port, fi, t);
    }

    void try_start(const PortId& port, Instant t)
    {
        detail::PortState& ps = ports_.at(port);
        if (ps.transmitting != SIZE_MAX)
            return; // TxEnd will re-poke
        if (ps.busy_until > t)
            return;
        const Link& link = net_.link(port.first, port.second);
        std::optional<Instant> next_poke;
        for (int q = 7; q >= 0; --q) {
            auto& queue = ps.queues[static_cast<size_t>(q)];
            if (queue.empty())
                continue;
            detail::SimFrame& f = frames_[queue.front()];
            const Nanos ser = link.serialization(f.size_bits);
            auto st = fit_time(port, ps, q, t, ser);
            if (!st)
                continue;
            if (*st == t) {
                FrameIdx fi = queue.front();
                queue.pop_front();
                ps.transmitting = fi;
                ps.busy_until = t + ser;
                record(t, SimEventKind::TxStart, port.first, port.second, f,
                       "queue=" + std::to_string(q));
                detail::SimEvent end;
                end.time = t + ser;
                end.rank = 0;
                end.key = port.first + ">" + port.second;
                end.kind = detail::SimEvent::Kind::TxEnd;
                end.frame = fi;
                end.port = port;
                push(end);
                schedule_arrival(port, fi, t);
                return;
            }
            if (!next_poke || *st < *next_poke)
                next_poke = *st;
        }
        if (next_poke) {
            detail::SimEvent ev;
            ev.time = *next_poke;
            ev.rank = 1;
            ev.key = port.first + ">" + port.second;
            ev.kind = detail::SimEvent::Kind::Poke;
            ev.port = port;
            push(ev);
        }
    }

    Nanos hop_delay(const PortId& port, const detail::SimFrame& f, Instant tx_start)
    {
        const Link& link = net_.link(port.first, port.second);
        const DelayModel* model = nullptr;
        auto so = cfg_.stream_delay_models.find({port, f.stream});
        if (so != cfg_.stream_delay_models.end())
            model = &so->second;
        else if (auto it = cfg_.delay_models.find(port); it != cfg_.delay_models.end())
            model = &it->second;
        if (!model || model->kind == DelayModel::Kind::Default)
            return link.d_min(f.size_bits);
        // Counter-based draw keyed by (seed, stream, frame, hop): one
        // stream's delay realization never perturbs another's.
        std::uint64_t h = detail::hash_combine(cfg_.seed, detail::fnv1a(f.stream));
        h = detail::hash_combine(h, static_cast<std::uint64_t>(f.frame_index));
        h = detail::hash_combine(h, static_cast<std::uint64_t>(f.hop));
        return model->sample(tx_start, detail::to_unit(h));
    }

    void schedule_arrival(const PortId& port, FrameIdx fi, Instant tx_start)
    {
        Nanos d = hop_delay(port, frames_[fi], tx_start);
        detail::SimEvent ev;
        ev.time = tx_start + d;
        ev.rank = 2;
        ev.key = port.second;
        ev.kind = detail::SimEvent::Kind::Arrival;
        ev.frame = fi;
        ev.port = port;
        push(ev);
    }

    void on_arrival(FrameIdx fi, Instant t)
    {
        detail::SimFrame& f = frames_[fi];
        const VertexId& node = f.route[f.hop + 1];
        record(t, SimEventKind::Arrival, node, f.route[f.hop], f);
        if (f.hop + 2 == f.route.size()) {
            deliver(fi, t, node);
            return;
        }
        // PSFP stream filtering at bridges. Already-elevated frames travel
        // in PCP 7 and pass downstream filters unchanged.
        if (!f.elevated && net_.vertices.at(node) != VertexKind::EndDevice) {
            auto it = schedule_.psfp.find(node);
            if (it != schedule_.psfp.end()) {
                const auto& entries = it->second;
                bool has_entries = false;
                std::optional<size_t> match;
                Instant local = t + skew(node);
                Instant cycle = floor_div(local, schedule_.hypercycle);
                Instant pos = floor_mod(local, schedule_.hypercycle);
                for (size_t ei = 0; ei < entries.size(); ++ei) {
                    if (entries[ei].stream != f.stream)
                        continue;
                    has_entries = true;
                    if (entries[ei].window.contains(pos)) {
                        match = ei;
                        break;
                    }
                }
                if (has_entries) {
                    if (!match) {
                        discard(fi, t, node, "no psfp window");
                        return;
                    }
                    const PsfpEntry& e = entries[*match];
                    if (e.max_bits > 0) {
                        auto key = std::make_tuple(node, *match, cycle);
                        std::int64_t& used = psfp_used_[key];
                        if (used + f.size_bits > e.max_bits) {
                            discard(fi, t, node, "psfp budget");
                            return;
                        }
                        used += f.size_bits;
                    }
                    if (e.action == PsfpAction::Elevate) {
                        f.elevated = true;
                        f.pcp = 7;
                        record(t, SimEventKind::Elevated, node, {}, f);
                        if (f.tracked)
                            ++result_.stats[f.stream].elevated;
                    } else {
                        record(t, SimEventKind::Forwarded, node, {}, f);
                    }
                }
            }
        }
        ++f.hop;
        enqueue(fi, t);
    }

    void discard(FrameIdx fi, Instant t, const VertexId& node, const std::string& why)
    {
        detail::SimFrame& f = frames_[fi];
        record(t, SimEventKind::Discarded, node, {}, f, why);
        if (f.tracked) {
            ++result_.stats[f.stream].discarded;
            note_outcome(f, Outcome::Missed);
        }
        f.hop = f.route.size(); // retired
    }

    void deliver(FrameIdx fi, Instant t, const VertexId& node)
    {
        detail::SimFrame& f = frames_[fi];
        record(t, SimEventKind::Delivered, node, {}, f);
        f.hop = f.route.size(); // retired
        if (!f.tracked)
            return;
        auto& st = result_.stats[f.stream];
        ++st.delivered;
        Nanos lat = t - f.release;
        st.max_latency = std::max(st.max_latency, lat);
        st.min_latency = std::min(st.min_latency, lat);
        bool met = f.latency > 0 ? meets_deadline(f.release, t, f.latency) : true;
        if (met)
            ++st.met;
        else
            ++st.missed;
        note_outcome(f, met ? Outcome::Met : Outcome::Missed);
    }

    void note_outcome(const detail::SimFrame& f, Outcome o)
    {
        auto& tr = result_.outcomes[f.stream];
        tr.stream = f.stream;
        auto& v = tr.outcomes;
        size_t idx = static_cast<size_t>(f.frame_index);
        if (v.size() <= idx)
            v.resize(idx + 1, Outcome::Missed);
        v[idx] = o;
    }

    void finalize()
    {
        for (const auto& f : frames_) {
            if (!f.tracked || f.hop >= f.route.size())
                continue; // retired (delivered or discarded)
            // Undelivered by the horizon: count as missed only if its
            // deadline already passed.
            ++result_.frames_in_flight;
            if (f.latency > 0 && f.release + f.latency <= cfg_.horizon) {
                ++result_.stats[f.stream].missed;
                note_outcome(f, Outcome::Missed);
            }
        }
        std::stable_sort(result_.trace.begin(), result_.trace.end(),
                         [](const SimRecord& a, const SimRecord& b) { return a.time < b.time; });
    }
};

inline SimResult simulate(const NetworkGraph& net, const std::vector<Stream>& streams,
                          const Schedule& schedule, const SimConfig& config)
{
    return Simulator(net, streams, schedule, config).run();
}

struct StreamReport {
    StreamId stream;
    StreamStats stats;
    Nanos max_latency = 0;
    Nanos jitter = 0; // variation of the arrival offset within the period
    bool mk_checked = false;
    MkVerdict mk;
};

// Per-stream summary: latency extremes, arrival jitter, and the (m,k)-firm
// verdict with m = popcount(mu), k = |mu| (skipped for mu = 0 streams).
inline std::vector<StreamReport> analyze(const SimResult& result,
                                         const std::vector<Stream>& streams)
{
    std::vector<StreamReport> out;
    for (const auto& s : streams) {
        auto it = result.stats.find(s.id);
        if (it == result.stats.end())
            continue;
        StreamReport rep;
        rep.stream = s.id;
        rep.stats = it->second;
        rep.max_latency = it->second.delivered > 0 ? it->second.max_latency : 0;
        rep.jitter = it->second.delivered > 0
                         ? it->second.max_latency - it->second.min_latency
                         : 0;
        auto ot = result.outcomes.find(s.id);
        if (!s.sporadic && !s.mu.all_zero() && ot != result.outcomes.end() &&
            ot->second.outcomes.size() >= static_cast<size_t>(s.mu.k())) {
            rep.mk_checked = true;
            rep.mk = check_mk(ot->second, MkRequirement(s.mu.popcount(), s.mu.k()));
        }
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace elevation
