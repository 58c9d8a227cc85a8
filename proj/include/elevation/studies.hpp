#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "elevation/augment_multihop.hpp"
#include "elevation/io.hpp"
#include "elevation/scenario.hpp"
#include "elevation/scheduler.hpp"
#include "elevation/simulator.hpp"

// Study runners: the sporadic-load schedulability sweep and the 5G-TSN
// bounded/unbounded degradation study with per-frame verdict rows.

namespace elevation {

enum class OutputFormat { Csv, JsonLines };

inline OutputFormat parse_format(const std::string& s)
{
    if (s == "csv")
        return OutputFormat::Csv;
    if (s == "json-lines")
        return OutputFormat::JsonLines;
    throw ConfigError("unknown output format: " + s + " (expected csv or json-lines)");
}

// ---------------------------------------------------------------- feasibility

// One schedulability instance: generate, schedule, augment, verify.
inline bool instance_feasible(const Json& config, std::uint64_t seed)
{
    try {
        Scenario sc = generate_scenario(config, seed);
        PrimarySchedule primary = schedule_primary(sc.net, sc.streams);
        AugmentResult aug = augment_multihop(sc.net, sc.streams, primary, sc.sporadics);
        auto checks = verify_latency(sc.net, sc.streams, aug, primary.hypercycle);
        return checks.empty() || checks.front().slack >= 0;
    } catch (const InfeasibleError&) {
        return false;
    } catch (const std::exception&) {
        // saturation / fifo-consistency failures count as infeasible
        return false;
    }
}

struct SchedulabilityPoint {
    int n_sporadic = 0;
    int feasible = 0;
    int total = 0;
};

// Per data point: `instances` seeded stream sets with N sporadic streams
// added; counts how many survive the full schedule+augment+verify pipeline.
// Jobs fan out to a worker pool; results merge by seed order.
inline std::vector<SchedulabilityPoint> run_schedulability_study(const Json& config,
                                                                 std::uint64_t base_seed)
{
    std::vector<int> counts{0, 4, 8, 12, 16};
    int instances = 100;
    Json sporadic_spec;
    if (config.contains("study")) {
        const Json& st = config.at("study");
        if (st.contains("sporadic_counts"))
            counts = st.at("sporadic_counts").get<std::vector<int>>();
        instances = st.value("instances", instances);
        if (st.contains("sporadic"))
            sporadic_spec = st.at("sporadic");
    }
    if (sporadic_spec.is_null()) {
        sporadic_spec = Json{{"sporadic", true},
                             {"size_bytes", 100},
                             {"min_inter_event", Json::array({"200us", "400us"})},
                             {"prefix", "SP"}};
    }

    std::vector<SchedulabilityPoint> out;
    for (int n : counts) {
        Json cfg = config;
        if (n > 0) {
            Json spec = sporadic_spec;
            spec["count"] = n;
            spec["sporadic"] = true;
            cfg["scenario"]["streams"].push_back(spec);
        }
        // Surface config errors here: worker threads swallow all exceptions.
        generate_scenario(cfg, base_seed);
        std::vector<char> feasible(static_cast<size_t>(instances), 0);
        std::atomic<int> next{0};
        unsigned workers = std::max(1u, std::thread::hardware_concurrency());
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < instances; i = next.fetch_add(1))
                    feasible[static_cast<size_t>(i)] =
                        instance_feasible(cfg, base_seed + static_cast<std::uint64_t>(i)) ? 1 : 0;
            });
        for (auto& t : pool)
            t.join();
        SchedulabilityPoint pt;
        pt.n_sporadic = n;
        pt.total = instances;
        for (char f : feasible)
            pt.feasible += f;
        out.push_back(pt);
    }
    return out;
}

inline void write_schedulability(const std::vector<SchedulabilityPoint>& pts, OutputFormat fmt,
                                 std::ostream& os)
{
    if (fmt == OutputFormat::Csv) {
        os << "n_sporadic,feasible,total\n";
        for (const auto& p : pts)
            os << p.n_sporadic << ',' << p.feasible << ',' << p.total << '\n';
    } else {
        for (const auto& p : pts)
            os << Json{{"n_sporadic", p.n_sporadic}, {"feasible", p.feasible}, {"total", p.total}}
               << '\n';
    }
}

// ------------------------------------------------------------------ 5G study

// Synthetic long-tail 5G delay CDFs with the landmark percentiles baked in:
// 90% at 7.71 ms; 99% at 9.98 ms (uplink) or 11.037 ms (downlink).
inline BaseDelay synthetic_5g_cdf(bool uplink)
{
    BaseDelay d;
    d.kind = BaseDelay::Kind::Histogram;
    const Nanos p99 = uplink ? 9980 * kMicro : 11037 * kMicro;
    d.cdf = {{0.0, 1 * kMilli},
             {0.50, 5 * kMilli},
             {0.90, 7710 * kMicro},
             {0.99, p99},
             {1.0, p99}};
    return d;
}

inline BaseDelay uniform_delay(Nanos lo, Nanos hi)
{
    BaseDelay d;
    d.kind = BaseDelay::Kind::Histogram;
    d.cdf = {{0.0, lo}, {1.0, hi}};
    return d;
}

// Stable histogram delays with periodic unstable bursts up to `burst_max`.
inline DelayModel epochal_5g_model(bool uplink, Nanos burst_max, Nanos epoch_period,
                                   Nanos unstable_len)
{
    DelayModel m;
    m.kind = DelayModel::Kind::Epochal;
    m.stable = synthetic_5g_cdf(uplink);
    m.unstable = uniform_delay(10 * kMilli, burst_max);
    m.epoch_period = epoch_period;
    m.unstable_window = {0, unstable_len};
    return m;
}

struct FrameVerdict {
    StreamId stream;
    std::int64_t frame_index = 0;
    Nanos wireless_delay = -1; // -1: no wireless hop observed
    Nanos latency = -1;        // -1: not delivered
    std::string verdict;       // met | elevated+met | missed | discarded | lost
};

struct FiveGRun {
    SimResult sim;
    std::vector<FrameVerdict> rows;
    std::vector<StreamReport> reports;
};

inline std::vector<FrameVerdict> frame_verdicts(const SimResult& sim,
                                                const std::vector<Stream>& streams,
                                                const std::vector<PortId>& wireless_ports)
{
    std::map<std::pair<StreamId, std::int64_t>, FrameVerdict> rows;
    std::map<std::pair<StreamId, std::int64_t>, Instant> wl_start;
    std::map<std::pair<StreamId, std::int64_t>, bool> elevated;
    std::map<std::pair<StreamId, std::int64_t>, Instant> released;
    auto is_wireless_src = [&](const VertexId& a, const VertexId& b) {
        for (const auto& p : wireless_ports)
            if (p.first == a && p.second == b)
                return true;
        return false;
    };
    for (const auto& r : sim.trace) {
        auto key = std::make_pair(r.stream, r.frame_index);
        switch (r.kind) {
        case SimEventKind::Release:
            released[key] = r.time;
            break;
        case SimEventKind::TxStart:
            if (is_wireless_src(r.node, r.peer))
                wl_start[key] = r.time;
            break;
        case SimEventKind::Arrival:
            if (is_wireless_src(r.peer, r.node) && wl_start.count(key))
                rows[key].wireless_delay = r.time - wl_start[key];
            break;
        case SimEventKind::Elevated:
            elevated[key] = true;
            break;
        case SimEventKind::Discarded:
            rows[key].verdict = "discarded";
            break;
        case SimEventKind::Delivered:
            rows[key].latency = r.time - released[key];
            break;
        default:
            break;
        }
    }
    std::vector<FrameVerdict> out;
    for (const auto& s : streams) {
        if (s.sporadic)
            continue;
        auto ot = sim.outcomes.find(s.id);
        const std::int64_t n =
            ot == sim.outcomes.end() ? 0 : static_cast<std::int64_t>(ot->second.outcomes.size());
        for (std::int64_t i = 0; i < n; ++i) {
            auto key = std::make_pair(s.id, i);
            FrameVerdict v = rows.count(key) ? rows[key] : FrameVerdict{};
            v.stream = s.id;
            v.frame_index = i;
            if (v.verdict.empty()) {
                if (v.latency < 0)
                    v.verdict = "lost";
                else if (ot->second.outcomes[static_cast<size_t>(i)] == Outcome::Met)
                    v.verdict = elevated.count(key) ? "elevated+met" : "met";
                else
                    v.verdict = "missed";
            }
            out.push_back(std::move(v));
        }
    }
    return out;
}

struct FiveGStudy {
    Scenario scenario;
    Schedule augmented;
    FiveGRun bounded;
    FiveGRun unbounded;
    StreamId victim; // the stream degraded beyond its period in the second run
};

inline FiveGStudy run_5g_study(const Json& config, std::uint64_t seed)
{
    FiveGStudy st;
    st.scenario = generate_scenario(config, seed);
    Scenario& sc = st.scenario;
    PrimarySchedule primary = schedule_primary(sc.net, sc.streams);
    AugmentResult aug = augment_multihop(sc.net, sc.streams, primary, sc.sporadics);
    st.augmented = aug.schedule;

    Nanos bounded_max = 19500 * kMicro;
    Nanos unbounded_max = 30 * kMilli;
    Nanos epoch_period = 1 * kSecond;
    Nanos unstable_len = 100 * kMilli;
    std::string victim;
    if (config.contains("study")) {
        const Json& j = config.at("study");
        bounded_max = json_duration(j, "bounded_max", bounded_max);
        unbounded_max = json_duration(j, "unbounded_max", unbounded_max);
        epoch_period = json_duration(j, "epoch_period", epoch_period);
        unstable_len = json_duration(j, "unstable_len", unstable_len);
        victim = j.value("victim", victim);
    }
    if (victim.empty()) {
        // default: the last elevatable stream crossing a wireless hop
        for (const auto& s : sc.streams) {
            if (s.sporadic || s.mu.all_zero())
                continue;
            for (size_t h = 0; h + 1 < s.route.size(); ++h)
                if (!sc.net.link(s.route[h], s.route[h + 1]).exclusive())
                    victim = s.id;
        }
    }
    st.victim = victim;

    SimConfig base = sim_config_from_json(config, primary.hypercycle, seed);
    for (const auto& p : sc.wireless_ports) {
        const bool uplink = sc.net.vertices.at(p.first) == VertexKind::DsTt;
        base.delay_models[p] = epochal_5g_model(uplink, bounded_max, epoch_period, unstable_len);
    }

    auto run = [&](const SimConfig& cfg) {
        FiveGRun r;
        r.sim = simulate(sc.net, sc.streams, st.augmented, cfg);
        r.rows = frame_verdicts(r.sim, sc.streams, sc.wireless_ports);
        r.reports = analyze(r.sim, sc.streams);
        return r;
    };

    st.bounded = run(base);

    SimConfig unbounded = base;
    if (!victim.empty())
        for (const auto& p : sc.wireless_ports) {
            const bool uplink = sc.net.vertices.at(p.first) == VertexKind::DsTt;
            unbounded.stream_delay_models[{p, victim}] =
                epochal_5g_model(uplink, unbounded_max, epoch_period, unstable_len);
        }
    st.unbounded = run(unbounded);
    return st;
}

inline void write_verdicts(const std::vector<FrameVerdict>& rows, OutputFormat fmt,
                           std::ostream& os)
{
    if (fmt == OutputFormat::Csv) {
        os << "stream,frame_index,wireless_delay_ns,latency_ns,verdict\n";
        for (const auto& r : rows)
            os << r.stream << ',' << r.frame_index << ',' << r.wireless_delay << ',' << r.latency
               << ',' << r.verdict << '\n';
    } else {
        for (const auto& r : rows)
            os << Json{{"stream", r.stream},
                       {"frame_index", r.frame_index},
                       {"wireless_delay_ns", r.wireless_delay},
                       {"latency_ns", r.latency},
                       {"verdict", r.verdict}}
               << '\n';
    }
}

} // namespace elevation
