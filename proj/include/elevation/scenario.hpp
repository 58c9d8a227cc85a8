#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elevation/network.hpp"
#include "elevation/simulator.hpp"
#include "elevation/stream.hpp"
#include "elevation/weakly_hard.hpp"

// Scenario configuration and generation: grid topologies with attached end
// devices, the two-partition 5G-TSN topology with a logical 5G bridge, and
// seeded random stream sets. Config files are JSON; durations accept unit
// suffixes (ns/us/ms/s) or plain integer nanoseconds.

namespace elevation {

using Json = nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Json load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return j;
}

inline Nanos json_duration(const Json& j, const std::string& what)
{
    try {
        if (j.is_number_integer())
            return j.get<Nanos>();
        if (j.is_string())
            return parse_duration(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(what + ": " + e.what());
    }
    throw ConfigError(what + ": expected duration (integer ns or string with unit suffix)");
}

inline Nanos json_duration(const Json& parent, const std::string& key, Nanos fallback)
{
    if (!parent.contains(key))
        return fallback;
    return json_duration(parent.at(key), key);
}

struct Scenario {
    NetworkGraph net;
    std::vector<Stream> streams;
    std::vector<SporadicSpec> sporadics;
    // Wireless delay bounds used by the delay models of study runs.
    std::vector<PortId> wireless_ports;
};

namespace detail {

// Deterministic bounded pick, independent of distribution implementations.
inline std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n)
{
    return n == 0 ? 0 : rng() % n;
}

inline Link make_wired(const std::string& src, const std::string& dst, std::int64_t rate_bps,
                       Nanos prop, Nanos proc, Nanos var)
{
    Link l;
    l.src = src;
    l.dst = dst;
    l.kind = LinkKind::Wired;
    l.rate_bps = rate_bps;
    l.prop_delay = prop;
    l.proc_delay = proc;
    l.delay_var = var;
    return l;
}

inline Link make_wireless(const std::string& src, const std::string& dst, std::int64_t rate_bps,
                          Nanos dmin, Nanos dmax)
{
    Link l;
    l.src = src;
    l.dst = dst;
    l.kind = LinkKind::Wireless;
    l.rate_bps = rate_bps;
    l.wireless_min = dmin;
    l.wireless_max = dmax;
    return l;
}

} // namespace detail

// Grid of rows x cols bridges, wired duplex links between 4-neighbors, and
// `devices_per_bridge` end devices per bridge.
inline void build_grid_topology(const Json& topo, Scenario& sc)
{
    const int rows = topo.value("rows", 3);
    const int cols = topo.value("cols", 4);
    const int devs = topo.value("devices_per_bridge", 1);
    const std::int64_t rate = topo.value("link_rate_bps", std::int64_t{100000000});
    const Nanos prop = json_duration(topo, "prop_delay", 0);
    const Nanos proc = json_duration(topo, "proc_delay", 0);
    const Nanos var = json_duration(topo, "delay_var", 0);
    if (rows < 1 || cols < 1 || devs < 0)
        throw ConfigError("grid topology: rows/cols must be >= 1");

    auto bridge = [](int r, int c) { return "B" + std::to_string(r) + "_" + std::to_string(c); };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            sc.net.add_vertex(bridge(r, c), VertexKind::Bridge);
            for (int d = 0; d < devs; ++d) {
                std::string dev = "D" + std::to_string(r) + "_" + std::to_string(c) + "_" +
                                  std::to_string(d);
                sc.net.add_vertex(dev, VertexKind::EndDevice);
                sc.net.add_duplex(detail::make_wired(dev, bridge(r, c), rate, prop, proc, var));
            }
        }
    }
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols)
                sc.net.add_duplex(
                    detail::make_wired(bridge(r, c), bridge(r, c + 1), rate, prop, proc, var));
            if (r + 1 < rows)
                sc.net.add_duplex(
                    detail::make_wired(bridge(r, c), bridge(r + 1, c), rate, prop, proc, var));
        }
}

// Two wired partitions joined by a logical 5G bridge: devices - bridge -
// DS-TT =5G= NW-TT - bridge - devices. The wireless hop models the whole
// 5G system as one sampled delay within [wireless_min, wireless_max).
inline void build_5g_topology(const Json& topo, Scenario& sc)
{
    const int devs = topo.value("devices_per_side", 4);
    const std::int64_t rate = topo.value("link_rate_bps", std::int64_t{100000000});
    const Nanos prop = json_duration(topo, "prop_delay", 0);
    const Nanos proc = json_duration(topo, "proc_delay", 0);
    const Nanos var = json_duration(topo, "delay_var", 0);
    const Nanos wmin = json_duration(topo, "wireless_min", 0);
    const Nanos wmax = json_duration(topo, "wireless_max", 10 * kMilli);

    sc.net.add_vertex("BL", VertexKind::Bridge);
    sc.net.add_vertex("BR", VertexKind::Bridge);
    sc.net.add_vertex("DSTT", VertexKind::DsTt);
    sc.net.add_vertex("NWTT", VertexKind::NwTt);
    for (int i = 0; i < devs; ++i) {
        std::string ld = "LD" + std::to_string(i);
        std::string rd = "RD" + std::to_string(i);
        sc.net.add_vertex(ld, VertexKind::EndDevice);
        sc.net.add_vertex(rd, VertexKind::EndDevice);
        sc.net.add_duplex(detail::make_wired(ld, "BL", rate, prop, proc, var));
        sc.net.add_duplex(detail::make_wired(rd, "BR", rate, prop, proc, var));
    }
    sc.net.add_duplex(detail::make_wired("BL", "DSTT", rate, prop, proc, var));
    sc.net.add_duplex(detail::make_wired("NWTT", "BR", rate, prop, proc, var));
    sc.net.add_duplex(detail::make_wireless("DSTT", "NWTT", rate, wmin, wmax));
    sc.wireless_ports.push_back({"DSTT", "NWTT"});
    sc.wireless_ports.push_back({"NWTT", "DSTT"});
}

inline void build_explicit_topology(const Json& topo, Scenario& sc)
{
    static const std::map<std::string, VertexKind> kinds{{"bridge", VertexKind::Bridge},
                                                         {"end-device", VertexKind::EndDevice},
                                                         {"ds-tt", VertexKind::DsTt},
                                                         {"nw-tt", VertexKind::NwTt}};
    for (const auto& v : topo.at("vertices")) {
        auto it = kinds.find(v.at("kind").get<std::string>());
        if (it == kinds.end())
            throw ConfigError("unknown vertex kind: " + v.at("kind").get<std::string>());
        sc.net.add_vertex(v.at("id").get<std::string>(), it->second);
    }
    for (const auto& l : topo.at("links")) {
        const std::string kind = l.value("kind", std::string("wired"));
        const std::int64_t rate = l.value("rate_bps", std::int64_t{100000000});
        Link link;
        if (kind == "wired") {
            link = detail::make_wired(l.at("src"), l.at("dst"), rate,
                                      json_duration(l, "prop_delay", 0),
                                      json_duration(l, "proc_delay", 0),
                                      json_duration(l, "delay_var", 0));
        } else if (kind == "wireless") {
            link = detail::make_wireless(l.at("src"), l.at("dst"), rate,
                                         json_duration(l, "wireless_min", 0),
                                         json_duration(l, "wireless_max", 10 * kMilli));
            sc.wireless_ports.push_back({l.at("src"), l.at("dst")});
            if (l.value("duplex", true))
                sc.wireless_ports.push_back({l.at("dst"), l.at("src")});
        } else {
            throw ConfigError("unknown link kind: " + kind);
        }
        if (l.value("duplex", true))
            sc.net.add_duplex(link);
        else
            sc.net.add_link(link);
    }
}

// Round-robin pattern assignment across the pool, spreading elevated
// traffic evenly among streams of the same class.
inline std::vector<MuPattern> choose_mu_patterns(size_t count, const std::vector<MuPattern>& pool)
{
    if (pool.empty())
        throw ConfigError("mu-pattern pool must not be empty");
    std::vector<MuPattern> out;
    for (size_t i = 0; i < count; ++i)
        out.push_back(pool[i % pool.size()]);
    return out;
}

namespace detail {

inline std::vector<VertexId> random_route(const NetworkGraph& net, std::mt19937_64& rng,
                                          const std::vector<VertexId>& from_pool,
                                          const std::vector<VertexId>& to_pool)
{
    for (int attempt = 0; attempt < 64; ++attempt) {
        const VertexId& a = from_pool[pick(rng, from_pool.size())];
        const VertexId& b = to_pool[pick(rng, to_pool.size())];
        if (a == b)
            continue;
        auto route = net.shortest_path(a, b);
        if (route)
            return *route;
    }
    throw ConfigError("could not find a connected talker/listener pair");
}

inline std::vector<VertexId> end_devices(const NetworkGraph& net, const std::string& prefix = {})
{
    std::vector<VertexId> out;
    for (const auto& [id, kind] : net.vertices)
        if (kind == VertexKind::EndDevice &&
            (prefix.empty() || id.compare(0, prefix.size(), prefix) == 0))
            out.push_back(id);
    return out;
}

} // namespace detail

// Seeded random stream generation. Spec keys per group:
//   count, pcp | pcps, size_bytes, periods, latency_factors, mu_pool,
//   phase ("random" | duration), side ("left"/"right"/"cross"/"any", 5g only)
// Sporadic groups: count, size_bytes, min_inter_event (list), route as above.
inline void generate_streams(const Json& spec, Scenario& sc, std::mt19937_64& rng,
                             const std::string& prefix)
{
    const int count = spec.value("count", 1);
    const std::int64_t size_bits = spec.value("size_bytes", std::int64_t{100}) * 8;
    std::vector<int> pcps;
    if (spec.contains("pcps"))
        for (const auto& p : spec.at("pcps"))
            pcps.push_back(p.get<int>());
    else
        pcps.push_back(spec.value("pcp", 6));

    std::vector<Nanos> periods;
    if (spec.contains("periods"))
        for (const auto& p : spec.at("periods"))
            periods.push_back(json_duration(p, "periods"));
    else
        periods.push_back(json_duration(spec, "period", kMilli));

    std::vector<double> lat_factors = spec.value("latency_factors", std::vector<double>{1.0});
    if (spec.contains("latency"))
        lat_factors.clear();

    std::vector<MuPattern> pool;
    for (const auto& m : spec.value("mu_pool", std::vector<std::string>{"0"}))
        pool.emplace_back(m);
    auto mus = choose_mu_patterns(static_cast<size_t>(count), pool);

    const bool sporadic = spec.value("sporadic", false);
    const std::string side = spec.value("side", std::string("any"));
    std::vector<VertexId> from_pool, to_pool;
    if (side == "left") {
        from_pool = detail::end_devices(sc.net, "LD");
        to_pool = from_pool;
    } else if (side == "right") {
        from_pool = detail::end_devices(sc.net, "RD");
        to_pool = from_pool;
    } else if (side == "cross") {
        from_pool = detail::end_devices(sc.net, "LD");
        to_pool = detail::end_devices(sc.net, "RD");
    } else {
        from_pool = detail::end_devices(sc.net);
        to_pool = from_pool;
    }
    if (from_pool.empty() || to_pool.empty())
        throw ConfigError("stream generation: no end devices available for side '" + side + "'");

    for (int i = 0; i < count; ++i) {
        Stream s;
        s.id = prefix + std::to_string(i);
        s.route = detail::random_route(sc.net, rng, from_pool, to_pool);
        s.pcp = pcps[detail::pick(rng, pcps.size())];
        s.size_bits = size_bits;
        s.mu = mus[static_cast<size_t>(i)];
        if (sporadic) {
            s.sporadic = true;
            std::vector<Nanos> taus;
            if (spec.contains("min_inter_event"))
                for (const auto& t : spec.at("min_inter_event"))
                    taus.push_back(json_duration(t, "min_inter_event"));
            else
                taus.push_back(200 * kMicro);
            s.min_inter_event = taus[detail::pick(rng, taus.size())];
            s.latency = json_duration(spec, "latency", 0);
            sc.sporadics.push_back({s.id, s.size_bits, s.min_inter_event});
        } else {
            s.period = periods[detail::pick(rng, periods.size())];
            if (spec.contains("latency"))
                s.latency = json_duration(spec, "latency", s.period);
            else {
                double f = lat_factors[detail::pick(rng, lat_factors.size())];
                s.latency = static_cast<Nanos>(f * static_cast<double>(s.period));
            }
            if (spec.contains("phase") && spec.at("phase").is_string() &&
                spec.at("phase").get<std::string>() == "random")
                s.phase = static_cast<Nanos>(detail::pick(rng, static_cast<std::uint64_t>(s.period)));
            else
                s.phase = json_duration(spec, "phase", 0);
        }
        s.validate(sc.net);
        sc.streams.push_back(std::move(s));
    }
}

inline Scenario generate_scenario(const Json& config, std::uint64_t seed)
{
    if (!config.contains("scenario"))
        throw ConfigError("config missing 'scenario' section");
    const Json& sec = config.at("scenario");
    Scenario sc;
    const Json& topo = sec.at("topology");
    const std::string kind = topo.value("kind", std::string("grid"));
    if (kind == "grid")
        build_grid_topology(topo, sc);
    else if (kind == "5g")
        build_5g_topology(topo, sc);
    else if (kind == "explicit")
        build_explicit_topology(topo, sc);
    else
        throw ConfigError("unknown topology kind: " + kind);

    std::mt19937_64 rng(seed);
    if (!sec.contains("streams"))
        throw ConfigError("config missing 'scenario.streams'");
    int group = 0;
    for (const auto& spec : sec.at("streams")) {
        std::string prefix = spec.value("prefix", "S" + std::to_string(group) + "_");
        generate_streams(spec, sc, rng, prefix);
        ++group;
    }
    return sc;
}

} // namespace elevation
