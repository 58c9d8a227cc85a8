#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elevation/augment_multihop.hpp"
#include "elevation/network.hpp"
#include "elevation/scenario.hpp"
#include "elevation/schedule.hpp"
#include "elevation/simulator.hpp"
#include "elevation/stream.hpp"
#include "elevation/token_bucket.hpp"

// Serialization: the structured-text schedule interchange format, scenario
// JSON export, token-bucket reports, and histogram/delay-model loading.

namespace elevation {

// Structured-text schedule export (the documented interchange format):
//   schedule hypercycle=<ns>
//   port <src> -> <dst>
//     gcl queue=<q> [<start>, <end>)
//   bridge <id>
//     psfp stream=<id> action=<forward|elevate> [<start>, <end>) max_bits=<n>
inline void schedule_to_text(const Schedule& s, std::ostream& os)
{
    os << "schedule hypercycle=" << s.hypercycle << "\n";
    for (const auto& [port, entries] : s.gcl) {
        os << "port " << port.first << " -> " << port.second << "\n";
        for (const auto& e : entries)
            os << "  gcl queue=" << e.queue << " [" << e.window.start << ", " << e.window.end
               << ")\n";
    }
    for (const auto& [bridge, entries] : s.psfp) {
        os << "bridge " << bridge << "\n";
        for (const auto& e : entries)
            os << "  psfp stream=" << e.stream
               << " action=" << (e.action == PsfpAction::Elevate ? "elevate" : "forward") << " ["
               << e.window.start << ", " << e.window.end << ") max_bits=" << e.max_bits << "\n";
    }
}

inline void buckets_to_text(const std::map<PortId, TokenBucket>& buckets, std::ostream& os)
{
    os << "port,b_bits,r_num_bits_per_ns,r_den\n";
    for (const auto& [port, tb] : buckets)
        os << port.first << "->" << port.second << ',' << tb.bucket_bits << ','
           << tb.rate_bits_per_ns.num << ',' << tb.rate_bits_per_ns.den << '\n';
}

inline Json scenario_to_json(const Scenario& sc)
{
    Json j;
    Json vertices = Json::array();
    for (const auto& [id, kind] : sc.net.vertices) {
        const char* k = kind == VertexKind::Bridge      ? "bridge"
                        : kind == VertexKind::EndDevice ? "end-device"
                        : kind == VertexKind::DsTt      ? "ds-tt"
                                                        : "nw-tt";
        vertices.push_back({{"id", id}, {"kind", k}});
    }
    Json links = Json::array();
    for (const auto& [port, link] : sc.net.links) {
        Json l{{"src", link.src},
               {"dst", link.dst},
               {"kind", link.kind == LinkKind::Wired ? "wired" : "wireless"},
               {"rate_bps", link.rate_bps}};
        if (link.kind == LinkKind::Wired) {
            l["prop_delay"] = link.prop_delay;
            l["proc_delay"] = link.proc_delay;
            l["delay_var"] = link.delay_var;
        } else {
            l["wireless_min"] = link.wireless_min;
            l["wireless_max"] = link.wireless_max;
        }
        links.push_back(l);
    }
    Json streams = Json::array();
    for (const auto& s : sc.streams) {
        Json e{{"id", s.id},   {"route", s.route},         {"pcp", s.pcp},
               {"size_bits", s.size_bits}, {"mu", s.mu.str()}};
        if (s.sporadic) {
            e["sporadic"] = true;
            e["min_inter_event"] = s.min_inter_event;
        } else {
            e["period"] = s.period;
            e["phase"] = s.phase;
            e["latency"] = s.latency;
        }
        streams.push_back(e);
    }
    j["network"] = {{"vertices", vertices}, {"links", links}};
    j["streams"] = streams;
    return j;
}

// Histogram CSV: rows of (bin_lower_ns, probability). Converted to an
// inverse-CDF table with uniform placement inside each bin.
inline BaseDelay load_histogram_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open histogram csv: " + path);
    std::vector<std::pair<Nanos, double>> bins;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0])))
            continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
            throw ConfigError("malformed histogram row: " + line);
        bins.emplace_back(static_cast<Nanos>(std::stoll(a)), std::stod(b));
    }
    if (bins.empty())
        throw ConfigError("histogram csv has no bins: " + path);
    double total = 0;
    for (const auto& [lo, p] : bins)
        total += p;
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError("histogram probabilities must sum to 1");
    BaseDelay d;
    d.kind = BaseDelay::Kind::Histogram;
    d.cdf.emplace_back(0.0, bins.front().first);
    double cum = 0;
    for (size_t i = 0; i < bins.size(); ++i) {
        cum += bins[i].second / total;
        // bin upper edge: next bin's lower edge; last bin is degenerate
        Nanos upper = i + 1 < bins.size() ? bins[i + 1].first : bins[i].first;
        d.cdf.emplace_back(cum, upper);
    }
    return d;
}

inline BaseDelay base_delay_from_json(const Json& j)
{
    BaseDelay d;
    const std::string kind = j.value("kind", std::string("deterministic"));
    if (kind == "deterministic") {
        d.kind = BaseDelay::Kind::Deterministic;
        d.value = json_duration(j.at("value"), "delay value");
    } else if (kind == "histogram") {
        if (j.contains("csv"))
            return load_histogram_csv(j.at("csv").get<std::string>());
        d.kind = BaseDelay::Kind::Histogram;
        for (const auto& pt : j.at("cdf"))
            d.cdf.emplace_back(pt.at(0).get<double>(), json_duration(pt.at(1), "cdf delay"));
    } else {
        throw ConfigError("unknown base delay kind: " + kind);
    }
    return d;
}

inline DelayModel delay_model_from_json(const Json& j)
{
    DelayModel m;
    const std::string kind = j.value("kind", std::string("deterministic"));
    if (kind == "deterministic") {
        m.kind = DelayModel::Kind::Deterministic;
        m.base = base_delay_from_json(j);
    } else if (kind == "histogram") {
        m.kind = DelayModel::Kind::Histogram;
        m.base = base_delay_from_json(j);
    } else if (kind == "epochal") {
        m.kind = DelayModel::Kind::Epochal;
        m.stable = base_delay_from_json(j.at("stable"));
        m.unstable = base_delay_from_json(j.at("unstable"));
        m.epoch_period = json_duration(j, "epoch_period", 5 * kSecond);
        m.unstable_window = {json_duration(j, "unstable_start", 0),
                             json_duration(j, "unstable_start", 0) +
                                 json_duration(j, "unstable_len", 100 * kMilli)};
    } else {
        throw ConfigError("unknown delay model kind: " + kind);
    }
    return m;
}

// "A->B" port key used in the config's delay_models map.
inline PortId parse_port_key(const std::string& key)
{
    auto pos = key.find("->");
    if (pos == std::string::npos)
        throw ConfigError("port key must look like 'SRC->DST': " + key);
    return {key.substr(0, pos), key.substr(pos + 2)};
}

// Builds the simulator configuration from the config's `simulation` section.
inline SimConfig sim_config_from_json(const Json& config, Nanos hypercycle, std::uint64_t seed)
{
    SimConfig sim;
    sim.seed = seed;
    Nanos cycles = 10000;
    if (config.contains("simulation")) {
        const Json& s = config.at("simulation");
        cycles = s.value("horizon_hypercycles", cycles);
        if (s.contains("horizon"))
            sim.horizon = json_duration(s.at("horizon"), "horizon");
        if (s.contains("clock_skew"))
            for (const auto& [v, d] : s.at("clock_skew").items())
                sim.clock_skew[v] = json_duration(d, "clock_skew");
        if (s.contains("delay_models"))
            for (const auto& [k, m] : s.at("delay_models").items())
                sim.delay_models[parse_port_key(k)] = delay_model_from_json(m);
    }
    if (sim.horizon == 0)
        sim.horizon = checked_mul(cycles, hypercycle);
    return sim;
}

} // namespace elevation
