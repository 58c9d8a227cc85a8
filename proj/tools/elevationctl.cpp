// elevationctl: command-line front end for the (m,k)-firm elevation toolkit.
// Every subcommand derives its inputs deterministically from --config and
// --seed, so the pipeline stages compose without intermediate parsing.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "elevation/elevation.hpp"

namespace ev = elevation;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 2;
constexpr int kVerifyFailure = 3;
constexpr int kConfigError = 4;

struct Options {
    std::string config_path;
    std::uint64_t seed = 1;
    std::string horizon; // duration string, overrides simulation horizon
    std::string out_dir = ".";
    std::string format = "csv";
};

struct Pipeline {
    ev::Json config;
    ev::Scenario scenario;
    ev::PrimarySchedule primary;
};

Pipeline make_pipeline(const Options& opt)
{
    Pipeline p;
    p.config = ev::load_config(opt.config_path);
    p.scenario = ev::generate_scenario(p.config, opt.seed);
    p.primary = ev::schedule_primary(p.scenario.net, p.scenario.streams);
    return p;
}

std::ofstream open_out(const Options& opt, const std::string& name)
{
    fs::create_directories(opt.out_dir);
    fs::path path = fs::path(opt.out_dir) / name;
    std::ofstream out(path);
    if (!out)
        throw ev::ConfigError("cannot write output file: " + path.string());
    std::cerr << "wrote " << path.string() << "\n";
    return out;
}

ev::SimConfig make_sim_config(const Options& opt, const ev::Json& config, ev::Nanos hypercycle)
{
    ev::SimConfig sim = ev::sim_config_from_json(config, hypercycle, opt.seed);
    if (!opt.horizon.empty())
        sim.horizon = ev::parse_duration(opt.horizon);
    return sim;
}

int cmd_generate(const Options& opt)
{
    ev::Json config = ev::load_config(opt.config_path);
    ev::Scenario sc = ev::generate_scenario(config, opt.seed);
    auto out = open_out(opt, "scenario.json");
    out << ev::scenario_to_json(sc).dump(2) << "\n";
    return kOk;
}

int cmd_schedule(const Options& opt)
{
    Pipeline p = make_pipeline(opt);
    ev::Schedule sched =
        ev::primary_schedule_config(p.scenario.net, p.scenario.streams, p.primary, true);
    auto out = open_out(opt, "primary_schedule.txt");
    ev::schedule_to_text(sched, out);
    return kOk;
}

int cmd_buckets(const Options& opt)
{
    Pipeline p = make_pipeline(opt);
    auto buckets = ev::port_token_buckets(p.scenario.net, p.scenario.streams,
                                          p.scenario.sporadics, p.primary.hypercycle);
    auto out = open_out(opt, "buckets.csv");
    ev::buckets_to_text(buckets, out);
    return kOk;
}

int cmd_augment(const Options& opt)
{
    Pipeline p = make_pipeline(opt);
    ev::AugmentResult aug =
        ev::augment_multihop(p.scenario.net, p.scenario.streams, p.primary, p.scenario.sporadics);
    auto out = open_out(opt, "augmented_schedule.txt");
    ev::schedule_to_text(aug.schedule, out);
    return kOk;
}

int cmd_verify(const Options& opt)
{
    Pipeline p = make_pipeline(opt);
    ev::AugmentResult aug =
        ev::augment_multihop(p.scenario.net, p.scenario.streams, p.primary, p.scenario.sporadics);
    auto checks = ev::verify_latency(p.scenario.net, p.scenario.streams, aug, p.primary.hypercycle);
    auto out = open_out(opt, "verify.csv");
    out << "stream,frame_index,release_ns,worst_arrival_ns,slack_ns\n";
    bool ok = true;
    for (const auto& c : checks) {
        out << c.stream << ',' << c.frame_index << ',' << c.release << ',' << c.bound << ','
            << c.slack << '\n';
        ok = ok && c.slack >= 0;
    }
    if (!ok) {
        std::cerr << "verification failure: worst slack " << checks.front().slack << " ns ("
                  << checks.front().stream << "#" << checks.front().frame_index << ")\n";
        return kVerifyFailure;
    }
    std::cerr << "all latency bounds verified ("
              << (checks.empty() ? 0 : checks.front().slack) << " ns worst slack)\n";
    return kOk;
}

void write_reports(std::ostream& os, const std::vector<ev::StreamReport>& reports)
{
    os << "stream,released,delivered,met,missed,discarded,elevated,max_latency_ns,jitter_ns,mk\n";
    for (const auto& r : reports) {
        std::string mk = !r.mk_checked ? "n/a" : (r.mk.pass ? "pass" : "fail");
        os << r.stream << ',' << r.stats.released << ',' << r.stats.delivered << ',' << r.stats.met
           << ',' << r.stats.missed << ',' << r.stats.discarded << ',' << r.stats.elevated << ','
           << r.max_latency << ',' << r.jitter << ',' << mk << '\n';
    }
}

int cmd_simulate(const Options& opt)
{
    Pipeline p = make_pipeline(opt);
    ev::AugmentResult aug =
        ev::augment_multihop(p.scenario.net, p.scenario.streams, p.primary, p.scenario.sporadics);
    ev::SimConfig sim = make_sim_config(opt, p.config, p.primary.hypercycle);
    ev::SimResult res = ev::simulate(p.scenario.net, p.scenario.streams, aug.schedule, sim);
    {
        auto out = open_out(opt, "trace.csv");
        res.export_csv(out);
    }
    auto out = open_out(opt, "sim_report.csv");
    write_reports(out, ev::analyze(res, p.scenario.streams));
    return kOk;
}

int cmd_study_schedulability(const Options& opt)
{
    ev::Json config = ev::load_config(opt.config_path);
    auto pts = ev::run_schedulability_study(config, opt.seed);
    ev::OutputFormat fmt = ev::parse_format(opt.format);
    auto out = open_out(opt, fmt == ev::OutputFormat::Csv ? "schedulability.csv"
                                                          : "schedulability.jsonl");
    ev::write_schedulability(pts, fmt, out);
    return kOk;
}

int cmd_study_5g(const Options& opt)
{
    ev::Json config = ev::load_config(opt.config_path);
    if (!opt.horizon.empty())
        config["simulation"]["horizon"] = opt.horizon;
    ev::FiveGStudy st = ev::run_5g_study(config, opt.seed);
    ev::OutputFormat fmt = ev::parse_format(opt.format);
    const char* ext = fmt == ev::OutputFormat::Csv ? "csv" : "jsonl";
    {
        auto out = open_out(opt, std::string("5g_bounded.") + ext);
        ev::write_verdicts(st.bounded.rows, fmt, out);
    }
    {
        auto out = open_out(opt, std::string("5g_unbounded.") + ext);
        ev::write_verdicts(st.unbounded.rows, fmt, out);
    }
    auto out = open_out(opt, "5g_report.csv");
    out << "run,stream,released,delivered,met,missed,discarded,elevated,max_latency_ns,jitter_ns,mk\n";
    auto dump = [&](const char* run, const std::vector<ev::StreamReport>& reports) {
        for (const auto& r : reports) {
            std::string mk = !r.mk_checked ? "n/a" : (r.mk.pass ? "pass" : "fail");
            out << run << ',' << r.stream << ',' << r.stats.released << ',' << r.stats.delivered
                << ',' << r.stats.met << ',' << r.stats.missed << ',' << r.stats.discarded << ','
                << r.stats.elevated << ',' << r.max_latency << ',' << r.jitter << ',' << mk
                << '\n';
        }
    };
    dump("bounded", st.bounded.reports);
    dump("unbounded", st.unbounded.reports);
    return kOk;
}

int cmd_report(const Options& opt)
{
    Pipeline p = make_pipeline(opt);
    ev::AugmentResult aug =
        ev::augment_multihop(p.scenario.net, p.scenario.streams, p.primary, p.scenario.sporadics);
    auto checks = ev::verify_latency(p.scenario.net, p.scenario.streams, aug, p.primary.hypercycle);
    auto out = open_out(opt, "report.txt");
    out << "scenario: " << p.scenario.streams.size() << " streams, hypercycle "
        << ev::format_duration(p.primary.hypercycle) << "\n";
    out << "token buckets:\n";
    for (const auto& [port, tb] : aug.buckets)
        out << "  " << port.first << "->" << port.second << ": b=" << tb.bucket_bits
            << " bits, r=" << tb.rate_bits_per_ns.num << "/" << tb.rate_bits_per_ns.den
            << " bits/ns\n";
    if (!checks.empty())
        out << "worst latency slack: " << checks.front().slack << " ns (" << checks.front().stream
            << "#" << checks.front().frame_index << ")\n";
    bool ok = checks.empty() || checks.front().slack >= 0;
    out << "verification: " << (ok ? "pass" : "FAIL") << "\n";
    return ok ? kOk : kVerifyFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"(m,k)-firm elevation policy toolkit"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "configuration file (JSON)")->required();
    app.add_option("--seed", opt.seed, "random seed (default 1)");
    app.add_option("--horizon", opt.horizon, "simulation horizon override, e.g. 200ms");
    app.add_option("--out-dir", opt.out_dir, "output directory (default .)");
    app.add_option("--format", opt.format, "study output format: csv | json-lines")
        ->check(CLI::IsMember({"csv", "json-lines"}));

    std::map<std::string, int (*)(const Options&)> commands{
        {"generate", cmd_generate},
        {"schedule", cmd_schedule},
        {"buckets", cmd_buckets},
        {"augment", cmd_augment},
        {"verify", cmd_verify},
        {"simulate", cmd_simulate},
        {"study-schedulability", cmd_study_schedulability},
        {"study-5g", cmd_study_5g},
        {"report", cmd_report},
    };
    static const std::map<std::string, std::string> descriptions{
        {"generate", "generate the scenario (network + streams) and export it"},
        {"schedule", "compute the primary schedule and export it"},
        {"buckets", "compute per-port token buckets"},
        {"augment", "augment the schedule for the elevation policy"},
        {"verify", "verify latency bounds of the augmented schedule"},
        {"simulate", "simulate the augmented schedule and export the trace"},
        {"study-schedulability", "sporadic-load schedulability sweep"},
        {"study-5g", "bounded/unbounded 5G degradation study"},
        {"report", "end-to-end pipeline summary report"},
    };
    for (auto& [name, fn] : commands)
        app.add_subcommand(name, descriptions.at(name))->fallthrough();

    CLI11_PARSE(app, argc, argv);

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return commands.at(sub)(opt);
    } catch (const ev::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ev::Json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ev::InfeasibleError& e) {
        std::cerr << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasible;
    }
}
