#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "config.hpp"
#include "leocdn/csv.hpp"
#include "leocdn/engine.hpp"
#include "leocdn/error.hpp"
#include "leocdn/trace_io.hpp"

namespace leocdn::cli {
namespace {

namespace fs = std::filesystem;

SimulationConfig load_config(const Invocation& inv) {
    auto config = parse_config(inv.config_path, inv.preset, inv.overrides);
    if (inv.seed) config.scenario.seed = *inv.seed;
    if (inv.strategies.size() == 1 && inv.strategies.front() != "all") {
        config.strategy = parse_strategy(inv.strategies.front());
    }
    validate(config);
    return config;
}

std::vector<StrategyKind> selected_strategies(const Invocation& inv, const SimulationConfig& config) {
    if (inv.strategies.empty()) return {config.strategy};
    std::vector<StrategyKind> out;
    for (const auto& name : inv.strategies) {
        if (name == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
        out.push_back(parse_strategy(name));
    }
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string provenance(std::string_view what, const SimulationConfig& config) {
    return "# leocdn " + std::string(what) + " seed=" + std::to_string(config.scenario.seed) + "\n";
}

void cmd_constellation(const Invocation& inv, const SimulationConfig& config) {
    const auto scenario = Scenario::load(config);
    std::vector<double> times = inv.times;
    if (times.empty()) times.push_back(0.0);
    std::vector<NetworkSnapshot> snaps;
    for (const double t : times) snaps.push_back(scenario.snapshot(t));

    write_file_atomically(inv.out_dir / "satellites.csv", [&](std::ostream& out) {
        out << provenance("satellites", config) << "t,plane,slot,x_m,y_m,z_m\n";
        for (const auto& s : snaps) {
            const std::string t = format_double(s.time);
            for (int i = 0; i < config.constellation.num_satellites(); ++i) {
                const auto id = from_flat_index(config.constellation, i);
                const auto& p = s.positions[static_cast<std::size_t>(i)];
                out << t << ',' << id.plane << ',' << id.slot << ',' << format_double(p.x) << ','
                    << format_double(p.y) << ',' << format_double(p.z) << '\n';
            }
        }
    });
    write_file_atomically(inv.out_dir / "isl_edges.csv", [&](std::ostream& out) {
        out << provenance("isl_edges", config);
        for (std::size_t i = 0; i < snaps.size(); ++i) write_isl_edges_csv(out, snaps[i], i == 0);
    });
    write_file_atomically(inv.out_dir / "assignments.csv", [&](std::ostream& out) {
        out << provenance("assignments", config) << "t,site,city,plane,slot,gsl_length_m\n";
        for (const auto& s : snaps) {
            const std::string t = format_double(s.time);
            for (std::size_t i = 0; i < s.site_links.size(); ++i) {
                const auto& link = s.site_links[i];
                out << t << ',' << i << ',' << csv_field(scenario.site_labels()[i]) << ','
                    << link.satellite.plane << ',' << link.satellite.slot << ','
                    << format_double(link.length) << '\n';
            }
        }
    });
    spdlog::info("wrote {} snapshot(s) to {}", snaps.size(), inv.out_dir.string());
}

void cmd_workload(const Invocation& inv, const SimulationConfig& config) {
    const auto scenario = Scenario::load(config);
    write_file_atomically(inv.out_dir / "catalog.csv", [&](std::ostream& out) {
        out << provenance("catalog", config);
        write_catalog_csv(out, scenario.catalog());
    });
    write_file_atomically(inv.out_dir / "stations.csv", [&](std::ostream& out) {
        out << provenance("stations", config);
        write_stations_csv(out, scenario.stations());
    });
    spdlog::info("{} items, {} ground stations", scenario.catalog().size(),
                 scenario.stations().size());
}

fs::path default_trace_path(const Invocation& inv) {
    if (inv.traces) return *inv.traces;
    return inv.out_dir / (inv.binary ? "traces.bin" : "traces.csv");
}

void cmd_trace(const Invocation& inv, const SimulationConfig& config) {
    const auto scenario = Scenario::load(config);
    const auto path = default_trace_path(inv);
    const auto total = config.num_steps();
    std::int64_t done = 0;
    write_file_atomically(
        path,
        [&](std::ostream& out) {
            TraceWriter writer(out, inv.binary ? TraceFormat::Binary : TraceFormat::Csv,
                               config.scenario.seed);
            generate_traces(scenario, [&](double t, std::span<const RequestTrace> batch) {
                writer.write(batch);
                if (++done % std::max<std::int64_t>(1, total / 10) == 0) {
                    spdlog::info("trace t={} ({}/{})", t, done, total);
                }
            });
        },
        inv.binary);
    write_file_atomically(path.string() + ".config.toml",
                          [&](std::ostream& out) { out << to_toml(config); });
    spdlog::info("wrote {} steps to {}", done, path.string());
}

void cmd_replay(const Invocation& inv, const SimulationConfig& config) {
    const auto scenario = Scenario::load(config);
    const auto path = default_trace_path(inv);
    for (const auto kind : selected_strategies(inv, config)) {
        TraceFile traces(path);
        if (const auto seed = traces.reader().seed(); seed && *seed != config.scenario.seed) {
            throw ValidationError(path.string() + ": trace seed " + std::to_string(*seed) +
                                  " differs from configured seed " +
                                  std::to_string(config.scenario.seed));
        }
        const std::string name(to_string(kind));
        ReplayResult result;
        if (inv.store_dump) {
            write_file_atomically(inv.out_dir / ("stores_" + name + ".csv"), [&](std::ostream& out) {
                out << provenance("stores " + name, config);
                std::int64_t index = 0;
                result = replay(traces, kind, config, scenario.catalog(), scenario.stations().size(),
                                [&](const StepMetrics& m, const Replayer& r) {
                                    if (index % config.sampling.stride == 0) {
                                        write_store_dump_csv(out, r.state(), m.time, index == 0);
                                    }
                                    ++index;
                                });
            });
        } else {
            result = replay(traces, kind, config, scenario.catalog(), scenario.stations().size());
        }
        write_file_atomically(inv.out_dir / ("metrics_" + name + ".csv"), [&](std::ostream& out) {
            write_metrics_csv(out, result.series, name, config.scenario.seed);
        });
        write_file_atomically(inv.out_dir / ("summary_" + name + ".json"),
                              [&](std::ostream& out) { out << summary_to_json(result.summary); });
        spdlog::info("{}: mean hops {:.3f}, mean hit ratio {:.4f}", name, result.summary.mean_hops,
                     result.summary.mean_hit_ratio);
    }
}

void cmd_report(const Invocation& inv, const SimulationConfig& config) {
    std::vector<StrategyKind> kinds;
    if (!inv.strategies.empty()) {
        kinds = selected_strategies(inv, config);
    } else {
        for (const auto k : kAllStrategies) {
            if (fs::exists(inv.out_dir / ("metrics_" + std::string(to_string(k)) + ".csv"))) {
                kinds.push_back(k);
            }
        }
    }
    if (kinds.empty()) throw IoError("no metrics_<strategy>.csv files in " + inv.out_dir.string());

    std::map<StrategyKind, std::vector<StepMetrics>> series;
    for (const auto k : kinds) {
        series[k] = read_metrics_csv(inv.out_dir / ("metrics_" + std::string(to_string(k)) + ".csv"));
    }
    const auto& first = series.at(kinds.front());
    for (const auto k : kinds) {
        const auto& s = series.at(k);
        if (s.size() != first.size() ||
            !std::equal(s.begin(), s.end(), first.begin(),
                        [](const StepMetrics& a, const StepMetrics& b) { return a.time == b.time; })) {
            throw ValidationError("metrics series of " + std::string(to_string(k)) +
                                  " do not share time stamps with " +
                                  std::string(to_string(kinds.front())));
        }
    }

    using Getter = std::string (*)(const StepMetrics&);
    const std::vector<std::pair<std::string, Getter>> columns = {
        {"avg_hops", [](const StepMetrics& m) { return format_double(m.avg_hops); }},
        {"hit_ratio", [](const StepMetrics& m) { return format_double(m.hit_ratio); }},
        {"avg_storage_bytes", [](const StepMetrics& m) { return format_double(m.avg_storage_all_pops); }},
        {"nonempty_pops", [](const StepMetrics& m) { return std::to_string(m.nonempty_pop_count); }},
        {"request_bytes", [](const StepMetrics& m) { return std::to_string(m.request_bytes); }},
        {"propagation_bytes", [](const StepMetrics& m) { return std::to_string(m.propagation_bytes); }},
    };
    for (const auto& [metric, get] : columns) {
        write_file_atomically(inv.out_dir / ("report_" + metric + ".csv"), [&](std::ostream& out) {
            out << provenance("report " + metric, config) << 't';
            for (const auto k : kinds) out << ',' << to_string(k);
            out << '\n';
            for (std::size_t i = 0; i < first.size(); ++i) {
                out << format_double(first[i].time);
                for (const auto k : kinds) out << ',' << get(series.at(k)[i]);
                out << '\n';
            }
        });
    }

    const auto baseline = series.find(StrategyKind::Baseline);
    nlohmann::ordered_json doc;
    for (const auto k : kinds) {
        const auto report =
            summarize(series.at(k), summary_options(config, k),
                      baseline == series.end() ? std::span<const StepMetrics>{}
                                               : std::span<const StepMetrics>(baseline->second));
        doc[std::string(to_string(k))] = nlohmann::ordered_json::parse(summary_to_json(report));
    }
    write_file_atomically(inv.out_dir / "report_summary.json",
                          [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
    spdlog::info("report for {} strateg{} written to {}", kinds.size(),
                 kinds.size() == 1 ? "y" : "ies", inv.out_dir.string());
}

void init_logging() {
    static bool done = false;
    if (done) return;
    done = true;
    spdlog::set_pattern("[%l] %v");
    if (const char* env = std::getenv("LEOCDN_LOG")) {
        spdlog::set_level(spdlog::level::from_str(env));
    } else {
        spdlog::set_level(spdlog::level::info);
    }
}

}  // namespace

void run_subcommand(const Invocation& inv) {
    const auto config = load_config(inv);
    ensure_dir(inv.out_dir);
    if (inv.subcommand == "constellation") {
        cmd_constellation(inv, config);
    } else if (inv.subcommand == "workload") {
        cmd_workload(inv, config);
    } else if (inv.subcommand == "trace") {
        cmd_trace(inv, config);
    } else if (inv.subcommand == "replay") {
        cmd_replay(inv, config);
    } else if (inv.subcommand == "report") {
        cmd_report(inv, config);
    } else {
        throw ConfigError("unknown subcommand '" + inv.subcommand + "'");
    }
}

int execute(const Invocation& inv) {
    init_logging();
    try {
        run_subcommand(inv);
        return 0;
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(e.error_class());
    } catch (const std::exception& e) {
        spdlog::error("internal error: {}", e.what());
        return static_cast<int>(ErrorClass::Simulation);
    }
}

int run_main(int argc, char** argv) {
    CLI::App app{"LEO constellation CDN placement simulator"};
    app.require_subcommand(1, 1);
    Invocation inv;
    std::string config_path, trace_path;
    std::uint64_t seed = 0;

    const std::vector<std::pair<const char*, const char*>> subcommands = {
        {"constellation", "dump satellite positions, ISL edges and ground links"},
        {"workload", "write the content catalog and ground stations"},
        {"trace", "generate routed request traces"},
        {"replay", "replay traces under one or more strategies"},
        {"report", "merge metrics files into per-metric tables and a summary"},
    };
    for (const auto& [name, help] : subcommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "TOML configuration file");
        sub->add_option("--preset", inv.preset, "us | switzerland");
        sub->add_option("--set", inv.overrides, "section.key=value override (repeatable)");
        sub->add_option("--out", inv.out_dir, "output directory");
        sub->add_option("--seed", seed, "root seed override");
        sub->add_option("--strategy", inv.strategies,
                        "BASELINE | GST | SAT | SAT-TTL | SAT-REP | all (repeatable)");
        sub->add_option("--traces", trace_path, "trace file");
        sub->add_flag("--binary", inv.binary, "use the binary trace format");
        if (std::string_view(name) == "replay") {
            sub->add_flag("--store-dump", inv.store_dump,
                          "also write per-store item counts and bytes at every sampled step");
        }
        if (std::string_view(name) == "constellation") {
            sub->add_option("--time", inv.times, "snapshot time in seconds (repeatable)");
        }
        sub->callback([&inv, name = std::string(name)] { inv.subcommand = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorClass::Config);
    }
    for (const auto* sub : app.get_subcommands()) {
        if (sub->count("--config")) inv.config_path = config_path;
        if (sub->count("--traces")) inv.traces = trace_path;
        if (sub->count("--seed")) inv.seed = seed;
    }
    return execute(inv);
}

}  // namespace leocdn::cli
