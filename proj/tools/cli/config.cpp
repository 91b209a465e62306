#include "config.hpp"

#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <toml.hpp>

#include "leocdn/error.hpp"

namespace leocdn::cli {
namespace {

using Setter = std::function<void(SimulationConfig&, const toml::node&, const std::string&)>;

[[noreturn]] void type_error(const std::string& key, const char* expected) {
    throw ConfigError(key + ": expected " + expected);
}

std::int64_t as_int(const toml::node& n, const std::string& key) {
    if (!n.is_integer()) type_error(key, "an integer");
    return *n.value<std::int64_t>();
}

double as_double(const toml::node& n, const std::string& key) {
    if (!n.is_number()) type_error(key, "a number");
    return *n.value<double>();
}

std::string as_string(const toml::node& n, const std::string& key) {
    if (!n.is_string()) type_error(key, "a string");
    return *n.value<std::string>();
}

std::int64_t non_negative(std::int64_t v, const std::string& key) {
    if (v < 0) throw ConfigError(key + ": must be >= 0");
    return v;
}

template <typename T, typename Field>
Setter int_field(Field field) {
    return [field](SimulationConfig& c, const toml::node& n, const std::string& key) {
        const auto v = as_int(n, key);
        if constexpr (std::is_unsigned_v<T>) {
            non_negative(v, key);
            if (static_cast<std::uint64_t>(v) > std::numeric_limits<T>::max()) {
                throw ConfigError(key + ": out of range");
            }
        } else if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) {
            throw ConfigError(key + ": out of range");
        }
        field(c) = static_cast<T>(v);
    };
}

template <typename Field>
Setter double_field(Field field) {
    return [field](SimulationConfig& c, const toml::node& n, const std::string& key) {
        field(c) = as_double(n, key);
    };
}

Setter direction_field(int HandoffConvention::*member) {
    return [member](SimulationConfig& c, const toml::node& n, const std::string& key) {
        const auto v = as_int(n, key);
        if (v != 1 && v != -1) throw ConfigError(key + ": must be +1 or -1");
        c.handoff.*member = static_cast<int>(v);
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        // clang-format off
        t["constellation.num_planes"] = int_field<int>([](SimulationConfig& c) -> auto& { return c.constellation.num_planes; });
        t["constellation.sats_per_plane"] = int_field<int>([](SimulationConfig& c) -> auto& { return c.constellation.sats_per_plane; });
        t["constellation.altitude"] = double_field([](SimulationConfig& c) -> auto& { return c.constellation.altitude; });
        t["constellation.inclination"] = double_field([](SimulationConfig& c) -> auto& { return c.constellation.inclination; });
        t["constellation.raan_spread"] = double_field([](SimulationConfig& c) -> auto& { return c.constellation.raan_spread; });
        t["constellation.phasing_offset"] = double_field([](SimulationConfig& c) -> auto& { return c.constellation.phasing_offset; });
        t["constellation.earth_radius"] = double_field([](SimulationConfig& c) -> auto& { return c.constellation.earth_radius; });
        t["constellation.earth_mu"] = double_field([](SimulationConfig& c) -> auto& { return c.constellation.earth_mu; });
        t["constellation.earth_rotation_period"] = double_field([](SimulationConfig& c) -> auto& { return c.constellation.earth_rotation_period; });
        t["constellation.min_elevation"] = double_field([](SimulationConfig& c) -> auto& { return c.constellation.min_elevation; });

        t["scenario.clients_per_gst"] = int_field<std::int64_t>([](SimulationConfig& c) -> auto& { return c.scenario.clients_per_gst; });
        t["scenario.rate"] = int_field<std::int64_t>([](SimulationConfig& c) -> auto& { return c.scenario.rate; });
        t["scenario.num_items"] = int_field<std::int64_t>([](SimulationConfig& c) -> auto& { return c.scenario.num_items; });
        t["scenario.duration"] = double_field([](SimulationConfig& c) -> auto& { return c.scenario.duration; });
        t["scenario.step"] = double_field([](SimulationConfig& c) -> auto& { return c.scenario.step; });
        t["scenario.zipf_exponent"] = double_field([](SimulationConfig& c) -> auto& { return c.scenario.zipf_exponent; });
        t["scenario.size_min"] = int_field<std::uint32_t>([](SimulationConfig& c) -> auto& { return c.scenario.size_min; });
        t["scenario.size_max"] = int_field<std::uint32_t>([](SimulationConfig& c) -> auto& { return c.scenario.size_max; });
        t["scenario.seed"] = int_field<std::uint64_t>([](SimulationConfig& c) -> auto& { return c.scenario.seed; });
        t["sampling.stride"] = int_field<std::int64_t>([](SimulationConfig& c) -> auto& { return c.sampling.stride; });
        // clang-format on

        t["scenario.locations"] = [](SimulationConfig& c, const toml::node& n, const std::string& key) {
            c.scenario.locations = as_string(n, key);
        };
        t["scenario.origin"] = [](SimulationConfig& c, const toml::node& n, const std::string& key) {
            c.scenario.origin = as_string(n, key);
        };
        t["strategy.kind"] = [](SimulationConfig& c, const toml::node& n, const std::string& key) {
            try {
                c.strategy = parse_strategy(as_string(n, key));
            } catch (const ConfigError& e) {
                throw ConfigError(key + ": " + e.what());
            }
        };
        t["strategy.intra_direction"] = direction_field(&HandoffConvention::intra_step);
        t["strategy.cross_direction"] = direction_field(&HandoffConvention::cross_step);
        t["sampling.warmup"] = [](SimulationConfig& c, const toml::node& n, const std::string& key) {
            c.sampling.warmup = as_double(n, key);
        };
        return t;
    }();
    return table;
}

void apply_key(SimulationConfig& c, const std::string& key, const toml::node& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
    it->second(c, value, key);
}

toml::table parse_table(std::string_view text, std::string_view source) {
    try {
        return toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        const auto& where = e.source().begin;
        throw ConfigError(std::string(source) + ":" + std::to_string(where.line) + ": " +
                          std::string(e.description()));
    }
}

void apply_table(SimulationConfig& c, const toml::table& root) {
    for (const auto& [section, node] : root) {
        const std::string name(section.str());
        if (name == "preset") continue;
        const auto* table = node.as_table();
        if (!table) {
            if (name == "constellation" || name == "scenario" || name == "strategy" ||
                name == "sampling") {
                type_error(name, "a table");
            }
            throw ConfigError("unknown key '" + name + "'");
        }
        for (const auto& [key, value] : *table) {
            apply_key(c, name + "." + std::string(key.str()), value);
        }
    }
}

}  // namespace

void apply_override(SimulationConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    toml::table parsed;
    try {
        parsed = toml::parse("v = " + text);
    } catch (const toml::parse_error&) {
        parsed = toml::table{{"v", text}};
    }
    apply_key(config, key, *parsed.get("v"));
}

SimulationConfig parse_config_text(std::string_view toml_text, std::string_view source,
                                   const std::optional<std::string>& preset_name,
                                   const std::vector<std::string>& overrides) {
    const auto root = parse_table(toml_text, source);
    std::optional<std::string> base = preset_name;
    if (!base) {
        if (const auto* node = root.get("preset")) base = as_string(*node, "preset");
    }
    SimulationConfig config = base ? preset(*base) : SimulationConfig{};
    apply_table(config, root);
    for (const auto& o : overrides) apply_override(config, o);
    validate(config);
    return config;
}

SimulationConfig parse_config(const std::optional<std::filesystem::path>& path,
                              const std::optional<std::string>& preset_name,
                              const std::vector<std::string>& overrides) {
    if (!path) return parse_config_text("", "<none>", preset_name, overrides);
    std::ifstream in(*path);
    if (!in) throw IoError("cannot read config file " + path->string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path->string(), preset_name, overrides);
}

std::string to_toml(const SimulationConfig& c) {
    const auto& k = c.constellation;
    const auto& s = c.scenario;
    toml::table constellation{
        {"num_planes", k.num_planes},       {"sats_per_plane", k.sats_per_plane},
        {"altitude", k.altitude},           {"inclination", k.inclination},
        {"raan_spread", k.raan_spread},     {"phasing_offset", k.phasing_offset},
        {"earth_radius", k.earth_radius},   {"earth_mu", k.earth_mu},
        {"earth_rotation_period", k.earth_rotation_period},
        {"min_elevation", k.min_elevation},
    };
    toml::table scenario{
        {"locations", s.locations.string()},
        {"clients_per_gst", s.clients_per_gst},
        {"rate", s.rate},
        {"num_items", s.num_items},
        {"origin", s.origin},
        {"duration", s.duration},
        {"step", s.step},
        {"zipf_exponent", s.zipf_exponent},
        {"size_min", static_cast<std::int64_t>(s.size_min)},
        {"size_max", static_cast<std::int64_t>(s.size_max)},
        {"seed", static_cast<std::int64_t>(s.seed)},
    };
    toml::table strategy{
        {"kind", std::string(to_string(c.strategy))},
        {"intra_direction", c.handoff.intra_step},
        {"cross_direction", c.handoff.cross_step},
    };
    toml::table sampling{{"stride", c.sampling.stride}};
    if (c.sampling.warmup) sampling.insert("warmup", *c.sampling.warmup);
    toml::table root{{"constellation", constellation},
                     {"scenario", scenario},
                     {"strategy", strategy},
                     {"sampling", sampling}};
    std::ostringstream out;
    out << root << '\n';
    return out.str();
}

}  // namespace leocdn::cli
