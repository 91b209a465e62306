#include "leocdn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "leocdn/error.hpp"

#ifndef LEOCDN_DATA_DIR
#define LEOCDN_DATA_DIR "data"
#endif

namespace leocdn {

std::int64_t SimulationConfig::num_steps() const noexcept {
    return static_cast<std::int64_t>(std::floor(scenario.duration / scenario.step + 1e-9));
}

double SimulationConfig::warmup() const {
    if (sampling.warmup) return *sampling.warmup;
    const auto [intra, cross] = compute_propagation_intervals(constellation);
    return std::min(2.0 * cross, scenario.duration / 2.0);
}

void validate(const SimulationConfig& config) {
    validate(config.constellation);
    const auto& s = config.scenario;
    if (s.clients_per_gst < 1) throw ConfigError("scenario.clients_per_gst must be >= 1");
    if (s.rate < 1) throw ConfigError("scenario.rate must be >= 1");
    if (s.num_items < 1) throw ConfigError("scenario.num_items must be >= 1");
    if (s.num_items > static_cast<std::int64_t>(UINT32_MAX)) {
        throw ConfigError("scenario.num_items exceeds the 32-bit item id space");
    }
    if (s.origin.empty()) throw ConfigError("scenario.origin must name a location");
    if (!(s.step > 0.0)) throw ConfigError("scenario.step must be > 0");
    if (!(s.duration >= s.step)) throw ConfigError("scenario.duration must be >= scenario.step");
    if (!(s.zipf_exponent >= 0.0) || !std::isfinite(s.zipf_exponent)) {
        throw ConfigError("scenario.zipf_exponent must be finite and >= 0");
    }
    if (s.size_min == 0 || s.size_min > s.size_max) {
        throw ConfigError("scenario.size_min/size_max must satisfy 0 < size_min <= size_max");
    }
    if (config.sampling.stride < 1) throw ConfigError("sampling.stride must be >= 1");
    if (config.sampling.warmup && !(*config.sampling.warmup >= 0.0)) {
        throw ConfigError("sampling.warmup must be >= 0");
    }
}

SimulationConfig preset(std::string_view name) {
    SimulationConfig c;
    if (name == "switzerland") {
        c.scenario.locations = "switzerland.csv";
        c.scenario.rate = 25000;
        c.scenario.num_items = 25000;
        c.scenario.origin = "Zurich";
    } else if (name == "us") {
        c.scenario.locations = "us.csv";
        c.scenario.rate = 1000000;
        c.scenario.num_items = 1000000;
        c.scenario.origin = "Ashbourne, VA";
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "' (expected us or switzerland)");
    }
    return c;
}

std::filesystem::path resolve_data_path(const std::filesystem::path& path) {
    if (path.is_absolute() || std::filesystem::exists(path)) return path;
    if (const char* env = std::getenv("LEOCDN_DATA_DIR")) {
        const auto candidate = std::filesystem::path(env) / path;
        if (std::filesystem::exists(candidate)) return candidate;
    }
    const auto bundled = std::filesystem::path(LEOCDN_DATA_DIR) / path;
    if (std::filesystem::exists(bundled)) return bundled;
    return path;
}

namespace {

ContentCatalog catalog_for(const SimulationConfig& c) {
    const auto& s = c.scenario;
    return build_catalog(static_cast<std::size_t>(s.num_items), s.size_min, s.size_max,
                         s.zipf_exponent, s.seed);
}

}  // namespace

Scenario::Scenario(SimulationConfig config, std::vector<LocationRecord> locations)
    : config_(std::move(config)),
      locations_(std::move(locations)),
      stations_(derive_ground_stations(locations_, config_.scenario.clients_per_gst)),
      catalog_(catalog_for(config_)) {
    validate(config_);
    const auto it = std::find_if(locations_.begin(), locations_.end(), [&](const LocationRecord& l) {
        return l.name == config_.scenario.origin;
    });
    if (it == locations_.end()) {
        throw ConfigError("origin '" + config_.scenario.origin + "' not found in locations");
    }
    const int site = static_cast<int>(it - locations_.begin());
    origin_id_ = std::find_if(stations_.begin(), stations_.end(),
                              [&](const GroundStation& g) { return g.site == site; })
                     ->id;
    for (const auto& loc : locations_) {
        site_positions_.push_back(ground_station_position(loc.lat, loc.lon, config_.constellation));
        site_labels_.push_back(loc.name);
    }
}

Scenario Scenario::load(const SimulationConfig& config) {
    validate(config);
    return Scenario(config, load_locations(resolve_data_path(config.scenario.locations)));
}

NetworkSnapshot Scenario::snapshot(double t) const {
    return build_snapshot(config_.constellation, t, site_positions_, site_labels_);
}

TraceGenerator::TraceGenerator(const Scenario& scenario) : scenario_(&scenario) {}

bool TraceGenerator::next_step(double& t, std::vector<RequestTrace>& out) {
    const auto& config = scenario_->config();
    if (next_index_ >= config.num_steps()) return false;
    t = config.time_at(next_index_++);
    out.clear();

    snapshot_ = scenario_->snapshot(t);
    const auto& origin = scenario_->origin();
    const SatelliteId egress = snapshot_.assignment(origin).satellite;
    const ShortestPathTree tree(snapshot_, egress);

    // ISL segments depend only on the ingress satellite, i.e. on the site.
    std::vector<std::vector<SatelliteId>> site_paths(snapshot_.site_links.size());
    const auto requests = generate_requests(scenario_->stations(), scenario_->catalog(),
                                            config.scenario.rate, t, config.scenario.seed);
    out.reserve(requests.size());
    for (const auto& r : requests) {
        const auto& client = scenario_->stations()[static_cast<std::size_t>(r.client_gst)];
        auto& sats = site_paths[static_cast<std::size_t>(client.site)];
        if (sats.empty()) sats = tree.path_from(snapshot_.assignment(client).satellite);

        RequestTrace tr;
        tr.time = t;
        tr.req = r.index;
        tr.client_gst = client.id;
        tr.ingress = sats.front();
        tr.egress = egress;
        tr.origin_gst = origin.id;
        tr.item = r.item;
        tr.size = scenario_->catalog().size_of(r.item);
        tr.path.reserve(sats.size() + 2);
        tr.path.push_back(PathNode::ground(client.id));
        for (const auto& s : sats) tr.path.push_back(PathNode::sat(s));
        tr.path.push_back(PathNode::ground(origin.id));
        out.push_back(std::move(tr));
    }
    return true;
}

void generate_traces(const Scenario& scenario,
                     const std::function<void(double, std::span<const RequestTrace>)>& sink) {
    TraceGenerator gen(scenario);
    double t = 0.0;
    std::vector<RequestTrace> batch;
    while (gen.next_step(t, batch)) sink(t, batch);
}

StepMetrics compute_step_metrics(const StepTally& tally, const StrategyState& state) {
    StepMetrics m;
    m.time = tally.time;
    m.requests = tally.requests;
    m.hits = tally.hits;
    m.misses = tally.requests - tally.hits;
    if (tally.requests > 0) {
        m.avg_hops = static_cast<double>(tally.hop_sum) / static_cast<double>(tally.requests);
        m.hit_ratio = static_cast<double>(tally.hits) / static_cast<double>(tally.requests);
    }
    const std::size_t pops = state.pop_count();
    m.avg_storage_all_pops =
        pops == 0 ? 0.0 : static_cast<double>(state.total_stored_bytes()) / static_cast<double>(pops);
    m.nonempty_pop_count = state.nonempty_stores();
    m.request_bytes = tally.request_bytes;
    m.propagation_bytes = tally.propagation_bytes;
    return m;
}

Replayer::Replayer(StrategyKind kind, const SimulationConfig& config, const ContentCatalog& catalog,
                   std::size_t num_stations)
    : catalog_(&catalog),
      state_(kind, config.constellation, catalog, num_stations, config.scenario.step, config.handoff) {}

StepMetrics Replayer::apply_step(double t, std::span<const RequestTrace> traces) {
    if (last_time_ && !(t > *last_time_)) {
        throw ValidationError("trace steps out of order: t=" + std::to_string(t) + " after t=" +
                              std::to_string(*last_time_));
    }
    last_time_ = t;

    StepTally tally;
    tally.time = t;
    events_ = state_.epoch_tick(t);
    for (const auto& e : events_) {
        if (e.kind != StoreEvent::Kind::Purge) tally.propagation_bytes += e.bytes;
    }

    std::int64_t prev_req = -1;
    for (const auto& tr : traces) {
        if (tr.time != t || tr.req <= prev_req) {
            throw ValidationError("trace (t=" + std::to_string(tr.time) + ", req=" +
                                  std::to_string(tr.req) + ") out of order");
        }
        prev_req = tr.req;
        if (!catalog_->contains(tr.item) || catalog_->size_of(tr.item) != tr.size) {
            throw ValidationError("trace item " + std::to_string(tr.item) +
                                  " does not match the catalog");
        }
        const Request request{tr.time, tr.req, tr.client_gst, tr.item};
        const auto outcome = state_.serve_request(request, tr.path);
        ++tally.requests;
        if (outcome.hit) ++tally.hits;
        tally.hop_sum += static_cast<std::uint64_t>(outcome.hops);
        tally.request_bytes += outcome.request_bytes;
    }
    return compute_step_metrics(tally, state_);
}

SummaryOptions summary_options(const SimulationConfig& config, StrategyKind kind) {
    SummaryOptions o;
    o.strategy = std::string(to_string(kind));
    o.seed = config.scenario.seed;
    o.zipf_exponent = config.scenario.zipf_exponent;
    o.warmup = config.warmup();
    o.step = config.scenario.step * static_cast<double>(config.sampling.stride);
    // Epoch statistics need every step.
    o.epoch_interval = config.sampling.stride == 1 ? compute_ttl(config.constellation) : 0.0;
    return o;
}

ReplayResult replay(TraceSource& traces, StrategyKind kind, const SimulationConfig& config,
                    const ContentCatalog& catalog, std::size_t num_stations,
                    const std::function<void(const StepMetrics&, const Replayer&)>& on_step) {
    Replayer replayer(kind, config, catalog, num_stations);
    ReplayResult result;
    double t = 0.0;
    std::vector<RequestTrace> batch;
    std::int64_t index = 0;
    std::uint64_t request_bytes = 0;
    std::uint64_t propagation_bytes = 0;
    std::size_t final_nonempty = 0;
    while (traces.next_step(t, batch)) {
        const auto m = replayer.apply_step(t, batch);
        if (on_step) on_step(m, replayer);
        request_bytes += m.request_bytes;
        propagation_bytes += m.propagation_bytes;
        final_nonempty = m.nonempty_pop_count;
        if (index++ % config.sampling.stride == 0) result.series.push_back(m);
    }
    if (result.series.empty()) throw ValidationError("trace stream is empty");
    result.summary = summarize(result.series, summary_options(config, kind));
    result.summary.total_request_bytes = request_bytes;
    result.summary.total_propagation_bytes = propagation_bytes;
    result.summary.final_nonempty_pops = final_nonempty;
    return result;
}

}  // namespace leocdn
