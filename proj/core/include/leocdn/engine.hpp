#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leocdn/orbital.hpp"
#include "leocdn/strategies.hpp"
#include "leocdn/topology.hpp"
#include "leocdn/workload.hpp"

namespace leocdn {

struct ScenarioConfig {
    std::filesystem::path locations = "switzerland.csv";
    std::int64_t clients_per_gst = 10000;
    std::int64_t rate = 25000;        // requests per step
    std::int64_t num_items = 25000;
    std::string origin = "Zurich";
    double duration = 86400.0;
    double step = 1.0;
    double zipf_exponent = 0.8;
    std::uint32_t size_min = 1000;
    std::uint32_t size_max = 100000;
    std::uint64_t seed = 1;
};

struct SamplingConfig {
    std::int64_t stride = 1;       // emit every stride-th step
    std::optional<double> warmup;  // summary warm-up window; see SimulationConfig::warmup()
};

struct SimulationConfig {
    ConstellationConfig constellation;
    ScenarioConfig scenario;
    StrategyKind strategy = StrategyKind::Baseline;
    HandoffConvention handoff;
    SamplingConfig sampling;

    std::int64_t num_steps() const noexcept;
    double time_at(std::int64_t step_index) const noexcept { return static_cast<double>(step_index) * scenario.step; }
    /// Explicit sampling.warmup, else 2 * t_cross capped at half the duration.
    double warmup() const;
};

/// Throws ConfigError naming the offending key.
void validate(const SimulationConfig& config);

/// Named parameter sets: "us" and "switzerland".
SimulationConfig preset(std::string_view name);

/// Relative paths are tried against the working directory, $LEOCDN_DATA_DIR and
/// the bundled data directory, in that order.
std::filesystem::path resolve_data_path(const std::filesystem::path& path);

/// Everything derived from the scenario section: stations, catalog, origin.
class Scenario {
public:
    Scenario(SimulationConfig config, std::vector<LocationRecord> locations);
    static Scenario load(const SimulationConfig& config);

    const SimulationConfig& config() const noexcept { return config_; }
    const std::vector<LocationRecord>& locations() const noexcept { return locations_; }
    const std::vector<GroundStation>& stations() const noexcept { return stations_; }
    const ContentCatalog& catalog() const noexcept { return catalog_; }
    const GroundStation& origin() const noexcept { return stations_[static_cast<std::size_t>(origin_id_)]; }
    std::span<const EcefPoint> site_positions() const noexcept { return site_positions_; }
    std::span<const std::string> site_labels() const noexcept { return site_labels_; }

    /// Snapshot at t with every site assigned.
    NetworkSnapshot snapshot(double t) const;

private:
    SimulationConfig config_;
    std::vector<LocationRecord> locations_;
    std::vector<GroundStation> stations_;
    ContentCatalog catalog_;
    int origin_id_ = 0;
    std::vector<EcefPoint> site_positions_;
    std::vector<std::string> site_labels_;
};

/// One routed request.
struct RequestTrace {
    double time = 0.0;
    std::int64_t req = 0;
    int client_gst = 0;
    SatelliteId ingress;
    SatelliteId egress;
    int origin_gst = 0;
    ItemId item = 0;
    std::uint32_t size = 0;
    std::vector<PathNode> path;  // [client GST, ingress, ..., egress, origin GST]
};

/// Step-wise producer of traces ordered by (time, req).
class TraceSource {
public:
    virtual ~TraceSource() = default;
    /// Fills `out` with the next step's traces; false at end of stream.
    virtual bool next_step(double& t, std::vector<RequestTrace>& out) = 0;
};

/// Trace phase: per step rebuild the snapshot, draw requests, route each to the origin.
class TraceGenerator final : public TraceSource {
public:
    explicit TraceGenerator(const Scenario& scenario);
    bool next_step(double& t, std::vector<RequestTrace>& out) override;

    /// Snapshot of the most recent step.
    const NetworkSnapshot& last_snapshot() const noexcept { return snapshot_; }

private:
    const Scenario* scenario_;
    std::int64_t next_index_ = 0;
    NetworkSnapshot snapshot_;
};

/// Runs the trace phase to completion, handing each step to `sink`.
void generate_traces(const Scenario& scenario,
                     const std::function<void(double, std::span<const RequestTrace>)>& sink);

struct StepMetrics {
    double time = 0.0;
    double avg_hops = 0.0;
    double hit_ratio = 1.0;
    double avg_storage_all_pops = 0.0;  // bytes
    std::size_t nonempty_pop_count = 0;
    std::uint64_t request_bytes = 0;
    std::uint64_t propagation_bytes = 0;
    std::int64_t requests = 0;
    std::int64_t hits = 0;
    std::int64_t misses = 0;
};

/// Raw per-step counters accumulated while serving.
struct StepTally {
    double time = 0.0;
    std::int64_t requests = 0;
    std::int64_t hits = 0;
    std::uint64_t hop_sum = 0;
    std::uint64_t request_bytes = 0;
    std::uint64_t propagation_bytes = 0;
};

/// Zero-request steps report avg_hops 0 and hit_ratio 1. Storage is averaged
/// over the strategy's PoP-eligible nodes (0 when there are none).
StepMetrics compute_step_metrics(const StepTally& tally, const StrategyState& state);

/// Replay phase for one strategy; feed steps in (time, req) order.
class Replayer {
public:
    Replayer(StrategyKind kind, const SimulationConfig& config, const ContentCatalog& catalog,
             std::size_t num_stations);

    /// epoch_tick, then every request in order. Throws ValidationError on
    /// out-of-order input or traces inconsistent with the catalog.
    StepMetrics apply_step(double t, std::span<const RequestTrace> traces);

    const StrategyState& state() const noexcept { return state_; }
    StrategyState& state() noexcept { return state_; }
    const std::vector<StoreEvent>& last_events() const noexcept { return events_; }

private:
    const ContentCatalog* catalog_;
    StrategyState state_;
    std::vector<StoreEvent> events_;
    std::optional<double> last_time_;
};

struct SummaryReport {
    std::string strategy;
    std::uint64_t seed = 0;
    double zipf_exponent = 0.0;
    double warmup = 0.0;
    std::size_t steps = 0;
    std::size_t steps_after_warmup = 0;
    double mean_hops = 0.0;
    double mean_hit_ratio = 0.0;
    double mean_storage_bytes = 0.0;
    double mean_nonempty_pops = 0.0;
    std::optional<double> time_to_99_first;      // first step with hit ratio >= 0.99
    std::optional<double> time_to_99_sustained;  // hit ratio >= 0.99 from here on
    std::size_t final_nonempty_pops = 0;
    std::uint64_t total_request_bytes = 0;
    std::uint64_t total_propagation_bytes = 0;
    double epoch_interval = 0.0;
    double epoch_mean_hops = 0.0;
    double non_epoch_mean_hops = 0.0;
    double epoch_hop_ratio = 0.0;
    std::optional<double> spike_period;
    std::optional<double> bandwidth_ratio;  // vs. the supplied baseline series
};

struct SummaryOptions {
    std::string strategy;
    std::uint64_t seed = 0;
    double zipf_exponent = 0.0;
    double warmup = 0.0;
    double step = 1.0;
    double epoch_interval = 0.0;  // steps containing a multiple of this count as epochs
};

SummaryReport summarize(std::span<const StepMetrics> series, const SummaryOptions& options,
                        std::span<const StepMetrics> baseline = {});

/// (request + propagation bytes) / baseline request bytes. Throws ValidationError
/// on empty or mismatched series.
double bandwidth_ratio(std::span<const StepMetrics> series, std::span<const StepMetrics> baseline);

/// Mean distance (in time units) between consecutive spikes, where a spike is the
/// start of a run of values above the midpoint of median and max. nullopt when
/// the series has fewer than two spikes or max <= 1.5 * median.
std::optional<double> detect_spike_period(std::span<const double> values, double step);

SummaryOptions summary_options(const SimulationConfig& config, StrategyKind kind);

struct ReplayResult {
    std::vector<StepMetrics> series;  // every stride-th step
    SummaryReport summary;
};

/// Drives a Replayer over a trace source. `on_step` sees every step before sampling.
ReplayResult replay(TraceSource& traces, StrategyKind kind, const SimulationConfig& config,
                    const ContentCatalog& catalog, std::size_t num_stations,
                    const std::function<void(const StepMetrics&, const Replayer&)>& on_step = {});

}  // namespace leocdn
