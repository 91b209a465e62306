#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "leocdn/orbital.hpp"
#include "leocdn/topology.hpp"
#include "leocdn/workload.hpp"

namespace leocdn {

enum class StrategyKind { Baseline, Gst, Sat, SatTtl, SatRep };

inline constexpr std::array<StrategyKind, 5> kAllStrategies{
    StrategyKind::Baseline, StrategyKind::Gst, StrategyKind::Sat, StrategyKind::SatTtl,
    StrategyKind::SatRep};

/// "BASELINE", "GST", "SAT", "SAT-TTL", "SAT-REP"
std::string_view to_string(StrategyKind kind) noexcept;
/// Case-insensitive; accepts '-' or '_' as separator. Throws ConfigError.
StrategyKind parse_strategy(std::string_view text);

struct EpochSchedule {
    double t_ttl = 0.0;
    double t_intra = 0.0;
    double t_cross = 0.0;
};

/// Orbital period divided by the satellites per plane: the in-plane handoff interval.
double compute_ttl(const ConstellationConfig& config);
/// (in-plane interval, 86,400 s / number of planes)
std::pair<double, double> compute_propagation_intervals(const ConstellationConfig& config);
EpochSchedule epoch_schedule(const ConstellationConfig& config);

/// True when some boundary k * interval with k >= 1 falls in (t - step, t].
bool epoch_in_step(double t, double step, double interval) noexcept;

enum class HandoffKind { Intra, Cross };

/// Slot/plane offsets applied by handoff_target. Slots increase in the direction
/// of motion, so the trailing in-plane neighbour is slot - 1. Earth rotation
/// carries ground points toward increasing plane indices, hence plane + 1.
struct HandoffConvention {
    int intra_step = -1;
    int cross_step = +1;
};

SatelliteId handoff_target(SatelliteId id, HandoffKind kind, const ConstellationConfig& config,
                           const HandoffConvention& convention = {});

/// Unbounded replica store of one PoP. total_bytes() tracks the member sizes.
class ReplicaStore {
public:
    ReplicaStore() = default;
    explicit ReplicaStore(PathNode node) : node_(node) {}

    const PathNode& node() const noexcept { return node_; }
    bool contains(ItemId item) const { return items_.contains(item); }
    /// Returns false when the item was already present.
    bool insert(ItemId item, std::uint32_t size);
    /// Union; items already present are kept once.
    void merge_from(ReplicaStore&& other);
    void clear() noexcept;

    bool empty() const noexcept { return items_.empty(); }
    std::size_t item_count() const noexcept { return items_.size(); }
    std::uint64_t total_bytes() const noexcept { return total_bytes_; }
    const std::unordered_map<ItemId, std::uint32_t>& items() const noexcept { return items_; }

    /// Sum of member sizes as recorded in the catalog.
    std::uint64_t recompute_bytes(const ContentCatalog& catalog) const;

private:
    PathNode node_{};
    std::unordered_map<ItemId, std::uint32_t> items_;
    std::uint64_t total_bytes_ = 0;
};

struct ServeOutcome {
    PathNode serving_node;
    bool hit = false;
    int hops = 0;
    std::uint64_t request_bytes = 0;  // item size * hops
};

struct StoreEvent {
    enum class Kind { Purge, PropagateIntra, PropagateCross };

    Kind kind = Kind::Purge;
    double time = 0.0;
    SatelliteId source;
    SatelliteId target;  // equals source for purges
    std::size_t items = 0;
    std::uint64_t bytes = 0;
};

/// Replica state of one strategy. Mutated in canonical order by the replay loop:
/// epoch_tick(t) first, then serve_request for each of the step's requests.
class StrategyState {
public:
    StrategyState(StrategyKind kind, const ConstellationConfig& config,
                  const ContentCatalog& catalog, std::size_t num_stations, double step = 1.0,
                  HandoffConvention convention = {});

    StrategyKind kind() const noexcept { return kind_; }
    const EpochSchedule& schedule() const noexcept { return schedule_; }

    /// `path` is [client GST, ingress, ..., egress, origin GST].
    ServeOutcome serve_request(const Request& request, std::span<const PathNode> path);
    ServeOutcome serve_request(const Request& request, const RoutePath& path) {
        return serve_request(request, std::span<const PathNode>(path.nodes));
    }

    /// Purges (SAT-TTL) or propagations (SAT-REP) due in (t - step, t].
    std::vector<StoreEvent> epoch_tick(double t);

    /// Nodes eligible to hold replicas: stations for GST, satellites for SAT*, none for BASELINE.
    std::size_t pop_count() const noexcept;
    std::size_t nonempty_stores() const noexcept { return nonempty_; }
    std::uint64_t total_stored_bytes() const noexcept { return total_bytes_; }

    const ReplicaStore& satellite_store(SatelliteId id) const;
    /// nullptr when the station never stored anything.
    const ReplicaStore* station_store(int station) const;
    /// Non-empty stores, stations by id first, then satellites by id.
    std::vector<const ReplicaStore*> nonempty_store_list() const;

    /// Recomputes every store's byte total from the catalog and the running totals
    /// from the stores. Returns false on any mismatch.
    bool verify_all() const;
    /// Same check restricted to stores modified since the previous call.
    bool verify_modified();

private:
    ReplicaStore& check_store(const PathNode& node);
    void move_satellite_stores(HandoffKind kind, double t, std::vector<StoreEvent>& events);
    void mark(const PathNode& node);
    bool verify_store(const ReplicaStore& store) const;

    StrategyKind kind_;
    ConstellationConfig config_;
    const ContentCatalog* catalog_;
    std::size_t num_stations_;
    double step_;
    HandoffConvention convention_;
    EpochSchedule schedule_;

    std::vector<ReplicaStore> satellite_stores_;
    std::unordered_map<int, ReplicaStore> station_stores_;
    std::uint64_t total_bytes_ = 0;
    std::size_t nonempty_ = 0;
    std::vector<PathNode> modified_;
    bool all_modified_ = false;
};

/// CSV rows t,node,item_count,total_bytes for every non-empty store; pass
/// header=false to append further samples.
void write_store_dump_csv(std::ostream& out, const StrategyState& state, double t,
                          bool header = true);

}  // namespace leocdn
