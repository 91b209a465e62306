#include "leocdn/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "leocdn/csv.hpp"
#include "leocdn/error.hpp"

namespace leocdn {
namespace {

constexpr double kSecondsPerDay = 86400.0;
constexpr double kEpochSlack = 1e-9;

int wrap(int value, int modulus) noexcept { return ((value % modulus) + modulus) % modulus; }

}  // namespace

std::string_view to_string(StrategyKind kind) noexcept {
    switch (kind) {
        case StrategyKind::Baseline: return "BASELINE";
        case StrategyKind::Gst: return "GST";
        case StrategyKind::Sat: return "SAT";
        case StrategyKind::SatTtl: return "SAT-TTL";
        case StrategyKind::SatRep: return "SAT-REP";
    }
    return "?";
}

StrategyKind parse_strategy(std::string_view text) {
    std::string norm;
    for (const char c : text) {
        norm.push_back(c == '_' ? '-' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    for (const auto kind : kAllStrategies) {
        if (norm == to_string(kind)) return kind;
    }
    throw ConfigError("unknown strategy '" + std::string(text) +
                      "' (expected BASELINE, GST, SAT, SAT-TTL or SAT-REP)");
}

double compute_ttl(const ConstellationConfig& config) {
    if (config.sats_per_plane < 1) throw ConfigError("constellation.sats_per_plane must be >= 1");
    return orbital_period(config) / config.sats_per_plane;
}

std::pair<double, double> compute_propagation_intervals(const ConstellationConfig& config) {
    if (config.num_planes < 1) throw ConfigError("constellation.num_planes must be >= 1");
    return {compute_ttl(config), kSecondsPerDay / config.num_planes};
}

EpochSchedule epoch_schedule(const ConstellationConfig& config) {
    const auto [intra, cross] = compute_propagation_intervals(config);
    return {compute_ttl(config), intra, cross};
}

bool epoch_in_step(double t, double step, double interval) noexcept {
    if (!(interval > 0.0)) return false;
    const double hi = std::floor(t / interval + kEpochSlack);
    const double lo = std::floor((t - step) / interval + kEpochSlack);
    return hi >= 1.0 && hi > lo;
}

SatelliteId handoff_target(SatelliteId id, HandoffKind kind, const ConstellationConfig& config,
                           const HandoffConvention& convention) {
    if (kind == HandoffKind::Intra) {
        return {id.plane, wrap(id.slot + convention.intra_step, config.sats_per_plane)};
    }
    return {wrap(id.plane + convention.cross_step, config.num_planes), id.slot};
}

bool ReplicaStore::insert(ItemId item, std::uint32_t size) {
    const auto [it, added] = items_.try_emplace(item, size);
    if (added) total_bytes_ += size;
    return added;
}

void ReplicaStore::merge_from(ReplicaStore&& other) {
    if (items_.empty()) {
        items_ = std::move(other.items_);
        total_bytes_ = other.total_bytes_;
    } else {
        for (const auto& [item, size] : other.items_) insert(item, size);
    }
    other.clear();
}

void ReplicaStore::clear() noexcept {
    items_.clear();
    total_bytes_ = 0;
}

std::uint64_t ReplicaStore::recompute_bytes(const ContentCatalog& catalog) const {
    std::uint64_t sum = 0;
    for (const auto& entry : items_) sum += catalog.size_of(entry.first);
    return sum;
}

StrategyState::StrategyState(StrategyKind kind, const ConstellationConfig& config,
                             const ContentCatalog& catalog, std::size_t num_stations, double step,
                             HandoffConvention convention)
    : kind_(kind),
      config_(config),
      catalog_(&catalog),
      num_stations_(num_stations),
      step_(step),
      convention_(convention),
      schedule_(epoch_schedule(config)) {
    if (!(step > 0.0)) throw ConfigError("scenario.step must be > 0");
    if (kind_ == StrategyKind::Sat || kind_ == StrategyKind::SatTtl ||
        kind_ == StrategyKind::SatRep) {
        satellite_stores_.reserve(static_cast<std::size_t>(config.num_satellites()));
        for (int i = 0; i < config.num_satellites(); ++i) {
            satellite_stores_.emplace_back(PathNode::sat(from_flat_index(config, i)));
        }
    }
}

std::size_t StrategyState::pop_count() const noexcept {
    switch (kind_) {
        case StrategyKind::Baseline: return 0;
        case StrategyKind::Gst: return num_stations_;
        default: return satellite_stores_.size();
    }
}

const ReplicaStore& StrategyState::satellite_store(SatelliteId id) const {
    if (satellite_stores_.empty()) throw std::logic_error("strategy keeps no satellite stores");
    return satellite_stores_.at(static_cast<std::size_t>(flat_index(config_, id)));
}

const ReplicaStore* StrategyState::station_store(int station) const {
    const auto it = station_stores_.find(station);
    return it == station_stores_.end() ? nullptr : &it->second;
}

ReplicaStore& StrategyState::check_store(const PathNode& node) {
    if (node.is_station()) {
        return station_stores_.try_emplace(node.station, node).first->second;
    }
    return satellite_stores_.at(static_cast<std::size_t>(flat_index(config_, node.satellite)));
}

void StrategyState::mark(const PathNode& node) {
    if (!all_modified_) modified_.push_back(node);
}

ServeOutcome StrategyState::serve_request(const Request& request, std::span<const PathNode> path) {
    if (!catalog_->contains(request.item)) {
        throw std::logic_error("item " + std::to_string(request.item) + " not in catalog");
    }
    if (path.size() < 3 || !path.front().is_station() || !path.back().is_station() ||
        path[1].is_station() || path.front().station != request.client_gst) {
        throw std::logic_error("path does not start at the requesting station's ingress satellite");
    }
    const std::uint32_t size = catalog_->size_of(request.item);
    const int full_hops = static_cast<int>(path.size()) - 1;

    ServeOutcome out;
    if (kind_ == StrategyKind::Baseline) {
        out = {path.back(), false, full_hops, 0};
    } else {
        // GST checks the client's own station, the SAT family the ingress satellite.
        const PathNode& check = kind_ == StrategyKind::Gst ? path.front() : path[1];
        ReplicaStore& store = check_store(check);
        if (store.contains(request.item)) {
            out = {check, true, hop_count(path, check), 0};
        } else {
            const bool was_empty = store.empty();
            store.insert(request.item, size);
            total_bytes_ += size;
            if (was_empty) ++nonempty_;
            mark(check);
            out = {path.back(), false, full_hops, 0};
        }
    }
    out.request_bytes = static_cast<std::uint64_t>(size) * static_cast<std::uint64_t>(out.hops);
    return out;
}

void StrategyState::move_satellite_stores(HandoffKind kind, double t,
                                          std::vector<StoreEvent>& events) {
    std::vector<ReplicaStore> next;
    next.reserve(satellite_stores_.size());
    for (const auto& s : satellite_stores_) next.emplace_back(s.node());

    const auto event_kind =
        kind == HandoffKind::Intra ? StoreEvent::Kind::PropagateIntra : StoreEvent::Kind::PropagateCross;
    for (auto& store : satellite_stores_) {
        if (store.empty()) continue;
        const SatelliteId source = store.node().satellite;
        const SatelliteId target = handoff_target(source, kind, config_, convention_);
        events.push_back({event_kind, t, source, target, store.item_count(), store.total_bytes()});
        next[static_cast<std::size_t>(flat_index(config_, target))].merge_from(std::move(store));
    }
    satellite_stores_ = std::move(next);

    total_bytes_ = 0;
    nonempty_ = 0;
    for (const auto& s : satellite_stores_) {
        total_bytes_ += s.total_bytes();
        if (!s.empty()) ++nonempty_;
    }
    all_modified_ = true;
    modified_.clear();
}

std::vector<StoreEvent> StrategyState::epoch_tick(double t) {
    std::vector<StoreEvent> events;
    if (t < 0.0) throw std::invalid_argument("epoch_tick needs t >= 0");
    if (kind_ == StrategyKind::SatTtl && epoch_in_step(t, step_, schedule_.t_ttl)) {
        for (auto& store : satellite_stores_) {
            if (store.empty()) continue;
            const SatelliteId id = store.node().satellite;
            events.push_back({StoreEvent::Kind::Purge, t, id, id, store.item_count(), store.total_bytes()});
            store.clear();
        }
        total_bytes_ = 0;
        nonempty_ = 0;
    } else if (kind_ == StrategyKind::SatRep) {
        if (epoch_in_step(t, step_, schedule_.t_intra)) {
            move_satellite_stores(HandoffKind::Intra, t, events);
        }
        if (epoch_in_step(t, step_, schedule_.t_cross)) {
            move_satellite_stores(HandoffKind::Cross, t, events);
        }
    }
    return events;
}

bool StrategyState::verify_store(const ReplicaStore& store) const {
    std::uint64_t sum = 0;
    for (const auto& [item, size] : store.items()) {
        if (!catalog_->contains(item) || catalog_->size_of(item) != size) return false;
        sum += size;
    }
    return sum == store.total_bytes();
}

std::vector<const ReplicaStore*> StrategyState::nonempty_store_list() const {
    std::vector<const ReplicaStore*> out;
    std::vector<int> ids;
    for (const auto& [id, store] : station_stores_) {
        if (!store.empty()) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    for (const int id : ids) out.push_back(&station_stores_.at(id));
    for (const auto& store : satellite_stores_) {
        if (!store.empty()) out.push_back(&store);
    }
    return out;
}

void write_store_dump_csv(std::ostream& out, const StrategyState& state, double t, bool header) {
    if (header) out << "t,node,item_count,total_bytes\n";
    const std::string time = format_double(t);
    for (const auto* store : state.nonempty_store_list()) {
        out << time << ',' << to_string(store->node()) << ',' << store->item_count() << ','
            << store->total_bytes() << '\n';
    }
}

bool StrategyState::verify_all() const {
    std::uint64_t total = 0;
    std::size_t nonempty = 0;
    for (const auto& s : satellite_stores_) {
        if (!verify_store(s)) return false;
        total += s.total_bytes();
        if (!s.empty()) ++nonempty;
    }
    for (const auto& [id, s] : station_stores_) {
        if (!verify_store(s)) return false;
        total += s.total_bytes();
        if (!s.empty()) ++nonempty;
    }
    if (kind_ == StrategyKind::Baseline && (total != 0 || nonempty != 0)) return false;
    return total == total_bytes_ && nonempty == nonempty_;
}

bool StrategyState::verify_modified() {
    bool ok = true;
    if (all_modified_) {
        ok = verify_all();
    } else {
        std::sort(modified_.begin(), modified_.end(), [](const PathNode& a, const PathNode& b) {
            return std::tie(a.kind, a.station, a.satellite) < std::tie(b.kind, b.station, b.satellite);
        });
        modified_.erase(std::unique(modified_.begin(), modified_.end()), modified_.end());
        for (const auto& node : modified_) {
            const ReplicaStore* store = node.is_station() ? station_store(node.station)
                                                          : &satellite_store(node.satellite);
            if (store && !verify_store(*store)) ok = false;
        }
    }
    modified_.clear();
    all_modified_ = false;
    return ok;
}

}  // namespace leocdn
