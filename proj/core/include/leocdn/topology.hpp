#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leocdn/orbital.hpp"

namespace leocdn {

/// A fixed terminal aggregating `num_clients` clients. Stations derived from the
/// same city share a `site`, the index of that city's coordinates.
struct GroundStation {
    int id = 0;
    std::string city_name;
    double lat = 0.0;
    double lon = 0.0;
    std::int64_t num_clients = 1;
    int site = 0;
};

/// A node of a routed path: either a ground station or a satellite.
struct PathNode {
    enum class Kind : std::uint8_t { Station, Satellite };

    Kind kind = Kind::Station;
    int station = -1;
    SatelliteId satellite{};

    static PathNode ground(int station_id) noexcept { return {Kind::Station, station_id, {}}; }
    static PathNode sat(SatelliteId id) noexcept { return {Kind::Satellite, -1, id}; }

    bool is_station() const noexcept { return kind == Kind::Station; }
    bool operator==(const PathNode&) const = default;
};

/// "G<id>" for stations, "S<plane>.<slot>" for satellites.
std::string to_string(const PathNode& node);
/// Inverse of to_string; throws std::invalid_argument on malformed text.
PathNode parse_path_node(std::string_view text);

struct IslEdge {
    SatelliteId a;
    SatelliteId b;
    double length = 0.0;
};

struct Neighbor {
    int node = 0;  // flat satellite index
    double length = 0.0;
};

/// Up to four +Grid neighbours; fewer only for degenerate constellations.
struct Adjacency {
    std::array<Neighbor, 4> edges{};
    int degree = 0;

    std::span<const Neighbor> neighbors() const noexcept { return {edges.data(), static_cast<std::size_t>(degree)}; }
};

struct GslLink {
    SatelliteId satellite;
    double length = 0.0;
};

/// Network state at one instant: +Grid ISLs plus one ground link per site.
struct NetworkSnapshot {
    double time = 0.0;
    ConstellationConfig config;
    std::vector<EcefPoint> positions;     // by flat satellite index
    std::vector<IslEdge> isl_edges;
    std::vector<Adjacency> adjacency;     // by flat satellite index
    std::vector<GslLink> site_links;      // by ground site
    bool degenerate = false;              // fewer than 3 planes or 3 slots; edges collapsed

    const GslLink& assignment(const GroundStation& station) const;
};

/// +Grid: (p, s) links to (p, s +- 1 mod N) and (p +- 1 mod P, s). Self-loops and
/// duplicate edges of tiny constellations are collapsed and `degenerate` is set.
NetworkSnapshot build_isl_graph(const ConstellationConfig& config, double t);

/// Closest satellite at or above the elevation mask, ties to the smallest id.
/// Throws CoverageGapError mentioning `label` and the snapshot time.
GslLink closest_visible_satellite(const EcefPoint& site, const NetworkSnapshot& snapshot,
                                  std::string_view label);

/// Fills snapshot.site_links for the given site positions.
void assign_sites(NetworkSnapshot& snapshot, std::span<const EcefPoint> sites,
                  std::span<const std::string> labels = {});

NetworkSnapshot build_snapshot(const ConstellationConfig& config, double t,
                               std::span<const EcefPoint> sites,
                               std::span<const std::string> labels = {});

SatelliteId assign_ground_station(const GroundStation& station, const ConstellationConfig& config,
                                  double t);

/// Number of ISL edges on a minimum-hop path between two satellites (grid distance).
int grid_distance(const ConstellationConfig& config, SatelliteId a, SatelliteId b) noexcept;

/// Single-root shortest paths by summed ISL length. Among equal-length
/// alternatives each node forwards to the smallest-id neighbour.
class ShortestPathTree {
public:
    ShortestPathTree(const NetworkSnapshot& snapshot, SatelliteId root);

    SatelliteId root() const noexcept { return root_; }
    bool reachable(SatelliteId from) const;
    double distance_from(SatelliteId from) const;
    /// Satellites from `from` to the root, both inclusive.
    std::vector<SatelliteId> path_from(SatelliteId from) const;

private:
    ConstellationConfig config_;
    SatelliteId root_;
    std::vector<double> dist_;
    std::vector<int> next_;
};

/// [client GST, ingress, ..., egress, origin GST]
struct RoutePath {
    std::vector<PathNode> nodes;
    double total_length = 0.0;

    int edge_count() const noexcept { return nodes.empty() ? 0 : static_cast<int>(nodes.size()) - 1; }
    int isl_edge_count() const noexcept { return nodes.size() < 4 ? 0 : static_cast<int>(nodes.size()) - 3; }
    SatelliteId ingress() const { return nodes.at(1).satellite; }
    SatelliteId egress() const { return nodes.at(nodes.size() - 2).satellite; }
};

RoutePath route(const GroundStation& client, const GroundStation& origin,
                const NetworkSnapshot& snapshot);

/// Same as above with a precomputed tree rooted at the origin's satellite.
RoutePath route(const GroundStation& client, const GroundStation& origin,
                const NetworkSnapshot& snapshot, const ShortestPathTree& to_egress);

/// Edges from the client station to the first occurrence of `serving`. Throws
/// std::logic_error when `serving` is not on the path.
int hop_count(const RoutePath& path, const PathNode& serving);
int hop_count(std::span<const PathNode> path, const PathNode& serving);

/// CSV rows t,src_plane,src_slot,dst_plane,dst_slot,length_m; pass header=false
/// to append further snapshots to the same table.
void write_isl_edges_csv(std::ostream& out, const NetworkSnapshot& snapshot, bool header = true);

}  // namespace leocdn
