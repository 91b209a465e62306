#include "leocdn/topology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "leocdn/error.hpp"
#include "leocdn/csv.hpp"

namespace leocdn {
namespace {

void add_edge(NetworkSnapshot& snap, int a, int b) {
    if (a == b) {
        snap.degenerate = true;
        return;
    }
    auto& adj_a = snap.adjacency[static_cast<std::size_t>(a)];
    for (const auto& n : adj_a.neighbors()) {
        if (n.node == b) {
            snap.degenerate = true;
            return;
        }
    }
    const double len = distance(snap.positions[static_cast<std::size_t>(a)],
                                snap.positions[static_cast<std::size_t>(b)]);
    auto& adj_b = snap.adjacency[static_cast<std::size_t>(b)];
    adj_a.edges[static_cast<std::size_t>(adj_a.degree++)] = {b, len};
    adj_b.edges[static_cast<std::size_t>(adj_b.degree++)] = {a, len};
    snap.isl_edges.push_back({from_flat_index(snap.config, std::min(a, b)),
                              from_flat_index(snap.config, std::max(a, b)), len});
}

int parse_int(std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::string to_string(const PathNode& node) {
    if (node.is_station()) return "G" + std::to_string(node.station);
    return "S" + to_string(node.satellite);
}

PathNode parse_path_node(std::string_view text) {
    if (text.size() < 2) throw std::invalid_argument("bad path node '" + std::string(text) + "'");
    const auto body = text.substr(1);
    if (text[0] == 'G') return PathNode::ground(parse_int(body));
    if (text[0] == 'S') {
        const auto dot = body.find('.');
        if (dot == std::string_view::npos) {
            throw std::invalid_argument("bad satellite node '" + std::string(text) + "'");
        }
        return PathNode::sat({parse_int(body.substr(0, dot)), parse_int(body.substr(dot + 1))});
    }
    throw std::invalid_argument("bad path node '" + std::string(text) + "'");
}

const GslLink& NetworkSnapshot::assignment(const GroundStation& station) const {
    if (station.site < 0 || static_cast<std::size_t>(station.site) >= site_links.size()) {
        throw std::logic_error("station " + std::to_string(station.id) +
                               " has no assignment in snapshot");
    }
    return site_links[static_cast<std::size_t>(station.site)];
}

NetworkSnapshot build_isl_graph(const ConstellationConfig& config, double t) {
    validate(config);
    NetworkSnapshot snap;
    snap.time = t;
    snap.config = config;
    snap.positions = satellite_positions(config, t);
    snap.adjacency.assign(snap.positions.size(), Adjacency{});
    snap.isl_edges.reserve(2 * snap.positions.size());

    const int planes = config.num_planes;
    const int slots = config.sats_per_plane;
    snap.degenerate = planes < 3 || slots < 3;
    for (int p = 0; p < planes; ++p) {
        for (int s = 0; s < slots; ++s) {
            const int self = p * slots + s;
            add_edge(snap, self, p * slots + (s + 1) % slots);
            add_edge(snap, self, ((p + 1) % planes) * slots + s);
        }
    }
    return snap;
}

GslLink closest_visible_satellite(const EcefPoint& site, const NetworkSnapshot& snapshot,
                                  std::string_view label) {
    const double mask = snapshot.config.min_elevation;
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < snapshot.positions.size(); ++i) {
        const auto& p = snapshot.positions[i];
        const double dx = p.x - site.x;
        const double dy = p.y - site.y;
        const double dz = p.z - site.z;
        const double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 < best_d2 && elevation_angle(site, p) >= mask) {
            best_d2 = d2;
            best = static_cast<int>(i);
        }
    }
    if (best < 0) {
        throw CoverageGapError("no satellite above " + std::to_string(mask) +
                               " deg elevation for " + std::string(label) + " at t=" +
                               std::to_string(snapshot.time));
    }
    return {from_flat_index(snapshot.config, best), std::sqrt(best_d2)};
}

void assign_sites(NetworkSnapshot& snapshot, std::span<const EcefPoint> sites,
                  std::span<const std::string> labels) {
    snapshot.site_links.clear();
    snapshot.site_links.reserve(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const std::string label = i < labels.size() ? labels[i] : "site " + std::to_string(i);
        snapshot.site_links.push_back(closest_visible_satellite(sites[i], snapshot, label));
    }
}

NetworkSnapshot build_snapshot(const ConstellationConfig& config, double t,
                               std::span<const EcefPoint> sites,
                               std::span<const std::string> labels) {
    auto snap = build_isl_graph(config, t);
    assign_sites(snap, sites, labels);
    return snap;
}

SatelliteId assign_ground_station(const GroundStation& station, const ConstellationConfig& config,
                                  double t) {
    validate(config);
    NetworkSnapshot snap;
    snap.time = t;
    snap.config = config;
    snap.positions = satellite_positions(config, t);
    const auto pos = ground_station_position(station.lat, station.lon, config);
    return closest_visible_satellite(pos, snap, station.city_name + " (station " +
                                                    std::to_string(station.id) + ")")
        .satellite;
}

int grid_distance(const ConstellationConfig& config, SatelliteId a, SatelliteId b) noexcept {
    const int dp = std::abs(a.plane - b.plane);
    const int ds = std::abs(a.slot - b.slot);
    return std::min(dp, config.num_planes - dp) + std::min(ds, config.sats_per_plane - ds);
}

ShortestPathTree::ShortestPathTree(const NetworkSnapshot& snapshot, SatelliteId root)
    : config_(snapshot.config), root_(root) {
    const auto n = snapshot.adjacency.size();
    const int root_index = flat_index(snapshot.config, root);
    if (root_index < 0 || static_cast<std::size_t>(root_index) >= n) {
        throw std::invalid_argument("root " + to_string(root) + " not in snapshot");
    }
    dist_.assign(n, std::numeric_limits<double>::infinity());
    next_.assign(n, -1);
    std::vector<bool> settled(n, false);

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist_[static_cast<std::size_t>(root_index)] = 0.0;
    next_[static_cast<std::size_t>(root_index)] = root_index;
    queue.emplace(0.0, root_index);
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        const auto ui = static_cast<std::size_t>(u);
        if (settled[ui]) continue;
        settled[ui] = true;
        for (const auto& nb : snapshot.adjacency[ui].neighbors()) {
            const auto vi = static_cast<std::size_t>(nb.node);
            if (settled[vi]) continue;
            const double nd = d + nb.length;
            if (nd < dist_[vi]) {
                dist_[vi] = nd;
                next_[vi] = u;
                queue.emplace(nd, nb.node);
            } else if (nd == dist_[vi] && u < next_[vi]) {
                next_[vi] = u;
            }
        }
    }
}

bool ShortestPathTree::reachable(SatelliteId from) const {
    return next_.at(static_cast<std::size_t>(flat_index(config_, from))) >= 0;
}

double ShortestPathTree::distance_from(SatelliteId from) const {
    return dist_.at(static_cast<std::size_t>(flat_index(config_, from)));
}

std::vector<SatelliteId> ShortestPathTree::path_from(SatelliteId from) const {
    int cur = flat_index(config_, from);
    if (next_.at(static_cast<std::size_t>(cur)) < 0) {
        throw RoutingError("satellite " + to_string(from) + " cannot reach " + to_string(root_));
    }
    const int root_index = flat_index(config_, root_);
    std::vector<SatelliteId> out{from};
    while (cur != root_index) {
        cur = next_[static_cast<std::size_t>(cur)];
        out.push_back(from_flat_index(config_, cur));
    }
    return out;
}

RoutePath route(const GroundStation& client, const GroundStation& origin,
                const NetworkSnapshot& snapshot) {
    const ShortestPathTree tree(snapshot, snapshot.assignment(origin).satellite);
    return route(client, origin, snapshot, tree);
}

RoutePath route(const GroundStation& client, const GroundStation& origin,
                const NetworkSnapshot& snapshot, const ShortestPathTree& to_egress) {
    const auto& up = snapshot.assignment(client);
    const auto& down = snapshot.assignment(origin);
    if (to_egress.root() != down.satellite) {
        throw std::logic_error("shortest-path tree is not rooted at the origin's satellite");
    }
    const auto sats = to_egress.path_from(up.satellite);

    RoutePath path;
    path.nodes.reserve(sats.size() + 2);
    path.nodes.push_back(PathNode::ground(client.id));
    path.total_length = up.length;
    for (std::size_t i = 0; i < sats.size(); ++i) {
        path.nodes.push_back(PathNode::sat(sats[i]));
        if (i > 0) {
            path.total_length += distance(
                snapshot.positions[static_cast<std::size_t>(flat_index(snapshot.config, sats[i - 1]))],
                snapshot.positions[static_cast<std::size_t>(flat_index(snapshot.config, sats[i]))]);
        }
    }
    path.nodes.push_back(PathNode::ground(origin.id));
    path.total_length += down.length;
    return path;
}

int hop_count(std::span<const PathNode> path, const PathNode& serving) {
    const auto it = std::find(path.begin(), path.end(), serving);
    if (it == path.end()) {
        throw std::logic_error("serving node " + to_string(serving) + " is not on the path");
    }
    return static_cast<int>(it - path.begin());
}

int hop_count(const RoutePath& path, const PathNode& serving) {
    return hop_count(std::span<const PathNode>(path.nodes), serving);
}

void write_isl_edges_csv(std::ostream& out, const NetworkSnapshot& snapshot, bool header) {
    if (header) out << "t,src_plane,src_slot,dst_plane,dst_slot,length_m\n";
    const std::string t = format_double(snapshot.time);
    for (const auto& e : snapshot.isl_edges) {
        out << t << ',' << e.a.plane << ',' << e.a.slot << ',' << e.b.plane << ',' << e.b.slot << ','
            << format_double(e.length) << '\n';
    }
}

}  // namespace leocdn
