#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "leocdn/topology.hpp"

namespace leocdn {

struct LocationRecord {
    std::string name;
    double lat = 0.0;
    double lon = 0.0;
    std::int64_t population = 1;
};

/// CSV with header `name,lat,lon,population`; rows keep file order.
/// Throws ParseError carrying the 1-based line number.
std::vector<LocationRecord> parse_locations(std::istream& in, const std::string& source);
std::vector<LocationRecord> load_locations(const std::filesystem::path& path);

/// ceil(population / clients_per_gst) stations per city, all at the city's
/// coordinates. Station ids are dense from 0; `site` is the city index.
std::vector<GroundStation> derive_ground_stations(std::span<const LocationRecord> locations,
                                                  std::int64_t clients_per_gst);

using ItemId = std::uint32_t;

struct ContentItem {
    ItemId id = 0;
    std::uint32_t size = 0;           // bytes
    std::uint32_t popularity_rank = 0;  // 0 is the most popular
};

/// Item universe with a Zipf popularity law over ranks:
/// P(rank r) = (r + 1)^-s / sum_k (k + 1)^-s.
class ContentCatalog {
public:
    ContentCatalog(std::vector<ContentItem> items, double zipf_exponent);

    std::size_t size() const noexcept { return items_.size(); }
    double zipf_exponent() const noexcept { return exponent_; }
    const std::vector<ContentItem>& items() const noexcept { return items_; }

    bool contains(ItemId id) const noexcept { return id < items_.size(); }
    const ContentItem& item(ItemId id) const { return items_.at(id); }
    std::uint32_t size_of(ItemId id) const { return items_.at(id).size; }
    ItemId item_at_rank(std::size_t rank) const { return by_rank_.at(rank); }

    double probability(std::size_t rank) const;
    /// Inverse-CDF draw for u in [0, 1).
    ItemId sample(double u) const noexcept;

private:
    std::vector<ContentItem> items_;  // indexed by item id
    std::vector<ItemId> by_rank_;
    std::vector<double> cdf_;         // cumulative unnormalised weights by rank
    double exponent_;
};

/// Sizes log-uniform in [size_min, size_max]; ranks a seeded permutation.
/// Throws ConfigError on invalid bounds.
ContentCatalog build_catalog(std::size_t num_items, std::uint32_t size_min,
                             std::uint32_t size_max, double zipf_exponent, std::uint64_t seed);

struct Request {
    double time = 0.0;
    std::int64_t index = 0;  // position within the step
    int client_gst = 0;
    ItemId item = 0;
};

/// Exactly `rate` requests at time t, clients uniform over `stations`, items
/// Zipf-distributed. Pure function of (stations, catalog, rate, t, seed).
std::vector<Request> generate_requests(std::span<const GroundStation> stations,
                                       const ContentCatalog& catalog, std::int64_t rate, double t,
                                       std::uint64_t seed);

/// CSV: item_id,size_bytes,rank
void write_catalog_csv(std::ostream& out, const ContentCatalog& catalog);
/// CSV: id,city,lat,lon,num_clients
void write_stations_csv(std::ostream& out, std::span<const GroundStation> stations);

}  // namespace leocdn
