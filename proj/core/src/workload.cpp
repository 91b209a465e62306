#include "leocdn/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "leocdn/csv.hpp"
#include "leocdn/error.hpp"
#include "leocdn/random.hpp"

namespace leocdn {
namespace {

constexpr std::uint64_t kCatalogTag = 0x636174616c6f67ULL;  // "catalog"
constexpr std::uint64_t kRequestTag = 0x7265717565737473ULL;  // "requests"

template <typename T>
bool parse_number(const std::string& text, T& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && first != last;
}

}  // namespace

std::vector<LocationRecord> parse_locations(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<LocationRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        std::vector<std::string> f;
        try {
            f = split_csv_line(line);
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, line_no, e.what());
        }
        if (!have_header) {
            if (f.size() != 4 || f[0] != "name" || f[1] != "lat" || f[2] != "lon" ||
                f[3] != "population") {
                throw ParseError(source, line_no, "expected header name,lat,lon,population");
            }
            have_header = true;
            continue;
        }
        if (f.size() != 4) {
            throw ParseError(source, line_no,
                             "expected 4 fields, got " + std::to_string(f.size()));
        }
        LocationRecord rec;
        rec.name = f[0];
        if (rec.name.empty()) throw ParseError(source, line_no, "empty name");
        if (!parse_number(f[1], rec.lat) || !parse_number(f[2], rec.lon)) {
            throw ParseError(source, line_no, "unparseable coordinates");
        }
        if (!(rec.lat >= -90.0 && rec.lat <= 90.0) || !(rec.lon >= -180.0 && rec.lon <= 180.0)) {
            throw ParseError(source, line_no, "coordinates out of range");
        }
        if (!parse_number(f[3], rec.population)) {
            throw ParseError(source, line_no, "unparseable population");
        }
        if (rec.population < 1) throw ParseError(source, line_no, "population must be >= 1");
        out.push_back(std::move(rec));
    }
    if (out.empty()) throw ParseError(source, 0, "no location records");
    return out;
}

std::vector<LocationRecord> load_locations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read locations file " + path.string());
    return parse_locations(in, path.string());
}

std::vector<GroundStation> derive_ground_stations(std::span<const LocationRecord> locations,
                                                  std::int64_t clients_per_gst) {
    if (clients_per_gst < 1) throw ConfigError("scenario.clients_per_gst must be >= 1");
    if (locations.empty()) throw std::invalid_argument("no locations to derive stations from");
    std::int64_t total = 0;
    for (const auto& loc : locations) {
        total += (loc.population + clients_per_gst - 1) / clients_per_gst;
    }
    std::vector<GroundStation> out;
    out.reserve(static_cast<std::size_t>(total));
    int site = 0;
    for (const auto& loc : locations) {
        std::int64_t remaining = loc.population;
        const std::int64_t count = (loc.population + clients_per_gst - 1) / clients_per_gst;
        for (std::int64_t i = 0; i < count; ++i) {
            const std::int64_t clients = std::min(remaining, clients_per_gst);
            remaining -= clients;
            out.push_back({static_cast<int>(out.size()), loc.name, loc.lat, loc.lon, clients, site});
        }
        ++site;
    }
    return out;
}

ContentCatalog::ContentCatalog(std::vector<ContentItem> items, double zipf_exponent)
    : items_(std::move(items)), exponent_(zipf_exponent) {
    if (items_.empty()) throw ConfigError("catalog needs at least one item");
    if (!(zipf_exponent >= 0.0) || !std::isfinite(zipf_exponent)) {
        throw ConfigError("scenario.zipf_exponent must be finite and >= 0");
    }
    by_rank_.assign(items_.size(), 0);
    std::vector<bool> seen(items_.size(), false);
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const auto& it = items_[i];
        if (it.id != i) throw std::invalid_argument("catalog items must be indexed by id");
        if (it.popularity_rank >= items_.size() || seen[it.popularity_rank]) {
            throw std::invalid_argument("popularity ranks must be a permutation");
        }
        seen[it.popularity_rank] = true;
        by_rank_[it.popularity_rank] = it.id;
    }
    cdf_.resize(items_.size());
    double acc = 0.0;
    for (std::size_t r = 0; r < items_.size(); ++r) {
        acc += std::pow(static_cast<double>(r + 1), -exponent_);
        cdf_[r] = acc;
    }
}

double ContentCatalog::probability(std::size_t rank) const {
    if (rank >= items_.size()) throw std::out_of_range("rank out of range");
    return std::pow(static_cast<double>(rank + 1), -exponent_) / cdf_.back();
}

ItemId ContentCatalog::sample(double u) const noexcept {
    const double target = u * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    if (it == cdf_.end()) --it;
    return by_rank_[static_cast<std::size_t>(it - cdf_.begin())];
}

ContentCatalog build_catalog(std::size_t num_items, std::uint32_t size_min,
                             std::uint32_t size_max, double zipf_exponent, std::uint64_t seed) {
    if (num_items < 1) throw ConfigError("scenario.num_items must be >= 1");
    if (size_min == 0 || size_min > size_max) {
        throw ConfigError("item size bounds must satisfy 0 < size_min <= size_max");
    }
    Rng rng(derive_seed(seed, kCatalogTag));

    std::vector<std::uint32_t> ranks(num_items);
    std::iota(ranks.begin(), ranks.end(), 0U);
    for (std::size_t i = num_items - 1; i > 0; --i) {
        std::swap(ranks[i], ranks[rng.uniform_index(i + 1)]);
    }

    const double lo = std::log(static_cast<double>(size_min));
    const double hi = std::log(static_cast<double>(size_max));
    std::vector<ContentItem> items(num_items);
    for (std::size_t i = 0; i < num_items; ++i) {
        const double size = std::round(std::exp(lo + rng.uniform01() * (hi - lo)));
        items[i] = {static_cast<ItemId>(i),
                    std::clamp(static_cast<std::uint32_t>(size), size_min, size_max), ranks[i]};
    }
    return ContentCatalog(std::move(items), zipf_exponent);
}

std::vector<Request> generate_requests(std::span<const GroundStation> stations,
                                       const ContentCatalog& catalog, std::int64_t rate, double t,
                                       std::uint64_t seed) {
    if (rate < 1) throw std::invalid_argument("request rate must be >= 1");
    if (stations.empty()) throw std::invalid_argument("no ground stations");
    Rng rng(derive_seed(seed, kRequestTag, t));
    std::vector<Request> out;
    out.reserve(static_cast<std::size_t>(rate));
    for (std::int64_t i = 0; i < rate; ++i) {
        const auto& station = stations[rng.uniform_index(stations.size())];
        out.push_back({t, i, station.id, catalog.sample(rng.uniform01())});
    }
    return out;
}

void write_catalog_csv(std::ostream& out, const ContentCatalog& catalog) {
    out << "item_id,size_bytes,rank\n";
    for (const auto& it : catalog.items()) {
        out << it.id << ',' << it.size << ',' << it.popularity_rank << '\n';
    }
}

void write_stations_csv(std::ostream& out, std::span<const GroundStation> stations) {
    out << "id,city,lat,lon,num_clients\n";
    for (const auto& s : stations) {
        out << s.id << ',' << csv_field(s.city_name) << ',' << format_double(s.lat) << ','
            << format_double(s.lon) << ',' << s.num_clients << '\n';
    }
}

}  // namespace leocdn
