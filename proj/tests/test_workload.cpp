#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "leocdn/engine.hpp"
#include "leocdn/error.hpp"
#include "leocdn/workload.hpp"
#include "oracles.hpp"

using namespace leocdn;

namespace {

std::vector<LocationRecord> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_locations(in, "mem.csv");
}

std::size_t parse_error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

std::vector<GroundStation> fake_stations(int n) {
    std::vector<GroundStation> out;
    for (int i = 0; i < n; ++i) out.push_back({i, "c", 0.0, 0.0, 1, i});
    return out;
}

}  // namespace

TEST(Locations, ParsesValidRowsInOrder) {
    const auto rows = parse(
        "name,lat,lon,population\n"
        "Alpha,1.5,2.5,100\n"
        "\"Beta, XY\",-3,4,7\r\n"
        "Gamma,89.9,-179.9,1\n");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].name, "Alpha");
    EXPECT_EQ(rows[1].name, "Beta, XY");
    EXPECT_EQ(rows[1].population, 7);
    EXPECT_DOUBLE_EQ(rows[2].lon, -179.9);
}

TEST(Locations, RejectsBadRowsWithLineNumbers) {
    EXPECT_EQ(parse_error_line("name,lat,lon,population\nA,1,2,5\nB,1,2,0\n"), 3u);
    EXPECT_EQ(parse_error_line("name,lat,lon,population\nA,1,2\n"), 2u);
    EXPECT_EQ(parse_error_line("name,lat,lon,population\nA,91,2,5\n"), 2u);
    EXPECT_EQ(parse_error_line("name,lat,lon,population\nA,x,2,5\n"), 2u);
    EXPECT_EQ(parse_error_line("city,lat,lon,pop\n"), 1u);
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("name,lat,lon,population\n"), ParseError);
}

TEST(Locations, MissingFileIsAnIoError) {
    try {
        load_locations("/nonexistent/places.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.error_class(), ErrorClass::Io);
        EXPECT_NE(std::string(e.what()).find("/nonexistent/places.csv"), std::string::npos);
    }
}

TEST(Locations, BundledDatasets) {
    const auto swiss = load_locations(resolve_data_path("switzerland.csv"));
    EXPECT_EQ(swiss.size(), 154u);
    EXPECT_TRUE(std::any_of(swiss.begin(), swiss.end(), [](const auto& l) { return l.name == "Zurich"; }));
    const auto us = load_locations(resolve_data_path("us.csv"));
    EXPECT_EQ(us.size(), 996u);
    EXPECT_TRUE(std::any_of(us.begin(), us.end(), [](const auto& l) { return l.name == "Ashbourne, VA"; }));
}

TEST(GroundStations, CeilingPerCity) {
    const std::vector<LocationRecord> one{{"A", 0, 0, 25}};
    const auto s = derive_ground_stations(one, 10);
    ASSERT_EQ(s.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(s[static_cast<std::size_t>(i)].id, i);
}

TEST(GroundStations, LargeClientCountGivesOneStationPerCity) {
    const std::vector<LocationRecord> cities{{"A", 0, 0, 25}, {"B", 1, 1, 3000}, {"C", 2, 2, 1}};
    const auto s = derive_ground_stations(cities, 1000000);
    ASSERT_EQ(s.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(s[i].site, static_cast<int>(i));
        EXPECT_EQ(s[i].city_name, cities[i].name);
    }
}

TEST(GroundStations, CapacityCoversPopulationAndIdsAreDense) {
    const auto swiss = load_locations(resolve_data_path("switzerland.csv"));
    for (const std::int64_t k : {10, 100, 10000}) {
        const auto s = derive_ground_stations(swiss, k);
        std::int64_t capacity = 0, population = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            EXPECT_EQ(s[i].id, static_cast<int>(i));
            capacity += s[i].num_clients;
        }
        for (const auto& l : swiss) population += l.population;
        EXPECT_GE(capacity, population);
        std::set<int> sites;
        for (const auto& g : s) sites.insert(g.site);
        EXPECT_EQ(sites.size(), swiss.size());
    }
}

TEST(GroundStations, UsScaleAtHundredClientsIsAboutOnePointTwoMillion) {
    // 996 cities totalling the published client count.
    const std::int64_t total = 125736290;
    std::vector<LocationRecord> cities;
    for (int i = 0; i < 996; ++i) {
        cities.push_back({"c" + std::to_string(i), 0.0, 0.0, total / 996 + (i < total % 996 ? 1 : 0)});
    }
    const auto s = derive_ground_stations(cities, 100);
    EXPECT_GE(s.size(), 1257363u);
    EXPECT_LE(s.size(), 1257363u + 996u);
    EXPECT_NEAR(static_cast<double>(s.size()), 1.2e6, 0.1e6);
}

TEST(GroundStations, InvalidInputs) {
    EXPECT_THROW(derive_ground_stations({}, 10), std::invalid_argument);
    const std::vector<LocationRecord> one{{"A", 0, 0, 25}};
    EXPECT_THROW(derive_ground_stations(one, 0), ConfigError);
}

TEST(Catalog, SingleItemHasProbabilityOne) {
    const auto cat = build_catalog(1, 1000, 100000, 0.8, 1);
    EXPECT_EQ(cat.size(), 1u);
    EXPECT_DOUBLE_EQ(cat.probability(0), 1.0);
    EXPECT_EQ(cat.sample(0.0), 0u);
    EXPECT_EQ(cat.sample(0.999999), 0u);
}

TEST(Catalog, ExponentOneHalvesFromRankZeroToOne) {
    const auto cat = build_catalog(1000, 1000, 100000, 1.0, 3);
    EXPECT_NEAR(cat.probability(0) / cat.probability(1), 2.0, 1e-12);
}

TEST(Catalog, ProbabilitiesMatchDirectSummation) {
    const auto cat = build_catalog(2000, 1000, 100000, 0.8, 9);
    double sum = 0.0;
    for (std::size_t r = 0; r < cat.size(); ++r) {
        sum += cat.probability(r);
        if (r < 5 || r % 500 == 0) EXPECT_NEAR(cat.probability(r), oracle::zipf_mass(r, 2000, 0.8), 1e-12);
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(Catalog, RanksArePermutationAndSizesWithinBounds) {
    const auto cat = build_catalog(25000, 1000, 100000, 0.8, 11);
    std::vector<bool> seen(cat.size(), false);
    std::vector<double> logs;
    for (const auto& it : cat.items()) {
        ASSERT_LT(it.popularity_rank, cat.size());
        EXPECT_FALSE(seen[it.popularity_rank]);
        seen[it.popularity_rank] = true;
        EXPECT_GE(it.size, 1000u);
        EXPECT_LE(it.size, 100000u);
        EXPECT_EQ(cat.item_at_rank(it.popularity_rank), it.id);
        logs.push_back(std::log(static_cast<double>(it.size)));
    }
    // Log-uniform: log sizes have mean log(sqrt(min*max)) and variance (log range)^2 / 12.
    const double mean = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size());
    EXPECT_NEAR(mean, std::log(10000.0), 0.03);
    double var = 0.0;
    for (const double l : logs) var += (l - mean) * (l - mean);
    var /= static_cast<double>(logs.size());
    EXPECT_NEAR(var, std::pow(std::log(100.0), 2) / 12.0, 0.05);
}

TEST(Catalog, DeterministicUnderSeed) {
    const auto a = build_catalog(500, 1000, 100000, 0.8, 5);
    const auto b = build_catalog(500, 1000, 100000, 0.8, 5);
    const auto c = build_catalog(500, 1000, 100000, 0.8, 6);
    bool differs = false;
    for (std::size_t i = 0; i < 500; ++i) {
        EXPECT_EQ(a.items()[i].size, b.items()[i].size);
        EXPECT_EQ(a.items()[i].popularity_rank, b.items()[i].popularity_rank);
        differs |= a.items()[i].size != c.items()[i].size;
    }
    EXPECT_TRUE(differs);
}

TEST(Catalog, UsScale) {
    const auto cat = build_catalog(1000000, 1000, 100000, 0.8, 1);
    EXPECT_EQ(cat.size(), 1000000u);
}

TEST(Catalog, InvalidBounds) {
    EXPECT_THROW(build_catalog(10, 0, 100, 0.8, 1), ConfigError);
    EXPECT_THROW(build_catalog(10, 200, 100, 0.8, 1), ConfigError);
    EXPECT_THROW(build_catalog(0, 1, 100, 0.8, 1), ConfigError);
}

TEST(Requests, ExactRateAndDeterminism) {
    const auto stations = fake_stations(7);
    const auto cat = build_catalog(100, 1000, 100000, 0.8, 1);
    const auto a = generate_requests(stations, cat, 1000, 5.0, 42);
    const auto b = generate_requests(stations, cat, 1000, 5.0, 42);
    const auto c = generate_requests(stations, cat, 1000, 6.0, 42);
    ASSERT_EQ(a.size(), 1000u);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].index, static_cast<std::int64_t>(i));
        EXPECT_EQ(a[i].time, 5.0);
        EXPECT_EQ(a[i].client_gst, b[i].client_gst);
        EXPECT_EQ(a[i].item, b[i].item);
        differs |= a[i].item != c[i].item || a[i].client_gst != c[i].client_gst;
    }
    EXPECT_TRUE(differs);
    EXPECT_THROW(generate_requests(stations, cat, 0, 0.0, 1), std::invalid_argument);
}

TEST(Requests, StationsAreDrawnUniformly) {
    const auto stations = fake_stations(10);
    const auto cat = build_catalog(10, 1000, 100000, 0.8, 1);
    std::vector<std::int64_t> counts(10, 0);
    for (int step = 0; step < 10000; ++step) {
        for (const auto& r : generate_requests(stations, cat, 1000, step, 7)) ++counts[static_cast<std::size_t>(r.client_gst)];
    }
    const double expected = 1e6;
    double chi2 = 0.0;
    for (const auto n : counts) chi2 += (n - expected) * (n - expected) / expected;
    // chi-square with 9 degrees of freedom: mean 9, sd sqrt(18).
    EXPECT_LT(chi2, 9.0 + 3.0 * std::sqrt(18.0));
}

TEST(Requests, HeadItemFrequencyMatchesZipfMass) {
    const auto stations = fake_stations(3);
    const auto cat = build_catalog(1000, 1000, 100000, 0.8, 2);
    const ItemId head = cat.item_at_rank(0);
    std::int64_t hits = 0;
    for (int step = 0; step < 1000; ++step) {
        for (const auto& r : generate_requests(stations, cat, 1000, step, 3)) hits += r.item == head;
    }
    const double p = oracle::zipf_mass(0, 1000, 0.8);
    EXPECT_NEAR(static_cast<double>(hits) / 1e6, p, 0.01 * p);
}
