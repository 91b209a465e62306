#pragma once

// Reference computations written independently of the library code paths.

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "leocdn/topology.hpp"

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// High-precision values evaluated offline (30 significant digits, then rounded).
inline constexpr double kPeriod550km = 5730.12708933460685;    // R 6371 km, mu 3.986004418e14
inline constexpr double kPeriodGeo = 86142.1143334308680;      // altitude 35,786 km
inline constexpr double kTtlStarlink = 86.8201074141607099;
inline constexpr double kElevation10Deg = 20.3120806914693837; // 550 km, 10 deg central angle
inline constexpr double kZurichZ = 4687415.94407867272;        // R sin(47.37 deg)

/// Elevation from the spherical triangle Earth centre / station / satellite with
/// central angle `gamma_deg` between station and sub-satellite point.
inline double spherical_elevation_deg(double earth_radius, double orbit_radius, double gamma_deg) {
    const double g = gamma_deg * kPi / 180.0;
    return std::atan2(std::cos(g) - earth_radius / orbit_radius, std::sin(g)) * 180.0 / kPi;
}

/// All-pairs shortest distances over the snapshot's ISL edge list.
inline std::vector<std::vector<double>> floyd_warshall(const leocdn::NetworkSnapshot& snap) {
    const int n = snap.config.num_planes * snap.config.sats_per_plane;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0.0;
    for (const auto& e : snap.isl_edges) {
        const int a = e.a.plane * snap.config.sats_per_plane + e.a.slot;
        const int b = e.b.plane * snap.config.sats_per_plane + e.b.slot;
        d[a][b] = std::min(d[a][b], e.length);
        d[b][a] = std::min(d[b][a], e.length);
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

/// Zipf mass of `rank` by direct summation in long double.
inline double zipf_mass(std::size_t rank, std::size_t n, double s) {
    long double h = 0.0L;
    for (std::size_t k = 1; k <= n; ++k) h += std::pow(static_cast<long double>(k), -static_cast<long double>(s));
    return static_cast<double>(std::pow(static_cast<long double>(rank + 1), -static_cast<long double>(s)) / h);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() /
               ("leocdn_" + tag + "_" + std::to_string(rng() % 1000000000ULL));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace oracle
