#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace leocdn {

/// Walker-delta constellation of circular orbits around a spherical Earth.
/// Angles are degrees, lengths meters, times seconds.
struct ConstellationConfig {
    int num_planes = 24;
    int sats_per_plane = 66;
    double altitude = 550e3;
    double inclination = 53.0;
    double raan_spread = 360.0;     // total RAAN span across all planes
    double phasing_offset = 0.0;    // in-plane anomaly offset between adjacent planes
    double earth_radius = 6371e3;
    double earth_mu = 3.986004418e14;
    double earth_rotation_period = 86400.0;
    double min_elevation = 25.0;    // ground-station elevation mask

    int num_satellites() const noexcept { return num_planes * sats_per_plane; }
    double orbit_radius() const noexcept { return earth_radius + altitude; }
};

/// Throws ConfigError naming the offending field.
void validate(const ConstellationConfig& config);

struct SatelliteId {
    int plane = 0;
    int slot = 0;

    auto operator<=>(const SatelliteId&) const = default;
};

/// Dense index plane * sats_per_plane + slot; preserves the (plane, slot) order.
inline int flat_index(const ConstellationConfig& config, SatelliteId id) noexcept {
    return id.plane * config.sats_per_plane + id.slot;
}

inline SatelliteId from_flat_index(const ConstellationConfig& config, int index) noexcept {
    return {index / config.sats_per_plane, index % config.sats_per_plane};
}

std::string to_string(SatelliteId id);

struct EcefPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const noexcept;
    bool operator==(const EcefPoint&) const = default;
};

double distance(const EcefPoint& a, const EcefPoint& b) noexcept;

/// Circular-orbit period 2*pi*sqrt(a^3/mu) with a = earth_radius + altitude.
double orbital_period(const ConstellationConfig& config);

/// Position in the non-rotating frame; periodic in orbital_period.
EcefPoint inertial_position(const ConstellationConfig& config, SatelliteId id, double t);

/// Earth-fixed position. At t = 0 the Earth-fixed and inertial frames coincide.
EcefPoint satellite_position(const ConstellationConfig& config, SatelliteId id, double t);

/// Earth-fixed positions of every satellite at t, indexed by flat_index.
std::vector<EcefPoint> satellite_positions(const ConstellationConfig& config, double t);

EcefPoint ground_station_position(double lat, double lon, const ConstellationConfig& config);

/// Angle between the local horizon at `ground` and the line of sight to `sat`.
double elevation_angle(const EcefPoint& ground, const EcefPoint& sat) noexcept;

}  // namespace leocdn
