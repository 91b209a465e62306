#include "leocdn/orbital.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "leocdn/error.hpp"

namespace leocdn {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_id(const ConstellationConfig& config, SatelliteId id) {
    if (id.plane < 0 || id.plane >= config.num_planes || id.slot < 0 ||
        id.slot >= config.sats_per_plane) {
        throw std::invalid_argument("satellite id " + to_string(id) + " out of range");
    }
}

// Rotation of (x, y, z) about the z axis by angle.
EcefPoint rotate_z(const EcefPoint& p, double angle) noexcept {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y, p.z};
}

}  // namespace

void validate(const ConstellationConfig& config) {
    if (config.num_planes < 1) throw ConfigError("constellation.num_planes must be >= 1");
    if (config.sats_per_plane < 1) throw ConfigError("constellation.sats_per_plane must be >= 1");
    if (!(config.altitude > 0.0)) throw ConfigError("constellation.altitude must be > 0");
    if (!(config.inclination >= 0.0 && config.inclination <= 180.0)) {
        throw ConfigError("constellation.inclination must lie in [0, 180]");
    }
    if (!(config.earth_radius > 0.0)) throw ConfigError("constellation.earth_radius must be > 0");
    if (!(config.earth_mu > 0.0)) throw ConfigError("constellation.earth_mu must be > 0");
    if (!(config.earth_rotation_period > 0.0)) {
        throw ConfigError("constellation.earth_rotation_period must be > 0");
    }
    if (!(config.min_elevation >= -90.0 && config.min_elevation <= 90.0)) {
        throw ConfigError("constellation.min_elevation must lie in [-90, 90]");
    }
}

std::string to_string(SatelliteId id) {
    return std::to_string(id.plane) + "." + std::to_string(id.slot);
}

double EcefPoint::norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }

double distance(const EcefPoint& a, const EcefPoint& b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double orbital_period(const ConstellationConfig& config) {
    if (!(config.altitude > 0.0)) throw ConfigError("constellation.altitude must be > 0");
    if (!(config.earth_mu > 0.0)) throw ConfigError("constellation.earth_mu must be > 0");
    const double a = config.orbit_radius();
    return kTwoPi * std::sqrt(a * a * a / config.earth_mu);
}

EcefPoint inertial_position(const ConstellationConfig& config, SatelliteId id, double t) {
    check_id(config, id);
    const double period = orbital_period(config);
    const double raan = config.raan_spread * kDegToRad * id.plane / config.num_planes;
    const double anomaly = kTwoPi * id.slot / config.sats_per_plane +
                           config.phasing_offset * kDegToRad * id.plane +
                           kTwoPi * std::fmod(t, period) / period;
    const double inc = config.inclination * kDegToRad;
    const double r = config.orbit_radius();

    const double cu = std::cos(anomaly);
    const double su = std::sin(anomaly);
    // In-plane position tilted by the inclination about the line of nodes (x axis),
    // then swung to the plane's ascending node.
    const EcefPoint in_plane{r * cu, r * su * std::cos(inc), r * su * std::sin(inc)};
    return rotate_z(in_plane, raan);
}

EcefPoint satellite_position(const ConstellationConfig& config, SatelliteId id, double t) {
    const double earth_angle =
        kTwoPi * std::fmod(t, config.earth_rotation_period) / config.earth_rotation_period;
    return rotate_z(inertial_position(config, id, t), -earth_angle);
}

std::vector<EcefPoint> satellite_positions(const ConstellationConfig& config, double t) {
    std::vector<EcefPoint> out;
    out.reserve(static_cast<std::size_t>(config.num_satellites()));
    for (int p = 0; p < config.num_planes; ++p) {
        for (int s = 0; s < config.sats_per_plane; ++s) {
            out.push_back(satellite_position(config, {p, s}, t));
        }
    }
    return out;
}

EcefPoint ground_station_position(double lat, double lon, const ConstellationConfig& config) {
    if (!(lat >= -90.0 && lat <= 90.0) || !(lon >= -180.0 && lon <= 180.0)) {
        throw std::invalid_argument("coordinates out of range: (" + std::to_string(lat) + ", " +
                                    std::to_string(lon) + ")");
    }
    const double phi = lat * kDegToRad;
    const double lambda = lon * kDegToRad;
    const double r = config.earth_radius;
    return {r * std::cos(phi) * std::cos(lambda), r * std::cos(phi) * std::sin(lambda),
            r * std::sin(phi)};
}

double elevation_angle(const EcefPoint& ground, const EcefPoint& sat) noexcept {
    const EcefPoint los{sat.x - ground.x, sat.y - ground.y, sat.z - ground.z};
    const double range = los.norm();
    const double up = ground.norm();
    if (range == 0.0 || up == 0.0) return 90.0;
    // sin(elevation) = cos(angle between line of sight and local vertical).
    const double s = (los.x * ground.x + los.y * ground.y + los.z * ground.z) / (range * up);
    return std::asin(std::clamp(s, -1.0, 1.0)) / kDegToRad;
}

}  // namespace leocdn
