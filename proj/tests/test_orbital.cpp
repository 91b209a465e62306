#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "leocdn/error.hpp"
#include "leocdn/orbital.hpp"
#include "oracles.hpp"

using namespace leocdn;

namespace {

double angle_between(const EcefPoint& a, const EcefPoint& b) {
    const double dot = a.x * b.x + a.y * b.y + a.z * b.z;
    return std::acos(std::clamp(dot / (a.norm() * b.norm()), -1.0, 1.0));
}

double longitude_deg(const EcefPoint& p) { return std::atan2(p.y, p.x) * 180.0 / oracle::kPi; }

}  // namespace

TEST(OrbitalPeriod, StarlinkShellMatchesPublishedValue) {
    const ConstellationConfig c;
    EXPECT_NEAR(orbital_period(c), 5730.0, 10.0);
    EXPECT_NEAR(orbital_period(c), oracle::kPeriod550km, 1e-9);
}

TEST(OrbitalPeriod, IsBitwiseDeterministic) {
    const ConstellationConfig c;
    const double a = orbital_period(c);
    const double b = orbital_period(c);
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(OrbitalPeriod, GeostationaryAltitude) {
    ConstellationConfig c;
    c.altitude = 35786e3;
    EXPECT_NEAR(orbital_period(c), oracle::kPeriodGeo, 1e-6);
    // Sidereal day within 0.05%; the residual comes from the 6371 km mean radius.
    EXPECT_NEAR(orbital_period(c), 86164.0, 86164.0 * 5e-4);
}

TEST(OrbitalPeriod, RejectsNonPositiveAltitudeOrMu) {
    ConstellationConfig c;
    c.altitude = 0.0;
    EXPECT_THROW(orbital_period(c), ConfigError);
    c = {};
    c.earth_mu = -1.0;
    EXPECT_THROW(orbital_period(c), ConfigError);
}

TEST(SatellitePosition, AllSatellitesAtOrbitRadius) {
    const ConstellationConfig c;
    for (const double t : {0.0, 1.0, 1234.5, 86399.0}) {
        for (const auto& p : satellite_positions(c, t)) {
            EXPECT_LT(std::abs(p.norm() - c.orbit_radius()), 1.0);
        }
    }
}

TEST(SatellitePosition, FirstSatelliteStartsOnXAxis) {
    const ConstellationConfig c;
    const auto p = satellite_position(c, {0, 0}, 0.0);
    EXPECT_NEAR(p.x, c.orbit_radius(), 1e-6);
    EXPECT_NEAR(p.y, 0.0, 1e-6);
    EXPECT_NEAR(p.z, 0.0, 1e-6);
}

TEST(SatellitePosition, InertialPositionIsPeriodic) {
    const ConstellationConfig c;
    const double T = orbital_period(c);
    for (const SatelliteId id : {SatelliteId{0, 0}, SatelliteId{5, 17}, SatelliteId{23, 65}}) {
        for (const double t : {0.0, 100.0, 4000.0}) {
            EXPECT_LT(distance(inertial_position(c, id, t), inertial_position(c, id, t + T)), 1.0);
        }
    }
}

TEST(SatellitePosition, InPlaneNeighboursAreEvenlySpaced) {
    const ConstellationConfig c;
    const double expected = 2.0 * oracle::kPi / 66.0;
    EXPECT_NEAR(expected * 180.0 / oracle::kPi, 5.454545454545, 1e-9);
    for (const int plane : {0, 7, 23}) {
        double lo = 10.0, hi = -10.0;
        for (int s = 0; s < c.sats_per_plane; ++s) {
            const double gap = angle_between(satellite_position(c, {plane, s}, 321.0),
                                             satellite_position(c, {plane, (s + 1) % 66}, 321.0));
            lo = std::min(lo, gap);
            hi = std::max(hi, gap);
            EXPECT_NEAR(gap, expected, 1e-9);
        }
        EXPECT_LT(hi - lo, 1e-9);
    }
}

TEST(SatellitePosition, SatellitesOfOnePlaneShareTheOrbitalPlane) {
    const ConstellationConfig c;
    const auto a = inertial_position(c, {3, 0}, 50.0);
    const auto b = inertial_position(c, {3, 10}, 50.0);
    const EcefPoint n{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
    for (int s = 0; s < c.sats_per_plane; ++s) {
        const auto p = inertial_position(c, {3, s}, 50.0);
        EXPECT_LT(std::abs(n.x * p.x + n.y * p.y + n.z * p.z) / (n.norm() * p.norm()), 1e-12);
    }
}

TEST(SatellitePosition, GroundTrackDriftsWestwardPerOrbit) {
    const ConstellationConfig c;
    const double T = oracle::kPeriod550km;
    const double drift = -360.0 * T / 86400.0;
    EXPECT_NEAR(drift, -23.8755295388942, 1e-9);
    const SatelliteId id{4, 9};
    double d = longitude_deg(satellite_position(c, id, 10.0 + T)) -
               longitude_deg(satellite_position(c, id, 10.0));
    d = std::remainder(d, 360.0);
    EXPECT_NEAR(d, drift, 1e-6);
}

TEST(SatellitePosition, OutOfRangeIdThrows) {
    const ConstellationConfig c;
    EXPECT_THROW(satellite_position(c, {24, 0}, 0.0), std::invalid_argument);
    EXPECT_THROW(satellite_position(c, {0, 66}, 0.0), std::invalid_argument);
    EXPECT_THROW(satellite_position(c, {-1, 0}, 0.0), std::invalid_argument);
}

TEST(GroundStationPosition, ReferencePoints) {
    const ConstellationConfig c;
    const auto origin = ground_station_position(0.0, 0.0, c);
    EXPECT_NEAR(origin.x, c.earth_radius, 1e-6);
    EXPECT_NEAR(origin.y, 0.0, 1e-6);
    EXPECT_NEAR(origin.z, 0.0, 1e-6);
    for (const double lon : {-180.0, 0.0, 77.0}) {
        const auto pole = ground_station_position(90.0, lon, c);
        EXPECT_NEAR(pole.x, 0.0, 1e-6);
        EXPECT_NEAR(pole.y, 0.0, 1e-6);
        EXPECT_NEAR(pole.z, c.earth_radius, 1e-6);
    }
    const auto zurich = ground_station_position(47.37, 8.54, c);
    EXPECT_NEAR(zurich.z, oracle::kZurichZ, 1e-6);
    EXPECT_NEAR(zurich.norm(), c.earth_radius, 1e-6);
}

TEST(GroundStationPosition, RejectsOutOfRangeCoordinates) {
    const ConstellationConfig c;
    EXPECT_THROW(ground_station_position(90.5, 0.0, c), std::invalid_argument);
    EXPECT_THROW(ground_station_position(0.0, -180.1, c), std::invalid_argument);
}

TEST(ElevationAngle, ZenithAndAntipode) {
    const ConstellationConfig c;
    const auto g = ground_station_position(10.0, 20.0, c);
    const double k = c.orbit_radius() / c.earth_radius;
    EXPECT_NEAR(elevation_angle(g, {g.x * k, g.y * k, g.z * k}), 90.0, 1e-9);
    EXPECT_LT(elevation_angle(g, {-g.x * k, -g.y * k, -g.z * k}), 0.0);
}

TEST(ElevationAngle, MatchesSphericalTriangle) {
    const ConstellationConfig c;
    const auto g = ground_station_position(0.0, 0.0, c);
    const double r = c.orbit_radius();
    const double lon = 10.0 * oracle::kPi / 180.0;
    const EcefPoint sat{r * std::cos(lon), r * std::sin(lon), 0.0};
    EXPECT_NEAR(elevation_angle(g, sat),
                oracle::spherical_elevation_deg(c.earth_radius, r, 10.0), 1e-9);
    EXPECT_NEAR(elevation_angle(g, sat), oracle::kElevation10Deg, 1e-9);
}

TEST(ConstellationConfig, DefaultsAndValidation) {
    const ConstellationConfig c;
    EXPECT_EQ(c.num_planes, 24);
    EXPECT_EQ(c.sats_per_plane, 66);
    EXPECT_EQ(c.altitude, 550e3);
    EXPECT_EQ(c.inclination, 53.0);
    EXPECT_NO_THROW(validate(c));
    ConstellationConfig bad;
    bad.inclination = 181.0;
    EXPECT_THROW(validate(bad), ConfigError);
    bad = {};
    bad.num_planes = 0;
    EXPECT_THROW(validate(bad), ConfigError);
}
