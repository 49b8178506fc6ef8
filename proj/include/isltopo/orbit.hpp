#pragma once

// Walker-Delta constellations on circular orbits.
//
// Plane p has right ascension 2*pi*p/N_p (no inter-plane phasing), satellite s
// of plane p starts at anomaly 2*pi*s/N_s + phi_p, and every satellite moves at
// the same angular rate 2*pi/T. Positions are Earth-centred inertial, in km.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "isltopo/error.hpp"

namespace isltopo {

using Vec3 = Eigen::Vector3d;

struct ConstellationConfig {
  int n_planes = 1;
  int sats_per_plane = 1;
  double altitude_km = 550.0;
  double inclination_rad = 53.0 * std::numbers::pi / 180.0;
  double max_phase_offset_rad = std::numbers::pi / 4.0;
  double earth_radius_km = 6371.0;
  double gravitational_parameter_km3_s2 = 398600.4418;

  double orbital_radius_km() const { return earth_radius_km + altitude_km; }
  int n_sats() const { return n_planes * sats_per_plane; }

  void validate() const {
    if (n_planes < 1) throw ConfigError("n_planes", "must be >= 1");
    if (sats_per_plane < 1) throw ConfigError("sats_per_plane", "must be >= 1");
    if (!(altitude_km > 0.0)) throw ConfigError("altitude_km", "must be > 0");
    if (!(inclination_rad >= 0.0 && inclination_rad <= std::numbers::pi))
      throw ConfigError("inclination_rad", "must lie in [0, pi]");
    if (!(max_phase_offset_rad >= 0.0 && max_phase_offset_rad <= 2.0 * std::numbers::pi))
      throw ConfigError("max_phase_offset_rad", "must lie in [0, 2*pi]");
    if (!(earth_radius_km > 0.0)) throw ConfigError("earth_radius_km", "must be > 0");
    if (!(gravitational_parameter_km3_s2 > 0.0))
      throw ConfigError("gravitational_parameter_km3_s2", "must be > 0");
  }
};

/// Satellite identity: orbital plane and position within the plane.
struct SatId {
  int plane = 0;
  int index = 0;

  friend auto operator<=>(const SatId&, const SatId&) = default;
};

/// Kepler's third law for a circular orbit of radius R_E + h.
inline double orbital_period(const ConstellationConfig& config) {
  const double r = config.orbital_radius_km();
  return 2.0 * std::numbers::pi * std::sqrt(r * r * r / config.gravitational_parameter_km3_s2);
}

class Constellation {
 public:
  Constellation(ConstellationConfig config, std::vector<double> phase_offsets)
      : config_(config), phase_offsets_(std::move(phase_offsets)), period_s_(orbital_period(config_)) {
    config_.validate();
    if (static_cast<int>(phase_offsets_.size()) != config_.n_planes)
      throw ConfigError("phase_offsets", "need one offset per plane");
  }

  const ConstellationConfig& config() const { return config_; }
  const std::vector<double>& phase_offsets() const { return phase_offsets_; }
  double orbital_radius_km() const { return config_.orbital_radius_km(); }
  double period_s() const { return period_s_; }
  int n_sats() const { return config_.n_sats(); }
  int n_planes() const { return config_.n_planes; }
  int sats_per_plane() const { return config_.sats_per_plane; }

  /// Flat node index used by every graph structure: plane * N_s + index.
  int node_of(SatId id) const {
    check(id);
    return id.plane * config_.sats_per_plane + id.index;
  }
  SatId sat_of(int node) const {
    if (node < 0 || node >= n_sats()) throw ArgumentError("node index out of range: " + std::to_string(node));
    return {node / config_.sats_per_plane, node % config_.sats_per_plane};
  }

  double raan(int plane) const { return 2.0 * std::numbers::pi * plane / config_.n_planes; }

  Vec3 position_at(SatId id, double t_s) const {
    check(id);
    const double r = orbital_radius_km();
    const double two_pi = 2.0 * std::numbers::pi;
    const double anomaly = two_pi * id.index / config_.sats_per_plane + phase_offsets_[id.plane] +
                           two_pi * std::fmod(t_s / period_s_, 1.0);
    const double a = r * std::cos(anomaly);
    const double b = r * std::sin(anomaly);
    const double ci = std::cos(config_.inclination_rad), si = std::sin(config_.inclination_rad);
    const double co = std::cos(raan(id.plane)), so = std::sin(raan(id.plane));
    // R_z(raan) * R_x(inclination) * (a, b, 0)
    const double y_inc = b * ci;
    return {a * co - y_inc * so, a * so + y_inc * co, b * si};
  }

  Vec3 position_at(int node, double t_s) const { return position_at(sat_of(node), t_s); }

  /// Positions of every satellite (flat node order) at one instant.
  std::vector<Vec3> positions_at(double t_s) const {
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(n_sats()));
    for (int node = 0; node < n_sats(); ++node) out.push_back(position_at(node, t_s));
    return out;
  }

 private:
  void check(SatId id) const {
    if (id.plane < 0 || id.plane >= config_.n_planes || id.index < 0 || id.index >= config_.sats_per_plane)
      throw ArgumentError("invalid satellite id (" + std::to_string(id.plane) + "," + std::to_string(id.index) + ")");
  }

  ConstellationConfig config_;
  std::vector<double> phase_offsets_;
  double period_s_;
};

/// Draws one phase offset per plane, uniform on [0, max_phase_offset_rad], from a
/// std::mt19937_64 seeded with `seed`.
inline Constellation build_constellation(const ConstellationConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  std::vector<double> offsets(static_cast<std::size_t>(config.n_planes), 0.0);
  if (config.max_phase_offset_rad > 0.0) {
    std::uniform_real_distribution<double> dist(0.0, config.max_phase_offset_rad);
    for (double& phi : offsets) phi = dist(rng);
  }
  return Constellation(config, std::move(offsets));
}

inline Vec3 position_at(const Constellation& c, SatId id, double t_s) { return c.position_at(id, t_s); }

struct PositionSample {
  SatId sat;
  double time_s = 0.0;
  Vec3 position_km;
};

/// Uniform grid t0 + k*duration/(n_samples-1), k = 0..n_samples-1, both ends included.
inline std::vector<double> sample_times(double t0_s, double duration_s, int n_samples) {
  if (n_samples < 2) throw ArgumentError("n_samples must be >= 2");
  std::vector<double> times(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) times[k] = t0_s + duration_s * k / (n_samples - 1);
  times.back() = t0_s + duration_s;
  return times;
}

/// Samples ordered by time, then by flat node index.
inline std::vector<PositionSample> sample_epoch(const Constellation& c, double t0_s, double duration_s,
                                                int n_samples) {
  const auto times = sample_times(t0_s, duration_s, n_samples);
  std::vector<PositionSample> out;
  out.reserve(times.size() * static_cast<std::size_t>(c.n_sats()));
  for (double t : times)
    for (int node = 0; node < c.n_sats(); ++node) {
      const SatId id = c.sat_of(node);
      out.push_back({id, t, c.position_at(id, t)});
    }
  return out;
}

}  // namespace isltopo
