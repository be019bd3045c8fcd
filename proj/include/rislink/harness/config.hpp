#pragma once

#include <cstdint>
#include <string>

#include "rislink/em_model.hpp"
#include "rislink/solvers.hpp"

namespace rislink::harness {

struct DistanceSweep {
  double start = 20.0;
  double stop = 200.0;
  int points = 10;
  double elevation_deg = 30.0;  // T and R at +-elevation from the panel normal
  double tx_gain_db = 0.0;
  double rx_gain_db = 0.0;
};

struct PlaneSweep {
  double x_min = -100.0;
  double x_max = 300.0;
  double y_min = -150.0;
  double y_max = 150.0;
  int points = 101;       // per axis
  int line_points = 2001;  // along line l for the ripple profile
  double line_min = -1500.0;
  double line_max = 0.0;
};

struct WavelengthSweep {
  double start = 0.0143;
  double stop = 0.0286;
  int points = 101;
  AntiDecayMode mode = AntiDecayMode::FixArea;
  double ratio = 1.0 / 3.0;
  double reference = 4.0;  // panel area (fix_area) or element side (fix_element)
};

struct RobustnessSweep {
  double half_width = 30.0;
  int points = 121;  // per axis and odd, centered on the assumed position
  double threshold = 0.1;
  double square_side = 5.0;
};

/// Resolved configuration. Gains are linear, powers in watts.
struct SceneConfig {
  double transmit_power = 1e-3;
  double wavelength = 0.0286;

  double ris_gain = 0.0;
  double element_dx = 0.01;
  double element_dy = 0.01;
  int ris_rows = 20;
  int ris_cols = 20;
  double reflection = 1.0;
  double pattern_exponent = 3.0;

  double tx_gain = 0.0;
  double rx_gain = 0.0;
  int antennas = 16;
  double spacing_wavelengths = 0.5;

  double d_tr = 200.0;
  double h1 = 80.0;
  double h2 = 80.0;
  double ris_x = 0.0;  // RIS reference point on plane S for solve
  double ris_y = 0.0;

  bool direct_link = false;
  FarFieldMode far_field = FarFieldMode::Warn;
  bool paper_scale = false;
  std::uint64_t seed = 1;

  DistanceSweep distance;
  PlaneSweep plane;
  WavelengthSweep wavelength_sweep;
  RobustnessSweep robustness;

  SceneConfig();
  void validate() const;
};

/// Parses a YAML document; missing keys keep their defaults.
SceneConfig parse_config(const std::string& text);
SceneConfig load_config(const std::string& path);

/// Canonical YAML rendering of a resolved config (dB fields converted back).
std::string dump_config(const SceneConfig& cfg);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace rislink::harness
