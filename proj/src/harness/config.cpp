#include "rislink/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

namespace rislink::harness {

namespace {

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw Error(ErrorKind::ConfigError, where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw Error(ErrorKind::ConfigError, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  const YAML::Node value = node[key];
  if (!value) return;
  try {
    out = value.as<T>();
  } catch (const YAML::Exception&) {
    throw Error(ErrorKind::ConfigError, std::string("bad value for '") + key + "'");
  }
}

void read_db(const YAML::Node& node, const char* key, double& linear) {
  double db = linear_to_db(linear);
  read(node, key, db);
  linear = db_to_linear(db);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ConfigError, what);
}

}  // namespace

SceneConfig::SceneConfig()
    : ris_gain(db_to_linear(9.03)), tx_gain(db_to_linear(21.0)), rx_gain(db_to_linear(21.0)) {}

void SceneConfig::validate() const {
  require(transmit_power > 0.0 && std::isfinite(transmit_power), "transmit power must be > 0");
  require(wavelength > 0.0, "wavelength must be > 0");
  require(ris_gain > 0.0 && tx_gain > 0.0 && rx_gain > 0.0, "gains must be finite");
  require(element_dx > 0.0 && element_dy > 0.0, "element size must be > 0");
  require(ris_rows >= 1 && ris_cols >= 1, "RIS grid must be at least 1 x 1");
  require(reflection >= 0.0 && reflection <= 1.0, "reflection must lie in [0, 1]");
  require(pattern_exponent >= 0.0, "pattern exponent must be >= 0");
  require(antennas >= 1, "need at least one antenna");
  require(spacing_wavelengths > 0.0, "antenna spacing must be > 0");
  require(d_tr > 0.0 && h1 >= 0.0 && h2 >= 0.0, "geometry distances out of range");
  require(d_tr >= std::abs(h1 - h2), "d_tr must be at least |h1 - h2|");
  require(distance.start > 0.0 && distance.stop >= distance.start && distance.points >= 1,
          "distance sweep range invalid");
  require(distance.elevation_deg > 0.0 && distance.elevation_deg < 90.0, "elevation must lie in (0, 90)");
  require(plane.x_max > plane.x_min && plane.y_max > plane.y_min && plane.points >= 2,
          "plane sweep range invalid");
  require(plane.line_max > plane.line_min && plane.line_points >= 3, "line sweep range invalid");
  require(wavelength_sweep.start > 0.0 && wavelength_sweep.stop >= wavelength_sweep.start &&
              wavelength_sweep.points >= 1 && wavelength_sweep.ratio > 0.0 && wavelength_sweep.reference > 0.0,
          "wavelength sweep invalid");
  require(robustness.half_width > 0.0 && robustness.points >= 3 && robustness.points % 2 == 1 &&
              robustness.threshold > 0.0 &&
              robustness.square_side > 0.0,
          "robustness sweep invalid (points must be odd)");
}

SceneConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("YAML parse error: ") + e.what());
  }
  SceneConfig cfg;
  if (!root || root.IsNull()) {
    cfg.validate();
    return cfg;
  }
  check_keys(root, "config",
             {"transmit_power_dbm", "wavelength", "ris", "tx", "rx", "geometry", "flags", "seed", "sweeps"});

  double pt_dbm = watts_to_dbm(cfg.transmit_power);
  read(root, "transmit_power_dbm", pt_dbm);
  cfg.transmit_power = dbm_to_watts(pt_dbm);
  read(root, "wavelength", cfg.wavelength);
  read(root, "seed", cfg.seed);

  if (const auto n = root["ris"]) {
    check_keys(n, "ris", {"gain_db", "element_dx", "element_dy", "rows", "cols", "reflection", "pattern_exponent"});
    read_db(n, "gain_db", cfg.ris_gain);
    read(n, "element_dx", cfg.element_dx);
    read(n, "element_dy", cfg.element_dy);
    read(n, "rows", cfg.ris_rows);
    read(n, "cols", cfg.ris_cols);
    read(n, "reflection", cfg.reflection);
    read(n, "pattern_exponent", cfg.pattern_exponent);
  }
  if (const auto n = root["tx"]) {
    check_keys(n, "tx", {"gain_db", "antennas", "spacing_wavelengths"});
    read_db(n, "gain_db", cfg.tx_gain);
    read(n, "antennas", cfg.antennas);
    read(n, "spacing_wavelengths", cfg.spacing_wavelengths);
  }
  if (const auto n = root["rx"]) {
    check_keys(n, "rx", {"gain_db"});
    read_db(n, "gain_db", cfg.rx_gain);
  }
  if (const auto n = root["geometry"]) {
    check_keys(n, "geometry", {"d_tr", "h1", "h2", "ris_x", "ris_y"});
    read(n, "d_tr", cfg.d_tr);
    read(n, "h1", cfg.h1);
    read(n, "h2", cfg.h2);
    read(n, "ris_x", cfg.ris_x);
    read(n, "ris_y", cfg.ris_y);
  }
  if (const auto n = root["flags"]) {
    check_keys(n, "flags", {"direct_link", "far_field", "paper_scale"});
    read(n, "direct_link", cfg.direct_link);
    read(n, "paper_scale", cfg.paper_scale);
    std::string mode = "warn";
    read(n, "far_field", mode);
    require(mode == "warn" || mode == "strict", "far_field must be 'warn' or 'strict'");
    cfg.far_field = mode == "strict" ? FarFieldMode::Strict : FarFieldMode::Warn;
  }
  if (const auto s = root["sweeps"]) {
    check_keys(s, "sweeps", {"distance", "plane", "wavelength", "robustness"});
    if (const auto n = s["distance"]) {
      check_keys(n, "sweeps.distance", {"start", "stop", "points", "elevation_deg", "tx_gain_db", "rx_gain_db"});
      read(n, "start", cfg.distance.start);
      read(n, "stop", cfg.distance.stop);
      read(n, "points", cfg.distance.points);
      read(n, "elevation_deg", cfg.distance.elevation_deg);
      read(n, "tx_gain_db", cfg.distance.tx_gain_db);
      read(n, "rx_gain_db", cfg.distance.rx_gain_db);
    }
    if (const auto n = s["plane"]) {
      check_keys(n, "sweeps.plane",
                 {"x_min", "x_max", "y_min", "y_max", "points", "line_points", "line_min", "line_max"});
      read(n, "x_min", cfg.plane.x_min);
      read(n, "x_max", cfg.plane.x_max);
      read(n, "y_min", cfg.plane.y_min);
      read(n, "y_max", cfg.plane.y_max);
      read(n, "points", cfg.plane.points);
      read(n, "line_points", cfg.plane.line_points);
      read(n, "line_min", cfg.plane.line_min);
      read(n, "line_max", cfg.plane.line_max);
    }
    if (const auto n = s["wavelength"]) {
      check_keys(n, "sweeps.wavelength", {"start", "stop", "points", "mode", "ratio", "reference"});
      read(n, "start", cfg.wavelength_sweep.start);
      read(n, "stop", cfg.wavelength_sweep.stop);
      read(n, "points", cfg.wavelength_sweep.points);
      read(n, "ratio", cfg.wavelength_sweep.ratio);
      read(n, "reference", cfg.wavelength_sweep.reference);
      std::string mode = "fix_area";
      read(n, "mode", mode);
      require(mode == "fix_area" || mode == "fix_element", "mode must be 'fix_area' or 'fix_element'");
      cfg.wavelength_sweep.mode = mode == "fix_area" ? AntiDecayMode::FixArea : AntiDecayMode::FixElement;
    }
    if (const auto n = s["robustness"]) {
      check_keys(n, "sweeps.robustness", {"half_width", "points", "threshold", "square_side"});
      read(n, "half_width", cfg.robustness.half_width);
      read(n, "points", cfg.robustness.points);
      read(n, "threshold", cfg.robustness.threshold);
      read(n, "square_side", cfg.robustness.square_side);
    }
  }
  cfg.validate();
  return cfg;
}

SceneConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const SceneConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "transmit_power_dbm" << YAML::Value << watts_to_dbm(cfg.transmit_power);
  out << YAML::Key << "wavelength" << YAML::Value << cfg.wavelength;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::Key << "ris" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gain_db" << YAML::Value << linear_to_db(cfg.ris_gain);
  out << YAML::Key << "element_dx" << YAML::Value << cfg.element_dx;
  out << YAML::Key << "element_dy" << YAML::Value << cfg.element_dy;
  out << YAML::Key << "rows" << YAML::Value << cfg.ris_rows;
  out << YAML::Key << "cols" << YAML::Value << cfg.ris_cols;
  out << YAML::Key << "reflection" << YAML::Value << cfg.reflection;
  out << YAML::Key << "pattern_exponent" << YAML::Value << cfg.pattern_exponent;
  out << YAML::EndMap;
  out << YAML::Key << "tx" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gain_db" << YAML::Value << linear_to_db(cfg.tx_gain);
  out << YAML::Key << "antennas" << YAML::Value << cfg.antennas;
  out << YAML::Key << "spacing_wavelengths" << YAML::Value << cfg.spacing_wavelengths;
  out << YAML::EndMap;
  out << YAML::Key << "rx" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gain_db" << YAML::Value << linear_to_db(cfg.rx_gain);
  out << YAML::EndMap;
  out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "d_tr" << YAML::Value << cfg.d_tr;
  out << YAML::Key << "h1" << YAML::Value << cfg.h1;
  out << YAML::Key << "h2" << YAML::Value << cfg.h2;
  out << YAML::Key << "ris_x" << YAML::Value << cfg.ris_x;
  out << YAML::Key << "ris_y" << YAML::Value << cfg.ris_y;
  out << YAML::EndMap;
  out << YAML::Key << "flags" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "direct_link" << YAML::Value << cfg.direct_link;
  out << YAML::Key << "far_field" << YAML::Value << (cfg.far_field == FarFieldMode::Strict ? "strict" : "warn");
  out << YAML::Key << "paper_scale" << YAML::Value << cfg.paper_scale;
  out << YAML::EndMap;
  out << YAML::Key << "sweeps" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "distance" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "start" << YAML::Value << cfg.distance.start;
  out << YAML::Key << "stop" << YAML::Value << cfg.distance.stop;
  out << YAML::Key << "points" << YAML::Value << cfg.distance.points;
  out << YAML::Key << "elevation_deg" << YAML::Value << cfg.distance.elevation_deg;
  out << YAML::Key << "tx_gain_db" << YAML::Value << cfg.distance.tx_gain_db;
  out << YAML::Key << "rx_gain_db" << YAML::Value << cfg.distance.rx_gain_db;
  out << YAML::EndMap;
  out << YAML::Key << "plane" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "x_min" << YAML::Value << cfg.plane.x_min;
  out << YAML::Key << "x_max" << YAML::Value << cfg.plane.x_max;
  out << YAML::Key << "y_min" << YAML::Value << cfg.plane.y_min;
  out << YAML::Key << "y_max" << YAML::Value << cfg.plane.y_max;
  out << YAML::Key << "points" << YAML::Value << cfg.plane.points;
  out << YAML::Key << "line_points" << YAML::Value << cfg.plane.line_points;
  out << YAML::Key << "line_min" << YAML::Value << cfg.plane.line_min;
  out << YAML::Key << "line_max" << YAML::Value << cfg.plane.line_max;
  out << YAML::EndMap;
  out << YAML::Key << "wavelength" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "start" << YAML::Value << cfg.wavelength_sweep.start;
  out << YAML::Key << "stop" << YAML::Value << cfg.wavelength_sweep.stop;
  out << YAML::Key << "points" << YAML::Value << cfg.wavelength_sweep.points;
  out << YAML::Key << "mode" << YAML::Value
      << (cfg.wavelength_sweep.mode == AntiDecayMode::FixArea ? "fix_area" : "fix_element");
  out << YAML::Key << "ratio" << YAML::Value << cfg.wavelength_sweep.ratio;
  out << YAML::Key << "reference" << YAML::Value << cfg.wavelength_sweep.reference;
  out << YAML::EndMap;
  out << YAML::Key << "robustness" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "half_width" << YAML::Value << cfg.robustness.half_width;
  out << YAML::Key << "points" << YAML::Value << cfg.robustness.points;
  out << YAML::Key << "threshold" << YAML::Value << cfg.robustness.threshold;
  out << YAML::Key << "square_side" << YAML::Value << cfg.robustness.square_side;
  out << YAML::EndMap;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoError, "SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace rislink::harness
