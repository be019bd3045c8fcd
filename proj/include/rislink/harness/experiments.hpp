#pragma once

#include <string>
#include <vector>

#include "rislink/harness/config.hpp"
#include "rislink/placement.hpp"

namespace rislink::harness {

/// Numeric result table; `labels`, when present, is a leading text column.
struct Table {
  std::string experiment;
  std::vector<std::string> header;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> warnings;

  std::size_t column(const std::string& name) const;
};

/// Plane-S setup: T above T' at h1, R above R' at h2, the ULA perpendicular to
/// the plane, RIS dimensions from the config. The RIS position is left unset.
Scene plane_scene_base(const SceneConfig& cfg);

/// Distance-sweep setup: RIS at the origin facing +z, T and R at distance d and
/// elevation +-elevation_deg in the x-z plane, ULA along x.
Scene distance_scene(const SceneConfig& cfg, double d);

Table run_solve(const SceneConfig& cfg);
Table run_sweep_distance(const SceneConfig& cfg);
Table run_sweep_plane(const SceneConfig& cfg);
/// Power and direct/RIS cross-term envelope along line l.
Table run_line_profile(const SceneConfig& cfg);
Table run_sweep_wavelength(const SceneConfig& cfg);
Table run_robustness(const SceneConfig& cfg);

/// Interior samples strictly above the left neighbor and not below the right one.
int count_local_maxima(const std::vector<double>& values);

struct RobustnessRegion {
  int cells = 0;             // grid nodes in the component around the assumed position
  double area = 0.0;         // cells * step^2
  bool contains_square = false;
  double square_x = 0.0;     // lower-left corner of the first square found
  double square_y = 0.0;
};

/// Flood-fills the nodes below the threshold connected to the assumed position
/// and searches the component for an axis-aligned square of the given side.
RobustnessRegion analyze_robustness(const Table& table, const RobustnessSweep& sweep);

}  // namespace rislink::harness
