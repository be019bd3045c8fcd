#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rislink/placement.hpp"

namespace rislink {

struct OracleConfig {
  int phase_levels = 256;
  int grid_points_1d = 1000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct PhaseSearchResult {
  double best_power = 0.0;
  ComplexVector best_theta;
  std::uint64_t combinations = 0;
};

/// Maximizes ||C^T theta + t||^2 P_t over theta_q in {e^{j 2 pi m / levels}}
/// with MRT per candidate. The first L - 1 phases are enumerated and the last
/// is chosen exactly on the grid, so the cost is levels^(L-1). Throws TooLarge
/// above 1e9 combinations or for L > 6.
PhaseSearchResult exhaustive_phase_search(const ChannelSet& channels, double transmit_power,
                                          const OracleConfig& cfg = {});

struct GridArgmax {
  Point2 position = Point2::Zero();
  Vec3 world = Vec3::Zero();
  double value = 0.0;
  double runner_up = 0.0;  // second-best value
  Point2 cell = Point2::Zero();
  int evaluated = 0;
};

/// Evaluates the objective on a resolution x resolution node grid over the
/// bounding box of the feasible polygons (feasible nodes only). Nodes are
/// visited x-major, and the first of equal values wins.
GridArgmax dense_position_grid(const PlaneScene& scene, const PositionObjective& objective, int resolution);

/// Distance from a plane point to the reduced search set: line l (segment T'R'
/// for k = 0) and the feasible polygon boundaries.
double distance_to_search_set(const PlaneScene& scene, const Point2& p, double k);

/// Random canonical plane scene with one convex polygon that avoids region D.
PlaneScene random_plane_scene(std::uint64_t seed);

struct VolumeArgmax {
  Vec3 position = Vec3::Zero();
  double value = 0.0;
  double runner_up = 0.0;
  Vec3 cell = Vec3::Zero();
};

/// Node grid over [box_min, box_max] restricted to points where `inside` holds.
VolumeArgmax dense_volume_grid(const Vec3& box_min, const Vec3& box_max,
                               const std::function<bool(const Vec3&)>& inside,
                               const PositionObjective& objective, int resolution);

struct FeasiblePair {
  ComplexVector theta;
  ComplexVector v;
};

/// Uniform phases and complex Gaussian beamformers scaled to ||v||^2 = P_t.
std::vector<FeasiblePair> random_feasible_solutions(int elements, int antennas, double transmit_power,
                                                    int count, std::uint64_t seed);

/// 2 x 2 RIS, two-antenna ULA, far-field geometry with an oblique array axis.
Scene toy_scene(bool direct_link);

/// Rescales the direct channel so its amplitude equals `amplitude`. Keeps the
/// toy cross term comparable to the four-element RIS path.
void set_direct_amplitude(ChannelSet& channels, double amplitude);

struct OracleCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle suite behind the validate subcommand.
std::vector<OracleCheck> run_oracle_suite(const OracleConfig& cfg);

}  // namespace rislink
