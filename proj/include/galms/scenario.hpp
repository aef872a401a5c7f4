#pragma once

#include <cstdint>
#include <vector>

#include "galms/estimation.hpp"
#include "galms/point_cloud.hpp"
#include "galms/rotor.hpp"

namespace galms {

// Synthetic registration instance: a source cloud, the rotation that
// produced the target, and the corruption model. The target cloud itself is
// derived, never stored: y_n = r* x_n r~*.
struct Scenario {
  PointCloud source;
  Rotor ground_truth;          // unit
  double noise_variance = 0.0; // per-coordinate Gaussian variance of v
  double inlier_ratio = 1.0;   // fraction of pairs with the correct target
  std::uint64_t seed = 0;
};

struct PairStream {
  std::vector<CorrespondencePair> pairs;          // presentation order
  std::vector<std::int32_t> inlier_positions;     // stream positions of true correspondences
};

// One seeded realization of the scenario. Draw order is pinned:
//   1. outlier selection: Fisher-Yates shuffle of all indices, the first
//      n_out = round((1 - inlier_ratio) K) become outliers (a single
//      infeasible outlier is promoted to two) and their targets are
//      cyclically deranged in shuffled order;
//   2. noise: per point in index order, coordinates x, y, z
//      (skipped entirely when noise_variance == 0);
//   3. presentation order: one more Fisher-Yates shuffle.
PairStream scenario_stream(const Scenario& scenario, std::uint64_t stream_seed);

struct ScenarioWithStream {
  Scenario scenario;
  PairStream stream;
};

// Validates parameters and returns the scenario plus the stream for its own
// seed (ensembles derive further streams via substream_seed).
ScenarioWithStream make_scenario(PointCloud cloud, const Rotor& ground_truth, double noise_variance,
                                 double inlier_ratio, std::uint64_t seed);

// The cube instance used throughout: 12^3 lattice, 0.5 m edges, rotated by
// 120, 90 and 45 degrees about x, y and z (composed as Rx Ry Rz; see
// rotor_from_euler_xyz).
Scenario cube_scenario(double noise_variance, std::uint64_t seed, int points_per_edge = 12,
                       double edge_length = 0.5);

}  // namespace galms
