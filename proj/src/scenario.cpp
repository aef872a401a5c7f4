#include "galms/scenario.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "galms/random.hpp"

namespace galms {

PairStream scenario_stream(const Scenario& scenario, std::uint64_t stream_seed) {
  const auto& pts = scenario.source.points;
  const std::size_t K = pts.size();
  if (K == 0) throw std::invalid_argument("scenario_stream: empty source cloud");
  if (!(scenario.inlier_ratio > 0.0 && scenario.inlier_ratio <= 1.0))
    throw std::invalid_argument("scenario_stream: inlier_ratio must be in (0, 1]");
  if (!(scenario.noise_variance >= 0.0))
    throw std::invalid_argument("scenario_stream: noise_variance must be >= 0");
  if (!is_unit(scenario.ground_truth))
    throw std::invalid_argument("scenario_stream: ground-truth rotor is not unit");

  std::vector<Vec3> clean(K);
  for (std::size_t n = 0; n < K; ++n) clean[n] = rotor_apply(scenario.ground_truth, pts[n]);

  Rng rng(stream_seed);

  // 1. outliers: derange the targets of a random subset.
  std::vector<std::size_t> idx(K);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.shuffle(idx);

  std::size_t n_out = static_cast<std::size_t>(std::llround((1.0 - scenario.inlier_ratio) * static_cast<double>(K)));
  if (n_out > K) n_out = K;
  if (n_out == 1) n_out = K >= 2 ? 2 : 0;  // a lone index cannot be deranged

  std::vector<Vec3> assigned = clean;
  std::vector<bool> is_outlier(K, false);
  for (std::size_t j = 0; j < n_out; ++j) {
    assigned[idx[j]] = clean[idx[(j + 1) % n_out]];
    is_outlier[idx[j]] = true;
  }

  // 2. observation noise.
  std::vector<Vec3> observed = assigned;
  if (scenario.noise_variance > 0.0) {
    const double sigma = std::sqrt(scenario.noise_variance);
    for (std::size_t n = 0; n < K; ++n) {
      observed[n].x += sigma * rng.gaussian();
      observed[n].y += sigma * rng.gaussian();
      observed[n].z += sigma * rng.gaussian();
    }
  }

  // 3. presentation order.
  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);

  PairStream stream;
  stream.pairs.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t n = order[k];
    stream.pairs.push_back({pts[n], assigned[n], observed[n]});
    if (!is_outlier[n]) stream.inlier_positions.push_back(static_cast<std::int32_t>(k));
  }
  return stream;
}

ScenarioWithStream make_scenario(PointCloud cloud, const Rotor& ground_truth, double noise_variance,
                                 double inlier_ratio, std::uint64_t seed) {
  Scenario scn{std::move(cloud), ground_truth, noise_variance, inlier_ratio, seed};
  PairStream stream = scenario_stream(scn, seed);
  return {std::move(scn), std::move(stream)};
}

Scenario cube_scenario(double noise_variance, std::uint64_t seed, int points_per_edge, double edge_length) {
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  Scenario scn;
  scn.source = gen_cube(points_per_edge, edge_length);
  scn.ground_truth = rotor_from_euler_xyz(120.0 * kDeg, 90.0 * kDeg, 45.0 * kDeg);
  scn.noise_variance = noise_variance;
  scn.inlier_ratio = 1.0;
  scn.seed = seed;
  return scn;
}

}  // namespace galms
