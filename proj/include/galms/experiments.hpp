#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "galms/baseline.hpp"
#include "galms/curve_io.hpp"
#include "galms/estimation.hpp"
#include "galms/opcount.hpp"
#include "galms/scenario.hpp"

namespace galms {

inline constexpr int kReportSchemaVersion = 1;

// --- cube ensemble (synthetic benchmark) ---------------------------------

struct CubeParams {
  double mu = 0.3;
  double sigma2 = 0.0;
  int realizations = 200;
  std::uint64_t seed = 1;
  std::string out;  // path prefix for <out>.csv and <out>.json; empty: no files
  int points_per_edge = 12;
  double edge_length = 0.5;
  std::optional<Rotor> initial_rotor;
};

struct CubeResult {
  LearningCurve ensemble;       // EMSE/MSE averaged over realizations
  Rotor truth;
  Rotor final_rotor;            // final state of realization 0
  double rotor_distance = 0.0;  // min(|r - r*|, |r + r*|) for realization 0
  double steady_emse_db = 0.0;
  double steady_mse_db = 0.0;
  std::optional<std::int64_t> convergence;
  Mat3 baseline_rotation;  // Kabsch on realization 0's observed pairs
  double baseline_angle_to_truth_deg = 0.0;
  double baseline_angle_to_filter_deg = 0.0;
  double wall_seconds = 0.0;
  nlohmann::json report;
};

CubeResult run_cube_experiment(const CubeParams& params);

// --- file-based registration run ------------------------------------------

struct RegisterParams {
  std::filesystem::path source_path;
  std::filesystem::path target_path;
  std::optional<std::filesystem::path> pairs_path;    // default: index order
  std::optional<std::filesystem::path> inliers_path;  // pair indices for the cost window
  double mu = 8.0;
  std::string out;
  std::optional<Rotor> initial_rotor;
};

struct RegisterResult {
  LearningCurve curve;  // sq_err per pair; cost over the window
  Rotor final_rotor;
  double steady_mse_db = 0.0;
  std::optional<std::int64_t> convergence;
  Mat3 baseline_rotation;
  double baseline_angle_to_filter_deg = 0.0;
  Vec3 source_centroid;  // subtracted before filtering
  Vec3 target_centroid;
  double wall_seconds = 0.0;
  nlohmann::json report;
};

RegisterResult run_register_experiment(const RegisterParams& params);

// Pair list from two clouds plus optional explicit correspondences; without
// them the clouds must have equal sizes and pair up by index. Clouds are
// expected to be centered already.
std::vector<CorrespondencePair> build_pairs(
    const PointCloud& source, const PointCloud& target,
    const std::vector<std::pair<std::int64_t, std::int64_t>>* correspondences);

// --- gradient validation ----------------------------------------------------

struct GradientCheckParams {
  std::uint64_t seed = 1;
  int trials = 1000;
  double h = 1e-6;
};

struct GradientCheckResult {
  double max_form_rel_err = 0.0;  // wedge form vs product form
  double max_fd_rel_err = 0.0;    // analytic vs central difference
  bool pass = false;
  nlohmann::json report;
};

// Random instances; thresholds 1e-11 (form agreement) and 1e-6 (finite
// differences). Relative errors use an absolute floor of 1e-3 on the
// denominator so near-critical directions degrade to an absolute check.
GradientCheckResult run_gradient_check(const GradientCheckParams& params);

// --- op-count report ---------------------------------------------------------

nlohmann::json opcount_report();

// --- command-line front end ---------------------------------------------------

// Exit codes: 0 success, 1 validation failure, 2 runtime divergence, 3 I/O error.
int cli_main(int argc, const char* const* argv);

}  // namespace galms
