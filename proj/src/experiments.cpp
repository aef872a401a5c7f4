#include "galms/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "galms/errors.hpp"
#include "galms/ply_io.hpp"
#include "galms/random.hpp"

namespace galms {

namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

nlohmann::json rotor_json(const Rotor& r) {
  const auto m = r.as_multivector();
  return nlohmann::json(m.c);
}

nlohmann::json mat3_json(const Mat3& m) {
  return nlohmann::json::array({
      nlohmann::json::array({m(0, 0), m(0, 1), m(0, 2)}),
      nlohmann::json::array({m(1, 0), m(1, 1), m(1, 2)}),
      nlohmann::json::array({m(2, 0), m(2, 1), m(2, 2)}),
  });
}

nlohmann::json opcounts_json(const OpCounts& c) {
  return {{"real_multiplications", c.rm}, {"real_additions", c.ra}};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open file for writing", path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw io_error("write failed", path.string());
}

void write_outputs(const std::string& prefix, const LearningCurve& curve, const nlohmann::json& report) {
  if (prefix.empty()) return;
  write_curve_csv(curve, prefix + ".csv");
  write_text_file(prefix + ".json", report.dump(2) + "\n");
}

nlohmann::json convergence_json(const std::optional<std::int64_t>& it) {
  return it ? nlohmann::json(*it) : nlohmann::json(nullptr);
}

// Per-iteration cost of the update rule; constant by construction, measured
// rather than hard-coded.
LmsOpBreakdown measured_lms_cost() {
  FilterState st{default_initial_rotor(), 0};
  const CorrespondencePair pair{{1, 0, 0}, {0, 1, 0}, {0, 1, 0}};
  FilterConfig cfg;
  cfg.mu = 0.1;
  return op_counted_lms_step(st, pair, cfg).second;
}

std::vector<std::int64_t> parse_index_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open file", path.string());
  std::vector<std::int64_t> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::int64_t v;
    if (ss >> v) {
      if (v < 0) throw parse_error("pair index must be non-negative", line_no);
      out.push_back(v);
      std::string extra;
      if (ss >> extra) throw parse_error("expected one index per line", line_no);
    }
  }
  return out;
}

}  // namespace

CubeResult run_cube_experiment(const CubeParams& params) {
  if (params.realizations < 1) throw std::invalid_argument("cube: realizations must be >= 1");
  if (!(params.sigma2 >= 0.0)) throw std::invalid_argument("cube: sigma2 must be >= 0");

  const auto start = Clock::now();

  const Scenario scenario =
      cube_scenario(params.sigma2, params.seed, params.points_per_edge, params.edge_length);

  FilterConfig config;
  config.mu = params.mu;
  config.noise_variance = params.sigma2;
  config.seed = params.seed;

  CubeResult res;
  res.truth = scenario.ground_truth;
  res.ensemble = emse_ensemble(scenario, config, params.realizations, params.seed, params.initial_rotor);

  // Realization 0 supplies the reported rotor and the baseline comparison.
  const PairStream first = scenario_stream(scenario, substream_seed(params.seed, 0));
  RunOptions opts;
  opts.initial_rotor = params.initial_rotor;
  opts.ground_truth = scenario.ground_truth;
  const RunResult first_run = run_filter(first.pairs, config, opts);
  res.final_rotor = first_run.state.r;
  res.rotor_distance = *first_run.rotor_distance;

  res.steady_emse_db = steady_state_db(res.ensemble.emse);
  res.steady_mse_db = steady_state_db(res.ensemble.sq_err);
  res.convergence = convergence_iteration(res.ensemble.emse);

  res.baseline_rotation = kabsch_rotation(first.pairs, /*use_noisy=*/true);
  const Mat3 truth_m = rotor_to_matrix(scenario.ground_truth);
  const Mat3 filter_m = rotor_to_matrix(res.final_rotor);
  res.baseline_angle_to_truth_deg = rotation_angle_between(res.baseline_rotation, truth_m) * kRadToDeg;
  res.baseline_angle_to_filter_deg = rotation_angle_between(res.baseline_rotation, filter_m) * kRadToDeg;

  const LmsOpBreakdown ops = measured_lms_cost();
  res.wall_seconds = elapsed_seconds(start);

  res.report = {
      {"schema_version", kReportSchemaVersion},
      {"command", "cube"},
      {"config",
       {{"mu", params.mu},
        {"sigma2", params.sigma2},
        {"realizations", params.realizations},
        {"seed", params.seed},
        {"points_per_edge", params.points_per_edge},
        {"edge_length", params.edge_length},
        {"rotation_deg", {120.0, 90.0, 45.0}},
        {"initial_rotor", rotor_json(params.initial_rotor.value_or(default_initial_rotor()))}}},
      {"results",
       {{"final_rotor", rotor_json(res.final_rotor)},
        {"ground_truth_rotor", rotor_json(res.truth)},
        {"rotor_distance_to_truth", res.rotor_distance},
        {"steady_state_emse_db", res.steady_emse_db},
        {"steady_state_mse_db", res.steady_mse_db},
        {"convergence_iteration", convergence_json(res.convergence)},
        {"baseline",
         {{"rotation", mat3_json(res.baseline_rotation)},
          {"angle_to_truth_deg", res.baseline_angle_to_truth_deg},
          {"angle_to_filter_deg", res.baseline_angle_to_filter_deg}}},
        {"op_counts_per_iteration", opcounts_json(ops.total())},
        {"wall_clock_seconds", res.wall_seconds}}},
  };

  write_outputs(params.out, res.ensemble, res.report);
  return res;
}

std::vector<CorrespondencePair> build_pairs(
    const PointCloud& source, const PointCloud& target,
    const std::vector<std::pair<std::int64_t, std::int64_t>>* correspondences) {
  std::vector<CorrespondencePair> pairs;
  if (correspondences) {
    pairs.reserve(correspondences->size());
    for (const auto& [si, ti] : *correspondences) {
      if (si >= static_cast<std::int64_t>(source.size()))
        throw std::invalid_argument("correspondence source index " + std::to_string(si) +
                                    " out of range (cloud has " + std::to_string(source.size()) + " points)");
      if (ti >= static_cast<std::int64_t>(target.size()))
        throw std::invalid_argument("correspondence target index " + std::to_string(ti) +
                                    " out of range (cloud has " + std::to_string(target.size()) + " points)");
      const Vec3 t = target.points[static_cast<std::size_t>(ti)];
      pairs.push_back({source.points[static_cast<std::size_t>(si)], t, t});
    }
  } else {
    if (source.size() != target.size())
      throw std::invalid_argument("clouds differ in size (" + std::to_string(source.size()) + " vs " +
                                  std::to_string(target.size()) + ") and no pairs file was given");
    pairs.reserve(source.size());
    for (std::size_t n = 0; n < source.size(); ++n) {
      const Vec3 t = target.points[n];
      pairs.push_back({source.points[n], t, t});
    }
  }
  if (pairs.empty()) throw std::invalid_argument("no correspondence pairs");
  return pairs;
}

RegisterResult run_register_experiment(const RegisterParams& params) {
  const auto start = Clock::now();

  const PointCloud source_raw = load_ply(params.source_path);
  const PointCloud target_raw = load_ply(params.target_path);

  RegisterResult res;
  res.source_centroid = centroid(source_raw);
  res.target_centroid = centroid(target_raw);
  const PointCloud source = center(source_raw);
  const PointCloud target = center(target_raw);

  std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> corr;
  if (params.pairs_path) corr = load_correspondences(*params.pairs_path);
  const std::vector<CorrespondencePair> pairs = build_pairs(source, target, corr ? &*corr : nullptr);

  // Cost window: the listed inlier pairs, or every pair when unknown.
  std::vector<CorrespondencePair> window = pairs;
  if (params.inliers_path) {
    const std::vector<std::int64_t> idx = parse_index_list(*params.inliers_path);
    if (idx.empty()) throw std::invalid_argument("inliers file lists no pair indices");
    window.clear();
    for (std::int64_t i : idx) {
      if (i >= static_cast<std::int64_t>(pairs.size()))
        throw std::invalid_argument("inlier pair index " + std::to_string(i) + " out of range");
      window.push_back(pairs[static_cast<std::size_t>(i)]);
    }
  }

  FilterConfig config;
  config.mu = params.mu;
  RunOptions opts;
  opts.initial_rotor = params.initial_rotor;
  opts.cost_window = window;
  const RunResult run = run_filter(pairs, config, opts);

  res.curve = run.curve;
  res.final_rotor = run.state.r;
  res.steady_mse_db = steady_state_db(res.curve.sq_err);
  res.convergence = convergence_iteration(res.curve.sq_err);

  res.baseline_rotation = kabsch_rotation(pairs, /*use_noisy=*/true);
  res.baseline_angle_to_filter_deg =
      rotation_angle_between(res.baseline_rotation, rotor_to_matrix(res.final_rotor)) * kRadToDeg;

  const LmsOpBreakdown ops = measured_lms_cost();
  res.wall_seconds = elapsed_seconds(start);

  res.report = {
      {"schema_version", kReportSchemaVersion},
      {"command", "register"},
      {"config",
       {{"source", params.source_path.string()},
        {"target", params.target_path.string()},
        {"pairs_file", params.pairs_path ? nlohmann::json(params.pairs_path->string()) : nlohmann::json(nullptr)},
        {"inliers_file",
         params.inliers_path ? nlohmann::json(params.inliers_path->string()) : nlohmann::json(nullptr)},
        {"mu", params.mu},
        {"initial_rotor", rotor_json(params.initial_rotor.value_or(default_initial_rotor()))}}},
      {"results",
       {{"pair_count", pairs.size()},
        {"cost_window_size", window.size()},
        {"auto_centering",
         {{"source_centroid", {res.source_centroid.x, res.source_centroid.y, res.source_centroid.z}},
          {"target_centroid", {res.target_centroid.x, res.target_centroid.y, res.target_centroid.z}}}},
        {"final_rotor", rotor_json(res.final_rotor)},
        {"steady_state_mse_db", res.steady_mse_db},
        {"convergence_iteration", convergence_json(res.convergence)},
        {"baseline",
         {{"rotation", mat3_json(res.baseline_rotation)},
          {"angle_to_filter_deg", res.baseline_angle_to_filter_deg}}},
        {"op_counts_per_iteration", opcounts_json(ops.total())},
        {"wall_clock_seconds", res.wall_seconds}}},
  };

  write_outputs(params.out, res.curve, res.report);
  return res;
}

GradientCheckResult run_gradient_check(const GradientCheckParams& params) {
  if (params.trials < 1) throw std::invalid_argument("gradient-check: trials must be >= 1");

  Rng rng(params.seed);
  GradientCheckResult res;

  const auto random_unit_rotor = [&rng] {
    Rotor r{rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
    return rotor_normalize(r);
  };
  const auto random_unit_bivector = [&rng] {
    Multivector b = Multivector::bivector(rng.gaussian(), rng.gaussian(), rng.gaussian());
    return b * (1.0 / magnitude(b));
  };
  const auto random_vec = [&rng] {
    return Vec3{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  };

  for (int trial = 0; trial < params.trials; ++trial) {
    const Rotor r = random_unit_rotor();
    const std::size_t K = 1 + static_cast<std::size_t>(rng.below(8));
    std::vector<CorrespondencePair> pairs(K);
    for (auto& p : pairs) {
      p.x = random_vec();
      p.y = random_vec();
      p.d = p.y;
    }

    const Multivector wedge_form = gradient_J(r, pairs);
    const Multivector product_form = gradient_J_product_form(r, pairs);
    const double denom_form = std::max(magnitude(wedge_form), 1e-3);
    res.max_form_rel_err =
        std::max(res.max_form_rel_err, magnitude(wedge_form - product_form) / denom_form);

    const Multivector b = random_unit_bivector();
    const double fd = directional_derivative_fd(r, pairs, b, params.h);
    const double analytic = directional_derivative_analytic(r, pairs, b);
    const double denom_fd = std::max(std::abs(analytic), 1e-3);
    res.max_fd_rel_err = std::max(res.max_fd_rel_err, std::abs(fd - analytic) / denom_fd);
  }

  res.pass = res.max_form_rel_err < 1e-11 && res.max_fd_rel_err < 1e-6;
  res.report = {
      {"schema_version", kReportSchemaVersion},
      {"command", "gradient-check"},
      {"config", {{"seed", params.seed}, {"trials", params.trials}, {"h", params.h}}},
      {"results",
       {{"max_gradient_form_rel_err", res.max_form_rel_err},
        {"max_finite_difference_rel_err", res.max_fd_rel_err},
        {"thresholds", {{"gradient_form", 1e-11}, {"finite_difference", 1e-6}}},
        {"pass", res.pass}}},
  };
  return res;
}

nlohmann::json opcount_report() {
  const LmsOpBreakdown b = measured_lms_cost();
  const OpCounts expected_total{54, 39};
  const bool matches = b.total() == expected_total && b.sandwich == OpCounts{28, 20} &&
                       b.wedge == OpCounts{6, 3} && b.scale_multiply == OpCounts{20, 12} &&
                       b.accumulate == OpCounts{0, 4};
  return {
      {"schema_version", kReportSchemaVersion},
      {"command", "opcount"},
      {"results",
       {{"stages",
         {{"rotate_source", opcounts_json(b.sandwich)},
          {"wedge", opcounts_json(b.wedge)},
          {"scale_and_multiply", opcounts_json(b.scale_multiply)},
          {"accumulate", opcounts_json(b.accumulate)}}},
        {"total", opcounts_json(b.total())},
        {"expected_total", opcounts_json(expected_total)},
        {"matches_expected", matches}}},
  };
}

}  // namespace galms
