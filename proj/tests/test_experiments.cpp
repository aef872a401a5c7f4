#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "galms/errors.hpp"
#include "galms/experiments.hpp"
#include "galms/ply_io.hpp"
#include "galms/random.hpp"
#include "oracles.hpp"

using namespace galms;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("galms_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int cli(const std::vector<const char*>& args) {
  std::vector<const char*> argv{"galms"};
  argv.insert(argv.end(), args.begin(), args.end());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("cube experiment: report schema and byte-identical reruns") {
  TempDir tmp;
  CubeParams params;
  params.mu = 0.3;
  params.sigma2 = 1e-5;
  params.realizations = 3;
  params.seed = 11;
  params.points_per_edge = 5;  // 125 points, fast
  params.out = (tmp.path / "run_a").string();

  const CubeResult a = run_cube_experiment(params);
  params.out = (tmp.path / "run_b").string();
  const CubeResult b = run_cube_experiment(params);

  CHECK(slurp(tmp.path / "run_a.csv") == slurp(tmp.path / "run_b.csv"));
  CHECK(a.ensemble.emse == b.ensemble.emse);

  const nlohmann::json& r = a.report;
  CHECK(r["schema_version"] == kReportSchemaVersion);
  CHECK(r["command"] == "cube");
  CHECK(r["config"]["mu"] == 0.3);
  CHECK(r["config"]["realizations"] == 3);
  CHECK(r["results"]["final_rotor"].size() == 8);
  CHECK(r["results"].contains("steady_state_emse_db"));
  CHECK(r["results"].contains("convergence_iteration"));
  CHECK(r["results"]["op_counts_per_iteration"]["real_multiplications"] == 54);
  CHECK(r["results"]["op_counts_per_iteration"]["real_additions"] == 39);
  CHECK(r["results"]["baseline"]["rotation"].size() == 3);
  CHECK(a.rotor_distance < 1e-2);

  CubeParams invalid;
  invalid.realizations = 0;
  CHECK_THROWS_AS(run_cube_experiment(invalid), std::invalid_argument);
}

TEST_CASE("register experiment: synthetic clouds round-trip through the file surfaces") {
  TempDir tmp;
  Rng rng(42);

  // source cloud and its rotated target, written as PLY
  PointCloud source;
  source.name = "src";
  for (int i = 0; i < 80; ++i) source.points.push_back(oracles::random_vec(rng, 0.5));
  source = center(source);
  const Rotor truth = rotor_from_axis_angle({0, 0, 1}, 0.7853981633974483);
  PointCloud target;
  target.name = "dst";
  for (const Vec3& x : source.points) target.points.push_back(rotor_apply(truth, x));

  const fs::path src_path = tmp.path / "source.ply";
  const fs::path dst_path = tmp.path / "target.ply";
  write_ply_ascii(source, src_path);
  write_ply_ascii(target, dst_path);

  RegisterParams params;
  params.source_path = src_path;
  params.target_path = dst_path;
  params.mu = 2.0;
  params.out = (tmp.path / "reg").string();

  const RegisterResult res = run_register_experiment(params);
  CHECK(rotor_distance(res.final_rotor, truth) < 1e-3);
  CHECK(res.baseline_angle_to_filter_deg < 0.1);
  CHECK(res.curve.size() == 80);
  CHECK(res.curve.cost.size() == 80);  // default window: all pairs
  CHECK(res.report["results"]["pair_count"] == 80);

  // second run, byte-identical CSV
  RegisterParams again = params;
  again.out = (tmp.path / "reg2").string();
  run_register_experiment(again);
  CHECK(slurp(tmp.path / "reg.csv") == slurp(tmp.path / "reg2.csv"));

  // explicit pairs file with an inlier window
  std::ofstream pairs_file(tmp.path / "pairs.txt");
  std::ofstream inliers_file(tmp.path / "inliers.txt");
  pairs_file << "# si ti\n";
  for (int i = 0; i < 80; ++i) pairs_file << i << " " << i << "\n";
  for (int i = 0; i < 40; ++i) inliers_file << i << "\n";
  pairs_file.close();
  inliers_file.close();

  RegisterParams with_files = params;
  with_files.pairs_path = tmp.path / "pairs.txt";
  with_files.inliers_path = tmp.path / "inliers.txt";
  with_files.out.clear();
  const RegisterResult res2 = run_register_experiment(with_files);
  CHECK(res2.curve.cost.size() == 80);
  CHECK(res2.report["results"]["cost_window_size"] == 40);
  CHECK(rotor_distance(res2.final_rotor, res.final_rotor) < 1e-12);
}

TEST_CASE("register experiment: perfectly aligned inputs give a flat zero curve") {
  TempDir tmp;
  Rng rng(5);
  PointCloud cloud;
  for (int i = 0; i < 50; ++i) cloud.points.push_back(oracles::random_vec(rng, 0.3));
  cloud = center(cloud);
  write_ply_ascii(cloud, tmp.path / "same.ply");

  RegisterParams params;
  params.source_path = tmp.path / "same.ply";
  params.target_path = tmp.path / "same.ply";
  params.mu = 1.0;
  params.initial_rotor = Rotor{};  // identity start on identical clouds
  const RegisterResult res = run_register_experiment(params);

  for (double v : res.curve.sq_err) CHECK(v == 0.0);
  CHECK(rotor_distance(res.final_rotor, Rotor{}) == 0.0);
  CHECK(res.baseline_angle_to_filter_deg < 1e-6);
}

TEST_CASE("build_pairs validation") {
  PointCloud a, b;
  a.points = {{0, 0, 0}, {1, 0, 0}};
  b.points = {{0, 0, 0}};
  CHECK_THROWS_AS(build_pairs(a, b, nullptr), std::invalid_argument);

  const std::vector<std::pair<std::int64_t, std::int64_t>> bad{{0, 5}};
  CHECK_THROWS_AS(build_pairs(a, b, &bad), std::invalid_argument);

  const std::vector<std::pair<std::int64_t, std::int64_t>> ok{{1, 0}};
  const auto pairs = build_pairs(a, b, &ok);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].x == Vec3{1, 0, 0});
  CHECK(pairs[0].y == pairs[0].d);
}

TEST_CASE("gradient check: clean pass with small errors") {
  GradientCheckParams params;
  params.seed = 2024;
  params.trials = 200;
  const GradientCheckResult res = run_gradient_check(params);
  CHECK(res.pass);
  CHECK(res.max_form_rel_err < 1e-11);
  CHECK(res.max_fd_rel_err < 1e-6);
  CHECK(res.report["results"]["pass"] == true);
}

TEST_CASE("gradient check canary: a corrupted product table would be caught") {
  // Emulate a negated Cayley entry by flipping the g12 slot of the wedge
  // sum before forming the analytic directional derivative; the finite
  // difference must disagree loudly.
  const std::vector<CorrespondencePair> single{{{1, 0, 0}, {0, 1, 0}, {0, 1, 0}}};
  const Rotor r;  // identity
  const double fd = directional_derivative_fd(r, single, blades::g12, 1e-6);

  Multivector wedge_sum;
  const Multivector rm = r.as_multivector();
  for (const auto& p : single)
    wedge_sum += to_multivector(p.y) ^ (rm * to_multivector(p.x) * reverse(rm));
  wedge_sum.c[4] = -wedge_sum.c[4];
  const double corrupted = 4.0 * scalar_product(blades::g12, wedge_sum) / 1.0;

  const double rel = std::abs(fd - corrupted) / std::max(std::abs(corrupted), 1e-3);
  CHECK(rel > 1e-6);    // the check trips
  CHECK(rel > 1.0);     // and not marginally: sign flip doubles the value
}

TEST_CASE("opcount report") {
  const nlohmann::json r = opcount_report();
  CHECK(r["results"]["total"]["real_multiplications"] == 54);
  CHECK(r["results"]["total"]["real_additions"] == 39);
  CHECK(r["results"]["stages"]["rotate_source"]["real_multiplications"] == 28);
  CHECK(r["results"]["stages"]["rotate_source"]["real_additions"] == 20);
  CHECK(r["results"]["stages"]["wedge"]["real_multiplications"] == 6);
  CHECK(r["results"]["stages"]["wedge"]["real_additions"] == 3);
  CHECK(r["results"]["stages"]["scale_and_multiply"]["real_multiplications"] == 20);
  CHECK(r["results"]["stages"]["scale_and_multiply"]["real_additions"] == 12);
  CHECK(r["results"]["stages"]["accumulate"]["real_multiplications"] == 0);
  CHECK(r["results"]["stages"]["accumulate"]["real_additions"] == 4);
  CHECK(r["results"]["matches_expected"] == true);

  // determinism of the report content
  CHECK(opcount_report() == r);
}

TEST_CASE("cli_main: exit codes") {
  // validation failures
  CHECK(cli({}) == 1);
  CHECK(cli({"no-such-command"}) == 1);
  CHECK(cli({"register", "--source", "/nonexistent/a.ply", "--target", "/nonexistent/b.ply"}) == 3);

  // quick successes
  CHECK(cli({"opcount"}) == 0);
  CHECK(cli({"opcount", "--json"}) == 0);
  CHECK(cli({"gradient-check", "--trials", "25", "--seed", "3"}) == 0);

  // runtime divergence
  TempDir tmp;
  const std::string out = (tmp.path / "diverge").string();
  CHECK(cli({"cube", "--mu", "1e12", "--realizations", "1", "--points-per-edge", "3", "--seed", "1",
             "--out", out.c_str()}) == 2);
}

TEST_CASE("cli_main: cube writes curve and report files") {
  TempDir tmp;
  const std::string out = (tmp.path / "cube").string();
  CHECK(cli({"cube", "--mu", "0.3", "--sigma2", "0", "--realizations", "2", "--points-per-edge", "4",
             "--seed", "9", "--out", out.c_str()}) == 0);
  CHECK(fs::exists(tmp.path / "cube.csv"));
  CHECK(fs::exists(tmp.path / "cube.json"));
  const std::string csv = slurp(tmp.path / "cube.csv");
  CHECK(csv.rfind("i,sq_err,sq_err_db,cost,cost_db,emse,emse_db\n", 0) == 0);
  const auto report = nlohmann::json::parse(slurp(tmp.path / "cube.json"));
  CHECK(report["command"] == "cube");
}
