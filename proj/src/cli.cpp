#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "galms/errors.hpp"
#include "galms/experiments.hpp"

namespace galms {

namespace {

std::optional<Rotor> parse_initial_rotor(const std::vector<double>& coeffs) {
  if (coeffs.empty()) return std::nullopt;
  if (coeffs.size() != 4)
    throw std::invalid_argument("--init expects 4 coefficients: s,b12,b23,b31");
  return rotor_normalize({coeffs[0], coeffs[1], coeffs[2], coeffs[3]});
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"GA-LMS rotor estimation: adaptive rotation alignment of corresponded 3D point clouds"};
  app.require_subcommand(1);

  // cube
  auto* cube = app.add_subcommand("cube", "Ensemble EMSE benchmark on a rotated cube lattice");
  CubeParams cube_params;
  std::vector<double> cube_init;
  cube->add_option("--mu", cube_params.mu, "Step size")->capture_default_str();
  cube->add_option("--sigma2", cube_params.sigma2, "Target noise variance (m^2)")->capture_default_str();
  cube->add_option("--realizations", cube_params.realizations, "Ensemble size")->capture_default_str();
  cube->add_option("--seed", cube_params.seed, "Base RNG seed")->capture_default_str();
  cube->add_option("--out", cube_params.out, "Output prefix for <out>.csv and <out>.json");
  cube->add_option("--points-per-edge", cube_params.points_per_edge, "Lattice resolution")->capture_default_str();
  cube->add_option("--edge", cube_params.edge_length, "Cube edge length (m)")->capture_default_str();
  cube->add_option("--init", cube_init, "Initial rotor s,b12,b23,b31 (normalized before use)")->expected(4);

  // register
  auto* reg = app.add_subcommand("register", "Single-pass registration of two ASCII PLY clouds");
  RegisterParams reg_params;
  std::vector<double> reg_init;
  std::string reg_source, reg_target, reg_pairs, reg_inliers;
  reg->add_option("--source", reg_source, "Source cloud (ASCII PLY)")->required();
  reg->add_option("--target", reg_target, "Target cloud (ASCII PLY)")->required();
  reg->add_option("--pairs", reg_pairs, "Correspondence file (source_index target_index per line)");
  reg->add_option("--inliers", reg_inliers, "Pair indices for the cost-curve window");
  reg->add_option("--mu", reg_params.mu, "Step size")->capture_default_str();
  reg->add_option("--out", reg_params.out, "Output prefix for <out>.csv and <out>.json");
  reg->add_option("--init", reg_init, "Initial rotor s,b12,b23,b31 (normalized before use)")->expected(4);

  // gradient-check
  auto* grad = app.add_subcommand("gradient-check", "Validate the cost gradient against finite differences");
  GradientCheckParams grad_params;
  grad->add_option("--seed", grad_params.seed, "RNG seed")->capture_default_str();
  grad->add_option("--trials", grad_params.trials, "Random instances")->capture_default_str();

  // opcount
  auto* ops = app.add_subcommand("opcount", "Per-iteration multiply/add cost of the update rule");
  bool ops_json = false;
  ops->add_flag("--json", ops_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (cube->parsed()) {
    cube_params.initial_rotor = parse_initial_rotor(cube_init);
    const CubeResult res = run_cube_experiment(cube_params);
    std::cout << res.report.dump(2) << "\n";
    return 0;
  }

  if (reg->parsed()) {
    reg_params.source_path = reg_source;
    reg_params.target_path = reg_target;
    if (!reg_pairs.empty()) reg_params.pairs_path = reg_pairs;
    if (!reg_inliers.empty()) reg_params.inliers_path = reg_inliers;
    reg_params.initial_rotor = parse_initial_rotor(reg_init);
    const RegisterResult res = run_register_experiment(reg_params);
    std::cout << res.report.dump(2) << "\n";
    return 0;
  }

  if (grad->parsed()) {
    const GradientCheckResult res = run_gradient_check(grad_params);
    std::cout << res.report.dump(2) << "\n";
    return res.pass ? 0 : 1;
  }

  if (ops->parsed()) {
    const nlohmann::json report = opcount_report();
    const auto& r = report["results"];
    if (ops_json) {
      std::cout << report.dump(2) << "\n";
    } else {
      const auto line = [](const char* name, const nlohmann::json& c) {
        std::cout << "  " << name << ": " << c["real_multiplications"].get<long>() << " RM, "
                  << c["real_additions"].get<long>() << " RA\n";
      };
      std::cout << "per-iteration cost of the update rule:\n";
      line("rotate source      r x r~ ", r["stages"]["rotate_source"]);
      line("wedge              d ^ (.) ", r["stages"]["wedge"]);
      line("scale and multiply mu[.]r ", r["stages"]["scale_and_multiply"]);
      line("accumulate         r + [.]", r["stages"]["accumulate"]);
      line("total                     ", r["total"]);
    }
    return r["matches_expected"].get<bool>() ? 0 : 1;
  }

  return 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  try {
    return dispatch(argc, argv);
  } catch (const divergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace galms
