#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "galms/errors.hpp"
#include "galms/multivector.hpp"
#include "galms/rotor.hpp"

namespace galms {

struct Scenario;  // scenario.hpp

// One matched observation: source point x, clean target y, and the observed
// target d = y + v. With zero noise d == y bit-for-bit.
struct CorrespondencePair {
  Vec3 x;
  Vec3 y;
  Vec3 d;
};

struct FilterConfig {
  double mu = 0.1;
  int rank_m = 1;
  std::int64_t max_iterations = 0;  // <= 0: consume the whole stream
  bool normalize_each_step = true;
  double noise_variance = 0.0;
  std::uint64_t seed = 0;
};

struct FilterState {
  Rotor r;  // current estimate r_{i-1}
  std::int64_t iteration = 0;
};

// Initial rotor used by every experiment unless overridden:
// 0.5 + 0.5 g12 + 0.5 g23 + 0.5 g31 (unit).
constexpr Rotor default_initial_rotor() { return {0.5, 0.5, 0.5, 0.5}; }

// Per-iteration traces. `sq_err` is the squared error against the observed
// target d, `emse` against the clean target y (or their ensemble means);
// `cost` is only filled when a cost-evaluation window was configured.
// All linear quantities are in m^2; use to_db / to_db_clamped for views.
struct LearningCurve {
  std::vector<std::int64_t> iteration;
  std::vector<double> sq_err;
  std::vector<double> emse;
  std::vector<double> cost;

  std::size_t size() const { return iteration.size(); }
};

// 10 log10(x); exactly zero maps to -infinity (never NaN).
double to_db(double x);
// Report view: anything below 1e-30 m^2 clamps to -300 dB.
double to_db_clamped(double x);

// e = target - r x r~, with target = d when use_noisy, else y.
Vec3 error_vector(const Rotor& r, const CorrespondencePair& pair, bool use_noisy);

// J(r) = (1/K) sum |y_n - r x_n r~|^2.
double cost_J(const Rotor& r, std::span<const CorrespondencePair> pairs);

// Same cost through the expanded route (1/K) sum (|y|^2 + |x|^2 - 2<y r x r~>),
// evaluated with full multivector products. Used to cross-check cost_J.
double cost_J_expanded(const Rotor& r, std::span<const CorrespondencePair> pairs);

// Gradient of J with respect to the rotor, wedge form:
//   4 r~ sum y_n ^ (r x_n r~)      (divided by K when mean == true).
Multivector gradient_J(const Rotor& r, std::span<const CorrespondencePair> pairs, bool mean = true);

// Algebraically identical product form
//   -2 sum [ x_n r~ y_n  -  r~ (y_n r x_n) r~ ],
// kept as an independent evaluation route for validation.
Multivector gradient_J_product_form(const Rotor& r, std::span<const CorrespondencePair> pairs, bool mean = true);

// Central difference of J along the geodesic tau -> exp(tau B) r:
//   [J(exp(hB) r) - J(exp(-hB) r)] / (2h)
// for a unit bivector B and h in [1e-8, 1e-4].
double directional_derivative_fd(const Rotor& r, std::span<const CorrespondencePair> pairs,
                                 const Multivector& B, double h);

// Closed-form value of the same directional derivative,
//   (4/K) sum <B (y_n ^ (r x_n r~))>.
double directional_derivative_analytic(const Rotor& r, std::span<const CorrespondencePair> pairs,
                                       const Multivector& B);

// One adaptive step r_i = r_{i-1} + mu [d_i ^ (r_{i-1} x_i r~_{i-1})] r_{i-1},
// renormalized when configured. The observed target d drives the update.
FilterState lms_step(const FilterState& state, const CorrespondencePair& pair, const FilterConfig& config);

// Rank-m steepest-descent step over the first m pairs of the window:
//   r_i = r_{i-1} + mu (4/m) [ sum_{n<m} d_n ^ (r_{i-1} x_n r~_{i-1}) ] r_{i-1}.
// m == 1 with step mu/4 reproduces lms_step bit-for-bit.
FilterState sd_step(const FilterState& state, std::span<const CorrespondencePair> pairs, int m,
                    const FilterConfig& config);

namespace detail {
// Update increment of lms_step before it is added to the rotor; exposed so
// tests can assert exact fixed points.
Even<double> lms_update_term(const FilterState& state, const CorrespondencePair& pair, double mu);
}  // namespace detail

struct RunOptions {
  std::optional<Rotor> initial_rotor;               // default: default_initial_rotor()
  std::optional<Rotor> ground_truth;                // enables rotor_distance in the result
  std::span<const CorrespondencePair> cost_window;  // non-empty: record cost_J per iteration
};

struct RunResult {
  FilterState state;
  LearningCurve curve;
  std::optional<double> rotor_distance;  // min(|r-r*|, |r+r*|) when truth known
};

// Single pass, one pair per iteration, errors recorded against the state
// before each update. Deterministic for a fixed input stream.
RunResult run_filter(std::span<const CorrespondencePair> pairs, const FilterConfig& config,
                     const RunOptions& options = {});

// Ensemble-averaged curves over independent realizations of the scenario
// (fresh noise, outlier draw and presentation order per realization, from
// substream_seed(seed, k)). Realization order is fixed, so the result does
// not depend on scheduling.
LearningCurve emse_ensemble(const Scenario& scenario, const FilterConfig& config, int n_realizations,
                            std::uint64_t seed, const std::optional<Rotor>& initial_rotor = {});

// --- curve metrics ------------------------------------------------------

// Mean of the trailing `window` linear values, as clamped dB.
double steady_state_db(const std::vector<double>& values, std::size_t window = 100);

// First iteration whose trailing 50-sample mean is within 3 dB of the final
// 100-sample mean; nullopt when the curve never settles (or is too short).
std::optional<std::int64_t> convergence_iteration(const std::vector<double>& values);

}  // namespace galms
