#include "galms/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "galms/opcount.hpp"
#include "galms/random.hpp"
#include "galms/scenario.hpp"

namespace galms {

namespace {

constexpr double kDivergenceNorm = 1e6;

void require_unit(const Rotor& r, const char* who) {
  if (!is_unit(r)) throw std::invalid_argument(std::string(who) + ": rotor is not unit within 1e-9");
}

void require_nonempty(std::span<const CorrespondencePair> pairs, const char* who) {
  if (pairs.empty()) throw std::invalid_argument(std::string(who) + ": empty pair list");
}

Vec3 sandwich_vec(const Rotor& r, const Vec3& v) {
  const auto u = detail::sandwich(r.as_even(), v.x, v.y, v.z);
  return {u.x, u.y, u.z};
}

// Shared update tail: divergence checks, then optional renormalization.
// A dead band around |r| = 1 skips the division when the rotor is already
// unit to machine precision, so exact fixed points stay bitwise fixed.
FilterState finish_step(const detail::Even<double>& updated, std::int64_t iteration, bool normalize) {
  const Rotor r{updated.s, updated.b12, updated.b23, updated.b31};
  const double ns = r.norm_sq();
  if (!std::isfinite(ns) || ns > kDivergenceNorm * kDivergenceNorm)
    throw divergence_error("filter diverged: rotor norm is " + std::to_string(std::sqrt(ns)), iteration);
  if (ns <= kRotorDegenerateNorm * kRotorDegenerateNorm)
    throw divergence_error("filter collapsed: rotor norm below 1e-12", iteration);
  if (!normalize || std::abs(ns - 1.0) <= 1e-14) return {r, iteration + 1};
  const double n = std::sqrt(ns);
  return {Rotor{r.s / n, r.b12 / n, r.b23 / n, r.b31 / n}, iteration + 1};
}

}  // namespace

double to_db(double x) {
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(x);
}

double to_db_clamped(double x) {
  if (x < 1e-30) return -300.0;
  return 10.0 * std::log10(x);
}

Vec3 error_vector(const Rotor& r, const CorrespondencePair& pair, bool use_noisy) {
  require_unit(r, "error_vector");
  const Vec3 target = use_noisy ? pair.d : pair.y;
  return target - sandwich_vec(r, pair.x);
}

double cost_J(const Rotor& r, std::span<const CorrespondencePair> pairs) {
  require_nonempty(pairs, "cost_J");
  require_unit(r, "cost_J");
  double sum = 0.0;
  for (const auto& p : pairs) sum += (p.y - sandwich_vec(r, p.x)).norm_sq();
  return sum / static_cast<double>(pairs.size());
}

double cost_J_expanded(const Rotor& r, std::span<const CorrespondencePair> pairs) {
  require_nonempty(pairs, "cost_J_expanded");
  require_unit(r, "cost_J_expanded");
  const Multivector rm = r.as_multivector();
  const Multivector rt = reverse(rm);
  double sum = 0.0;
  for (const auto& p : pairs) {
    const Multivector x = to_multivector(p.x);
    const Multivector y = to_multivector(p.y);
    sum += p.y.norm_sq() + p.x.norm_sq() - 2.0 * (y * rm * x * rt).c[0];
  }
  return sum / static_cast<double>(pairs.size());
}

Multivector gradient_J(const Rotor& r, std::span<const CorrespondencePair> pairs, bool mean) {
  require_nonempty(pairs, "gradient_J");
  require_unit(r, "gradient_J");
  const Multivector rm = r.as_multivector();
  const Multivector rt = reverse(rm);
  Multivector wedge_sum;
  for (const auto& p : pairs) {
    const Multivector u = rm * to_multivector(p.x) * rt;
    wedge_sum += to_multivector(p.y) ^ u;
  }
  Multivector g = (rt * wedge_sum) * 4.0;
  if (mean) g = g * (1.0 / static_cast<double>(pairs.size()));
  return g;
}

Multivector gradient_J_product_form(const Rotor& r, std::span<const CorrespondencePair> pairs, bool mean) {
  require_nonempty(pairs, "gradient_J_product_form");
  require_unit(r, "gradient_J_product_form");
  const Multivector rm = r.as_multivector();
  const Multivector rt = reverse(rm);
  Multivector sum;
  for (const auto& p : pairs) {
    const Multivector x = to_multivector(p.x);
    const Multivector y = to_multivector(p.y);
    sum += (x * rt * y) - (rt * (y * rm * x) * rt);
  }
  Multivector g = sum * -2.0;
  if (mean) g = g * (1.0 / static_cast<double>(pairs.size()));
  return g;
}

double directional_derivative_fd(const Rotor& r, std::span<const CorrespondencePair> pairs,
                                 const Multivector& B, double h) {
  require_nonempty(pairs, "directional_derivative_fd");
  require_unit(r, "directional_derivative_fd");
  if (!(h >= 1e-8 && h <= 1e-4))
    throw std::invalid_argument("directional_derivative_fd: h must be in [1e-8, 1e-4]");
  const double non_bivector = magnitude(B - grade(B, 2));
  if (non_bivector > 1e-12 * (1.0 + magnitude(B)))
    throw std::invalid_argument("directional_derivative_fd: direction is not a pure bivector");
  if (std::abs(magnitude(B) - 1.0) > kUnitRotorTol)
    throw std::invalid_argument("directional_derivative_fd: direction must be a unit bivector");

  const Rotor plus = exp_bivector(B * h) * r;
  const Rotor minus = exp_bivector(B * -h) * r;
  return (cost_J(plus, pairs) - cost_J(minus, pairs)) / (2.0 * h);
}

double directional_derivative_analytic(const Rotor& r, std::span<const CorrespondencePair> pairs,
                                       const Multivector& B) {
  require_nonempty(pairs, "directional_derivative_analytic");
  require_unit(r, "directional_derivative_analytic");
  const Multivector rm = r.as_multivector();
  const Multivector rt = reverse(rm);
  Multivector wedge_sum;
  for (const auto& p : pairs) {
    const Multivector u = rm * to_multivector(p.x) * rt;
    wedge_sum += to_multivector(p.y) ^ u;
  }
  return 4.0 * scalar_product(B, wedge_sum) / static_cast<double>(pairs.size());
}

namespace detail {

// The whole update is written once, templated on the scalar type; the
// double instantiation is the filter, the Counted instantiation is the
// op-count report. Keeping one body guarantees the two agree bit-for-bit.
template <class T>
Even<T> lms_update_term_t(const Even<T>& r, const T& x1, const T& x2, const T& x3, const T& d1,
                          const T& d2, const T& d3, const T& mu) {
  const Odd<T> u = sandwich(r, x1, x2, x3);
  const Even<T> w = wedge_vectors(d1, d2, d3, u.x, u.y, u.z);
  const Even<T> scaled = scale_even(mu, w);
  return even_times_even(scaled, r);
}

Even<double> lms_update_term(const FilterState& state, const CorrespondencePair& pair, double mu) {
  return lms_update_term_t<double>(state.r.as_even(), pair.x.x, pair.x.y, pair.x.z, pair.d.x,
                                   pair.d.y, pair.d.z, mu);
}

}  // namespace detail

FilterState lms_step(const FilterState& state, const CorrespondencePair& pair, const FilterConfig& config) {
  if (!(config.mu > 0.0) || !std::isfinite(config.mu))
    throw std::invalid_argument("lms_step: mu must be finite and positive");
  const detail::Even<double> r = state.r.as_even();
  const detail::Even<double> term = detail::lms_update_term(state, pair, config.mu);
  return finish_step(detail::add_even(r, term), state.iteration, config.normalize_each_step);
}

FilterState sd_step(const FilterState& state, std::span<const CorrespondencePair> pairs, int m,
                    const FilterConfig& config) {
  require_nonempty(pairs, "sd_step");
  if (m < 1 || static_cast<std::size_t>(m) > pairs.size())
    throw std::invalid_argument("sd_step: rank m out of range [1, K]");
  if (!(config.mu > 0.0) || !std::isfinite(config.mu))
    throw std::invalid_argument("sd_step: mu must be finite and positive");

  const detail::Even<double> r = state.r.as_even();
  detail::Even<double> wedge_sum{};
  for (int n = 0; n < m; ++n) {
    const auto& p = pairs[static_cast<std::size_t>(n)];
    const auto u = detail::sandwich(r, p.x.x, p.x.y, p.x.z);
    const auto w = detail::wedge_vectors(p.d.x, p.d.y, p.d.z, u.x, u.y, u.z);
    wedge_sum = n == 0 ? w : detail::add_even(wedge_sum, w);
  }
  const double scale = config.mu * (4.0 / static_cast<double>(m));
  const auto term = detail::even_times_even(detail::scale_even(scale, wedge_sum), r);
  return finish_step(detail::add_even(r, term), state.iteration, config.normalize_each_step);
}

std::pair<FilterState, LmsOpBreakdown> op_counted_lms_step(const FilterState& state,
                                                           const CorrespondencePair& pair,
                                                           const FilterConfig& config) {
  using opcount::Counted;
  if (!(config.mu > 0.0) || !std::isfinite(config.mu))
    throw std::invalid_argument("op_counted_lms_step: mu must be finite and positive");

  const detail::Even<Counted> r{state.r.s, state.r.b12, state.r.b23, state.r.b31};
  LmsOpBreakdown breakdown;

  opcount::reset();
  const detail::Odd<Counted> u = detail::sandwich(r, Counted(pair.x.x), Counted(pair.x.y), Counted(pair.x.z));
  breakdown.sandwich = opcount::snapshot();

  opcount::reset();
  const detail::Even<Counted> w =
      detail::wedge_vectors(Counted(pair.d.x), Counted(pair.d.y), Counted(pair.d.z), u.x, u.y, u.z);
  breakdown.wedge = opcount::snapshot();

  opcount::reset();
  const detail::Even<Counted> term = detail::even_times_even(detail::scale_even(Counted(config.mu), w), r);
  breakdown.scale_multiply = opcount::snapshot();

  opcount::reset();
  const detail::Even<Counted> updated = detail::add_even(r, term);
  breakdown.accumulate = opcount::snapshot();

  const detail::Even<double> as_double{updated.s.v, updated.b12.v, updated.b23.v, updated.b31.v};
  return {finish_step(as_double, state.iteration, config.normalize_each_step), breakdown};
}

RunResult run_filter(std::span<const CorrespondencePair> pairs, const FilterConfig& config,
                     const RunOptions& options) {
  require_nonempty(pairs, "run_filter");

  const Rotor r0 = options.initial_rotor.value_or(default_initial_rotor());
  require_unit(r0, "run_filter (initial rotor)");

  const std::int64_t n = static_cast<std::int64_t>(pairs.size());
  const std::int64_t limit = config.max_iterations > 0 ? std::min(config.max_iterations, n) : n;

  RunResult result;
  result.state = FilterState{r0, 0};
  result.curve.iteration.reserve(static_cast<std::size_t>(limit));
  result.curve.sq_err.reserve(static_cast<std::size_t>(limit));
  result.curve.emse.reserve(static_cast<std::size_t>(limit));
  const bool with_cost = !options.cost_window.empty();
  if (with_cost) result.curve.cost.reserve(static_cast<std::size_t>(limit));

  for (std::int64_t t = 0; t < limit; ++t) {
    const auto& pair = pairs[static_cast<std::size_t>(t)];
    const Vec3 rotated = sandwich_vec(result.state.r, pair.x);
    result.curve.iteration.push_back(t);
    result.curve.sq_err.push_back((pair.d - rotated).norm_sq());
    result.curve.emse.push_back((pair.y - rotated).norm_sq());
    if (with_cost) result.curve.cost.push_back(cost_J(result.state.r, options.cost_window));
    result.state = lms_step(result.state, pair, config);
  }

  if (options.ground_truth)
    result.rotor_distance = rotor_distance(result.state.r, *options.ground_truth);
  return result;
}

LearningCurve emse_ensemble(const Scenario& scenario, const FilterConfig& config, int n_realizations,
                            std::uint64_t seed, const std::optional<Rotor>& initial_rotor) {
  if (n_realizations < 1) throw std::invalid_argument("emse_ensemble: n_realizations must be >= 1");

  RunOptions opts;
  opts.initial_rotor = initial_rotor;
  LearningCurve ensemble;
  for (int k = 0; k < n_realizations; ++k) {
    const PairStream stream = scenario_stream(scenario, substream_seed(seed, static_cast<std::uint64_t>(k)));
    const RunResult res = run_filter(stream.pairs, config, opts);
    if (k == 0) {
      ensemble.iteration = res.curve.iteration;
      ensemble.sq_err = res.curve.sq_err;
      ensemble.emse = res.curve.emse;
    } else {
      for (std::size_t i = 0; i < ensemble.size(); ++i) {
        ensemble.sq_err[i] += res.curve.sq_err[i];
        ensemble.emse[i] += res.curve.emse[i];
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(n_realizations);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    ensemble.sq_err[i] *= inv;
    ensemble.emse[i] *= inv;
  }
  return ensemble;
}

double steady_state_db(const std::vector<double>& values, std::size_t window) {
  if (values.empty()) throw std::invalid_argument("steady_state_db: empty curve");
  const std::size_t w = std::min(window, values.size());
  double sum = 0.0;
  for (std::size_t i = values.size() - w; i < values.size(); ++i) sum += values[i];
  return to_db_clamped(sum / static_cast<double>(w));
}

std::optional<std::int64_t> convergence_iteration(const std::vector<double>& values) {
  constexpr std::size_t kTrail = 50;
  if (values.size() < kTrail) return std::nullopt;
  const double target = steady_state_db(values, 100);

  double window_sum = 0.0;
  for (std::size_t i = 0; i + 1 < kTrail; ++i) window_sum += values[i];
  for (std::size_t i = kTrail - 1; i < values.size(); ++i) {
    window_sum += values[i];
    const double trail = to_db_clamped(window_sum / static_cast<double>(kTrail));
    if (std::abs(trail - target) <= 3.0) return static_cast<std::int64_t>(i);
    window_sum -= values[i - (kTrail - 1)];
  }
  return std::nullopt;
}

}  // namespace galms
