#pragma once

#include <utility>

#include "galms/estimation.hpp"

namespace galms {

struct OpCounts {
  long rm = 0;  // real multiplications
  long ra = 0;  // real additions (incl. subtractions)

  constexpr OpCounts operator+(const OpCounts& o) const { return {rm + o.rm, ra + o.ra}; }
  constexpr bool operator==(const OpCounts&) const = default;
};

// Measured cost of one adaptive step, split the way the update factors:
//   sandwich        r x r~                      (two geometric products)
//   wedge           d ^ (r x r~)
//   scale_multiply  mu [..] and [mu ..] r
//   accumulate      r + [...]
// Normalization is excluded.
struct LmsOpBreakdown {
  OpCounts sandwich;
  OpCounts wedge;
  OpCounts scale_multiply;
  OpCounts accumulate;

  constexpr OpCounts total() const { return sandwich + wedge + scale_multiply + accumulate; }
};

namespace opcount {

// Scalar wrapper whose * and +/- bump thread-local counters. Negation and
// copies are free, matching how operation counts are conventionally quoted.
struct Counters {
  long rm = 0;
  long ra = 0;
};
inline thread_local Counters tl_counters;

inline void reset() { tl_counters = {}; }
inline OpCounts snapshot() { return {tl_counters.rm, tl_counters.ra}; }

struct Counted {
  double v = 0.0;
  constexpr Counted() = default;
  constexpr Counted(double x) : v(x) {}  // NOLINT: implicit by design

  friend Counted operator*(const Counted& a, const Counted& b) {
    ++tl_counters.rm;
    return {a.v * b.v};
  }
  friend Counted operator+(const Counted& a, const Counted& b) {
    ++tl_counters.ra;
    return {a.v + b.v};
  }
  friend Counted operator-(const Counted& a, const Counted& b) {
    ++tl_counters.ra;
    return {a.v - b.v};
  }
  constexpr Counted operator-() const { return {-v}; }
};

}  // namespace opcount

// lms_step re-run through the counting scalar. The returned state is
// bit-identical to lms_step (same template code, same operation order);
// the breakdown reports the exact multiply/add counts per stage.
std::pair<FilterState, LmsOpBreakdown> op_counted_lms_step(const FilterState& state,
                                                           const CorrespondencePair& pair,
                                                           const FilterConfig& config);

}  // namespace galms
