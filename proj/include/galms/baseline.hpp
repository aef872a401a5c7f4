#pragma once

#include <array>
#include <span>

#include "galms/estimation.hpp"
#include "galms/mat3.hpp"

namespace galms {

struct SvdFactors {
  Mat3 u;
  std::array<double, 3> s{};  // singular values, descending, >= 0
  Mat3 v;

  Mat3 reconstruct() const;  // U diag(S) V^T
};

// H = sum_n x_n t_n^T with t = d (use_noisy) or y.
Mat3 cross_covariance(std::span<const CorrespondencePair> pairs, bool use_noisy);

// Two-sided (Kogbetliantz) Jacobi SVD for 3x3 matrices. Sweeps until the
// off-diagonal mass drops below 1e-14 * |M|_F; more than 60 sweeps is
// reported as an error rather than returning a half-converged answer.
SvdFactors svd3(const Mat3& m);

// Closed-form rotation minimizing (1/K) sum |t_n - R x_n|^2 over rotations:
// R = V diag(1, 1, det(V U^T)) U^T from the SVD of the cross-covariance.
// Point sets whose cross-covariance has rank < 2 leave the rotation
// ambiguous and are rejected.
Mat3 kabsch_rotation(std::span<const CorrespondencePair> pairs, bool use_noisy);

}  // namespace galms
