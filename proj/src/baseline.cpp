#include "galms/baseline.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace galms {

namespace {

double off_diagonal_norm(const Mat3& a) {
  double s = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (r != c) s += a(r, c) * a(r, c);
  return std::sqrt(s);
}

// A <- G^T A with G the (p,q) plane rotation [[c, -s], [s, c]].
void apply_left(Mat3& a, int p, int q, double c, double s) {
  for (int j = 0; j < 3; ++j) {
    const double ap = a(p, j);
    const double aq = a(q, j);
    a(p, j) = c * ap + s * aq;
    a(q, j) = -s * ap + c * aq;
  }
}

// A <- A G.
void apply_right(Mat3& a, int p, int q, double c, double s) {
  for (int i = 0; i < 3; ++i) {
    const double ap = a(i, p);
    const double aq = a(i, q);
    a(i, p) = c * ap + s * aq;
    a(i, q) = -s * ap + c * aq;
  }
}

void swap_columns(Mat3& a, int p, int q) {
  for (int i = 0; i < 3; ++i) std::swap(a(i, p), a(i, q));
}

}  // namespace

Mat3 SvdFactors::reconstruct() const {
  Mat3 d;
  d(0, 0) = s[0];
  d(1, 1) = s[1];
  d(2, 2) = s[2];
  return u * d * v.transpose();
}

Mat3 cross_covariance(std::span<const CorrespondencePair> pairs, bool use_noisy) {
  if (pairs.empty()) throw std::invalid_argument("cross_covariance: empty pair list");
  Mat3 h;
  for (const auto& p : pairs) {
    const Vec3 t = use_noisy ? p.d : p.y;
    h(0, 0) += p.x.x * t.x;
    h(0, 1) += p.x.x * t.y;
    h(0, 2) += p.x.x * t.z;
    h(1, 0) += p.x.y * t.x;
    h(1, 1) += p.x.y * t.y;
    h(1, 2) += p.x.y * t.z;
    h(2, 0) += p.x.z * t.x;
    h(2, 1) += p.x.z * t.y;
    h(2, 2) += p.x.z * t.z;
  }
  return h;
}

SvdFactors svd3(const Mat3& m) {
  for (double e : m.m)
    if (!std::isfinite(e)) throw std::invalid_argument("svd3: non-finite entry");

  SvdFactors f;
  f.u = Mat3::identity();
  f.v = Mat3::identity();
  Mat3 a = m;

  const double scale = m.frobenius();
  const double tol = 1e-14 * scale;

  if (scale > 0.0) {
    bool converged = false;
    for (int sweep = 0; sweep < 60 && !converged; ++sweep) {
      if (off_diagonal_norm(a) <= tol) {
        converged = true;
        break;
      }
      for (const auto& [p, q] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        const double w = a(p, p), x = a(p, q), y = a(q, p), z = a(q, q);
        if (x == 0.0 && y == 0.0) continue;

        // Left rotation symmetrizing the 2x2 block, then a symmetric Jacobi
        // rotation on both sides to annihilate it.
        const double t1 = std::atan2(y - x, w + z);
        const double c1 = std::cos(t1), s1 = std::sin(t1);
        apply_left(a, p, q, c1, s1);
        apply_right(f.u, p, q, c1, s1);

        const double t2 = 0.5 * std::atan2(2.0 * a(p, q), a(p, p) - a(q, q));
        const double c2 = std::cos(t2), s2 = std::sin(t2);
        apply_left(a, p, q, c2, s2);
        apply_right(a, p, q, c2, s2);
        apply_right(f.u, p, q, c2, s2);
        apply_right(f.v, p, q, c2, s2);
      }
      converged = off_diagonal_norm(a) <= tol;
    }
    if (!converged)
      throw std::runtime_error("svd3: Jacobi iteration failed to converge within 60 sweeps");
  }

  for (int i = 0; i < 3; ++i) {
    f.s[static_cast<std::size_t>(i)] = a(i, i);
    if (f.s[static_cast<std::size_t>(i)] < 0.0) {
      f.s[static_cast<std::size_t>(i)] = -f.s[static_cast<std::size_t>(i)];
      for (int r = 0; r < 3; ++r) f.u(r, i) = -f.u(r, i);
    }
  }
  // Selection sort, descending; column permutations applied to U and V.
  for (int i = 0; i < 2; ++i) {
    int big = i;
    for (int j = i + 1; j < 3; ++j)
      if (f.s[static_cast<std::size_t>(j)] > f.s[static_cast<std::size_t>(big)]) big = j;
    if (big != i) {
      std::swap(f.s[static_cast<std::size_t>(i)], f.s[static_cast<std::size_t>(big)]);
      swap_columns(f.u, i, big);
      swap_columns(f.v, i, big);
    }
  }
  return f;
}

Mat3 kabsch_rotation(std::span<const CorrespondencePair> pairs, bool use_noisy) {
  const Mat3 h = cross_covariance(pairs, use_noisy);
  const SvdFactors f = svd3(h);

  if (!(f.s[1] > 1e-12 * f.s[0]) || f.s[0] == 0.0)
    throw std::invalid_argument(
        "kabsch_rotation: degenerate point configuration (cross-covariance rank < 2)");

  const double d = (f.v * f.u.transpose()).det();
  Mat3 corr = Mat3::identity();
  corr(2, 2) = d < 0.0 ? -1.0 : 1.0;
  return f.v * corr * f.u.transpose();
}

}  // namespace galms
