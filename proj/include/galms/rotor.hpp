#pragma once

#include <cmath>
#include <stdexcept>

#include "galms/multivector.hpp"

namespace galms {

namespace detail {

// Even/odd split of G(R^3). The rotor sandwich r x r~ and the filter update
// only ever touch these two 4-coefficient halves, so the hot path is written
// against them instead of full 8-slot multivectors. Templated on the scalar
// type: the op-count instrumentation re-runs the identical expressions with
// a counting scalar (see opcount.hpp).
template <class T>
struct Even {
  T s{}, b12{}, b23{}, b31{};
};
template <class T>
struct Odd {
  T x{}, y{}, z{}, tri{};
};

// r v (even times grade-1): 12 multiplications, 8 additions.
template <class T>
constexpr Odd<T> rotor_times_vector(const Even<T>& r, const T& x, const T& y, const T& z) {
  return {
      r.s * x + r.b12 * y - r.b31 * z,
      r.s * y - r.b12 * x + r.b23 * z,
      r.s * z - r.b23 * y + r.b31 * x,
      r.b12 * z + r.b23 * x + r.b31 * y,
  };
}

// q r~ (odd times reversed even): 16 multiplications, 12 additions. Term
// order matches the full product table row by row, so this path and the
// general Multivector product agree bit-for-bit.
template <class T>
constexpr Odd<T> odd_times_reversed_rotor(const Odd<T>& q, const Even<T>& r) {
  const T b0 = r.s;
  const T b4 = -r.b12;
  const T b5 = -r.b23;
  const T b6 = -r.b31;
  return {
      q.x * b0 - q.y * b4 + q.z * b6 - q.tri * b5,
      q.x * b4 + q.y * b0 - q.z * b5 - q.tri * b6,
      -q.x * b6 + q.y * b5 + q.z * b0 - q.tri * b4,
      q.x * b5 + q.y * b6 + q.z * b4 + q.tri * b0,
  };
}

// d ^ u for grade-1 inputs: 6 multiplications, 3 subtractions. The scalar
// slot of the bracket stays materialized (and later scaled) so the update
// arithmetic matches the even-multivector layout exactly.
template <class T>
constexpr Even<T> wedge_vectors(const T& d1, const T& d2, const T& d3, const T& u1, const T& u2, const T& u3) {
  return {
      T(0),
      d1 * u2 - d2 * u1,
      d2 * u3 - d3 * u2,
      d3 * u1 - d1 * u3,
  };
}

// 4 multiplications.
template <class T>
constexpr Even<T> scale_even(const T& s, const Even<T>& w) {
  return {s * w.s, s * w.b12, s * w.b23, s * w.b31};
}

// Even times even: 16 multiplications, 12 additions.
template <class T>
constexpr Even<T> even_times_even(const Even<T>& a, const Even<T>& b) {
  return {
      a.s * b.s - a.b12 * b.b12 - a.b23 * b.b23 - a.b31 * b.b31,
      a.s * b.b12 + a.b12 * b.s - a.b23 * b.b31 + a.b31 * b.b23,
      a.s * b.b23 + a.b12 * b.b31 + a.b23 * b.s - a.b31 * b.b12,
      a.s * b.b31 - a.b12 * b.b23 + a.b23 * b.b12 + a.b31 * b.s,
  };
}

// 4 additions.
template <class T>
constexpr Even<T> add_even(const Even<T>& a, const Even<T>& b) {
  return {a.s + b.s, a.b12 + b.b12, a.b23 + b.b23, a.b31 + b.b31};
}

// Full sandwich r v r~ as an odd element (grade-1 plus the trivector
// rounding residue).
template <class T>
constexpr Odd<T> sandwich(const Even<T>& r, const T& x, const T& y, const T& z) {
  return odd_times_reversed_rotor(rotor_times_vector(r, x, y, z), r);
}

}  // namespace detail

// Even-grade element 1*s + b12*g12 + b23*g23 + b31*g31. Carries any
// magnitude; operations that need a unit rotor check it explicitly.
struct Rotor {
  double s = 1.0, b12 = 0.0, b23 = 0.0, b31 = 0.0;

  constexpr bool operator==(const Rotor&) const = default;
  constexpr Rotor operator-() const { return {-s, -b12, -b23, -b31}; }
  constexpr Rotor operator+(const Rotor& o) const { return {s + o.s, b12 + o.b12, b23 + o.b23, b31 + o.b31}; }
  constexpr Rotor operator-(const Rotor& o) const { return {s - o.s, b12 - o.b12, b23 - o.b23, b31 - o.b31}; }
  constexpr Rotor operator*(double k) const { return {s * k, b12 * k, b23 * k, b31 * k}; }

  constexpr double norm_sq() const { return s * s + b12 * b12 + b23 * b23 + b31 * b31; }
  double norm() const { return std::sqrt(norm_sq()); }

  constexpr Multivector as_multivector() const {
    Multivector m;
    m.c[0] = s;
    m.c[4] = b12;
    m.c[5] = b23;
    m.c[6] = b31;
    return m;
  }
  constexpr detail::Even<double> as_even() const { return {s, b12, b23, b31}; }
};

// Rotor composition (geometric product restricted to the even subalgebra).
// (a * b) applied to a vector rotates by b first, then a.
constexpr Rotor operator*(const Rotor& a, const Rotor& b) {
  const auto p = detail::even_times_even(a.as_even(), b.as_even());
  return {p.s, p.b12, p.b23, p.b31};
}

inline constexpr double kRotorDegenerateNorm = 1e-12;
inline constexpr double kUnitRotorTol = 1e-9;

inline bool is_unit(const Rotor& r, double tol = kUnitRotorTol) {
  return std::abs(r.norm() - 1.0) <= tol;
}

// R / |R|. A norm at or below 1e-12 means the even element no longer
// represents any rotation; refuse to divide.
inline Rotor rotor_normalize(const Rotor& r) {
  const double n = r.norm();
  if (!(n > kRotorDegenerateNorm))
    throw std::domain_error("rotor_normalize: degenerate rotor (|R| <= 1e-12)");
  return {r.s / n, r.b12 / n, r.b23 / n, r.b31 / n};
}

// x -> r x r~ for a unit rotor. The sandwich of a grade-1 vector is grade-1
// up to floating-point noise in the trivector slot; anything larger than
// 1e-12 * |x| there indicates a product-table bug, not roundoff.
inline Vec3 rotor_apply(const Rotor& r, const Vec3& v) {
  if (!is_unit(r))
    throw std::invalid_argument("rotor_apply: rotor is not unit within 1e-9");
  const auto u = detail::sandwich(r.as_even(), v.x, v.y, v.z);
  if (std::abs(u.tri) > 1e-12 * v.norm())
    throw std::logic_error("rotor_apply: non-grade-1 residue exceeds tolerance");
  return {u.x, u.y, u.z};
}

// Unit-rotor exponential of a pure bivector: exp(B) = cos|B| + sin|B| B/|B|.
inline Rotor exp_bivector(const Multivector& B) {
  const double mag = magnitude(B);
  const double off = std::sqrt(B.c[0] * B.c[0] + B.c[1] * B.c[1] + B.c[2] * B.c[2] + B.c[3] * B.c[3] + B.c[7] * B.c[7]);
  if (off > 1e-12 * (1.0 + mag))
    throw std::invalid_argument("exp_bivector: input has non-grade-2 components");
  const double t = std::sqrt(B.c[4] * B.c[4] + B.c[5] * B.c[5] + B.c[6] * B.c[6]);
  if (t == 0.0) return Rotor{};
  const double k = std::sin(t) / t;
  return {std::cos(t), k * B.c[4], k * B.c[5], k * B.c[6]};
}

// Rotor for a right-handed rotation of `angle` about `axis` under
// x -> r x r~. The bivector dual to the axis is
//   B = ax g23 + ay g31 + az g12,  r = cos(angle/2) - sin(angle/2) B.
inline Rotor rotor_from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(std::abs(n - 1.0) <= kUnitRotorTol))
    throw std::invalid_argument("rotor_from_axis_angle: axis must be unit length");
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  return {c, -s * axis.z, -s * axis.x, -s * axis.y};
}

// Euler composition in the axis order the angles are named: the rotor of
// Rx(ax) Ry(ay) Rz(az), i.e. intrinsic x-y-z (a vector is rotated about z
// first when the matrices act on it).
inline Rotor rotor_from_euler_xyz(double ax, double ay, double az) {
  const Rotor rx = rotor_from_axis_angle({1, 0, 0}, ax);
  const Rotor ry = rotor_from_axis_angle({0, 1, 0}, ay);
  const Rotor rz = rotor_from_axis_angle({0, 0, 1}, az);
  return rx * (ry * rz);
}

// min(|a - b|, |a + b|): rotors are a double cover, +-r are the same rotation.
inline double rotor_distance(const Rotor& a, const Rotor& b) {
  const double dm = (a - b).norm();
  const double dp = (a + b).norm();
  return dm < dp ? dm : dp;
}

// Even-grade slice of a multivector, rejecting meaningful odd content.
inline Rotor to_rotor(const Multivector& A, double tol = 1e-9) {
  const double odd = std::sqrt(A.c[1] * A.c[1] + A.c[2] * A.c[2] + A.c[3] * A.c[3] + A.c[7] * A.c[7]);
  if (odd > tol * (1.0 + magnitude(A)))
    throw std::invalid_argument("to_rotor: multivector has odd-grade components");
  return {A.c[0], A.c[4], A.c[5], A.c[6]};
}

}  // namespace galms
