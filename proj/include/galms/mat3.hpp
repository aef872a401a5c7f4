#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "galms/rotor.hpp"

namespace galms {

// Row-major 3x3 matrix. Deliberately minimal: the project needs rotation
// matrices, cross-covariances and a 3x3 SVD, nothing more.
struct Mat3 {
  std::array<double, 9> m{};

  constexpr double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
  constexpr double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
  constexpr bool operator==(const Mat3&) const = default;

  static constexpr Mat3 identity() {
    Mat3 r;
    r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
    return r;
  }

  constexpr Mat3 transpose() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  constexpr Mat3 operator*(const Mat3& o) const {
    Mat3 p;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        p(r, c) = (*this)(r, 0) * o(0, c) + (*this)(r, 1) * o(1, c) + (*this)(r, 2) * o(2, c);
    return p;
  }

  constexpr Vec3 operator*(const Vec3& v) const {
    return {
        (*this)(0, 0) * v.x + (*this)(0, 1) * v.y + (*this)(0, 2) * v.z,
        (*this)(1, 0) * v.x + (*this)(1, 1) * v.y + (*this)(1, 2) * v.z,
        (*this)(2, 0) * v.x + (*this)(2, 1) * v.y + (*this)(2, 2) * v.z,
    };
  }

  constexpr Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
    return r;
  }
  constexpr Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
    return r;
  }
  constexpr Mat3 operator*(double s) const {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] * s;
    return r;
  }

  constexpr double det() const {
    return (*this)(0, 0) * ((*this)(1, 1) * (*this)(2, 2) - (*this)(1, 2) * (*this)(2, 1)) -
           (*this)(0, 1) * ((*this)(1, 0) * (*this)(2, 2) - (*this)(1, 2) * (*this)(2, 0)) +
           (*this)(0, 2) * ((*this)(1, 0) * (*this)(2, 1) - (*this)(1, 1) * (*this)(2, 0));
  }

  constexpr double trace() const { return (*this)(0, 0) + (*this)(1, 1) + (*this)(2, 2); }

  constexpr double max_abs() const {
    double v = 0.0;
    for (double e : m) {
      const double a = e < 0 ? -e : e;
      if (a > v) v = a;
    }
    return v;
  }

  double frobenius() const {
    double s = 0.0;
    for (double e : m) s += e * e;
    return std::sqrt(s);
  }
};

// R^T R = I and det R = +1, both within `tol`.
inline bool is_rotation(const Mat3& R, double tol = 1e-10) {
  const Mat3 g = R.transpose() * R - Mat3::identity();
  return g.max_abs() <= tol && std::abs(R.det() - 1.0) <= tol;
}

// Columns are the images of the basis vectors under x -> r x r~.
Mat3 rotor_to_matrix(const Rotor& r);

// Inverse bridge. Stable for 180-degree rotations (trace <= -1); the sign
// ambiguity of the double cover is resolved as: scalar coefficient >= 0,
// ties broken by the first nonzero bivector coefficient being positive.
Rotor matrix_to_rotor(const Mat3& R);

// Angle of the relative rotation A^T B, in radians.
double rotation_angle_between(const Mat3& a, const Mat3& b);

}  // namespace galms
