#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace galms {

// Element of the geometric algebra G(R^3), positive-definite signature.
// Coefficients are stored over the ordered basis
//   [1, g1, g2, g3, g12, g23, g31, I],  I = g1 g2 g3.
// The blade g13 never gets its own slot: it is -g31 by coefficient negation.
struct Multivector {
  std::array<double, 8> c{};

  constexpr Multivector() = default;
  constexpr explicit Multivector(const std::array<double, 8>& coeffs) : c(coeffs) {}

  static constexpr Multivector scalar(double s) {
    Multivector m;
    m.c[0] = s;
    return m;
  }
  static constexpr Multivector vector(double x, double y, double z) {
    Multivector m;
    m.c[1] = x;
    m.c[2] = y;
    m.c[3] = z;
    return m;
  }
  static constexpr Multivector bivector(double b12, double b23, double b31) {
    Multivector m;
    m.c[4] = b12;
    m.c[5] = b23;
    m.c[6] = b31;
    return m;
  }
  static constexpr Multivector basis(std::size_t k) {
    Multivector m;
    m.c[k] = 1.0;
    return m;
  }

  constexpr double operator[](std::size_t i) const { return c[i]; }
  constexpr double& operator[](std::size_t i) { return c[i]; }

  constexpr Multivector operator+(const Multivector& o) const {
    Multivector r;
    for (std::size_t i = 0; i < 8; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  constexpr Multivector operator-(const Multivector& o) const {
    Multivector r;
    for (std::size_t i = 0; i < 8; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  constexpr Multivector operator-() const {
    Multivector r;
    for (std::size_t i = 0; i < 8; ++i) r.c[i] = -c[i];
    return r;
  }
  constexpr Multivector operator*(double s) const {
    Multivector r;
    for (std::size_t i = 0; i < 8; ++i) r.c[i] = c[i] * s;
    return r;
  }
  friend constexpr Multivector operator*(double s, const Multivector& m) { return m * s; }
  constexpr Multivector& operator+=(const Multivector& o) {
    for (std::size_t i = 0; i < 8; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr bool operator==(const Multivector&) const = default;
};

// Geometric product, hand-unrolled from the Cayley table of the basis above
// (gi gj = -gj gi for i != j, gi gi = 1). Verified blade-by-blade against a
// brute-force expansion in the test suite.
constexpr Multivector geometric_product(const Multivector& A, const Multivector& B) {
  const auto& a = A.c;
  const auto& b = B.c;
  Multivector r;
  r.c[0] = a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] - a[4] * b[4] - a[5] * b[5] - a[6] * b[6] - a[7] * b[7];
  r.c[1] = a[0] * b[1] + a[1] * b[0] - a[2] * b[4] + a[3] * b[6] + a[4] * b[2] - a[5] * b[7] - a[6] * b[3] - a[7] * b[5];
  r.c[2] = a[0] * b[2] + a[1] * b[4] + a[2] * b[0] - a[3] * b[5] - a[4] * b[1] + a[5] * b[3] - a[6] * b[7] - a[7] * b[6];
  r.c[3] = a[0] * b[3] - a[1] * b[6] + a[2] * b[5] + a[3] * b[0] - a[4] * b[7] - a[5] * b[2] + a[6] * b[1] - a[7] * b[4];
  r.c[4] = a[0] * b[4] + a[1] * b[2] - a[2] * b[1] + a[3] * b[7] + a[4] * b[0] - a[5] * b[6] + a[6] * b[5] + a[7] * b[3];
  r.c[5] = a[0] * b[5] + a[1] * b[7] + a[2] * b[3] - a[3] * b[2] + a[4] * b[6] + a[5] * b[0] - a[6] * b[4] + a[7] * b[1];
  r.c[6] = a[0] * b[6] - a[1] * b[3] + a[2] * b[7] + a[3] * b[1] - a[4] * b[5] + a[5] * b[4] + a[6] * b[0] + a[7] * b[2];
  r.c[7] = a[0] * b[7] + a[1] * b[5] + a[2] * b[6] + a[3] * b[4] + a[4] * b[3] + a[5] * b[1] + a[6] * b[2] + a[7] * b[0];
  return r;
}

constexpr Multivector operator*(const Multivector& A, const Multivector& B) {
  return geometric_product(A, B);
}

// Reversion: (-1)^{g(g-1)/2} per grade, i.e. grades 2 and 3 flip sign.
constexpr Multivector reverse(const Multivector& A) {
  Multivector r = A;
  r.c[4] = -r.c[4];
  r.c[5] = -r.c[5];
  r.c[6] = -r.c[6];
  r.c[7] = -r.c[7];
  return r;
}

// Grade-g part. g outside 0..3 is a caller bug.
inline Multivector grade(const Multivector& A, int g) {
  Multivector r;
  switch (g) {
    case 0: r.c[0] = A.c[0]; break;
    case 1: r.c[1] = A.c[1]; r.c[2] = A.c[2]; r.c[3] = A.c[3]; break;
    case 2: r.c[4] = A.c[4]; r.c[5] = A.c[5]; r.c[6] = A.c[6]; break;
    case 3: r.c[7] = A.c[7]; break;
    default: throw std::invalid_argument("grade: g must be in 0..3");
  }
  return r;
}

// Graded outer product: <A>_r ^ <B>_s contributes the grade-(r+s) part of
// the geometric product <A>_r <B>_s.
inline Multivector outer_product(const Multivector& A, const Multivector& B) {
  Multivector out;
  for (int r = 0; r <= 3; ++r) {
    const Multivector ar = grade(A, r);
    for (int s = 0; s + r <= 3; ++s) {
      out += grade(geometric_product(ar, grade(B, s)), r + s);
    }
  }
  return out;
}

inline Multivector operator^(const Multivector& A, const Multivector& B) {
  return outer_product(A, B);
}

// A * B in the GA sense: the scalar part of AB.
constexpr double scalar_product(const Multivector& A, const Multivector& B) {
  const auto& a = A.c;
  const auto& b = B.c;
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] - a[4] * b[4] - a[5] * b[5] - a[6] * b[6] - a[7] * b[7];
}

// |A|^2 = A * reverse(A) = sum of squared coefficients.
inline double magnitude(const Multivector& A) {
  double s = 0.0;
  for (double v : A.c) s += v * v;
  return std::sqrt(s);
}

inline bool is_finite(const Multivector& A) {
  for (double v : A.c)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace blades {
inline constexpr Multivector one = Multivector::basis(0);
inline constexpr Multivector g1 = Multivector::basis(1);
inline constexpr Multivector g2 = Multivector::basis(2);
inline constexpr Multivector g3 = Multivector::basis(3);
inline constexpr Multivector g12 = Multivector::basis(4);
inline constexpr Multivector g23 = Multivector::basis(5);
inline constexpr Multivector g31 = Multivector::basis(6);
inline constexpr Multivector I = Multivector::basis(7);
}  // namespace blades

// Plain 3-vector (the grade-1 slice of the algebra), used for point data.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  friend constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr double norm_sq() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }
};

constexpr Multivector to_multivector(const Vec3& v) { return Multivector::vector(v.x, v.y, v.z); }
constexpr Vec3 vector_part(const Multivector& A) { return {A.c[1], A.c[2], A.c[3]}; }

}  // namespace galms
