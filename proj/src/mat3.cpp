#include "galms/mat3.hpp"

#include <algorithm>

namespace galms {

Mat3 rotor_to_matrix(const Rotor& r) {
  if (!is_unit(r))
    throw std::invalid_argument("rotor_to_matrix: rotor is not unit within 1e-9");
  Mat3 R;
  const Vec3 cols[3] = {
      rotor_apply(r, {1, 0, 0}),
      rotor_apply(r, {0, 1, 0}),
      rotor_apply(r, {0, 0, 1}),
  };
  for (int j = 0; j < 3; ++j) {
    R(0, j) = cols[j].x;
    R(1, j) = cols[j].y;
    R(2, j) = cols[j].z;
  }
  return R;
}

Rotor matrix_to_rotor(const Mat3& R) {
  if (!is_rotation(R))
    throw std::invalid_argument("matrix_to_rotor: input is not a rotation matrix");

  // Shepperd's method on the quaternion (w, qx, qy, qz) of R, branching on
  // the largest of trace and diagonal entries so the divisor stays away
  // from zero even at 180-degree rotations.
  double w, qx, qy, qz;
  const double t = R.trace();
  if (t > R(0, 0) && t > R(1, 1) && t > R(2, 2)) {
    const double s = 2.0 * std::sqrt(t + 1.0);
    w = 0.25 * s;
    qx = (R(2, 1) - R(1, 2)) / s;
    qy = (R(0, 2) - R(2, 0)) / s;
    qz = (R(1, 0) - R(0, 1)) / s;
  } else if (R(0, 0) > R(1, 1) && R(0, 0) > R(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2));
    w = (R(2, 1) - R(1, 2)) / s;
    qx = 0.25 * s;
    qy = (R(0, 1) + R(1, 0)) / s;
    qz = (R(0, 2) + R(2, 0)) / s;
  } else if (R(1, 1) > R(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + R(1, 1) - R(0, 0) - R(2, 2));
    w = (R(0, 2) - R(2, 0)) / s;
    qx = (R(0, 1) + R(1, 0)) / s;
    qy = 0.25 * s;
    qz = (R(1, 2) + R(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + R(2, 2) - R(0, 0) - R(1, 1));
    w = (R(1, 0) - R(0, 1)) / s;
    qx = (R(0, 2) + R(2, 0)) / s;
    qy = (R(1, 2) + R(2, 1)) / s;
    qz = 0.25 * s;
  }

  // Quaternion (w, qx, qy, qz) and rotor coefficients relate by
  // b23 = -qx, b31 = -qy, b12 = -qz under this library's conventions.
  Rotor r = rotor_normalize({w, -qz, -qx, -qy});

  if (r.s < 0.0) {
    r = -r;
  } else if (r.s == 0.0) {
    const double lead = r.b12 != 0.0 ? r.b12 : (r.b23 != 0.0 ? r.b23 : r.b31);
    if (lead < 0.0) r = -r;
  }
  return r;
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const double t = (a.transpose() * b).trace();
  const double c = std::clamp((t - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace galms
