#include "galms/point_cloud.hpp"

#include <stdexcept>

namespace galms {

Vec3 centroid(const PointCloud& cloud) {
  if (cloud.points.empty())
    throw std::invalid_argument("centroid: empty point cloud");
  Vec3 sum;
  for (const Vec3& p : cloud.points) sum = sum + p;
  return sum / static_cast<double>(cloud.points.size());
}

PointCloud gen_cube(int points_per_edge, double edge_length) {
  if (points_per_edge < 2)
    throw std::invalid_argument("gen_cube: points_per_edge must be >= 2");
  if (!(edge_length > 0.0))
    throw std::invalid_argument("gen_cube: edge_length must be positive");

  const int p = points_per_edge;
  const double step = edge_length / static_cast<double>(p - 1);
  const double half = static_cast<double>(p - 1) / 2.0;

  PointCloud cloud;
  cloud.name = "cube";
  cloud.points.reserve(static_cast<std::size_t>(p) * p * p);
  // (k - half) is exact in double for integer k and half-integer half, so
  // the lattice is exactly symmetric and the centroid is exactly zero.
  for (int ix = 0; ix < p; ++ix)
    for (int iy = 0; iy < p; ++iy)
      for (int iz = 0; iz < p; ++iz)
        cloud.points.push_back({(ix - half) * step, (iy - half) * step, (iz - half) * step});
  return cloud;
}

PointCloud center(const PointCloud& cloud) {
  const Vec3 c = centroid(cloud);
  PointCloud out;
  out.name = cloud.name;
  out.points.reserve(cloud.points.size());
  for (const Vec3& p : cloud.points) out.points.push_back(p - c);
  return out;
}

}  // namespace galms
