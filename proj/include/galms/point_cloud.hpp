#pragma once

#include <string>
#include <vector>

#include "galms/multivector.hpp"

namespace galms {

struct PointCloud {
  std::vector<Vec3> points;
  std::string name;

  std::size_t size() const { return points.size(); }
};

Vec3 centroid(const PointCloud& cloud);

// Full cubic lattice of points_per_edge^3 points spanning a cube of the
// given edge length, exactly centered on the origin.
PointCloud gen_cube(int points_per_edge, double edge_length);

// Copy with the centroid subtracted from every point.
PointCloud center(const PointCloud& cloud);

}  // namespace galms
