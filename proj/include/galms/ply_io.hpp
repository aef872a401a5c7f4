#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "galms/point_cloud.hpp"

namespace galms {

// ASCII PLY subset: header `ply` / `format ascii 1.0` / `element vertex N`
// with scalar float or double properties including x, y, z / `end_header`,
// then N whitespace-separated vertex rows. Extra vertex properties are
// parsed and discarded; elements after the vertices (faces etc.) are
// ignored. Binary PLY is rejected, malformed input reports a line number.
PointCloud parse_ply_ascii(std::string_view text);
PointCloud load_ply(const std::filesystem::path& path);

std::string ply_to_string(const PointCloud& cloud);
void write_ply_ascii(const PointCloud& cloud, const std::filesystem::path& path);

// Correspondence file: one `source_index target_index` pair per line,
// 0-based; `#` starts a comment, blank lines are skipped.
std::vector<std::pair<std::int64_t, std::int64_t>> parse_correspondences(std::string_view text);
std::vector<std::pair<std::int64_t, std::int64_t>> load_correspondences(const std::filesystem::path& path);

}  // namespace galms
