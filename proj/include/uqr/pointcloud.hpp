#pragma once

// Plain-text point clouds: one point per line, coordinates separated by single
// spaces in %.17g, LF line endings.

#include <filesystem>
#include <vector>

#include "uqr/geometry.hpp"

namespace uqr {

struct PointCloudWrite {
    std::size_t written = 0;
    std::size_t dropped_infinite = 0;
};

/// Writes finite points in input order; points at ∞ are skipped and counted.
/// Throws Error("io-error") if the file cannot be written.
PointCloudWrite write_pointcloud(const std::vector<Point>& points, const std::filesystem::path& path);

/// Reads a cloud written by write_pointcloud (blank lines and '#' comments
/// are ignored). All rows must have the same number of coordinates.
std::vector<Point> read_pointcloud(const std::filesystem::path& path);

}  // namespace uqr
