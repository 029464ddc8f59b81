#pragma once

#include <filesystem>
#include <cstdint>
#include <iosfwd>

#include "nlslab/grid.hpp"

namespace nlslab {

/// Binary field snapshot, little-endian:
///   "NLSF" | u32 version = 1 | u32 dim | u64 size per dim (dim times) |
///   f64 half_width | f64 eps | f64 time | (f64 re, f64 im) row-major.
struct Snapshot {
  WaveField field;
  double eps = 1.0;
  double time = 0.0;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const Snapshot& snap);
Snapshot read_snapshot(std::istream& in);

/// File variants; failures raise IoError naming the path.
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace nlslab
