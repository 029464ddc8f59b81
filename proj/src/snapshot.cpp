#include "nlslab/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>

#include "nlslab/error.hpp"

namespace nlslab {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw IoError("snapshot: truncated stream");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const Snapshot& snap) {
  const GridSpec& g = snap.field.grid;
  out.write("NLSF", 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim));
  for (std::size_t d = 0; d < g.dim; ++d) put<std::uint64_t>(out, g.points);
  put<double>(out, g.half_width);
  put<double>(out, snap.eps);
  put<double>(out, snap.time);
  for (const cplx& z : snap.field.samples) {
    put<double>(out, z.real());
    put<double>(out, z.imag());
  }
  if (!out) throw IoError("snapshot: write failed");
}

Snapshot read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "NLSF", 4) != 0) throw IoError("snapshot: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kSnapshotVersion) throw IoError("snapshot: unsupported version " + std::to_string(version));
  GridSpec g;
  g.dim = get<std::uint32_t>(in);
  if (g.dim < 1 || g.dim > kMaxDim) throw IoError("snapshot: bad dimension");
  for (std::size_t d = 0; d < g.dim; ++d) {
    const auto n = get<std::uint64_t>(in);
    if (d == 0) g.points = n;
    else if (n != g.points) throw IoError("snapshot: anisotropic grids are not supported");
  }
  g.half_width = get<double>(in);
  try {
    g.validate();
  } catch (const ConfigError& e) {
    throw IoError(std::string("snapshot: invalid grid: ") + e.what());
  }
  Snapshot snap;
  snap.eps = get<double>(in);
  snap.time = get<double>(in);
  std::vector<cplx> samples(g.size());
  for (cplx& z : samples) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    z = {re, im};
  }
  snap.field = WaveField(g, std::move(samples));
  return snap;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  try {
    write_snapshot(out, snap);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  try {
    return read_snapshot(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace nlslab
