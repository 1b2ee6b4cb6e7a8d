#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hullcache/layouts.hpp"

namespace hullcache {

// Section = "HCL1" magic, u32 record kind, u32 count (little-endian), then
// `count` records in their in-memory byte layout (little-endian fields).
enum class RecordKind : std::uint32_t {
  Vertex = 1,
  Extension = 2,
  Face = 3,
  SphericalFace = 4,
};

void write_section(std::ostream& out, const std::vector<PackedVertexRecord>& pool);
void write_section(std::ostream& out, const std::vector<ExtensionRecord>& pool);
void write_section(std::ostream& out, const std::vector<PackedFaceRecord>& pool);
void write_section(std::ostream& out, const std::vector<SphericalFaceRecord>& pool);

// Each reader throws FormatError on bad magic, wrong kind or truncation.
std::vector<PackedVertexRecord> read_vertex_section(std::istream& in);
std::vector<ExtensionRecord> read_extension_section(std::istream& in);
std::vector<PackedFaceRecord> read_face_section(std::istream& in);
std::vector<SphericalFaceRecord> read_spherical_section(std::istream& in);

/// All four pools of a hull, in the order written by `gen-hull`.
struct LayoutPools {
  std::vector<PackedVertexRecord> vertices;
  std::vector<ExtensionRecord> extensions;
  std::vector<PackedFaceRecord> faces;
  std::vector<SphericalFaceRecord> spherical_faces;
};

LayoutPools collect_pools(const FaceTraversingHull& ft, const SphericalHull& sh);
void save_pools(const std::filesystem::path& path, const LayoutPools& pools);
LayoutPools load_pools(const std::filesystem::path& path);

}  // namespace hullcache
