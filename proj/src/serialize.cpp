#include "hullcache/serialize.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "hullcache/errors.hpp"

namespace hullcache {

namespace {

constexpr std::array<char, 4> kMagic{'H', 'C', 'L', '1'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u16(std::uint16_t v) { bytes(v, 2); }
  void u32(std::uint32_t v) { bytes(v, 4); }
  void i32(std::int32_t v) { bytes(static_cast<std::uint32_t>(v), 4); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    bytes(bits, 8);
  }

 private:
  void bytes(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint16_t u16() { return static_cast<std::uint16_t>(bytes(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(bytes(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(bytes(4))); }
  double f64() {
    const std::uint64_t bits = bytes(8);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

 private:
  std::uint64_t bytes(int n) {
    unsigned char b[8];
    bytes_into(b, static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  void bytes_into(unsigned char* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) throw FormatError("layout section truncated");
      dst[i] = static_cast<unsigned char>(c);
    }
  }
  std::istream& in_;
};

void write_header(Writer& w, std::ostream& out, RecordKind kind, std::size_t count) {
  out.write(kMagic.data(), 4);
  w.u32(static_cast<std::uint32_t>(kind));
  w.u32(static_cast<std::uint32_t>(count));
}

std::uint32_t read_header(std::istream& in, Reader& r, RecordKind expected) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kMagic) throw FormatError("layout section: bad magic");
  const std::uint32_t kind = r.u32();
  if (kind != static_cast<std::uint32_t>(expected)) {
    throw FormatError("layout section: expected kind " + std::to_string(static_cast<std::uint32_t>(expected)) +
                      ", found " + std::to_string(kind));
  }
  const std::uint32_t count = r.u32();
  if (count > kMaxIndexed) throw FormatError("layout section: record count " + std::to_string(count) + " exceeds 65535");
  return count;
}

}  // namespace

void write_section(std::ostream& out, const std::vector<PackedVertexRecord>& pool) {
  Writer w(out);
  write_header(w, out, RecordKind::Vertex, pool.size());
  for (const auto& rec : pool) {
    w.f64(rec.x);
    w.f64(rec.y);
    w.f64(rec.z);
    for (auto n : rec.neighbors) w.u16(n);
    w.u16(rec.extension);
  }
}

void write_section(std::ostream& out, const std::vector<ExtensionRecord>& pool) {
  Writer w(out);
  write_header(w, out, RecordKind::Extension, pool.size());
  for (const auto& rec : pool) {
    for (auto n : rec.neighbors) w.u16(n);
    w.u16(rec.next);
  }
}

void write_section(std::ostream& out, const std::vector<PackedFaceRecord>& pool) {
  Writer w(out);
  write_header(w, out, RecordKind::Face, pool.size());
  for (const auto& rec : pool) {
    w.f64(rec.nx);
    w.f64(rec.ny);
    w.f64(rec.nz);
    for (auto n : rec.neighbors) w.u16(n);
    w.u16(rec.anchor);
  }
}

void write_section(std::ostream& out, const std::vector<SphericalFaceRecord>& pool) {
  Writer w(out);
  write_header(w, out, RecordKind::SphericalFace, pool.size());
  for (const auto& rec : pool) {
    w.i32(rec.azimuth.raw);
    w.i32(rec.elevation.raw);
    for (auto n : rec.neighbors) w.u16(n);
    w.u16(rec.anchor);
  }
}

std::vector<PackedVertexRecord> read_vertex_section(std::istream& in) {
  Reader r(in);
  std::vector<PackedVertexRecord> pool(read_header(in, r, RecordKind::Vertex));
  for (auto& rec : pool) {
    rec.x = r.f64();
    rec.y = r.f64();
    rec.z = r.f64();
    for (auto& n : rec.neighbors) n = r.u16();
    rec.extension = r.u16();
  }
  return pool;
}

std::vector<ExtensionRecord> read_extension_section(std::istream& in) {
  Reader r(in);
  std::vector<ExtensionRecord> pool(read_header(in, r, RecordKind::Extension));
  for (auto& rec : pool) {
    for (auto& n : rec.neighbors) n = r.u16();
    rec.next = r.u16();
  }
  return pool;
}

std::vector<PackedFaceRecord> read_face_section(std::istream& in) {
  Reader r(in);
  std::vector<PackedFaceRecord> pool(read_header(in, r, RecordKind::Face));
  for (auto& rec : pool) {
    rec.nx = r.f64();
    rec.ny = r.f64();
    rec.nz = r.f64();
    for (auto& n : rec.neighbors) n = r.u16();
    rec.anchor = r.u16();
  }
  return pool;
}

std::vector<SphericalFaceRecord> read_spherical_section(std::istream& in) {
  Reader r(in);
  std::vector<SphericalFaceRecord> pool(read_header(in, r, RecordKind::SphericalFace));
  for (auto& rec : pool) {
    rec.azimuth.raw = r.i32();
    rec.elevation.raw = r.i32();
    for (auto& n : rec.neighbors) n = r.u16();
    rec.anchor = r.u16();
  }
  return pool;
}

LayoutPools collect_pools(const FaceTraversingHull& ft, const SphericalHull& sh) {
  return {ft.vertex_pool.vertices, ft.vertex_pool.extensions, ft.faces, sh.faces};
}

void save_pools(const std::filesystem::path& path, const LayoutPools& pools) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_section(out, pools.vertices);
  write_section(out, pools.extensions);
  write_section(out, pools.faces);
  write_section(out, pools.spherical_faces);
  if (!out) throw IoError("write failed: " + path.string());
}

LayoutPools load_pools(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  LayoutPools pools;
  pools.vertices = read_vertex_section(in);
  pools.extensions = read_extension_section(in);
  pools.faces = read_face_section(in);
  pools.spherical_faces = read_spherical_section(in);
  return pools;
}

}  // namespace hullcache
