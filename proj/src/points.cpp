#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hullcache/errors.hpp"
#include "hullcache/hull.hpp"
#include "hullcache/random.hpp"

namespace hullcache {

PointSet sample_sphere(std::size_t n, std::uint64_t seed) {
  if (n < 4) throw InvalidArgument("sample_sphere: need at least 4 points, got " + std::to_string(n));
  Rng rng(seed);
  PointSet out;
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.points.push_back(rng.unit_vector());
  out.source_label = "sphere-" + std::to_string(n) + "-s" + std::to_string(seed);
  return out;
}

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

Vec3 checked_point(double x, double y, double z, const std::string& where) {
  Vec3 p{x, y, z};
  if (!is_finite(p)) throw FormatError(where + ": non-finite vertex coordinate");
  return p;
}

PointSet load_obj(std::istream& in, const std::string& label) {
  PointSet out;
  out.source_label = label;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.size() < 2 || line[0] != 'v' || !std::isspace(static_cast<unsigned char>(line[1]))) continue;
    std::istringstream fields(line.substr(2));
    double x = 0, y = 0, z = 0;
    if (!(fields >> x >> y >> z)) {
      throw FormatError(label + ":" + std::to_string(line_no) + ": malformed vertex line");
    }
    out.points.push_back(checked_point(x, y, z, label));
  }
  if (out.points.empty()) throw FormatError(label + ": no vertices");
  return out;
}

enum class PlyFormat { Ascii, BinaryLittleEndian };

struct PlyProperty {
  std::string name;
  std::string type;
  std::string list_count_type;  // empty unless list property
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

std::size_t ply_type_size(const std::string& type, const std::string& label) {
  static const std::unordered_map<std::string, std::size_t> sizes = {
      {"char", 1},  {"uchar", 1},   {"int8", 1},    {"uint8", 1},   {"short", 2},  {"ushort", 2},
      {"int16", 2}, {"uint16", 2},  {"int", 4},     {"uint", 4},    {"int32", 4},  {"uint32", 4},
      {"float", 4}, {"float32", 4}, {"double", 8},  {"float64", 8}};
  auto it = sizes.find(type);
  if (it == sizes.end()) throw FormatError(label + ": unknown PLY type '" + type + "'");
  return it->second;
}

double read_binary_scalar(const unsigned char* p, const std::string& type) {
  // Little-endian input; assemble bytes explicitly.
  std::uint64_t bits = 0;
  auto load = [&](std::size_t n) {
    bits = 0;
    for (std::size_t i = 0; i < n; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  };
  if (type == "float" || type == "float32") {
    load(4);
    std::uint32_t b32 = static_cast<std::uint32_t>(bits);
    float f;
    std::memcpy(&f, &b32, 4);
    return f;
  }
  if (type == "double" || type == "float64") {
    load(8);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  }
  if (type == "char" || type == "int8") return static_cast<std::int8_t>(p[0]);
  if (type == "uchar" || type == "uint8") return p[0];
  if (type == "short" || type == "int16") {
    load(2);
    return static_cast<std::int16_t>(bits);
  }
  if (type == "ushort" || type == "uint16") {
    load(2);
    return static_cast<std::uint16_t>(bits);
  }
  load(4);
  if (type == "int" || type == "int32") return static_cast<std::int32_t>(bits);
  return static_cast<std::uint32_t>(bits);
}

PointSet load_ply(std::istream& in, const std::string& label) {
  std::string line;
  std::getline(in, line);  // "ply"
  PlyFormat format = PlyFormat::Ascii;
  bool have_format = false;
  std::vector<PlyElement> elements;
  bool header_done = false;
  while (std::getline(in, line)) {
    strip_cr(line);
    std::istringstream fields(line);
    std::string keyword;
    fields >> keyword;
    if (keyword == "format") {
      std::string kind;
      fields >> kind;
      if (kind == "ascii") {
        format = PlyFormat::Ascii;
      } else if (kind == "binary_little_endian") {
        format = PlyFormat::BinaryLittleEndian;
      } else {
        throw FormatError(label + ": unsupported PLY format '" + kind + "'");
      }
      have_format = true;
    } else if (keyword == "element") {
      PlyElement e;
      if (!(fields >> e.name >> e.count)) throw FormatError(label + ": malformed element line");
      elements.push_back(std::move(e));
    } else if (keyword == "property") {
      if (elements.empty()) throw FormatError(label + ": property before element");
      PlyProperty prop;
      std::string type;
      fields >> type;
      if (type == "list") {
        fields >> prop.list_count_type >> prop.type >> prop.name;
      } else {
        prop.type = type;
        fields >> prop.name;
      }
      if (prop.name.empty()) throw FormatError(label + ": malformed property line");
      ply_type_size(prop.type, label);
      if (!prop.list_count_type.empty()) ply_type_size(prop.list_count_type, label);
      elements.back().properties.push_back(std::move(prop));
    } else if (keyword == "end_header") {
      header_done = true;
      break;
    }
    // comment / obj_info lines are ignored
  }
  if (!header_done || !have_format) throw FormatError(label + ": truncated PLY header");

  auto vertex_it = std::find_if(elements.begin(), elements.end(), [](const PlyElement& e) { return e.name == "vertex"; });
  if (vertex_it == elements.end() || vertex_it->count == 0) throw FormatError(label + ": PLY has no vertices");
  int ix = -1, iy = -1, iz = -1;
  for (std::size_t i = 0; i < vertex_it->properties.size(); ++i) {
    const auto& p = vertex_it->properties[i];
    if (!p.list_count_type.empty()) continue;
    const int idx = static_cast<int>(i);
    if (p.name == "x") ix = idx;
    if (p.name == "y") iy = idx;
    if (p.name == "z") iz = idx;
  }
  if (ix < 0 || iy < 0 || iz < 0) throw FormatError(label + ": PLY vertex element lacks x/y/z");

  PointSet out;
  out.source_label = label;
  out.points.reserve(vertex_it->count);
  const auto truncated = [&] { return FormatError(label + ": truncated PLY body"); };

  for (auto e = elements.begin(); e != std::next(vertex_it); ++e) {
    const bool is_vertex = e == vertex_it;
    std::vector<double> values(e->properties.size());
    for (std::size_t row = 0; row < e->count; ++row) {
      for (std::size_t pi = 0; pi < e->properties.size(); ++pi) {
        const auto& prop = e->properties[pi];
        if (format == PlyFormat::Ascii) {
          if (prop.list_count_type.empty()) {
            if (!(in >> values[pi])) throw truncated();
          } else {
            std::size_t n = 0;
            if (!(in >> n)) throw truncated();
            for (std::size_t k = 0; k < n; ++k) {
              double skip;
              if (!(in >> skip)) throw truncated();
            }
          }
        } else {
          unsigned char buf[8];
          if (prop.list_count_type.empty()) {
            const std::size_t sz = ply_type_size(prop.type, label);
            if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(sz))) throw truncated();
            values[pi] = read_binary_scalar(buf, prop.type);
          } else {
            const std::size_t csz = ply_type_size(prop.list_count_type, label);
            if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(csz))) throw truncated();
            const auto n = static_cast<std::size_t>(read_binary_scalar(buf, prop.list_count_type));
            in.ignore(static_cast<std::streamsize>(n * ply_type_size(prop.type, label)));
            if (!in) throw truncated();
          }
        }
      }
      if (is_vertex) {
        out.points.push_back(checked_point(values[static_cast<size_t>(ix)], values[static_cast<size_t>(iy)],
                                           values[static_cast<size_t>(iz)], label));
      }
    }
  }
  return out;
}

}  // namespace

PointSet load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mesh file: " + path.string());
  const std::string label = path.string();

  std::string first;
  std::getline(in, first);
  strip_cr(first);
  in.clear();
  in.seekg(0);
  if (first == "ply") return load_ply(in, label);
  if (lowercase(path.extension().string()) == ".obj") return load_obj(in, label);
  throw FormatError(label + ": unrecognised mesh format (expected OBJ or PLY)");
}

}  // namespace hullcache
