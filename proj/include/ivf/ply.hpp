#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ivf/errors.hpp"
#include "ivf/geometry.hpp"

namespace ivf {

// Minimal ASCII PLY point-cloud reader. Understands `element vertex N` with
// float/double x/y/z properties (extra scalar vertex properties are skipped,
// as are any elements after the vertices). Binary PLY is rejected.
inline std::vector<Vec3> load_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open PLY file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw UnsupportedFormat("empty PLY file: " + path);
  if (line.size() && line.back() == '\r') line.pop_back();
  if (line != "ply") throw UnsupportedFormat("missing 'ply' magic in " + path);

  long vertex_count = -1;
  int ix = -1, iy = -1, iz = -1;
  int property_count = 0;
  bool in_vertex_element = false;
  bool saw_format = false;

  while (std::getline(in, line)) {
    if (line.size() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "comment" || tok.empty()) continue;
    if (tok == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt != "ascii") {
        throw UnsupportedFormat("PLY format '" + fmt + "' not supported (ASCII only): " + path);
      }
      saw_format = true;
    } else if (tok == "element") {
      std::string name;
      long count = 0;
      ls >> name >> count;
      in_vertex_element = (name == "vertex");
      if (in_vertex_element) vertex_count = count;
    } else if (tok == "property") {
      if (!in_vertex_element) continue;
      std::string type, name;
      ls >> type >> name;
      if (type == "list") {
        throw UnsupportedFormat("list property on vertex element: " + path);
      }
      if (name == "x") ix = property_count;
      if (name == "y") iy = property_count;
      if (name == "z") iz = property_count;
      ++property_count;
    } else if (tok == "end_header") {
      break;
    }
  }
  if (!saw_format) throw UnsupportedFormat("PLY header has no format line: " + path);
  if (vertex_count < 0) throw UnsupportedFormat("PLY header has no vertex element: " + path);
  if (ix < 0 || iy < 0 || iz < 0) {
    throw UnsupportedFormat("PLY vertex element lacks x/y/z properties: " + path);
  }

  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>(vertex_count));
  std::vector<double> row(static_cast<std::size_t>(property_count));
  for (long v = 0; v < vertex_count; ++v) {
    for (int p = 0; p < property_count; ++p) {
      if (!(in >> row[static_cast<std::size_t>(p)])) {
        throw IoError("truncated PLY vertex data at vertex " + std::to_string(v) + ": " + path);
      }
    }
    points.emplace_back(row[static_cast<std::size_t>(ix)], row[static_cast<std::size_t>(iy)],
                        row[static_cast<std::size_t>(iz)]);
  }
  return points;
}

// Writes points as a minimal ASCII PLY with full double round-trip precision.
inline void save_ply(const std::string& path, const std::vector<Vec3>& points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write PLY file: " + path);
  out << "ply\nformat ascii 1.0\nelement vertex " << points.size()
      << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  char buf[96];
  for (const Vec3& p : points) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  if (!out) throw IoError("write failed for PLY file: " + path);
}

}  // namespace ivf
