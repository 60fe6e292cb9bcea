#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivf/errors.hpp"
#include "ivf/vector_field.hpp"

namespace ivf {

// Run-length encoding of a boolean mask in row-major order. Runs alternate
// starting with a run of zeros (which may be empty).
inline std::vector<std::uint32_t> rle_encode(const SegmentationMask& mask) {
  std::vector<std::uint32_t> runs;
  bool current = false;
  std::uint32_t length = 0;
  for (std::uint8_t m : mask.membership()) {
    const bool v = (m != 0);
    if (v == current) {
      ++length;
    } else {
      runs.push_back(length);
      current = v;
      length = 1;
    }
  }
  runs.push_back(length);
  return runs;
}

inline SegmentationMask rle_decode(PixelGrid grid, const std::vector<std::uint32_t>& runs) {
  std::vector<std::uint8_t> membership;
  membership.reserve(grid.pixel_count());
  bool current = false;
  for (std::uint32_t run : runs) {
    membership.insert(membership.end(), run, current ? 1 : 0);
    current = !current;
  }
  if (membership.size() != grid.pixel_count()) {
    throw InvalidSpec("mask RLE does not cover the grid");
  }
  return SegmentationMask(grid, std::move(membership));
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

inline void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

inline std::uint32_t get_u32(const char* p) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  return v;
}

inline double get_f64(const char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace detail

// Binary field format: "IVF1" magic, little-endian u32 M (rows), N (cols), K,
// then f64 (x, y) pairs in keypoint-major, row-major order. A JSON sidecar at
// <path>.json carries the mask as row-major RLE.
inline void save_field(const std::string& path, const VectorField& field,
                       const SegmentationMask& mask) {
  require_grid_match(field, mask);
  std::string buf;
  buf.reserve(16 + field.size() * 16);
  buf.append("IVF1");
  detail::put_u32(buf, static_cast<std::uint32_t>(field.grid().height));
  detail::put_u32(buf, static_cast<std::uint32_t>(field.grid().width));
  detail::put_u32(buf, static_cast<std::uint32_t>(field.keypoint_count()));
  for (const Vec2& v : field.data()) {
    detail::put_f64(buf, v.x());
    detail::put_f64(buf, v.y());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(buf.data(), static_cast<std::streamsize>(buf.size()))) {
    throw IoError("cannot write field file: " + path);
  }

  nlohmann::ordered_json sidecar;
  sidecar["mask"] = {{"width", mask.grid().width},
                     {"height", mask.grid().height},
                     {"rle", rle_encode(mask)}};
  std::ofstream side(path + ".json");
  if (!side || !(side << sidecar.dump(2) << "\n")) {
    throw IoError("cannot write field sidecar: " + path + ".json");
  }
}

inline std::pair<VectorField, SegmentationMask> load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open field file: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 16 || buf.compare(0, 4, "IVF1") != 0) {
    throw UnsupportedFormat("bad field file magic: " + path);
  }
  const std::uint32_t rows = detail::get_u32(buf.data() + 4);
  const std::uint32_t cols = detail::get_u32(buf.data() + 8);
  const std::uint32_t keypoints = detail::get_u32(buf.data() + 12);
  VectorField field(make_grid(static_cast<int>(cols), static_cast<int>(rows)),
                    static_cast<int>(keypoints));
  const std::size_t need = 16 + field.size() * 16;
  if (buf.size() != need) {
    throw UnsupportedFormat("field file has wrong payload size: " + path);
  }
  const char* p = buf.data() + 16;
  for (Vec2& v : field.data()) {
    v.x() = detail::get_f64(p);
    v.y() = detail::get_f64(p + 8);
    p += 16;
  }

  std::ifstream side(path + ".json");
  if (!side) throw IoError("cannot open field sidecar: " + path + ".json");
  nlohmann::json sidecar;
  try {
    side >> sidecar;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse field sidecar " + path + ".json: " + e.what());
  }
  const auto& m = sidecar.at("mask");
  PixelGrid grid = make_grid(m.at("width").get<int>(), m.at("height").get<int>());
  if (!(grid == field.grid())) {
    throw DimensionMismatch("field sidecar mask grid does not match field grid");
  }
  SegmentationMask mask = rle_decode(grid, m.at("rle").get<std::vector<std::uint32_t>>());
  return {std::move(field), std::move(mask)};
}

}  // namespace ivf
