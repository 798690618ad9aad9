#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "tdho/errors.hpp"
#include "tdho/field.hpp"

namespace tdho {

// Field files: raw little-endian binary64 pairs (re, im) in row-major order,
// plus a `<path>.json` sidecar carrying the grid metadata, timestamp and
// gauge tag.

namespace detail {

inline uint64_t to_le_bits(double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  if constexpr (std::endian::native == std::endian::big) {
    uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((bits >> (8 * i)) & 0xff) << (8 * (7 - i));
    bits = r;
  }
  return bits;
}

inline double from_le_bits(uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((bits >> (8 * i)) & 0xff) << (8 * (7 - i));
    bits = r;
  }
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace detail

inline void write_field(const Field& f, const std::string& path) {
  std::ofstream bin(path, std::ios::binary);
  require(bin.good(), ErrorKind::Io, "cannot write " + path);
  for (const Complex& v : f.values) {
    uint64_t re = detail::to_le_bits(v.real());
    uint64_t im = detail::to_le_bits(v.imag());
    bin.write(reinterpret_cast<const char*>(&re), 8);
    bin.write(reinterpret_cast<const char*>(&im), 8);
  }
  nlohmann::json meta = {
      {"d", f.grid.d},        {"n", f.grid.n},       {"L", f.grid.L},
      {"time", f.time},       {"gauge", to_string(f.gauge)},
      {"count", f.values.size()},
  };
  std::ofstream side(path + ".json");
  require(side.good(), ErrorKind::Io, "cannot write " + path + ".json");
  side << meta.dump(2) << '\n';
}

inline Field read_field(const std::string& path) {
  std::ifstream side(path + ".json");
  require(side.good(), ErrorKind::Io, "missing sidecar " + path + ".json");
  nlohmann::json meta = nlohmann::json::parse(side);
  Grid grid(meta.at("d").get<int>(), meta.at("n").get<int>(), meta.at("L").get<double>());
  Field f(grid, gauge_from_string(meta.at("gauge").get<std::string>()),
          meta.at("time").get<double>());
  require(meta.at("count").get<std::size_t>() == f.values.size(), ErrorKind::Io,
          "sidecar count does not match grid");
  std::ifstream bin(path, std::ios::binary);
  require(bin.good(), ErrorKind::Io, "cannot read " + path);
  for (Complex& v : f.values) {
    uint64_t re, im;
    bin.read(reinterpret_cast<char*>(&re), 8);
    bin.read(reinterpret_cast<char*>(&im), 8);
    require(bin.good(), ErrorKind::Io, "truncated field file " + path);
    v = Complex(detail::from_le_bits(re), detail::from_le_bits(im));
  }
  return f;
}

}  // namespace tdho
