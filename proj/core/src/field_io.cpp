#include "logobs/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "logobs/errors.hpp"

namespace logobs {

namespace {

constexpr char kMagic[8] = {'L', 'O', 'G', 'O', 'B', 'S', '1', '\0'};

void put_u32(std::ofstream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ofstream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::ifstream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

}  // namespace

void write_field(const std::string& path, const ScalarField& f) {
  validate(f.grid);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw MissingInput("cannot open " + path + " for writing");
  os.write(kMagic, 8);
  put_u32(os, static_cast<std::uint32_t>(f.grid.dim));
  for (int a = 0; a < f.grid.dim; ++a) put_u32(os, static_cast<std::uint32_t>(f.grid.counts[a]));
  for (int a = 0; a < f.grid.dim; ++a) put_f64(os, f.grid.origin[a]);
  put_f64(os, f.grid.h);
  for (double v : f.values) put_f64(os, v);
  if (!os) throw MissingInput("write failed for " + path);
}

ScalarField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingInput("cannot open field file " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw MissingInput("bad magic in field file " + path);
  ScalarField f;
  f.grid.dim = static_cast<int>(get_u32(is));
  if (f.grid.dim != 1 && f.grid.dim != 2) throw MissingInput("bad dim in field file " + path);
  f.grid.counts = {0, 1};
  for (int a = 0; a < f.grid.dim; ++a) f.grid.counts[a] = static_cast<int>(get_u32(is));
  f.grid.origin = {0.0, 0.0};
  for (int a = 0; a < f.grid.dim; ++a) f.grid.origin[a] = get_f64(is);
  f.grid.h = get_f64(is);
  validate(f.grid);
  f.values.resize(f.grid.node_count());
  for (double& v : f.values) v = get_f64(is);
  if (!is) throw MissingInput("truncated field file " + path);
  return f;
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw MissingInput("cannot open " + path + " for writing");
  os << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ",";
      os << fmt_g17(row[k]);
    }
    os << "\n";
  }
}

}  // namespace logobs
