#pragma once

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "snls/hs_operator.hpp"

namespace snls {

static_assert(std::endian::native == std::endian::little,
              "ACLF files are little-endian; big-endian hosts unsupported");

namespace io_detail {

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw FormatError("ACLF: truncated file");
  return v;
}

}  // namespace io_detail

inline constexpr std::uint32_t kAclfVersion = 1;

/// Field snapshot format "ACLF": magic bytes, version u32, dim u32,
/// n per axis u32 x dim, box length f64 x dim, representation flag u8,
/// then interleaved little-endian f64 (re, im) in row-major order.
inline void write_field_aclf(const std::filesystem::path& path,
                             const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("ACLF: cannot open for writing: " + path.string());
  os.write("ACLF", 4);
  io_detail::put<std::uint32_t>(os, kAclfVersion);
  io_detail::put<std::uint32_t>(os, std::uint32_t(f.grid.dim));
  for (int a = 0; a < f.grid.dim; ++a)
    io_detail::put<std::uint32_t>(os, std::uint32_t(f.grid.n[a]));
  for (int a = 0; a < f.grid.dim; ++a)
    io_detail::put<double>(os, f.grid.box[a]);
  io_detail::put<std::uint8_t>(os, f.rep == Rep::spectral ? 1 : 0);
  for (const cplx& z : f.v) {
    io_detail::put<double>(os, z.real());
    io_detail::put<double>(os, z.imag());
  }
  if (!os) throw FormatError("ACLF: write failed: " + path.string());
}

inline Field read_field_aclf(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("ACLF: cannot open: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "ACLF", 4) != 0)
    throw FormatError("ACLF: bad magic in " + path.string());
  const auto version = io_detail::get<std::uint32_t>(is);
  if (version != kAclfVersion)
    throw FormatError("ACLF: unsupported version in " + path.string());
  const auto dim = io_detail::get<std::uint32_t>(is);
  if (dim < 1 || dim > 3) throw FormatError("ACLF: bad dimension");
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> box{1, 1, 1};
  for (std::uint32_t a = 0; a < dim; ++a)
    n[a] = int(io_detail::get<std::uint32_t>(is));
  for (std::uint32_t a = 0; a < dim; ++a) box[a] = io_detail::get<double>(is);
  const auto flag = io_detail::get<std::uint8_t>(is);
  Field f;
  f.grid = Grid::make(int(dim), n, box);
  f.rep = flag ? Rep::spectral : Rep::physical;
  f.v.resize(f.grid.points());
  for (cplx& z : f.v) {
    const double re = io_detail::get<double>(is);
    const double im = io_detail::get<double>(is);
    z = {re, im};
  }
  return f;
}

/// Dense kernel matrix in the ACLF layout: the header carries 2*dim axes
/// (x axes then y axes, each with the grid's point counts and box lengths);
/// values are k(x, y) row-major in x.
inline void write_kernel_aclf(const std::filesystem::path& path,
                              const DenseKernel& dk) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("ACLF: cannot open for writing: " + path.string());
  os.write("ACLF", 4);
  io_detail::put<std::uint32_t>(os, kAclfVersion);
  io_detail::put<std::uint32_t>(os, std::uint32_t(2 * dk.grid.dim));
  for (int r = 0; r < 2; ++r)
    for (int a = 0; a < dk.grid.dim; ++a)
      io_detail::put<std::uint32_t>(os, std::uint32_t(dk.grid.n[a]));
  for (int r = 0; r < 2; ++r)
    for (int a = 0; a < dk.grid.dim; ++a)
      io_detail::put<double>(os, dk.grid.box[a]);
  io_detail::put<std::uint8_t>(os, 0);  // kernels are physical-space data
  for (const cplx& z : dk.k) {
    io_detail::put<double>(os, z.real());
    io_detail::put<double>(os, z.imag());
  }
  if (!os) throw FormatError("ACLF: write failed: " + path.string());
}

inline DenseKernel read_kernel_aclf(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("ACLF: cannot open: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "ACLF", 4) != 0)
    throw FormatError("ACLF: bad magic in " + path.string());
  if (io_detail::get<std::uint32_t>(is) != kAclfVersion)
    throw FormatError("ACLF: unsupported version in " + path.string());
  const auto dim2 = io_detail::get<std::uint32_t>(is);
  if (dim2 % 2 != 0 || dim2 < 2 || dim2 > 6)
    throw FormatError("ACLF: kernel files need an even dimension <= 6");
  const int dim = int(dim2) / 2;
  std::array<int, 3> n{1, 1, 1}, n2{1, 1, 1};
  std::array<double, 3> box{1, 1, 1}, box2{1, 1, 1};
  for (int a = 0; a < dim; ++a) n[a] = int(io_detail::get<std::uint32_t>(is));
  for (int a = 0; a < dim; ++a) n2[a] = int(io_detail::get<std::uint32_t>(is));
  for (int a = 0; a < dim; ++a) box[a] = io_detail::get<double>(is);
  for (int a = 0; a < dim; ++a) box2[a] = io_detail::get<double>(is);
  if (n != n2 || box != box2)
    throw FormatError("ACLF: kernel x and y grids must match");
  io_detail::get<std::uint8_t>(is);
  DenseKernel dk;
  dk.grid = Grid::make(dim, n, box);
  dk.k.resize(dk.grid.points() * dk.grid.points());
  for (cplx& z : dk.k) {
    const double re = io_detail::get<double>(is);
    const double im = io_detail::get<double>(is);
    z = {re, im};
  }
  return dk;
}

/// Full-precision decimal so that CSV round-trips reproduce doubles exactly.
inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& headers,
                      const std::vector<std::vector<double>>& columns) {
  std::ofstream os(path);
  if (!os) throw FormatError("CSV: cannot open for writing: " + path.string());
  for (std::size_t c = 0; c < headers.size(); ++c)
    os << (c ? "," : "") << headers[c];
  os << "\n";
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      os << (c ? "," : "") << format_full(columns[c][r]);
    os << "\n";
  }
}

struct CsvData {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;
};

inline CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("CSV: cannot open: " + path.string());
  CsvData data;
  std::string line;
  if (!std::getline(is, line)) throw FormatError("CSV: empty file");
  std::stringstream hs(line);
  std::string cellv;
  while (std::getline(hs, cellv, ',')) data.headers.push_back(cellv);
  data.columns.resize(data.headers.size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t c = 0;
    while (std::getline(ls, cellv, ',') && c < data.columns.size())
      data.columns[c++].push_back(std::strtod(cellv.c_str(), nullptr));
  }
  return data;
}

/// Flat configuration document: keys "section.key" -> value strings.
using ConfigMap = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline ConfigMap parse_config_text(const std::string& text) {
  ConfigMap m;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string::npos)
        throw ConfigError("config: unterminated section header: " + line);
      section = trim(line.substr(1, close - 1));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key");
    m[section.empty() ? key : section + "." + key] = value;
  }
  return m;
}

inline ConfigMap load_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

/// Canonical text: sections sorted, keys sorted. Hash and serialization are
/// computed from the same bytes.
inline std::string serialize_config(const ConfigMap& m) {
  std::map<std::string, std::map<std::string, std::string>> by_section;
  for (const auto& [k, v] : m) {
    const auto dot = k.find('.');
    if (dot == std::string::npos)
      by_section[""][k] = v;
    else
      by_section[k.substr(0, dot)][k.substr(dot + 1)] = v;
  }
  std::string out;
  for (const auto& [sec, kv] : by_section) {
    if (!sec.empty()) out += "[" + sec + "]\n";
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  }
  return out;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t config_hash(const ConfigMap& m) {
  return fnv1a64(serialize_config(m));
}

inline std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace snls
