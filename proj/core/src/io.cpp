#include "tvtomo/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tvtomo/hash.hpp"

namespace tvtomo {

namespace {

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path, bool binary) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return is;
}

void put_u64_le(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64_le(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) throw std::runtime_error("volume: truncated header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void put_f64_le(std::ostream& os, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64_le(os, bits);
}

double get_f64_le(std::istream& is) {
  const std::uint64_t bits = get_u64_le(is);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_matrix_market(const SparseMatrix& a, std::ostream& os) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  const auto& off = a.row_offsets();
  const auto& col = a.col_indices();
  const auto& val = a.values();
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = off[r]; k < off[r + 1]; ++k)
      os << (r + 1) << ' ' << (col[k] + 1) << ' ' << format_g17(val[k]) << '\n';
  if (!os) throw std::runtime_error("matrix market: write failed");
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
  auto os = open_out(path, false);
  write_matrix_market(a, os);
}

SparseMatrix read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("matrix market: empty stream");
  {
    std::istringstream hs(line);
    std::string banner, object, fmt, field, symmetry;
    hs >> banner >> object >> fmt >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix" || fmt != "coordinate" || field != "real" ||
        symmetry != "general")
      throw std::runtime_error("matrix market: unsupported header: " + line);
  }
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::size_t rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) throw std::runtime_error("matrix market: bad size line");
  }
  std::vector<Triplet> trips;
  trips.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(is >> i >> j >> v)) throw std::runtime_error("matrix market: truncated entries");
    if (i < 1 || j < 1 || i > rows || j > cols) throw std::runtime_error("matrix market: index out of range");
    trips.push_back({i - 1, j - 1, v});
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(trips));
}

SparseMatrix read_matrix_market(const std::string& path) {
  auto is = open_in(path, false);
  return read_matrix_market(is);
}

void write_volume_text(const Volume& v, std::ostream& os) {
  v.validate();
  os << v.m << ' ' << v.n << ' ' << v.l << '\n';
  for (std::size_t i = 0; i < v.data.size(); ++i) os << format_g17(v.data[i]) << '\n';
  if (!os) throw std::runtime_error("volume: write failed");
}

void write_volume_text(const Volume& v, const std::string& path) {
  auto os = open_out(path, false);
  write_volume_text(v, os);
}

Volume read_volume_text(std::istream& is) {
  Volume v;
  if (!(is >> v.m >> v.n >> v.l)) throw std::runtime_error("volume: bad header");
  v.data.resize(v.m * v.n * v.l);
  for (double& x : v.data)
    if (!(is >> x)) throw std::runtime_error("volume: truncated data");
  v.validate();
  return v;
}

Volume read_volume_text(const std::string& path) {
  auto is = open_in(path, false);
  return read_volume_text(is);
}

void write_volume_raw(const Volume& v, std::ostream& os) {
  v.validate();
  put_u64_le(os, v.m);
  put_u64_le(os, v.n);
  put_u64_le(os, v.l);
  for (double x : v.data) put_f64_le(os, x);
  if (!os) throw std::runtime_error("volume: write failed");
}

void write_volume_raw(const Volume& v, const std::string& path) {
  auto os = open_out(path, true);
  write_volume_raw(v, os);
}

Volume read_volume_raw(std::istream& is) {
  Volume v;
  v.m = get_u64_le(is);
  v.n = get_u64_le(is);
  v.l = get_u64_le(is);
  if (v.m == 0 || v.n == 0 || v.l == 0 || v.m * v.n * v.l > (std::size_t{1} << 34))
    throw std::runtime_error("volume: implausible dimensions");
  v.data.resize(v.m * v.n * v.l);
  for (double& x : v.data) x = get_f64_le(is);
  return v;
}

Volume read_volume_raw(const std::string& path) {
  auto is = open_in(path, true);
  return read_volume_raw(is);
}

void write_directions(const std::vector<std::array<double, 3>>& dirs, const std::string& path) {
  auto os = open_out(path, false);
  for (const auto& d : dirs) os << format_g17(d[0]) << ' ' << format_g17(d[1]) << ' ' << format_g17(d[2]) << '\n';
  if (!os) throw std::runtime_error("directions: write failed");
}

std::vector<std::array<double, 3>> read_directions(const std::string& path) {
  auto is = open_in(path, false);
  std::vector<std::array<double, 3>> dirs;
  double x, y, z;
  while (is >> x >> y >> z) dirs.push_back({x, y, z});
  return dirs;
}

}  // namespace tvtomo
