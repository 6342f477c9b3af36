#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "tvtomo/sparse_matrix.hpp"
#include "tvtomo/volume.hpp"

namespace tvtomo {

// Matrix Market coordinate format, "real general", 1-based indices, one entry
// per stored nonzero, values written with 17 significant digits.
void write_matrix_market(const SparseMatrix& a, std::ostream& os);
void write_matrix_market(const SparseMatrix& a, const std::string& path);
SparseMatrix read_matrix_market(std::istream& is);
SparseMatrix read_matrix_market(const std::string& path);

// Text volume: header line "m n l", then m*n*l whitespace-separated values in
// linear index order.
void write_volume_text(const Volume& v, std::ostream& os);
void write_volume_text(const Volume& v, const std::string& path);
Volume read_volume_text(std::istream& is);
Volume read_volume_text(const std::string& path);

// Raw volume: 24-byte header of three little-endian u64 dims, then the data
// as little-endian f64 in linear index order.
void write_volume_raw(const Volume& v, std::ostream& os);
void write_volume_raw(const Volume& v, const std::string& path);
Volume read_volume_raw(std::istream& is);
Volume read_volume_raw(const std::string& path);

// Geometry manifest: one unit direction per line, three components with 17
// significant digits.
void write_directions(const std::vector<std::array<double, 3>>& dirs, const std::string& path);
std::vector<std::array<double, 3>> read_directions(const std::string& path);

std::string format_g17(double v);

}  // namespace tvtomo
