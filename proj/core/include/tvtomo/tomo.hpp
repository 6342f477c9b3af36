#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tvtomo/objective.hpp"
#include "tvtomo/sparse_matrix.hpp"
#include "tvtomo/vec.hpp"
#include "tvtomo/volume.hpp"

namespace tvtomo::tomo {

// Ellipsoid on [-1,1]^3. A point q is inside when, with w = R(phi,theta,psi) q,
//   sum_i (w_i - center_i)^2 / semi_axes_i^2 <= 1.
// The rotation is applied to the coordinates first and the offsets are
// subtracted in the rotated frame, matching the classical phantom tables.
struct Ellipsoid {
  double intensity = 0.0;
  std::array<double, 3> semi_axes{};   // all positive
  std::array<double, 3> center{};
  std::array<double, 3> euler_rad{};   // phi, theta, psi (z-x-z convention)
};

// The standard ten-ellipsoid head phantom (modified variant: ventricle
// intensities sum with the skull and brain to {0, 0.2, 0.3, 1.0}).
const std::vector<Ellipsoid>& shepp_logan_ellipsoids();

// Samples the phantom at voxel centers of an m x n x l grid over [0,1]^3,
// mapped to [-1,1]^3; the voxel value is the summed intensity of the
// ellipsoids containing the center.
Volume shepp_logan_3d(std::size_t m, std::size_t n, std::size_t l);

// Directions of an octahedrally symmetric quadrature rule, reduced by the
// antipodal identification. Supported counts: 13 (from the 26-point rule)
// and 37 (from the 74-point rule).
std::vector<std::array<double, 3>> lebedev_directions(std::size_t n_proj);

struct RaySegment {
  std::size_t voxel = 0;  // linear index, same convention as Volume
  double length = 0.0;
};

// Intersection lengths of the line origin + t*dir (t over all reals) with the
// voxels of an m x n x l grid on [0,1]^3. dir must be unit length. Segments
// appear in traversal order and their lengths sum to the chord length. A ray
// running exactly along a voxel face assigns its length to the lower-index
// voxel; a ray missing the cube yields an empty list.
std::vector<RaySegment> trace_ray(std::size_t m, std::size_t n, std::size_t l,
                                  const std::array<double, 3>& origin,
                                  const std::array<double, 3>& dir);

// Parallel-beam geometry: for each direction, a p x p detector grid of side
// sqrt(3) centered on the projection of the cube center, orthogonal to the
// direction, with one ray through each pixel center.
struct ProjectionGeometry {
  std::vector<std::array<double, 3>> directions;
  std::size_t det_pixels = 0;     // p
  double det_extent = 1.7320508075688772;  // sqrt(3), covers the cube for any direction
};

ProjectionGeometry make_geometry(std::size_t n_proj, std::size_t det_pixels);

// Assembles the ray-driven system matrix. Rows are ordered direction-major,
// then detector row-major (v, then u); rays that miss the volume are dropped,
// so the matrix has no zero rows.
SparseMatrix build_system_matrix(const ProjectionGeometry& g, std::size_t m, std::size_t n,
                                 std::size_t l);

// Adds Gaussian noise rescaled so that ||e|| / ||b|| equals rel_level
// exactly. rel_level = 0 returns b unchanged; b = 0 with rel_level > 0 is an
// error. Deterministic per seed.
DenseVector add_noise(const DenseVector& b, double rel_level, std::uint64_t seed);

struct ProblemSpec {
  std::size_t m = 0, n = 0, l = 0;
  std::size_t det_pixels = 0;
  std::size_t n_proj = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

// T1/T2 are the full-size benchmark presets; the -desk variants shrink them
// for routine runs.
std::optional<ProblemSpec> preset(const std::string& name);
std::vector<std::string> preset_names();

struct TestProblem {
  SparseMatrix a;
  DenseVector b;
  Volume x_exact;
  DenseVector x0;  // 5 CGLS iterations on A x = b from zero
  ProblemSpec spec;
};

TestProblem make_test_problem(const ProblemSpec& spec);

// Bundles a built test problem with regularization parameters.
TvRegProblem make_tvreg_problem(const TestProblem& tp, double alpha, double tau);

}  // namespace tvtomo::tomo
