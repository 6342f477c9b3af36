#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "tvtomo/cgls.hpp"
#include "tvtomo/linear_operator.hpp"
#include "tvtomo/parallel.hpp"
#include "tvtomo/rng.hpp"
#include "tvtomo/tomo.hpp"

namespace tvtomo::tomo {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

void normalize(Vec3& v) {
  const double n = std::sqrt(dot3(v, v));
  for (double& c : v) c /= n;
}

// In-plane detector basis: start from the coordinate axis least aligned with
// the beam (lowest index on ties), orthogonalize against it, complete with
// the cross product. Deterministic in the direction alone.
void detector_basis(const Vec3& d, Vec3& e1, Vec3& e2) {
  int axis = 0;
  double best = std::abs(d[0]);
  for (int a = 1; a < 3; ++a) {
    if (std::abs(d[a]) < best) {
      best = std::abs(d[a]);
      axis = a;
    }
  }
  e1 = {0.0, 0.0, 0.0};
  e1[axis] = 1.0;
  const double proj = dot3(e1, d);
  for (int a = 0; a < 3; ++a) e1[a] -= proj * d[a];
  normalize(e1);
  e2 = cross(d, e1);
}

}  // namespace

ProjectionGeometry make_geometry(std::size_t n_proj, std::size_t det_pixels) {
  if (det_pixels == 0) throw std::invalid_argument("make_geometry: det_pixels must be positive");
  ProjectionGeometry g;
  g.directions = lebedev_directions(n_proj);
  g.det_pixels = det_pixels;
  return g;
}

SparseMatrix build_system_matrix(const ProjectionGeometry& g, std::size_t m, std::size_t n,
                                 std::size_t l) {
  const std::size_t p = g.det_pixels;
  const std::size_t rays_per_dir = p * p;
  const std::size_t total_rays = g.directions.size() * rays_per_dir;
  const double pitch = g.det_extent / static_cast<double>(p);
  const Vec3 cube_center = {0.5, 0.5, 0.5};

  std::vector<std::vector<RaySegment>> rows(total_rays);
  parallel_for(total_rays, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ray = begin; ray < end; ++ray) {
      const std::size_t dir_i = ray / rays_per_dir;
      const std::size_t rem = ray % rays_per_dir;
      const std::size_t iv = rem / p;
      const std::size_t iu = rem % p;
      const Vec3& d = g.directions[dir_i];
      Vec3 e1, e2;
      detector_basis(d, e1, e2);
      // Detector plane through the origin, recentered on the projection of
      // the cube center.
      const double coff = dot3(cube_center, d);
      Vec3 det_center;
      for (int a = 0; a < 3; ++a) det_center[a] = cube_center[a] - coff * d[a];
      const double u = (static_cast<double>(iu) + 0.5) * pitch - 0.5 * g.det_extent;
      const double v = (static_cast<double>(iv) + 0.5) * pitch - 0.5 * g.det_extent;
      Vec3 origin;
      for (int a = 0; a < 3; ++a) origin[a] = det_center[a] + u * e1[a] + v * e2[a];
      rows[ray] = trace_ray(m, n, l, origin, d);
    }
  });

  std::size_t nnz = 0, kept = 0;
  for (const auto& r : rows) {
    nnz += r.size();
    if (!r.empty()) ++kept;
  }
  std::vector<std::size_t> offsets;
  offsets.reserve(kept + 1);
  offsets.push_back(0);
  std::vector<std::uint32_t> cols;
  cols.reserve(nnz);
  std::vector<double> vals;
  vals.reserve(nnz);
  std::vector<std::pair<std::size_t, double>> entries;
  for (auto& r : rows) {
    if (r.empty()) continue;
    entries.clear();
    entries.reserve(r.size());
    for (const RaySegment& s : r) entries.emplace_back(s.voxel, s.length);
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i > 0 && entries[i].first == entries[i - 1].first) {
        vals.back() += entries[i].second;  // a ray cannot revisit a voxel, but stay safe
      } else {
        cols.push_back(static_cast<std::uint32_t>(entries[i].first));
        vals.push_back(entries[i].second);
      }
    }
    offsets.push_back(vals.size());
    r.clear();
    r.shrink_to_fit();
  }
  const std::size_t n_rows = offsets.size() - 1;  // before the move below
  return SparseMatrix::from_csr(n_rows, m * n * l, std::move(offsets), std::move(cols),
                                std::move(vals));
}

DenseVector add_noise(const DenseVector& b, double rel_level, std::uint64_t seed) {
  if (rel_level < 0.0) throw std::invalid_argument("add_noise: rel_level must be nonnegative");
  if (rel_level == 0.0) return b;
  const double nb = norm2(b);
  if (nb == 0.0) throw std::invalid_argument("add_noise: b is zero, relative level undefined");
  Rng rng(seed);
  DenseVector e(b.size());
  for (double& v : e) v = rng.gaussian();
  const double ne = norm2(e);
  if (ne == 0.0) throw std::runtime_error("add_noise: degenerate noise draw");
  const double s = rel_level * nb / ne;
  DenseVector out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i] + s * e[i];
  return out;
}

std::optional<ProblemSpec> preset(const std::string& name) {
  ProblemSpec s;
  s.noise = 0.01;
  if (name == "T1") {
    s.m = s.n = s.l = 43;
    s.det_pixels = 63;
    s.n_proj = 37;
  } else if (name == "T2") {
    s.m = s.n = s.l = 43;
    s.det_pixels = 63;
    s.n_proj = 13;
  } else if (name == "T1-desk") {
    s.m = s.n = s.l = 21;
    s.det_pixels = 31;
    s.n_proj = 37;
  } else if (name == "T2-desk") {
    s.m = s.n = s.l = 21;
    s.det_pixels = 31;
    s.n_proj = 13;
  } else {
    return std::nullopt;
  }
  return s;
}

std::vector<std::string> preset_names() { return {"T1", "T2", "T1-desk", "T2-desk"}; }

TestProblem make_test_problem(const ProblemSpec& spec) {
  if (spec.m == 0 || spec.n == 0 || spec.l == 0 || spec.det_pixels == 0)
    throw std::invalid_argument("make_test_problem: dimensions must be positive");
  TestProblem tp;
  tp.spec = spec;
  tp.x_exact = shepp_logan_3d(spec.m, spec.n, spec.l);
  const ProjectionGeometry g = make_geometry(spec.n_proj, spec.det_pixels);
  tp.a = build_system_matrix(g, spec.m, spec.n, spec.l);
  DenseVector b = tp.a.apply(tp.x_exact.data);
  tp.b = add_noise(b, spec.noise, spec.seed);
  const SparseMatrixOperator op(tp.a);
  tp.x0 = cgls_warm_start(op, tp.b, 5);
  return tp;
}

TvRegProblem make_tvreg_problem(const TestProblem& tp, double alpha, double tau) {
  return TvRegProblem(tp.a, tp.b, alpha, tau, tp.spec.m, tp.spec.n, tp.spec.l);
}

}  // namespace tvtomo::tomo
