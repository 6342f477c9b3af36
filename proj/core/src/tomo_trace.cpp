#include <cmath>
#include <limits>
#include <stdexcept>

#include "tvtomo/tomo.hpp"

namespace tvtomo::tomo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<RaySegment> trace_ray(std::size_t m, std::size_t n, std::size_t l,
                                  const std::array<double, 3>& origin,
                                  const std::array<double, 3>& dir) {
  if (m == 0 || n == 0 || l == 0) throw std::invalid_argument("trace_ray: dimensions must be positive");
  const double nd = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  if (std::abs(nd - 1.0) > 1e-9) throw std::invalid_argument("trace_ray: direction must be unit length");

  const std::size_t dims[3] = {m, n, l};

  // Slab clipping of the full line against [0,1]^3.
  double tmin = -kInf, tmax = kInf;
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      // Lies in a coordinate plane; a point exactly on the lower face belongs
      // to the voxel below the cube, i.e. outside.
      if (!(origin[a] > 0.0 && origin[a] <= 1.0)) return {};
    } else {
      double t0 = (0.0 - origin[a]) / dir[a];
      double t1 = (1.0 - origin[a]) / dir[a];
      if (t0 > t1) std::swap(t0, t1);
      if (t0 > tmin) tmin = t0;
      if (t1 < tmax) tmax = t1;
    }
  }
  if (!(tmax > tmin)) return {};

  // Entry voxel and the per-axis crossing schedule.
  long idx[3];
  long step[3];
  double t_next[3], dt[3];
  for (int a = 0; a < 3; ++a) {
    const double d = static_cast<double>(dims[a]);
    if (dir[a] == 0.0) {
      const double s = origin[a] * d;
      const double fl = std::floor(s);
      long i = static_cast<long>(fl);
      if (s == fl) --i;  // exact face: lower-index voxel
      if (i < 0 || i >= static_cast<long>(dims[a])) return {};
      idx[a] = i;
      step[a] = 0;
      t_next[a] = kInf;
      dt[a] = kInf;
    } else {
      const double p = origin[a] + tmin * dir[a];
      long i = static_cast<long>(std::floor(p * d));
      if (i < 0) i = 0;
      if (i >= static_cast<long>(dims[a])) i = static_cast<long>(dims[a]) - 1;
      idx[a] = i;
      dt[a] = 1.0 / (d * std::abs(dir[a]));
      if (dir[a] > 0.0) {
        step[a] = 1;
        t_next[a] = (static_cast<double>(i + 1) / d - origin[a]) / dir[a];
      } else {
        step[a] = -1;
        t_next[a] = (static_cast<double>(i) / d - origin[a]) / dir[a];
      }
      // Entry rounding can put the first crossing an ulp behind tmin; snap it
      // forward so the march never runs backwards.
      if (t_next[a] < tmin) t_next[a] = tmin;
    }
  }

  std::vector<RaySegment> segs;
  segs.reserve(dims[0] + dims[1] + dims[2]);
  double t = tmin;
  const std::size_t guard = dims[0] + dims[1] + dims[2] + 3;
  for (std::size_t it = 0; it <= guard; ++it) {
    int amin = 0;
    if (t_next[1] < t_next[amin]) amin = 1;
    if (t_next[2] < t_next[amin]) amin = 2;
    const std::size_t voxel = static_cast<std::size_t>(idx[0]) +
                              m * (static_cast<std::size_t>(idx[1]) + n * static_cast<std::size_t>(idx[2]));
    if (t_next[amin] >= tmax) {
      if (tmax > t) segs.push_back({voxel, tmax - t});
      break;
    }
    if (t_next[amin] > t) segs.push_back({voxel, t_next[amin] - t});
    t = t_next[amin];
    idx[amin] += step[amin];
    if (idx[amin] < 0 || idx[amin] >= static_cast<long>(dims[amin])) break;
    t_next[amin] += dt[amin];
  }
  return segs;
}

}  // namespace tvtomo::tomo
