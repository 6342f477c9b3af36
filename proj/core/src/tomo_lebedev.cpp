#include <cmath>
#include <stdexcept>

#include "tvtomo/tomo.hpp"

namespace tvtomo::tomo {

namespace {

using Vec3 = std::array<double, 3>;

// Octahedral orbit generators in the conventional order.
void orbit_axes(std::vector<Vec3>& out) {  // 6 points
  out.insert(out.end(), {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
}

void orbit_edge_midpoints(std::vector<Vec3>& out) {  // 12 points
  const double s = 1.0 / std::sqrt(2.0);
  for (double a : {s, -s})
    for (double b : {s, -s}) out.push_back({0, a, b});
  for (double a : {s, -s})
    for (double b : {s, -s}) out.push_back({a, 0, b});
  for (double a : {s, -s})
    for (double b : {s, -s}) out.push_back({a, b, 0});
}

void orbit_corners(std::vector<Vec3>& out) {  // 8 points
  const double t = 1.0 / std::sqrt(3.0);
  for (double a : {t, -t})
    for (double b : {t, -t})
      for (double c : {t, -t}) out.push_back({a, b, c});
}

void orbit_aab(double a, std::vector<Vec3>& out) {  // 24 points (a, a, b)-type
  const double b = std::sqrt(1.0 - 2.0 * a * a);
  for (double sa : {a, -a})
    for (double sb : {a, -a})
      for (double sc : {b, -b}) out.push_back({sa, sb, sc});
  for (double sa : {a, -a})
    for (double sc : {b, -b})
      for (double sb : {a, -a}) out.push_back({sa, sc, sb});
  for (double sc : {b, -b})
    for (double sa : {a, -a})
      for (double sb : {a, -a}) out.push_back({sc, sa, sb});
}

void orbit_ab0(double a, std::vector<Vec3>& out) {  // 24 points (a, b, 0)-type
  const double b = std::sqrt(1.0 - a * a);
  for (double sa : {a, -a})
    for (double sb : {b, -b}) out.push_back({sa, sb, 0});
  for (double sb : {b, -b})
    for (double sa : {a, -a}) out.push_back({sb, sa, 0});
  for (double sa : {a, -a})
    for (double sb : {b, -b}) out.push_back({sa, 0, sb});
  for (double sb : {b, -b})
    for (double sa : {a, -a}) out.push_back({sb, 0, sa});
  for (double sa : {a, -a})
    for (double sb : {b, -b}) out.push_back({0, sa, sb});
  for (double sb : {b, -b})
    for (double sa : {a, -a}) out.push_back({0, sb, sa});
}

// Keeps one representative of each antipodal pair: positive last nonzero
// component wins. Orbit coordinates that are zero are exact zeros, so the
// comparisons are safe.
bool canonical(const Vec3& v) {
  if (v[2] != 0.0) return v[2] > 0.0;
  if (v[1] != 0.0) return v[1] > 0.0;
  return v[0] > 0.0;
}

}  // namespace

std::vector<Vec3> lebedev_directions(std::size_t n_proj) {
  std::vector<Vec3> pts;
  if (n_proj == 13) {
    orbit_axes(pts);
    orbit_edge_midpoints(pts);
    orbit_corners(pts);
  } else if (n_proj == 37) {
    orbit_axes(pts);
    orbit_edge_midpoints(pts);
    orbit_corners(pts);
    orbit_aab(0.4803844614152614, pts);
    orbit_ab0(0.3207726489807764, pts);
  } else {
    throw std::invalid_argument("lebedev_directions: unsupported count " + std::to_string(n_proj) +
                                " (supported: 13, 37)");
  }
  std::vector<Vec3> dirs;
  dirs.reserve(n_proj);
  for (const Vec3& v : pts)
    if (canonical(v)) dirs.push_back(v);
  if (dirs.size() != n_proj) throw std::logic_error("lebedev_directions: antipodal reduction miscount");
  return dirs;
}

}  // namespace tvtomo::tomo
