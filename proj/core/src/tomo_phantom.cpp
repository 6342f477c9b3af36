#include <cmath>
#include <stdexcept>

#include "tvtomo/tomo.hpp"

namespace tvtomo::tomo {

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

Ellipsoid make(double a, double ax, double ay, double az, double cx, double cy, double cz,
               double phi_deg, double theta_deg, double psi_deg) {
  Ellipsoid e;
  e.intensity = a;
  e.semi_axes = {ax, ay, az};
  e.center = {cx, cy, cz};
  e.euler_rad = {phi_deg * kDeg, theta_deg * kDeg, psi_deg * kDeg};
  return e;
}

// Row-major z-x-z Euler rotation; rows of the matrix.
std::array<std::array<double, 3>, 3> rotation(const std::array<double, 3>& euler) {
  const double cphi = std::cos(euler[0]), sphi = std::sin(euler[0]);
  const double cth = std::cos(euler[1]), sth = std::sin(euler[1]);
  const double cpsi = std::cos(euler[2]), spsi = std::sin(euler[2]);
  return {{{cpsi * cphi - cth * sphi * spsi, cpsi * sphi + cth * cphi * spsi, spsi * sth},
           {-spsi * cphi - cth * sphi * cpsi, -spsi * sphi + cth * cphi * cpsi, cpsi * sth},
           {sth * sphi, -sth * cphi, cth}}};
}

}  // namespace

const std::vector<Ellipsoid>& shepp_logan_ellipsoids() {
  static const std::vector<Ellipsoid> table = {
      make(1.0, 0.6900, 0.920, 0.810, 0.0, 0.0, 0.0, 0, 0, 0),
      make(-0.8, 0.6624, 0.874, 0.780, 0.0, -0.0184, 0.0, 0, 0, 0),
      make(-0.2, 0.1100, 0.310, 0.220, 0.22, 0.0, 0.0, -18, 0, 10),
      make(-0.2, 0.1600, 0.410, 0.280, -0.22, 0.0, 0.0, 18, 0, 10),
      make(0.1, 0.2100, 0.250, 0.410, 0.0, 0.35, -0.15, 0, 0, 0),
      make(0.1, 0.0460, 0.046, 0.050, 0.0, 0.10, 0.25, 0, 0, 0),
      make(0.1, 0.0460, 0.046, 0.050, 0.0, -0.10, 0.25, 0, 0, 0),
      make(0.1, 0.0460, 0.023, 0.050, -0.08, -0.605, 0.0, 0, 0, 0),
      make(0.1, 0.0230, 0.023, 0.020, 0.0, -0.606, 0.0, 0, 0, 0),
      make(0.1, 0.0230, 0.046, 0.020, 0.06, -0.605, 0.0, 0, 0, 0),
  };
  return table;
}

Volume shepp_logan_3d(std::size_t m, std::size_t n, std::size_t l) {
  if (m == 0 || n == 0 || l == 0)
    throw std::invalid_argument("shepp_logan_3d: dimensions must be positive");
  const auto& ellipsoids = shepp_logan_ellipsoids();

  struct Prepared {
    std::array<std::array<double, 3>, 3> rot;
    std::array<double, 3> center;
    std::array<double, 3> inv_axes_sq;
    double intensity;
  };
  std::vector<Prepared> prep;
  prep.reserve(ellipsoids.size());
  for (const Ellipsoid& e : ellipsoids) {
    Prepared p;
    p.rot = rotation(e.euler_rad);
    p.center = e.center;
    for (int i = 0; i < 3; ++i) {
      if (!(e.semi_axes[i] > 0.0)) throw std::invalid_argument("shepp_logan_3d: semi-axes must be positive");
      p.inv_axes_sq[i] = 1.0 / (e.semi_axes[i] * e.semi_axes[i]);
    }
    p.intensity = e.intensity;
    prep.push_back(p);
  }

  Volume vol(m, n, l);
  std::size_t v = 0;
  for (std::size_t k = 0; k < l; ++k) {
    const double qz = 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(l) - 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double qy = 2.0 * (static_cast<double>(j) + 0.5) / static_cast<double>(n) - 1.0;
      for (std::size_t i = 0; i < m; ++i, ++v) {
        const double qx = 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(m) - 1.0;
        double val = 0.0;
        for (const Prepared& p : prep) {
          double s = 0.0;
          for (int r = 0; r < 3; ++r) {
            const double w = p.rot[r][0] * qx + p.rot[r][1] * qy + p.rot[r][2] * qz - p.center[r];
            s += w * w * p.inv_axes_sq[r];
          }
          if (s <= 1.0) val += p.intensity;
        }
        vol.data[v] = val;
      }
    }
  }
  return vol;
}

}  // namespace tvtomo::tomo
