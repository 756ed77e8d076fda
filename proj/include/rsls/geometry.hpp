#pragma once

#include <Eigen/Dense>

namespace rsls {

// Uniform planar array in the yz plane, numbered row by row: antenna m
// (1-based, m in 1..M) sits at [0, i*spacing, j*spacing] with
// i = (m-1) mod m_h and j = floor((m-1) / m_h).
struct UpaGeometry {
  int m_h;
  int m_v;
  double spacing;     // meters
  double wavelength;  // meters

  UpaGeometry(int mh, int mv, double spacing_m, double wavelength_m);

  int size() const { return m_h * m_v; }
  double spacing_wl() const { return spacing / wavelength; }

  bool operator==(const UpaGeometry& o) const = default;
};

// Azimuth/elevation pair, both restricted to [-pi/2, pi/2]: waves arrive
// only from in front of the array.
struct Direction {
  double azimuth;    // radians
  double elevation;  // radians

  Direction(double az, double el);
};

// Position of antenna m (1-based) in meters.
Eigen::Vector3d antenna_position(const UpaGeometry& geom, int m);

// (2*pi/lambda) * [cos(el)cos(az), cos(el)sin(az), sin(el)]
Eigen::Vector3d wave_vector(const Direction& dir, double wavelength);

// Plane-wave response: entry m is exp(j * k(dir) . u_m). The antenna at the
// origin always gets entry 1.
Eigen::VectorXcd array_response(const UpaGeometry& geom, const Direction& dir);

}  // namespace rsls
