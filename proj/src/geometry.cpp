#include "rsls/geometry.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rsls {

UpaGeometry::UpaGeometry(int mh, int mv, double spacing_m, double wavelength_m)
    : m_h(mh), m_v(mv), spacing(spacing_m), wavelength(wavelength_m) {
  if (mh < 1 || mv < 1)
    throw std::invalid_argument("UpaGeometry: antenna counts must be >= 1");
  if (!(spacing_m > 0.0))
    throw std::invalid_argument("UpaGeometry: spacing must be positive");
  if (!(wavelength_m > 0.0))
    throw std::invalid_argument("UpaGeometry: wavelength must be positive");
}

Direction::Direction(double az, double el) : azimuth(az), elevation(el) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (!(az >= -half_pi && az <= half_pi))
    throw std::invalid_argument("Direction: azimuth outside [-pi/2, pi/2]");
  if (!(el >= -half_pi && el <= half_pi))
    throw std::invalid_argument("Direction: elevation outside [-pi/2, pi/2]");
}

Eigen::Vector3d antenna_position(const UpaGeometry& geom, int m) {
  if (m < 1 || m > geom.size())
    throw std::out_of_range("antenna_position: index " + std::to_string(m) +
                            " outside 1.." + std::to_string(geom.size()));
  const int i = (m - 1) % geom.m_h;
  const int j = (m - 1) / geom.m_h;
  return {0.0, i * geom.spacing, j * geom.spacing};
}

Eigen::Vector3d wave_vector(const Direction& dir, double wavelength) {
  if (!(wavelength > 0.0))
    throw std::invalid_argument("wave_vector: wavelength must be positive");
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double caz = std::cos(dir.azimuth), saz = std::sin(dir.azimuth);
  const double cel = std::cos(dir.elevation), sel = std::sin(dir.elevation);
  return {k * cel * caz, k * cel * saz, k * sel};
}

Eigen::VectorXcd array_response(const UpaGeometry& geom, const Direction& dir) {
  const Eigen::Vector3d k = wave_vector(dir, geom.wavelength);
  Eigen::VectorXcd a(geom.size());
  for (int m = 1; m <= geom.size(); ++m) {
    const double phase = k.dot(antenna_position(geom, m));
    a(m - 1) = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return a;
}

}  // namespace rsls
