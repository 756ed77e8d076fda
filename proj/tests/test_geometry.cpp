#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "rsls/geometry.hpp"
#include "rsls/rng.hpp"

using namespace rsls;
using std::numbers::pi;

TEST_CASE("antenna positions follow row-by-row numbering") {
  UpaGeometry g4(4, 3, 0.25, 1.0);
  CHECK(antenna_position(g4, 1).isZero(0.0));
  // m=5 wraps to the second row: i=0, j=1
  CHECK(antenna_position(g4, 5).isApprox(Eigen::Vector3d(0, 0, 0.25), 1e-15));

  UpaGeometry g12(12, 12, 0.025, 0.1);
  CHECK(antenna_position(g12, 14).isApprox(Eigen::Vector3d(0, 0.025, 0.025), 1e-15));

  CHECK_THROWS_AS(antenna_position(g4, 0), std::out_of_range);
  CHECK_THROWS_AS(antenna_position(g4, 13), std::out_of_range);
}

TEST_CASE("geometry and direction constructors validate") {
  CHECK_THROWS_AS(UpaGeometry(0, 2, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(UpaGeometry(2, 2, -0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(UpaGeometry(2, 2, 0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Direction(1.8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Direction(0.0, -1.8), std::invalid_argument);
  CHECK(UpaGeometry(2, 3, 0.1, 1.0).size() == 6);
  CHECK(UpaGeometry(2, 3, 0.25, 0.5).spacing_wl() == doctest::Approx(0.5));
}

TEST_CASE("wave vector components") {
  CHECK(wave_vector(Direction(0, 0), 1.0)
            .isApprox(Eigen::Vector3d(2 * pi, 0, 0), 1e-14));
  CHECK(wave_vector(Direction(pi / 2, 0), 1.0)
            .isApprox(Eigen::Vector3d(0, 2 * pi, 0), 1e-14));
  Eigen::Vector3d k = wave_vector(Direction(pi / 4, pi / 4), 0.1);
  Eigen::Vector3d expect = 20 * pi * Eigen::Vector3d(0.5, 0.5, std::sqrt(2.0) / 2);
  CHECK(k.isApprox(expect, 1e-13));
}

TEST_CASE("array response in special directions") {
  UpaGeometry g(3, 3, 0.025, 0.1);
  Eigen::VectorXcd broadside = array_response(g, Direction(0, 0));
  for (int m = 0; m < 9; ++m)
    CHECK(std::abs(broadside(m) - std::complex<double>(1, 0)) < 1e-14);

  // Two antennas half a wavelength apart along y, wave arriving along y:
  // the second element is a half-cycle behind.
  UpaGeometry pair(2, 1, 0.5, 1.0);
  Eigen::VectorXcd a = array_response(pair, Direction(pi / 2, 0));
  CHECK(std::abs(a(0) - std::complex<double>(1, 0)) < 1e-14);
  CHECK(std::abs(a(1) - std::complex<double>(-1, 0)) < 1e-13);
}

TEST_CASE("array response matches a scalar-loop evaluation") {
  UpaGeometry g(3, 3, 0.025, 0.1);
  Direction d(0.3, -0.2);
  Eigen::VectorXcd a = array_response(g, d);
  const double c = 2 * pi / g.wavelength;
  for (int m = 1; m <= 9; ++m) {
    const int i = (m - 1) % 3, j = (m - 1) / 3;
    const double phase = c * (std::cos(d.elevation) * std::sin(d.azimuth) * i * g.spacing +
                              std::sin(d.elevation) * j * g.spacing);
    CHECK(std::abs(a(m - 1) - std::polar(1.0, phase)) < 1e-13);
  }
}

TEST_CASE("array response entries are unit modulus for random inputs") {
  Rng rng = Rng::stream(7, kStreamGeneric, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    UpaGeometry g(1 + int(rng.uniform() * 6), 1 + int(rng.uniform() * 6),
                  rng.uniform(0.01, 0.3), rng.uniform(0.05, 0.5));
    Direction d(rng.uniform(-pi / 2, pi / 2), rng.uniform(-pi / 2, pi / 2));
    Eigen::VectorXcd a = array_response(g, d);
    CHECK(a.size() == g.size());
    for (int m = 0; m < a.size(); ++m) CHECK(std::abs(std::abs(a(m)) - 1.0) < 1e-12);
    // consistency with the two building blocks
    Eigen::Vector3d k = wave_vector(d, g.wavelength);
    for (int m = 1; m <= g.size(); ++m) {
      std::complex<double> direct = std::polar(1.0, k.dot(antenna_position(g, m)));
      CHECK(std::abs(a(m - 1) - direct) < 1e-12);
    }
  }
}

TEST_CASE("conjugate symmetry under negated direction") {
  // Negating both angles flips the sign of k's y and z components, which is
  // what negating the positions would do; x components are all zero.
  UpaGeometry g(4, 2, 0.03, 0.1);
  Eigen::VectorXcd plus = array_response(g, Direction(0.4, 0.25));
  Eigen::VectorXcd minus = array_response(g, Direction(-0.4, -0.25));
  CHECK((plus - minus.conjugate()).cwiseAbs().maxCoeff() < 1e-13);
}
