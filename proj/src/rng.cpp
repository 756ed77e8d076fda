#include "rsls/rng.hpp"

#include <cmath>
#include <numbers>

namespace rsls {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // 1 - uniform() keeps the argument of log strictly positive.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = mag * std::sin(ang);
  have_spare_ = true;
  return mag * std::cos(ang);
}

std::complex<double> Rng::cnormal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  // Box-Muller pair scaled by 1/sqrt(2) collapses to this polar form.
  const double mag = std::sqrt(-std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  return {mag * std::cos(ang), mag * std::sin(ang)};
}

}  // namespace rsls
