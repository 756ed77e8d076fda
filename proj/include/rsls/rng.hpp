#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace rsls {

// Stream domains, so that independent parts of an experiment never share a
// generator even under the same base seed.
inline constexpr std::uint64_t kStreamClusterModels = 0x636c7573;  // cluster draws
inline constexpr std::uint64_t kStreamTrials = 0x7472696c;         // Monte Carlo trials
inline constexpr std::uint64_t kStreamGeneric = 0x67656e72;        // everything else

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random stream. The engine is std::mt19937_64, which is
// bit-exact by the standard; the uniform and normal transforms are written
// out here because the std::*_distribution classes are implementation
// defined and would break reproducibility across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Independent stream addressed by (seed, domain, index). Used for
  // counter-based per-trial seeding: trial i draws from stream(seed, d, i)
  // regardless of which worker runs it or in which order.
  static Rng stream(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (0x9e3779b97f4a7c15ULL + domain));
    h = splitmix64(h ^ (0xd1b54a32d192ed03ULL + index));
    Rng r(0);
    r.engine_.seed(h);
    return r;
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller, one spare cached.
  double normal();

  // CN(0, 1): real and imaginary parts are N(0, 1/2). Uses its own
  // Box-Muller pair, so it does not interact with the normal() spare.
  std::complex<double> cnormal();

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rsls
