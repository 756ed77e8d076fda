#include <doctest.h>

#include <cmath>
#include <vector>

#include "rsls/parallel.hpp"
#include "rsls/rng.hpp"

using namespace rsls;

TEST_CASE("streams are deterministic and index-separated") {
  Rng a = Rng::stream(42, kStreamTrials, 7);
  Rng b = Rng::stream(42, kStreamTrials, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c = Rng::stream(42, kStreamTrials, 8);
  Rng d = Rng::stream(42, kStreamClusterModels, 7);
  Rng e = Rng::stream(43, kStreamTrials, 7);
  // Different index, domain, or seed: first words should already differ.
  Rng a2 = Rng::stream(42, kStreamTrials, 7);
  const std::uint64_t first = a2.next_u64();
  CHECK(c.next_u64() != first);
  CHECK(d.next_u64() != first);
  CHECK(e.next_u64() != first);
}

TEST_CASE("uniform covers [0,1) with the right mean and variance") {
  Rng rng = Rng::stream(1, kStreamGeneric, 1);
  const int n = 200000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 3.0 / std::sqrt(12.0 * n));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("normal moments") {
  Rng rng = Rng::stream(2, kStreamGeneric, 0);
  const int n = 200000;
  double sum = 0, sumsq = 0, sum4 = 0;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal();
    sum += x;
    sumsq += x * x;
    sum4 += x * x * x * x;
  }
  CHECK(std::abs(sum / n) < 3.0 / std::sqrt(double(n)));
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sum4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("complex normal has unit power split evenly") {
  Rng rng = Rng::stream(3, kStreamGeneric, 0);
  const int n = 200000;
  double p = 0, re2 = 0, im2 = 0;
  std::complex<double> mean = 0;
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = rng.cnormal();
    p += std::norm(z);
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    mean += z;
  }
  CHECK(p / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.03));
  CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.03));
  CHECK(std::abs(mean) / n < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("chunked_reduce is bit-identical across worker counts") {
  auto run = [](unsigned workers) {
    return chunked_reduce(
        100000, 4096, workers, 0.0,
        [](std::size_t b, std::size_t e) {
          double s = 0;
          for (std::size_t i = b; i < e; ++i) {
            Rng rng = Rng::stream(5, kStreamTrials, i);
            s += rng.normal() * rng.uniform();
          }
          return s;
        },
        [](double a, double b) { return a + b; });
  };
  const double w1 = run(1);
  CHECK(w1 == run(2));
  CHECK(w1 == run(4));
  CHECK(w1 == run(7));
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 57) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}
