#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rsls/rng.hpp"
#include "rsls/se_analysis.hpp"

using namespace rsls;

namespace {

// Independent scalar evaluation used as the arithmetic oracle.
double oracle_se(double trsq, int M, int r, double beta, double rho, int tau_p,
                 int tau_c) {
  const double noise =
      rho * beta * beta * trsq + M * beta + (M * beta + r / rho) / tau_p;
  const double sinr = rho * M * M * beta * beta / noise;
  return (double(tau_c - tau_p) / tau_c) * std::log2(1.0 + sinr);
}

std::vector<double> random_population(Rng& rng, int M, int n) {
  // tr(R^2) can range from M (identity) to M^2 (rank one)
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = M * std::pow(double(M), rng.uniform());
  return out;
}

}  // namespace

TEST_CASE("closed-form SE matches the pinned scalar value") {
  // R = identity, M = r = 4, rho = beta = 1, tau_p = 2, tau_c = 10:
  // SINR = 16 / (4 + 4 + (4 + 4)/2) = 4/3
  const double se = se_closed_form(4.0, 4, 4, 1.0, 1.0, 2, 10);
  CHECK(se == doctest::Approx(0.8 * std::log2(7.0 / 3.0)).epsilon(1e-14));

  Rng rng = Rng::stream(11, kStreamGeneric, 0);
  for (int i = 0; i < 200; ++i) {
    const int M = 4 + int(rng.uniform() * 60);
    const int r = 1 + int(rng.uniform() * M);
    const double trsq = M * (1 + rng.uniform() * (M - 1));
    const double beta = std::pow(10.0, rng.uniform(-14, 0));
    const double rho = std::pow(10.0, rng.uniform(0, 12));
    const int tau_c = 2 + int(rng.uniform() * 400);
    const int tau_p = 1 + int(rng.uniform() * (tau_c - 1));
    const double got = se_closed_form(trsq, M, r, beta, rho, tau_p, tau_c);
    const double want = oracle_se(trsq, M, r, beta, rho, tau_p, tau_c);
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("SE limits") {
  CHECK(se_closed_form(4.0, 4, 4, 1.0, 1e-15, 2, 10) < 1e-10);  // rho -> 0
  CHECK(se_closed_form(4.0, 4, 4, 1.0, 1.0, 10, 10) == 0.0);    // tau_p = tau_c
  CHECK_THROWS_AS(se_closed_form(4.0, 4, 4, 1.0, 1.0, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(se_closed_form(4.0, 4, 4, 1.0, 1.0, 11, 10), std::invalid_argument);
}

TEST_CASE("SE depends on beta and rho only through their product") {
  Rng rng = Rng::stream(12, kStreamGeneric, 0);
  for (int i = 0; i < 100; ++i) {
    const double beta = std::pow(10.0, rng.uniform(-14, -2));
    const double rho = std::pow(10.0, rng.uniform(2, 12));
    const double c = std::pow(10.0, rng.uniform(-3, 3));
    const double a = se_closed_form(40.0, 16, 12, beta, rho, 5, 100);
    const double b = se_closed_form(40.0, 16, 12, beta / c, rho * c, 5, 100);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("average SE over samples") {
  const std::vector<double> single = {37.0};
  MeanStderr one = average_se_exact(single, 16, 12, 1e-13, 1e11, 7, 200);
  CHECK(one.mean == se_closed_form(37.0, 16, 12, 1e-13, 1e11, 7, 200));
  CHECK(one.std_error == 0.0);

  const std::vector<double> same = {37.0, 37.0, 37.0};
  MeanStderr rep = average_se_exact(same, 16, 12, 1e-13, 1e11, 7, 200);
  CHECK(rep.mean == doctest::Approx(one.mean).epsilon(1e-15));
  CHECK(rep.std_error == 0.0);

  CHECK_THROWS_AS(average_se_exact({}, 16, 12, 1e-13, 1e11, 7, 200),
                  std::invalid_argument);
}

TEST_CASE("A and B constants") {
  // identity-population special case: M = r, SNR = rho*beta = 1
  AbConstants ab = ab_constants(8.0, 8, 8, 1.0, 1.0);
  CHECK(ab.a_const == doctest::Approx(2.0 / 8).epsilon(1e-14));
  CHECK(ab.b_const == doctest::Approx(2.0 / 8).epsilon(1e-14));

  // SNR-parameterized form agrees with the (beta, rho) form
  Rng rng = Rng::stream(13, kStreamGeneric, 0);
  for (int i = 0; i < 100; ++i) {
    const int M = 4 + int(rng.uniform() * 60);
    const int r = 1 + int(rng.uniform() * M);
    const double mean_trsq = M * (1 + rng.uniform() * (M - 1));
    const double beta = std::pow(10.0, rng.uniform(-14, -2));
    const double rho = std::pow(10.0, rng.uniform(2, 12));
    const double snr = rho * beta;
    AbConstants got = ab_constants(mean_trsq, M, r, beta, rho);
    CHECK(got.a_const ==
          doctest::Approx(mean_trsq / (double(M) * M) + 1.0 / (snr * M)).epsilon(1e-12));
    CHECK(got.b_const ==
          doctest::Approx(1.0 / (snr * M) + r / (snr * snr * double(M) * M)).epsilon(1e-12));
  }

  // SNR -> infinity limit
  AbConstants hi = ab_constants(100.0, 16, 12, 1.0, 1e15);
  CHECK(hi.a_const == doctest::Approx(100.0 / 256).epsilon(1e-10));
  CHECK(hi.b_const < 1e-12);
}

TEST_CASE("lower bound pinned value and range checks") {
  const AbConstants ab{1.0, 1.0};
  CHECK(average_se_lower_bound(ab, 5, 10) ==
        doctest::Approx(0.5 * std::log2(1.0 + 1.0 / 1.2)).epsilon(1e-14));
  CHECK_THROWS_AS(average_se_lower_bound(ab, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(average_se_lower_bound(ab, 11, 10), std::invalid_argument);
  // the tau_p = tau_c endpoint is a legal boundary point with zero SE
  CHECK(average_se_lower_bound(ab, 10, 10) == 0.0);
  CHECK(average_se_lower_bound_real(ab, 10.0, 10) == 0.0);
}

TEST_CASE("Jensen: the bound never exceeds the exact sample average") {
  Rng rng = Rng::stream(14, kStreamGeneric, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const int M = 16;
    std::vector<double> pop = random_population(rng, M, 50);
    const int r = 10;
    const double beta = 1e-13, rho = 1e11;
    double mean_trsq = 0;
    for (double t : pop) mean_trsq += t;
    mean_trsq /= pop.size();
    AbConstants ab = ab_constants(mean_trsq, M, r, beta, rho);
    for (int tau_p = 1; tau_p < 200; ++tau_p) {
      const double exact = average_se_exact(pop, M, r, beta, rho, tau_p, 200).mean;
      const double bound = average_se_lower_bound(ab, tau_p, 200);
      CHECK(bound <= exact * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("low-SNR pilot length closed form") {
  // A = B makes tau* = sqrt(1 + tau_c) - 1
  const AbConstants eq{0.37, 0.37};
  CHECK(low_snr_tau_star(eq, 200) == doctest::Approx(std::sqrt(201.0) - 1).epsilon(1e-12));

  // tau* is a stationary point of the linearized objective
  Rng rng = Rng::stream(15, kStreamGeneric, 0);
  for (int i = 0; i < 100; ++i) {
    AbConstants ab{std::pow(10.0, rng.uniform(-3, 2)), std::pow(10.0, rng.uniform(-3, 2))};
    const double ts = low_snr_tau_star(ab, 200);
    CHECK(ts > 0.0);
    const double h = 1e-5 * std::max(1.0, ts);
    const double d =
        (low_snr_objective(ab, ts + h, 200) - low_snr_objective(ab, ts - h, 200)) / (2 * h);
    const double scale = low_snr_objective(ab, ts, 200) / ts;
    CHECK(std::abs(d) < 1e-6 * std::abs(scale));
  }

  // B -> 0: tau* ~ sqrt(B tau_c / A) vanishes and the integer pick is 1
  const AbConstants tiny_b{0.5, 1e-18};
  CHECK(low_snr_tau_star(tiny_b, 200) ==
        doctest::Approx(std::sqrt(1e-18 * 200 / 0.5)).epsilon(1e-6));
  CHECK(low_snr_tau_star_int(tiny_b, 200) == 1);
}

TEST_CASE("integer rounding of tau* picks the better neighbor under the bound") {
  Rng rng = Rng::stream(16, kStreamGeneric, 0);
  for (int i = 0; i < 500; ++i) {
    AbConstants ab{std::pow(10.0, rng.uniform(-3, 2)), std::pow(10.0, rng.uniform(-3, 2))};
    const int tau_c = 50 + int(rng.uniform() * 300);
    const double ts = low_snr_tau_star(ab, tau_c);
    const int pick = low_snr_tau_star_int(ab, tau_c);
    CHECK(pick >= 1);
    CHECK(pick <= tau_c - 1);
    auto clamp = [&](int t) { return std::clamp(t, 1, tau_c - 1); };
    const int lo = clamp(int(std::floor(ts))), hi = clamp(int(std::ceil(ts)));
    const double se_lo = average_se_lower_bound(ab, lo, tau_c);
    const double se_hi = average_se_lower_bound(ab, hi, tau_c);
    if (se_lo >= se_hi)
      CHECK(pick == std::min(lo, hi));
    else
      CHECK(pick == hi);
    CHECK(average_se_lower_bound(ab, pick, tau_c) ==
          doctest::Approx(std::max(se_lo, se_hi)).epsilon(1e-14));
  }
}

TEST_CASE("lower-bound optimizer equals exhaustive argmax and tracks the grid maximizer") {
  Rng rng = Rng::stream(17, kStreamGeneric, 0);
  for (int rep = 0; rep < 60; ++rep) {
    const int M = 8 + int(rng.uniform() * 40);
    const int r = 1 + int(rng.uniform() * M);
    std::vector<double> pop = random_population(rng, M, 30);
    const double beta = std::pow(10.0, rng.uniform(-14, -10));
    const double rho = std::pow(10.0, rng.uniform(9, 13));
    const int tau_c = 2 + int(rng.uniform() * 300);

    const int scan = optimize_pilot_length(PilotObjective::lower_bound, pop, M, r, beta,
                                           rho, tau_c);
    double mean_trsq = 0;
    for (double t : pop) mean_trsq += t;
    mean_trsq /= pop.size();
    AbConstants ab = ab_constants(mean_trsq, M, r, beta, rho);
    int exhaustive = 1;
    double best = average_se_lower_bound(ab, 1, tau_c);
    for (int t = 2; t < tau_c; ++t) {
      const double v = average_se_lower_bound(ab, t, tau_c);
      if (v > best) {
        best = v;
        exhaustive = t;
      }
    }
    CHECK(scan == exhaustive);

    // within one integer of the continuous maximizer
    double grid_best = -1, grid_arg = 1;
    for (double t = 1.0; t <= tau_c - 1 + 1e-9; t += 1e-3) {
      const double v = average_se_lower_bound_real(ab, t, tau_c);
      if (v > grid_best) {
        grid_best = v;
        grid_arg = t;
      }
    }
    CHECK(std::abs(scan - grid_arg) <= 1.0 + 1e-6);
  }
}

TEST_CASE("exact-average optimizer maximizes over the full range") {
  Rng rng = Rng::stream(18, kStreamGeneric, 0);
  std::vector<double> pop = random_population(rng, 16, 40);
  const double beta = 1e-13, rho = 1e11;
  const int tau_c = 150;
  const int got = optimize_pilot_length(PilotObjective::exact_avg, pop, 16, 12, beta,
                                        rho, tau_c);
  int want = 1;
  double best = average_se_exact(pop, 16, 12, beta, rho, 1, tau_c).mean;
  for (int t = 2; t < tau_c; ++t) {
    const double v = average_se_exact(pop, 16, 12, beta, rho, t, tau_c).mean;
    if (v > best) {
      best = v;
      want = t;
    }
  }
  CHECK(got == want);
}

TEST_CASE("high SNR pushes the recommendation to one pilot symbol") {
  std::vector<double> pop = {16.0};  // identity-like population
  // +20 dB: rho*beta = 100
  const int tau = optimize_pilot_length(PilotObjective::lower_bound, pop, 16, 16, 1.0,
                                        100.0, 200);
  CHECK(tau <= 2);

  // very low SNR needs far more pilots
  const int tau_low = optimize_pilot_length(PilotObjective::lower_bound, pop, 16, 16,
                                            1.0, 1e-3, 200);
  CHECK(tau_low > tau);
}

TEST_CASE("concavity certificate holds for random constants") {
  Rng rng = Rng::stream(19, kStreamGeneric, 0);
  for (int i = 0; i < 1000; ++i) {
    AbConstants ab{std::pow(10.0, rng.uniform(-4, 4)), std::pow(10.0, rng.uniform(-4, 4))};
    ConcavityReport rep = concavity_certificate(ab, 200);
    CAPTURE(ab.a_const);
    CAPTURE(ab.b_const);
    CHECK(rep.pass);
    CHECK(rep.max_closed_form < 0.0);
    // flat curves bottom out at the rounding floor of log2(1 + x), so the
    // discrete differences are only negative up to that allowance
    CHECK(rep.max_discrete < 2e-14);
    CHECK(rep.endpoint_value == 0.0);
    CHECK(std::abs(rep.origin_limit) < 1e-6);
  }
}

TEST_CASE("closed-form second derivative agrees with finite differences") {
  Rng rng = Rng::stream(20, kStreamGeneric, 0);
  const int tau_c = 200;
  for (int i = 0; i < 200; ++i) {
    AbConstants ab{std::pow(10.0, rng.uniform(-1.3, 1.3)),
                   std::pow(10.0, rng.uniform(-1.3, 1.3))};
    for (double tau : {3.0, 10.0, 50.0, 150.0}) {
      const double h = 0.05;
      auto f = [&](double t) { return average_se_lower_bound_real(ab, t, tau_c); };
      const double fd = (-f(tau - 2 * h) + 16 * f(tau - h) - 30 * f(tau) +
                         16 * f(tau + h) - f(tau + 2 * h)) /
                        (12 * h * h);
      const double cf = lower_bound_second_derivative(ab, tau, tau_c);
      CHECK(std::abs(fd - cf) < 1e-6 * std::abs(cf) + 1e-12);
    }
  }
}

TEST_CASE("integer lower-bound curve is unimodal") {
  Rng rng = Rng::stream(21, kStreamGeneric, 0);
  for (int i = 0; i < 200; ++i) {
    AbConstants ab{std::pow(10.0, rng.uniform(-4, 4)), std::pow(10.0, rng.uniform(-4, 4))};
    const int tau_c = 200;
    int direction_changes = 0;
    double prev = average_se_lower_bound(ab, 1, tau_c);
    bool falling = false;
    for (int t = 2; t < tau_c; ++t) {
      const double v = average_se_lower_bound(ab, t, tau_c);
      if (v < prev && !falling) {
        falling = true;
        ++direction_changes;
      } else if (v > prev && falling) {
        // a rise after a fall would be a second mode
        ++direction_changes;
      }
      prev = v;
    }
    CHECK(direction_changes <= 1);
  }
}

TEST_CASE("full curve wiring: points, optima, and recommendation agree") {
  Rng rng = Rng::stream(22, kStreamGeneric, 0);
  std::vector<double> pop = random_population(rng, 16, 60);
  const double beta = 1e-13, rho = 1e11;
  const int tau_c = 120;
  SeCurve curve = compute_se_curve(pop, 16, 12, beta, rho, tau_c);

  REQUIRE(int(curve.points.size()) == tau_c - 1);
  CHECK(curve.tau_c == tau_c);
  CHECK(curve.rank == 12);

  double best_exact = -1, best_bound = -1;
  int arg_exact = 0, arg_bound = 0;
  for (const SePoint& p : curve.points) {
    CHECK(p.se_exact_avg >= 0.0);
    CHECK(p.se_lower_bound <= p.se_exact_avg * (1 + 1e-12) + 1e-15);
    if (p.se_exact_avg > best_exact) {
      best_exact = p.se_exact_avg;
      arg_exact = p.tau_p;
    }
    if (p.se_lower_bound > best_bound) {
      best_bound = p.se_lower_bound;
      arg_bound = p.tau_p;
    }
  }
  CHECK(curve.rec.tau_opt_exact == arg_exact);
  CHECK(curve.rec.tau_opt_bound == arg_bound);
  CHECK(curve.rec.se_exact_at_opt_exact == doctest::Approx(best_exact).epsilon(1e-14));
  CHECK(curve.rec.se_bound_at_opt_bound == doctest::Approx(best_bound).epsilon(1e-14));
  CHECK(curve.rec.tau_star_int >= 1);
  CHECK(curve.rec.tau_star_int <= tau_c - 1);

  const double expected_noise = effective_noise_power(pop[0], 16, 12, beta, rho, 9);
  const double manual =
      rho * beta * beta * pop[0] + 16 * beta + (16 * beta + 12 / rho) / 9.0;
  CHECK(expected_noise == doctest::Approx(manual).epsilon(1e-14));
}
