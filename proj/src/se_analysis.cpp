#include "rsls/se_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rsls {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

double average_of(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("empty sample set");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void check_tau_range(int tau_p, int tau_c, bool allow_endpoint) {
  if (tau_c < 2) throw std::invalid_argument("tau_c must be at least 2");
  const int hi = allow_endpoint ? tau_c : tau_c - 1;
  if (tau_p < 1 || tau_p > hi)
    throw std::invalid_argument("tau_p outside [1, " + std::to_string(hi) + "]");
}

}  // namespace

double effective_noise_power(double tr_r_squared, int M, int r, double beta,
                             double rho, int tau_p) {
  check_positive(beta, "beta");
  check_positive(rho, "rho");
  if (tau_p < 1) throw std::invalid_argument("tau_p must be >= 1");
  const double m_beta = M * beta;
  return rho * beta * beta * tr_r_squared + m_beta + (m_beta + r / rho) / tau_p;
}

double se_closed_form(double tr_r_squared, int M, int r, double beta, double rho,
                      int tau_p, int tau_c) {
  check_tau_range(tau_p, tau_c, /*allow_endpoint=*/true);
  const double prelog = static_cast<double>(tau_c - tau_p) / tau_c;
  if (prelog == 0.0) return 0.0;
  const double signal = rho * static_cast<double>(M) * M * beta * beta;
  const double sinr = signal / effective_noise_power(tr_r_squared, M, r, beta, rho, tau_p);
  return prelog * std::log2(1.0 + sinr);
}

MeanStderr average_se_exact(const std::vector<double>& samples, int M, int r,
                            double beta, double rho, int tau_p, int tau_c) {
  if (samples.empty())
    throw std::invalid_argument("average_se_exact: empty sample set");
  double sum = 0.0, sum_sq = 0.0;
  for (double trsq : samples) {
    const double se = se_closed_form(trsq, M, r, beta, rho, tau_p, tau_c);
    sum += se;
    sum_sq += se * se;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double std_error = 0.0;
  if (samples.size() > 1) {
    const double var = std::max(sum_sq / n - mean * mean, 0.0) * n / (n - 1.0);
    std_error = std::sqrt(var / n);
  }
  return {mean, std_error};
}

AbConstants ab_constants(double mean_tr_r_squared, int M, int r, double beta, double rho) {
  check_positive(beta, "beta");
  check_positive(rho, "rho");
  check_positive(mean_tr_r_squared, "mean tr(R^2)");
  const double m2 = static_cast<double>(M) * M;
  const double a = mean_tr_r_squared / m2 + 1.0 / (rho * M * beta);
  const double b = (M / beta + r / (rho * beta * beta)) / (rho * m2);
  return {a, b};
}

double average_se_lower_bound_real(const AbConstants& ab, double tau_p, int tau_c) {
  if (!(tau_p > 0.0) || tau_p > tau_c)
    throw std::invalid_argument("average_se_lower_bound: tau_p outside (0, tau_c]");
  const double prelog = (tau_c - tau_p) / tau_c;
  return prelog * std::log2(1.0 + 1.0 / (ab.a_const + ab.b_const / tau_p));
}

double average_se_lower_bound(const AbConstants& ab, int tau_p, int tau_c) {
  check_tau_range(tau_p, tau_c, /*allow_endpoint=*/true);
  return average_se_lower_bound_real(ab, tau_p, tau_c);
}

double low_snr_objective(const AbConstants& ab, double tau_p, int tau_c) {
  if (!(tau_p > 0.0) || tau_p > tau_c)
    throw std::invalid_argument("low_snr_objective: tau_p outside (0, tau_c]");
  const double prelog = (tau_c - tau_p) / tau_c;
  return std::numbers::log2e * prelog / (ab.a_const + ab.b_const / tau_p);
}

double low_snr_tau_star(const AbConstants& ab, int tau_c) {
  check_positive(ab.a_const, "A");
  if (ab.b_const < 0.0) throw std::invalid_argument("B must be nonnegative");
  const double a = ab.a_const, b = ab.b_const;
  return (std::sqrt(b * (b + a * tau_c)) - b) / a;
}

int low_snr_tau_star_int(const AbConstants& ab, int tau_c) {
  const double star = low_snr_tau_star(ab, tau_c);
  auto clamp = [tau_c](int t) { return std::min(std::max(t, 1), tau_c - 1); };
  const int lo = clamp(static_cast<int>(std::floor(star)));
  const int hi = clamp(static_cast<int>(std::ceil(star)));
  if (lo == hi) return lo;
  const double se_lo = average_se_lower_bound(ab, lo, tau_c);
  const double se_hi = average_se_lower_bound(ab, hi, tau_c);
  return se_hi > se_lo ? hi : lo;  // ties pick the shorter pilot
}

int optimize_pilot_length(PilotObjective objective, const std::vector<double>& samples,
                          int M, int r, double beta, double rho, int tau_c) {
  if (tau_c < 2) throw std::invalid_argument("optimize_pilot_length: tau_c must be >= 2");
  if (objective == PilotObjective::lower_bound) {
    // Strict concavity means the integer sequence rises to a single peak and
    // then falls, so the first decrease ends the search.
    const AbConstants ab = ab_constants(average_of(samples), M, r, beta, rho);
    int best_tau = 1;
    double best = average_se_lower_bound(ab, 1, tau_c);
    for (int tau = 2; tau <= tau_c - 1; ++tau) {
      const double se = average_se_lower_bound(ab, tau, tau_c);
      if (se > best) {
        best = se;
        best_tau = tau;
      } else if (se < best) {
        break;
      }
    }
    return best_tau;
  }
  // Monte Carlo curve: sampling noise can fake local maxima, so scan fully.
  int best_tau = 1;
  double best = average_se_exact(samples, M, r, beta, rho, 1, tau_c).mean;
  for (int tau = 2; tau <= tau_c - 1; ++tau) {
    const double se = average_se_exact(samples, M, r, beta, rho, tau, tau_c).mean;
    if (se > best) {
      best = se;
      best_tau = tau;
    }
  }
  return best_tau;
}

PilotRecommendation recommend_pilot_length(const std::vector<double>& samples, int M,
                                           int r, double beta, double rho, int tau_c) {
  if (samples.empty())
    throw std::invalid_argument("recommend_pilot_length: empty sample set");
  const AbConstants ab = ab_constants(average_of(samples), M, r, beta, rho);

  PilotRecommendation rec;
  rec.tau_opt_exact =
      optimize_pilot_length(PilotObjective::exact_avg, samples, M, r, beta, rho, tau_c);
  rec.tau_opt_bound =
      optimize_pilot_length(PilotObjective::lower_bound, samples, M, r, beta, rho, tau_c);
  rec.tau_star_low_snr = low_snr_tau_star(ab, tau_c);
  rec.tau_star_int = low_snr_tau_star_int(ab, tau_c);

  const MeanStderr at_exact =
      average_se_exact(samples, M, r, beta, rho, rec.tau_opt_exact, tau_c);
  rec.se_exact_at_opt_exact = at_exact.mean;
  rec.se_exact_stderr_at_opt_exact = at_exact.std_error;
  rec.se_bound_at_opt_bound = average_se_lower_bound(ab, rec.tau_opt_bound, tau_c);
  rec.se_exact_at_tau_star =
      average_se_exact(samples, M, r, beta, rho, rec.tau_star_int, tau_c).mean;
  rec.se_bound_at_tau_star = average_se_lower_bound(ab, rec.tau_star_int, tau_c);
  return rec;
}

SeCurve compute_se_curve(const std::vector<double>& samples, int M, int r, double beta,
                         double rho, int tau_c) {
  if (samples.empty()) throw std::invalid_argument("compute_se_curve: empty sample set");
  SeCurve curve;
  curve.tau_c = tau_c;
  curve.mean_tr_r_squared = average_of(samples);
  curve.rank = r;
  curve.ab = ab_constants(curve.mean_tr_r_squared, M, r, beta, rho);
  curve.points.reserve(tau_c - 1);
  for (int tau = 1; tau <= tau_c - 1; ++tau) {
    const MeanStderr exact = average_se_exact(samples, M, r, beta, rho, tau, tau_c);
    curve.points.push_back({tau, exact.mean, exact.std_error,
                            average_se_lower_bound(curve.ab, tau, tau_c),
                            low_snr_objective(curve.ab, tau, tau_c)});
  }
  curve.rec = recommend_pilot_length(samples, M, r, beta, rho, tau_c);
  return curve;
}

double lower_bound_second_derivative(const AbConstants& ab, double tau_p, int tau_c) {
  check_positive(ab.a_const, "A");
  check_positive(ab.b_const, "B");
  if (!(tau_p > 0.0)) throw std::invalid_argument("tau_p must be positive");
  const double a = ab.a_const, b = ab.b_const, t = tau_p, tc = tau_c;
  const double numer = ((2.0 * a * a + 2.0 * a) * tc + (2.0 * a + 1.0) * b) * t +
                       (2.0 * a + 1.0) * b * tc + 2.0 * b * b;
  const double d1 = a * t + b;
  const double d2 = (a + 1.0) * t + b;
  return -b * numer / (std::numbers::ln2 * tc * d1 * d1 * d2 * d2);
}

ConcavityReport concavity_certificate(const AbConstants& ab, int tau_c) {
  ConcavityReport rep{};
  rep.max_closed_form = -std::numeric_limits<double>::infinity();
  rep.max_discrete = -std::numeric_limits<double>::infinity();

  // Dense grid for the closed form, spanning almost the whole open interval.
  const int grid = 4001;
  for (int i = 0; i < grid; ++i) {
    const double tau = 1e-3 + (tau_c - 2e-3) * i / (grid - 1);
    rep.max_closed_form =
        std::max(rep.max_closed_form, lower_bound_second_derivative(ab, tau, tau_c));
  }
  // Discrete second difference of the bound at every interior integer. On
  // nearly flat curves (large A) the true difference sits below the absolute
  // rounding floor of log2(1 + x), so the negativity check carries a
  // roundoff allowance scaled to the curve's magnitude.
  std::vector<double> v(tau_c + 1, 0.0);
  double v_max = 0.0;
  for (int tau = 1; tau <= tau_c; ++tau) {
    v[tau] = average_se_lower_bound(ab, tau, tau_c);
    v_max = std::max(v_max, std::abs(v[tau]));
  }
  for (int tau = 2; tau <= tau_c - 1; ++tau)
    rep.max_discrete = std::max(rep.max_discrete, v[tau + 1] - 2.0 * v[tau] + v[tau - 1]);
  const double discrete_slack =
      64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, v_max);

  rep.endpoint_value = v[tau_c];
  // The limit point is probed at a tau proportional to B: the bound behaves
  // like tau / (B ln 2) near zero, so a fixed probe would sit far from the
  // limit whenever B is small.
  const double tau0 = std::max(1e-9 * std::min(1.0, ab.b_const),
                               std::numeric_limits<double>::min());
  rep.origin_limit = average_se_lower_bound_real(ab, tau0, tau_c);
  rep.pass = rep.max_closed_form < 0.0 && rep.max_discrete < discrete_slack &&
             rep.endpoint_value == 0.0 && std::abs(rep.origin_limit) < 1e-6;
  return rep;
}

}  // namespace rsls
