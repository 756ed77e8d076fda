#pragma once

#include <vector>

namespace rsls {

struct MeanStderr {
  double mean;
  double std_error;
};

// Constants of the averaged SINR: the lower bound at pilot length tau_p is
// ((tau_c - tau_p)/tau_c) log2(1 + 1/(A + B/tau_p)).
struct AbConstants {
  double a_const;  // unitless
  double b_const;  // channel uses
};

struct SePoint {
  int tau_p;
  double se_exact_avg;
  double se_exact_stderr;
  double se_lower_bound;
  double se_low_snr_approx;
};

struct PilotRecommendation {
  int tau_opt_exact;         // argmax of the Monte Carlo average, full scan
  int tau_opt_bound;         // argmax of the lower bound, scan until decrease
  double tau_star_low_snr;   // closed-form continuous maximizer
  int tau_star_int;          // better of floor/ceil under the lower bound
  double se_exact_at_opt_exact;
  double se_exact_stderr_at_opt_exact;
  double se_bound_at_opt_bound;
  double se_exact_at_tau_star;
  double se_bound_at_tau_star;
};

struct SeCurve {
  int tau_c;
  std::vector<SePoint> points;  // tau_p = 1 .. tau_c - 1
  PilotRecommendation rec;
  AbConstants ab;
  double mean_tr_r_squared;
  int rank;
};

enum class PilotObjective { exact_avg, lower_bound };

// Closed-form effective noise power for one correlation matrix:
// rho beta^2 trsq + M beta + (M beta + r/rho)/tau_p.
double effective_noise_power(double tr_r_squared, int M, int r, double beta,
                             double rho, int tau_p);

// Achievable SE for one correlation matrix:
// ((tau_c - tau_p)/tau_c) log2(1 + rho M^2 beta^2 / noise_power).
// tau_p may equal tau_c, where the prelog makes the SE exactly zero; that
// boundary point exists for the concavity certificate, not for operation.
double se_closed_form(double tr_r_squared, int M, int r, double beta, double rho,
                      int tau_p, int tau_c);

// Sample mean and standard error of se_closed_form over a population of
// tr(R^2) values.
MeanStderr average_se_exact(const std::vector<double>& tr_r_squared_samples, int M,
                            int r, double beta, double rho, int tau_p, int tau_c);

// A = E{tr(R^2)}/M^2 + 1/(rho M beta), B = (1/(rho M^2))(M/beta + r/(rho beta^2)).
AbConstants ab_constants(double mean_tr_r_squared, int M, int r, double beta, double rho);

double average_se_lower_bound(const AbConstants& ab, int tau_p, int tau_c);
// Real-argument version for finite differences and endpoint limits,
// defined on (0, tau_c].
double average_se_lower_bound_real(const AbConstants& ab, double tau_p, int tau_c);

// Linearized objective log2(e) ((tau_c - tau_p)/tau_c) / (A + B/tau_p); its
// exact maximizer is tau_star below.
double low_snr_objective(const AbConstants& ab, double tau_p, int tau_c);

// (sqrt(B(B + A tau_c)) - B) / A.
double low_snr_tau_star(const AbConstants& ab, int tau_c);

// The integer next to tau_star with the larger lower-bound SE, clamped to
// [1, tau_c - 1]; ties pick the smaller pilot length.
int low_snr_tau_star_int(const AbConstants& ab, int tau_c);

// Integer argmax over tau_p in [1, tau_c - 1]. The lower-bound objective is
// strictly concave, so the scan stops at the first decrease; the Monte Carlo
// average gets a full scan because sampling noise can create local maxima.
int optimize_pilot_length(PilotObjective objective,
                          const std::vector<double>& tr_r_squared_samples, int M,
                          int r, double beta, double rho, int tau_c);

// Everything the harness reports about pilot dimensioning in one pass.
PilotRecommendation recommend_pilot_length(const std::vector<double>& samples, int M,
                                           int r, double beta, double rho, int tau_c);

// Full curve over tau_p = 1 .. tau_c - 1 plus the recommendation block.
SeCurve compute_se_curve(const std::vector<double>& samples, int M, int r,
                         double beta, double rho, int tau_c);

// Closed-form second derivative of the lower bound in tau_p; strictly
// negative for positive A, B, which is what makes the optimum unique.
double lower_bound_second_derivative(const AbConstants& ab, double tau_p, int tau_c);

struct ConcavityReport {
  bool pass;
  double max_closed_form;      // largest closed-form second derivative seen
  double max_discrete;         // largest integer second difference seen
  double endpoint_value;       // SE at tau_p = tau_c (must be 0)
  double origin_limit;         // SE at tau_p -> 0+ (must vanish)
};

// Evaluates the closed-form second derivative on a dense grid and the
// discrete second difference at all integers, asserting both negative, and
// checks the endpoint zeros.
ConcavityReport concavity_certificate(const AbConstants& ab, int tau_c);

}  // namespace rsls
