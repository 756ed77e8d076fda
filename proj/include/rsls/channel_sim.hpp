#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rsls/correlation.hpp"
#include "rsls/rng.hpp"
#include "rsls/subspace.hpp"

namespace rsls {

struct ChannelRealization {
  Eigen::VectorXcd h;
};

// Despread sufficient statistic of the pilot phase:
// y_pilot = sqrt(rho tau_p) h + n with n ~ CN(0, I).
struct PilotObservation {
  Eigen::VectorXcd y_pilot;
  int tau_p;
  double rho;
};

struct RsLsEstimate {
  Eigen::VectorXcd h_hat;
  // h_hat - h when ground truth was supplied, empty otherwise.
  Eigen::VectorXcd w;
};

enum class PilotMode {
  direct,  // draw the despread statistic directly
  full     // build the M x tau_p pilot block and despread it
};

// Factorizes beta R once so channels can be drawn as factor * z with
// z ~ CN(0, I). Eigenvalues in [-1e-8, 0) * lambda_max are rounding noise
// and are clipped to zero; anything lower is a genuinely non-PSD input and
// is rejected.
class ChannelSampler {
public:
  ChannelSampler(const CorrelationMatrix& r, double beta);

  ChannelRealization sample(Rng& rng) const;
  // In-place variant used by hot loops; z is scratch of size dim().
  void sample_into(Rng& rng, Eigen::VectorXcd& z, Eigen::VectorXcd& h) const;

  int dim() const { return static_cast<int>(factor_.rows()); }
  double beta() const { return beta_; }

private:
  Eigen::MatrixXcd factor_;  // factor * factor^H = beta R
  double beta_;
};

PilotObservation simulate_pilot(const ChannelRealization& ch, double rho, int tau_p,
                                Rng& rng, PilotMode mode = PilotMode::direct);

RsLsEstimate rs_ls_estimate(const PilotObservation& obs, const ReducedSubspace& sub);
RsLsEstimate rs_ls_estimate(const PilotObservation& obs, const ReducedSubspace& sub,
                            const ChannelRealization& truth);

// One measured moment next to its closed form.
struct MomentRecord {
  std::string name;
  double analytic;
  double empirical;
  double std_error;  // standard error of the empirical mean
  long n_trials;
};

// Simulates the full pilot + data chain n_trials times and measures every
// statistical quantity entering the effective-noise variance
//   E|ups|^2 = rho beta^2 tr(R^2) + M beta + (M beta + r/rho) / tau_p
// term by term, where ups = sqrt(rho)(h^H h + w^H h - M beta) s + (h+w)^H n.
// Trial i draws from Rng::stream(seed, kStreamTrials, i), so results are
// bit-identical for any worker count.
std::vector<MomentRecord> measure_effective_noise(
    const CorrelationMatrix& r, const ReducedSubspace& sub, double beta, double rho,
    int tau_p, long n_trials, std::uint64_t seed, unsigned workers = 0);

}  // namespace rsls
