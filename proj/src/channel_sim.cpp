#include "rsls/channel_sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rsls/parallel.hpp"

namespace rsls {

ChannelSampler::ChannelSampler(const CorrelationMatrix& r, double beta) : beta_(beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("ChannelSampler: beta must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.entries);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("ChannelSampler: eigendecomposition failed");
  Eigen::VectorXd evals = es.eigenvalues();
  const double lambda_max = evals.maxCoeff();
  if (evals.minCoeff() < -1e-8 * lambda_max)
    throw std::invalid_argument("ChannelSampler: correlation matrix is not PSD");
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    if (evals(i) < 0.0) evals(i) = 0.0;
  factor_ = std::sqrt(beta) * es.eigenvectors() *
            evals.cwiseSqrt().asDiagonal().toDenseMatrix().cast<std::complex<double>>();
}

void ChannelSampler::sample_into(Rng& rng, Eigen::VectorXcd& z, Eigen::VectorXcd& h) const {
  const int M = dim();
  for (int m = 0; m < M; ++m) z(m) = rng.cnormal();
  h.noalias() = factor_ * z;
}

ChannelRealization ChannelSampler::sample(Rng& rng) const {
  Eigen::VectorXcd z(dim()), h(dim());
  sample_into(rng, z, h);
  return {std::move(h)};
}

PilotObservation simulate_pilot(const ChannelRealization& ch, double rho, int tau_p,
                                Rng& rng, PilotMode mode) {
  if (!(rho > 0.0)) throw std::invalid_argument("simulate_pilot: rho must be positive");
  if (tau_p < 1) throw std::invalid_argument("simulate_pilot: tau_p must be >= 1");
  const int M = static_cast<int>(ch.h.size());
  Eigen::VectorXcd y(M);
  if (mode == PilotMode::direct) {
    const double scale = std::sqrt(rho * tau_p);
    for (int m = 0; m < M; ++m) y(m) = scale * ch.h(m) + rng.cnormal();
  } else {
    // Explicit pilot sequence with |phi_t| = 1 (phase ramp), transmitted over
    // tau_p channel uses and despread by phi* / ||phi||. Statistically the
    // same as the direct mode; kept for the equivalence check.
    const double sqrt_rho = std::sqrt(rho);
    y.setZero();
    for (int t = 0; t < tau_p; ++t) {
      const std::complex<double> phi =
          std::polar(1.0, 2.0 * std::numbers::pi * t / tau_p);
      const std::complex<double> phi_conj = std::conj(phi);
      for (int m = 0; m < M; ++m) {
        const std::complex<double> received = sqrt_rho * ch.h(m) * phi + rng.cnormal();
        y(m) += received * phi_conj;
      }
    }
    y /= std::sqrt(static_cast<double>(tau_p));
  }
  return {std::move(y), tau_p, rho};
}

RsLsEstimate rs_ls_estimate(const PilotObservation& obs, const ReducedSubspace& sub) {
  if (obs.y_pilot.size() != sub.basis.rows())
    throw std::invalid_argument("rs_ls_estimate: observation length mismatch");
  RsLsEstimate est;
  est.h_hat = sub.basis * (sub.basis.adjoint() * obs.y_pilot) /
              std::sqrt(obs.rho * obs.tau_p);
  return est;
}

RsLsEstimate rs_ls_estimate(const PilotObservation& obs, const ReducedSubspace& sub,
                            const ChannelRealization& truth) {
  RsLsEstimate est = rs_ls_estimate(obs, sub);
  est.w = est.h_hat - truth.h;
  return est;
}

namespace {

// Running sums of every measured quantity and of its square (for standard
// errors), merged across chunks in index order.
struct MomentAccum {
  double ups2 = 0, ups2_sq = 0;
  double su_re = 0, su_re_sq = 0, su_im = 0, su_im_sq = 0;
  double hh2 = 0, hh2_sq = 0;
  double wh2 = 0, wh2_sq = 0;
  double ww = 0, ww_sq = 0;
  double hh = 0, hh_sq = 0;
  double wh_re = 0, wh_re_sq = 0, wh_im = 0, wh_im_sq = 0;
  long n = 0;

  MomentAccum& operator+=(const MomentAccum& o) {
    ups2 += o.ups2; ups2_sq += o.ups2_sq;
    su_re += o.su_re; su_re_sq += o.su_re_sq;
    su_im += o.su_im; su_im_sq += o.su_im_sq;
    hh2 += o.hh2; hh2_sq += o.hh2_sq;
    wh2 += o.wh2; wh2_sq += o.wh2_sq;
    ww += o.ww; ww_sq += o.ww_sq;
    hh += o.hh; hh_sq += o.hh_sq;
    wh_re += o.wh_re; wh_re_sq += o.wh_re_sq;
    wh_im += o.wh_im; wh_im_sq += o.wh_im_sq;
    n += o.n;
    return *this;
  }
};

double mean_of(double sum, long n) { return sum / static_cast<double>(n); }

double stderr_of(double sum, double sum_sq, long n) {
  const double m = sum / static_cast<double>(n);
  const double var = sum_sq / static_cast<double>(n) - m * m;
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
}

}  // namespace

std::vector<MomentRecord> measure_effective_noise(
    const CorrelationMatrix& r, const ReducedSubspace& sub, double beta, double rho,
    int tau_p, long n_trials, std::uint64_t seed, unsigned workers) {
  if (n_trials < 1)
    throw std::invalid_argument("measure_effective_noise: need at least one trial");
  if (tau_p < 1) throw std::invalid_argument("measure_effective_noise: tau_p must be >= 1");
  if (!(rho > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("measure_effective_noise: rho and beta must be positive");

  const ChannelSampler sampler(r, beta);
  const int M = sampler.dim();
  const int rank = sub.rank;
  const double trsq = r.tr_r_squared();
  const double m_beta = M * beta;
  const double sqrt_rho = std::sqrt(rho);
  const double sqrt_rho_tau = std::sqrt(rho * tau_p);

  constexpr std::size_t kChunk = 4096;
  MomentAccum total = chunked_reduce(
      static_cast<std::size_t>(n_trials), kChunk, workers, MomentAccum{},
      [&](std::size_t begin, std::size_t end) {
        MomentAccum acc;
        Eigen::VectorXcd z(M), h(M), y(M), h_hat(M), w(M), nd(M);
        Eigen::VectorXcd coeff(rank);
        for (std::size_t t = begin; t < end; ++t) {
          Rng rng = Rng::stream(seed, kStreamTrials, t);
          // Draw order per trial: channel, pilot noise, symbol, data noise.
          sampler.sample_into(rng, z, h);
          for (int m = 0; m < M; ++m) y(m) = rng.cnormal();
          y += sqrt_rho_tau * h;
          const std::complex<double> s = rng.cnormal();
          for (int m = 0; m < M; ++m) nd(m) = rng.cnormal();

          coeff.noalias() = sub.basis.adjoint() * y;
          h_hat.noalias() = sub.basis * coeff;
          h_hat /= sqrt_rho_tau;
          w = h_hat - h;

          const double hh = h.squaredNorm();
          const std::complex<double> wh = w.dot(h);  // w^H h
          const std::complex<double> ups =
              sqrt_rho * (hh + wh - m_beta) * s + h_hat.dot(nd);

          const double u2 = std::norm(ups);
          const std::complex<double> su = std::conj(s) * ups;
          const double hh_sq = hh * hh;
          const double wh_abs2 = std::norm(wh);
          const double ww = w.squaredNorm();

          acc.ups2 += u2; acc.ups2_sq += u2 * u2;
          acc.su_re += su.real(); acc.su_re_sq += su.real() * su.real();
          acc.su_im += su.imag(); acc.su_im_sq += su.imag() * su.imag();
          acc.hh2 += hh_sq; acc.hh2_sq += hh_sq * hh_sq;
          acc.wh2 += wh_abs2; acc.wh2_sq += wh_abs2 * wh_abs2;
          acc.ww += ww; acc.ww_sq += ww * ww;
          acc.hh += hh; acc.hh_sq += hh * hh;
          acc.wh_re += wh.real(); acc.wh_re_sq += wh.real() * wh.real();
          acc.wh_im += wh.imag(); acc.wh_im_sq += wh.imag() * wh.imag();
          ++acc.n;
        }
        return acc;
      },
      [](MomentAccum a, const MomentAccum& b) {
        a += b;
        return a;
      });

  const long n = total.n;
  std::vector<MomentRecord> rec;
  rec.push_back({"E{|ups|^2}",
                 rho * beta * beta * trsq + m_beta + (m_beta + rank / rho) / tau_p,
                 mean_of(total.ups2, n), stderr_of(total.ups2, total.ups2_sq, n), n});
  {
    const double re = mean_of(total.su_re, n), im = mean_of(total.su_im, n);
    const double se_re = stderr_of(total.su_re, total.su_re_sq, n);
    const double se_im = stderr_of(total.su_im, total.su_im_sq, n);
    rec.push_back({"E{s* ups}", 0.0, std::hypot(re, im), std::hypot(se_re, se_im), n});
  }
  rec.push_back({"E{(h^H h)^2}", beta * beta * (static_cast<double>(M) * M + trsq),
                 mean_of(total.hh2, n), stderr_of(total.hh2, total.hh2_sq, n), n});
  rec.push_back({"E{|w^H h|^2}", beta * M / (rho * tau_p), mean_of(total.wh2, n),
                 stderr_of(total.wh2, total.wh2_sq, n), n});
  rec.push_back({"E{w^H w}", rank / (rho * tau_p), mean_of(total.ww, n),
                 stderr_of(total.ww, total.ww_sq, n), n});
  rec.push_back({"E{h^H h}", m_beta, mean_of(total.hh, n),
                 stderr_of(total.hh, total.hh_sq, n), n});
  {
    const double re = mean_of(total.wh_re, n), im = mean_of(total.wh_im, n);
    const double se_re = stderr_of(total.wh_re, total.wh_re_sq, n);
    const double se_im = stderr_of(total.wh_im, total.wh_im_sq, n);
    rec.push_back({"E{w^H h}", 0.0, std::hypot(re, im), std::hypot(se_re, se_im), n});
  }
  return rec;
}

}  // namespace rsls
