#pragma once

#include <string>
#include <vector>

#include "rsls/channel_sim.hpp"
#include "rsls/config.hpp"
#include "rsls/se_analysis.hpp"
#include "rsls/subspace.hpp"

namespace rsls {

// Shared first stage of every experiment: the isotropic subspace plus the
// tr(R^2) values of the sampled cluster correlation matrices. Model i is
// drawn from Rng::stream(seed, kStreamClusterModels, i), so the population
// is the same no matter which experiment asks for it.
struct Population {
  int M;
  int rank;
  std::vector<double> tr_r_squared;
  double mean_tr_r_squared;
  ReducedSubspace subspace;
};

Population sample_population(const ScenarioConfig& cfg);

struct SeCurveResult {
  SeCurve curve;
  Population population;
};

SeCurveResult run_se_curve(const ScenarioConfig& cfg);

struct CdfCurve {
  std::string label;  // exact-opt, bound-opt, low-snr-opt, reference, ...
  int tau_p;
  std::vector<double> sorted_se;  // ascending; CDF value of entry i is (i+1)/n
};

struct CdfResult {
  std::vector<CdfCurve> curves;
  PilotRecommendation rec;
};

// Evaluates the per-matrix SE at the three optimized pilot lengths plus the
// configured reference, and any extra lengths the caller asks for.
CdfResult run_cdf(const ScenarioConfig& cfg, const std::vector<int>& extra_tau_p = {});

struct ValidationReport {
  std::vector<MomentRecord> records;
  std::vector<bool> term_pass;
  double penalty_slope;       // log-log slope of the pilot penalty, target -1
  bool slope_pass;
  bool all_pass;
};

// Term-by-term Monte Carlo verification of the effective-noise closed form
// on the configured scenario, plus the 1/tau_p scaling of the estimation
// penalty measured across tau_p in {1, 10, 100}.
ValidationReport run_validation(const ScenarioConfig& cfg);

// Output writers. Every number is %.17g so reruns are byte-comparable.
void write_se_curve_csv(const std::string& path, const SeCurve& curve);
void write_cdf_csv(const std::string& path, const CdfResult& cdf);
void write_moments_csv(const std::string& path, const ValidationReport& report);
std::string recommendation_text(const SeCurve& curve);

// Manifest: the fully resolved config plus run metadata, itself loadable as
// a config file. Rerunning the same subcommand with the manifest as config
// reproduces every CSV byte for byte.
void write_manifest(const std::string& path, const ScenarioConfig& cfg,
                    const std::string& command, const std::string& out_path);

}  // namespace rsls
