// Command-line front end: reduced-subspace least-squares channel estimation,
// spectral-efficiency curves, and pilot-length optimization for uniform
// planar arrays.
//
// Exit codes: 0 success, 1 usage error, 2 accuracy error (quadrature or
// numerics out of tolerance), 3 validation failure (Monte Carlo disagrees
// with a closed form).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsls/correlation.hpp"
#include "rsls/csv.hpp"
#include "rsls/errors.hpp"
#include "rsls/experiments.hpp"

namespace {

using namespace rsls;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value strings, applied in order
  std::string out_path;
  std::string manifest_path;
};

// Subcommand flags that shadow config keys. Stored as key=value strings so
// they run through the same parser as --set and config lines.
void add_config_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Config file (key = value lines)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", args.overrides,
                  "Override one config key, e.g. --set snr_db=-10 (repeatable)");

  auto push = [&args](const std::string& key) {
    return [&args, key](const std::string& v) { args.overrides.push_back(key + "=" + v); };
  };
  cmd->add_option_function<std::string>("--mh", push("mh"), "Horizontal antenna count");
  cmd->add_option_function<std::string>("--mv", push("mv"), "Vertical antenna count");
  cmd->add_option_function<std::string>("--spacing-wl", push("spacing_wl"),
                                        "Antenna spacing in wavelengths");
  cmd->add_option_function<std::string>("--snr-db", push("snr_db"), "SNR rho*beta in dB");
  cmd->add_option_function<std::string>("--tau-c", push("tau_c"),
                                        "Coherence block length in channel uses");
  cmd->add_option_function<std::string>("--tau-p", push("tau_p"), "Pilot length");
  cmd->add_option_function<std::string>("--seed", push("seed"), "RNG seed");
  cmd->add_option_function<std::string>("--trials", push("n_mc_trials"),
                                        "Monte Carlo trials");
  cmd->add_option_function<std::string>("--samples", push("n_correlation_samples"),
                                        "Correlation-model samples");
  cmd->add_option_function<std::string>("--threads", push("n_threads"),
                                        "Worker threads (0 = all cores)");
  cmd->add_option_function<std::string>("--threshold", push("rank_threshold"),
                                        "Relative eigenvalue cutoff for the rank");
  cmd->add_option_function<std::string>("--quad-nodes", push("quadrature_nodes"),
                                        "Gauss-Legendre nodes per axis");
}

ScenarioConfig resolve_config(const CommonArgs& args) {
  ScenarioConfig cfg;
  if (!args.config_path.empty()) cfg = load_config(args.config_path);
  for (const std::string& ov : args.overrides) apply_override(cfg, ov);
  cfg.validate();
  return cfg;
}

void emit_manifest(const CommonArgs& args, const ScenarioConfig& cfg,
                   const std::string& command) {
  if (args.out_path.empty() && args.manifest_path.empty()) return;
  const std::string path =
      args.manifest_path.empty() ? args.out_path + ".manifest" : args.manifest_path;
  write_manifest(path, cfg, command, args.out_path);
}

const double kThresholdLadder[] = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};

int cmd_correlation(const CommonArgs& args, bool isotropic, int model_index) {
  const ScenarioConfig cfg = resolve_config(args);
  const UpaGeometry geom = cfg.geometry();
  CorrelationMatrix r = isotropic_correlation(geom);
  if (!isotropic) {
    Rng rng = Rng::stream(cfg.seed, kStreamClusterModels,
                          static_cast<std::uint64_t>(model_index));
    const ClusterScattering model = sample_cluster_model(
        rng, cfg.n_clusters, cfg.angle_range_deg * std::numbers::pi / 180.0,
        cfg.angular_std_deg * std::numbers::pi / 180.0, cfg.directivity_tag());
    r = clustered_correlation(geom, model, Quadrature(cfg.quadrature_nodes));
  }
  write_correlation_csv(args.out_path, r);
  std::string command = "correlation";
  if (isotropic)
    command += " --isotropic";
  else
    command += " --model-index " + std::to_string(model_index);
  emit_manifest(args, cfg, command);
  std::cout << "M = " << geom.size() << "\n"
            << "kind = " << (isotropic ? "isotropic" : "clustered") << "\n"
            << "wrote " << args.out_path << "\n";
  return 0;
}

int cmd_rank(const CommonArgs& args, bool sweep) {
  const ScenarioConfig cfg = resolve_config(args);
  const CorrelationMatrix r_iso = isotropic_correlation(cfg.geometry());
  const ReducedSubspace sub = reduce(r_iso, cfg.rank_threshold);
  std::cout << "M = " << cfg.geometry().size() << "\n"
            << "threshold = " << format_double(cfg.rank_threshold) << "\n"
            << "r = " << sub.rank << "\n";
  if (sweep) {
    std::cout << "threshold-sweep:\n";
    for (double t : kThresholdLadder)
      std::cout << "  " << format_double(t) << " -> r = " << reduce(r_iso, t).rank
                << "\n";
  }
  return 0;
}

int cmd_se_curve(const CommonArgs& args) {
  const ScenarioConfig cfg = resolve_config(args);
  const SeCurveResult result = run_se_curve(cfg);
  write_se_curve_csv(args.out_path, result.curve);
  emit_manifest(args, cfg, "se-curve");
  std::cout << recommendation_text(result.curve);
  std::cout << "wrote " << args.out_path << "\n";
  return 0;
}

int cmd_optimize(const CommonArgs& args, bool threshold_sweep) {
  const ScenarioConfig cfg = resolve_config(args);
  const Population pop = sample_population(cfg);
  const double beta = cfg.beta_resolved();
  const double rho = cfg.rho();
  const PilotRecommendation rec = recommend_pilot_length(
      pop.tr_r_squared, pop.M, pop.rank, beta, rho, cfg.tau_c);

  SeCurve header{};  // recommendation_text wants the curve wrapper
  header.rec = rec;
  header.ab = ab_constants(pop.mean_tr_r_squared, pop.M, pop.rank, beta, rho);
  header.mean_tr_r_squared = pop.mean_tr_r_squared;
  header.rank = pop.rank;
  header.tau_c = cfg.tau_c;
  const std::string text = recommendation_text(header);
  std::cout << text;

  if (threshold_sweep) {
    // How the eigenvalue cutoff moves the recommendation: the correlation
    // population is threshold-independent, only r changes.
    const CorrelationMatrix r_iso = isotropic_correlation(cfg.geometry());
    std::cout << "threshold-sweep (threshold, r, tau_opt_exact, tau_opt_bound, "
                 "tau_star_int):\n";
    for (double t : kThresholdLadder) {
      const int r_t = reduce(r_iso, t).rank;
      const PilotRecommendation rt = recommend_pilot_length(
          pop.tr_r_squared, pop.M, r_t, beta, rho, cfg.tau_c);
      std::cout << "  " << format_double(t) << ", " << r_t << ", " << rt.tau_opt_exact
                << ", " << rt.tau_opt_bound << ", " << rt.tau_star_int << "\n";
    }
  }

  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open " + args.out_path);
    out << text;
    emit_manifest(args, cfg, "optimize");
  }
  return 0;
}

int cmd_cdf(const CommonArgs& args, const std::vector<int>& extra_tau) {
  const ScenarioConfig cfg = resolve_config(args);
  const CdfResult result = run_cdf(cfg, extra_tau);
  write_cdf_csv(args.out_path, result);
  emit_manifest(args, cfg, "cdf");
  for (const CdfCurve& c : result.curves)
    std::cout << c.label << ": tau_p = " << c.tau_p << "\n";
  std::cout << "wrote " << args.out_path << "\n";
  return 0;
}

int cmd_validate(const CommonArgs& args) {
  const ScenarioConfig cfg = resolve_config(args);
  const ValidationReport report = run_validation(cfg);
  if (!args.out_path.empty()) {
    write_moments_csv(args.out_path, report);
    emit_manifest(args, cfg, "validate");
  }
  std::printf("%-14s %14s %14s %12s  %s\n", "term", "analytic", "empirical", "stderr",
              "status");
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const MomentRecord& m = report.records[i];
    std::printf("%-14s %14.6g %14.6g %12.3g  %s\n", m.name.c_str(), m.analytic,
                m.empirical, m.std_error, report.term_pass[i] ? "ok" : "FAIL");
  }
  std::printf("pilot-penalty slope = %.4f (target -1 within 5%%): %s\n",
              report.penalty_slope, report.slope_pass ? "ok" : "FAIL");
  if (!report.all_pass) {
    std::cerr << "validation failed\n";
    return 3;
  }
  std::cout << "validation passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-subspace least-squares channel estimation and pilot-length "
               "optimization for uniform planar arrays"};
  app.require_subcommand(1);

  CommonArgs args;

  CLI::App* correlation =
      app.add_subcommand("correlation", "Write a correlation matrix as CSV");
  bool isotropic = false;
  int model_index = 0;
  add_config_flags(correlation, args);
  correlation->add_flag("--isotropic", isotropic,
                        "Emit the isotropic matrix instead of a clustered sample");
  correlation->add_option("--model-index", model_index,
                          "Which sampled cluster model to integrate");
  correlation->add_option("--out", args.out_path, "Output CSV path")->required();
  correlation->add_option("--manifest", args.manifest_path,
                          "Manifest path (default: <out>.manifest)");

  CLI::App* rank = app.add_subcommand(
      "rank", "Report the reduced-subspace dimension of the isotropic matrix");
  bool rank_sweep = false;
  add_config_flags(rank, args);
  rank->add_flag("--sweep", rank_sweep, "Also report r across an eigenvalue-cutoff ladder");

  CLI::App* se_curve = app.add_subcommand(
      "se-curve", "Average spectral efficiency versus pilot length, with optima");
  add_config_flags(se_curve, args);
  se_curve->add_option("--out", args.out_path, "Output CSV path")->required();
  se_curve->add_option("--manifest", args.manifest_path,
                       "Manifest path (default: <out>.manifest)");

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Recommend a pilot length (exact, lower-bound, and low-SNR rules)");
  bool threshold_sweep = false;
  add_config_flags(optimize, args);
  optimize->add_flag("--threshold-sweep", threshold_sweep,
                     "Report how the rank threshold moves the recommendation");
  optimize->add_option("--out", args.out_path, "Also write the recommendation to a file");
  optimize->add_option("--manifest", args.manifest_path,
                       "Manifest path (default: <out>.manifest)");

  CLI::App* cdf = app.add_subcommand(
      "cdf", "Per-matrix SE distribution at optimized and reference pilot lengths");
  std::vector<int> extra_tau;
  add_config_flags(cdf, args);
  cdf->add_option("--extra-tau", extra_tau, "Additional pilot lengths to include");
  cdf->add_option("--out", args.out_path, "Output CSV path")->required();
  cdf->add_option("--manifest", args.manifest_path,
                  "Manifest path (default: <out>.manifest)");

  CLI::App* validate = app.add_subcommand(
      "validate", "Monte Carlo check of the effective-noise closed form");
  add_config_flags(validate, args);
  validate->add_option("--out", args.out_path, "Moment-table CSV path");
  validate->add_option("--manifest", args.manifest_path,
                       "Manifest path (default: <out>.manifest)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 1;
  }

  try {
    if (correlation->parsed()) return cmd_correlation(args, isotropic, model_index);
    if (rank->parsed()) return cmd_rank(args, rank_sweep);
    if (se_curve->parsed()) return cmd_se_curve(args);
    if (optimize->parsed()) return cmd_optimize(args, threshold_sweep);
    if (cdf->parsed()) return cmd_cdf(args, extra_tau);
    if (validate->parsed()) return cmd_validate(args);
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
