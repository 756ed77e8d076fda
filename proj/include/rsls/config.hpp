#pragma once

#include <cstdint>
#include <string>

#include "rsls/correlation.hpp"
#include "rsls/geometry.hpp"

namespace rsls {

// Full description of one scenario. Loaded from flat key-value text
// (key = value, '#' comments); every field has a default so a config file
// only states what it changes. Units are part of the key names where they
// matter and are documented in the README.
struct ScenarioConfig {
  // Array
  int mh = 12;
  int mv = 12;
  double spacing_wl = 0.25;   // antenna spacing in wavelengths
  double wavelength_m = 0.1;  // carrier wavelength in meters

  // Link budget. snr_db is the product rho*beta in dB. rho is resolved from
  // the power budget (pilot power in mW over noise power from dBm), beta
  // then follows from snr_db unless overridden.
  double snr_db = -20.0;
  double tx_power_mw = 100.0;
  double noise_dbm = -94.0;
  double beta = 0.0;  // 0 means derive from snr_db and the budget

  // Coherence block and pilot length used by validation runs
  int tau_c = 200;
  int tau_p = 10;

  // Cluster statistics
  int n_clusters = 5;
  double angle_range_deg = 60.0;  // nominal angles uniform in +-range
  double angular_std_deg = 5.0;
  std::string directivity = "cosine-pattern";  // or "isotropic-element"

  // Monte Carlo sizes
  int n_correlation_samples = 500;
  long n_mc_trials = 100000;

  // Numerics
  std::uint64_t seed = 1;
  double rank_threshold = 1e-6;
  int quadrature_nodes = 200;
  int n_threads = 0;  // 0 = all cores; never affects results, only speed

  // CDF reference pilot length
  int reference_tau_p = 10;

  double rho() const;
  double beta_resolved() const;
  double snr_linear() const;  // rho * beta
  UpaGeometry geometry() const;
  Directivity directivity_tag() const;

  // Throws std::invalid_argument with a precise message if any field is out
  // of range.
  void validate() const;
};

// Throws std::invalid_argument on unreadable files, unknown keys, or
// malformed values. Keys written by manifests (command, out, ...) are
// accepted and ignored so a manifest can be re-loaded as a config.
ScenarioConfig load_config(const std::string& path);

// Applies one "key=value" override in the same syntax as a config line.
void apply_override(ScenarioConfig& cfg, const std::string& assignment);

// Canonical serialization: fixed key order, round-trip exact doubles. Config
// -> serialize -> load is the identity.
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace rsls
