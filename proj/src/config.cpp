#include "rsls/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rsls/csv.hpp"

namespace rsls {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size())
    throw std::invalid_argument("config key '" + key + "': '" + v + "' is not a number");
  return x;
}

long parse_long(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  long x = 0;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size())
    throw std::invalid_argument("config key '" + key + "': '" + v + "' is not an integer");
  return x;
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  std::uint64_t x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size())
    throw std::invalid_argument("config key '" + key + "': '" + v +
                                "' is not an unsigned integer");
  return x;
}

void set_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "mh") cfg.mh = static_cast<int>(parse_long(value, key));
  else if (key == "mv") cfg.mv = static_cast<int>(parse_long(value, key));
  else if (key == "spacing_wl") cfg.spacing_wl = parse_double(value, key);
  else if (key == "wavelength_m") cfg.wavelength_m = parse_double(value, key);
  else if (key == "snr_db") cfg.snr_db = parse_double(value, key);
  else if (key == "tx_power_mw") cfg.tx_power_mw = parse_double(value, key);
  else if (key == "noise_dbm") cfg.noise_dbm = parse_double(value, key);
  else if (key == "beta") cfg.beta = parse_double(value, key);
  else if (key == "tau_c") cfg.tau_c = static_cast<int>(parse_long(value, key));
  else if (key == "tau_p") cfg.tau_p = static_cast<int>(parse_long(value, key));
  else if (key == "n_clusters") cfg.n_clusters = static_cast<int>(parse_long(value, key));
  else if (key == "angle_range_deg") cfg.angle_range_deg = parse_double(value, key);
  else if (key == "angular_std_deg") cfg.angular_std_deg = parse_double(value, key);
  else if (key == "directivity") cfg.directivity = value;
  else if (key == "n_correlation_samples")
    cfg.n_correlation_samples = static_cast<int>(parse_long(value, key));
  else if (key == "n_mc_trials") cfg.n_mc_trials = parse_long(value, key);
  else if (key == "seed") cfg.seed = parse_u64(value, key);
  else if (key == "rank_threshold") cfg.rank_threshold = parse_double(value, key);
  else if (key == "quadrature_nodes")
    cfg.quadrature_nodes = static_cast<int>(parse_long(value, key));
  else if (key == "n_threads") cfg.n_threads = static_cast<int>(parse_long(value, key));
  else if (key == "reference_tau_p")
    cfg.reference_tau_p = static_cast<int>(parse_long(value, key));
  else if (key == "command" || key == "out" || key == "tool" || key == "manifest_version") {
    // Manifest metadata; accepted so a manifest can be reloaded as a config.
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

}  // namespace

double ScenarioConfig::rho() const {
  const double noise_mw = std::pow(10.0, noise_dbm / 10.0);
  return tx_power_mw / noise_mw;
}

double ScenarioConfig::beta_resolved() const {
  if (beta > 0.0) return beta;
  return std::pow(10.0, snr_db / 10.0) / rho();
}

double ScenarioConfig::snr_linear() const { return rho() * beta_resolved(); }

UpaGeometry ScenarioConfig::geometry() const {
  return UpaGeometry(mh, mv, spacing_wl * wavelength_m, wavelength_m);
}

Directivity ScenarioConfig::directivity_tag() const {
  if (directivity == "cosine-pattern") return Directivity::cosine_pattern;
  if (directivity == "isotropic-element") return Directivity::isotropic_element;
  throw std::invalid_argument("directivity must be 'cosine-pattern' or "
                              "'isotropic-element', got '" + directivity + "'");
}

void ScenarioConfig::validate() const {
  if (mh < 1 || mv < 1) throw std::invalid_argument("mh and mv must be >= 1");
  if (!(spacing_wl > 0.0)) throw std::invalid_argument("spacing_wl must be positive");
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength_m must be positive");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("snr_db must be finite");
  if (!(tx_power_mw > 0.0)) throw std::invalid_argument("tx_power_mw must be positive");
  if (!std::isfinite(noise_dbm)) throw std::invalid_argument("noise_dbm must be finite");
  if (beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
  if (tau_c < 2) throw std::invalid_argument("tau_c must be >= 2");
  if (tau_p < 1 || tau_p > tau_c - 1)
    throw std::invalid_argument("tau_p must lie in [1, tau_c - 1]");
  if (reference_tau_p < 1 || reference_tau_p > tau_c - 1)
    throw std::invalid_argument("reference_tau_p must lie in [1, tau_c - 1]");
  if (n_clusters < 1) throw std::invalid_argument("n_clusters must be >= 1");
  if (!(angle_range_deg > 0.0) || angle_range_deg > 90.0)
    throw std::invalid_argument("angle_range_deg must lie in (0, 90]");
  if (!(angular_std_deg > 0.0))
    throw std::invalid_argument("angular_std_deg must be positive");
  if (n_correlation_samples < 1)
    throw std::invalid_argument("n_correlation_samples must be >= 1");
  if (n_mc_trials < 1) throw std::invalid_argument("n_mc_trials must be >= 1");
  if (!(rank_threshold > 0.0) || rank_threshold >= 1.0)
    throw std::invalid_argument("rank_threshold must lie in (0, 1)");
  if (quadrature_nodes < 8) throw std::invalid_argument("quadrature_nodes must be >= 8");
  if (n_threads < 0) throw std::invalid_argument("n_threads must be >= 0");
  (void)directivity_tag();
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  ScenarioConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected 'key = value'");
    try {
      set_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override '" + assignment + "': expected key=value");
  set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "mh = " << cfg.mh << "\n";
  out << "mv = " << cfg.mv << "\n";
  out << "spacing_wl = " << format_double(cfg.spacing_wl) << "\n";
  out << "wavelength_m = " << format_double(cfg.wavelength_m) << "\n";
  out << "snr_db = " << format_double(cfg.snr_db) << "\n";
  out << "tx_power_mw = " << format_double(cfg.tx_power_mw) << "\n";
  out << "noise_dbm = " << format_double(cfg.noise_dbm) << "\n";
  out << "beta = " << format_double(cfg.beta) << "\n";
  out << "tau_c = " << cfg.tau_c << "\n";
  out << "tau_p = " << cfg.tau_p << "\n";
  out << "n_clusters = " << cfg.n_clusters << "\n";
  out << "angle_range_deg = " << format_double(cfg.angle_range_deg) << "\n";
  out << "angular_std_deg = " << format_double(cfg.angular_std_deg) << "\n";
  out << "directivity = " << cfg.directivity << "\n";
  out << "n_correlation_samples = " << cfg.n_correlation_samples << "\n";
  out << "n_mc_trials = " << cfg.n_mc_trials << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "rank_threshold = " << format_double(cfg.rank_threshold) << "\n";
  out << "quadrature_nodes = " << cfg.quadrature_nodes << "\n";
  out << "n_threads = " << cfg.n_threads << "\n";
  out << "reference_tau_p = " << cfg.reference_tau_p << "\n";
  return out.str();
}

}  // namespace rsls
