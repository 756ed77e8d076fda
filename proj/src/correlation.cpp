#include "rsls/correlation.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rsls/csv.hpp"
#include "rsls/errors.hpp"

namespace rsls {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
}  // namespace

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  gsl_integration_glfixed_table* table =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
  if (!table) throw std::runtime_error("gauss_legendre: table allocation failed");
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x, w;
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &x, &w, table);
    nodes[i] = x;
    weights[i] = w;
  }
  gsl_integration_glfixed_table_free(table);
}

Quadrature::Quadrature(int n) : nodes_per_axis(n) {
  if (n < 8) throw std::invalid_argument("Quadrature: fewer than 8 nodes per axis");
}

CorrelationMatrix isotropic_correlation(const UpaGeometry& geom) {
  const int M = geom.size();
  const double s = geom.spacing_wl();
  Eigen::MatrixXcd r(M, M);
  for (int m = 0; m < M; ++m) {
    const int im = m % geom.m_h, jm = m / geom.m_h;
    for (int l = 0; l < M; ++l) {
      const int il = l % geom.m_h, jl = l / geom.m_h;
      const double dh = (im - il) * s;
      const double dv = (jm - jl) * s;
      r(m, l) = sinc(2.0 * std::sqrt(dh * dh + dv * dv));
    }
  }
  return {std::move(r), geom, CorrelationKind::isotropic};
}

ClusterScattering::ClusterScattering(std::vector<Cluster> clusters, double angular_std,
                                     Directivity directivity)
    : clusters_(std::move(clusters)), angular_std_(angular_std),
      directivity_(directivity), norm_(0.0) {
  if (clusters_.empty())
    throw std::invalid_argument("ClusterScattering: need at least one cluster");
  if (!(angular_std_ > 0.0))
    throw std::invalid_argument("ClusterScattering: angular std must be positive");
  double wsum = 0.0;
  for (const Cluster& c : clusters_) {
    if (c.weight < 0.0)
      throw std::invalid_argument("ClusterScattering: negative cluster weight");
    if (std::abs(c.nominal_azimuth) > kHalfPi || std::abs(c.nominal_elevation) > kHalfPi)
      throw std::invalid_argument("ClusterScattering: nominal angle outside [-pi/2, pi/2]");
    wsum += c.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("ClusterScattering: weights must sum to 1");

  // Normalize on the fixed reference grid, independent of any caller grid.
  std::vector<double> x, w;
  gauss_legendre(Quadrature::kDefaultNodes, -kHalfPi, kHalfPi, x, w);
  double z = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < x.size(); ++b)
      row += w[b] * unnormalized(x[a], x[b]);
    z += w[a] * row;
  }
  if (!(z > 0.0))
    throw std::invalid_argument("ClusterScattering: density integrates to zero");
  norm_ = z;
}

double ClusterScattering::unnormalized(double az, double el) const {
  const double inv2s2 = 1.0 / (2.0 * angular_std_ * angular_std_);
  double f = 0.0;
  for (const Cluster& c : clusters_) {
    const double da = az - c.nominal_azimuth;
    const double de = el - c.nominal_elevation;
    f += c.weight * std::exp(-(da * da + de * de) * inv2s2);
  }
  if (directivity_ == Directivity::cosine_pattern) f *= std::cos(az) * std::cos(el);
  return f;
}

double ClusterScattering::density(double azimuth, double elevation) const {
  return unnormalized(azimuth, elevation) / norm_;
}

double ClusterScattering::density(const Direction& dir) const {
  return density(dir.azimuth, dir.elevation);
}

CorrelationMatrix integrate_correlation(
    const UpaGeometry& geom, const std::function<double(double, double)>& density,
    const Quadrature& quad, CorrelationKind kind) {
  const int nq = quad.nodes_per_axis;
  const int mh = geom.m_h, mv = geom.m_v, M = geom.size();
  const double s = geom.spacing_wl();
  const int kh = 2 * mh - 1, kv = 2 * mv - 1;

  std::vector<double> x, w;
  gauss_legendre(nq, -kHalfPi, kHalfPi, x, w);

  // table(p, q) = sum over nodes of weight * f * zh^(p-mh+1) * zv^(q-mv+1)
  // with zh = exp(j 2 pi s sin(az)cos(el)), zv = exp(j 2 pi s sin(el)).
  // Accumulated one azimuth row at a time: each row contributes a rank-nq
  // product H^T V, which keeps the working set at O(nq * (mh + mv)) instead
  // of materializing all nq^2 nodes at once.
  Eigen::MatrixXcd table = Eigen::MatrixXcd::Zero(kh, kv);
  Eigen::MatrixXcd H(nq, kh), V(nq, kv);
  for (int a = 0; a < nq; ++a) {
    const double az = x[a];
    const double sin_az = std::sin(az);
    for (int b = 0; b < nq; ++b) {
      const double el = x[b];
      const double c = w[a] * w[b] * density(az, el);
      const std::complex<double> zh = std::polar(1.0, 2.0 * kPi * s * sin_az * std::cos(el));
      const std::complex<double> zv = std::polar(1.0, 2.0 * kPi * s * std::sin(el));
      std::complex<double> ph(1.0, 0.0);
      H(b, mh - 1) = c;
      for (int d = 1; d < mh; ++d) {
        ph *= zh;
        H(b, mh - 1 + d) = c * ph;
        H(b, mh - 1 - d) = c * std::conj(ph);
      }
      std::complex<double> pv(1.0, 0.0);
      V(b, mv - 1) = 1.0;
      for (int d = 1; d < mv; ++d) {
        pv *= zv;
        V(b, mv - 1 + d) = pv;
        V(b, mv - 1 - d) = std::conj(pv);
      }
    }
    table.noalias() += H.transpose() * V;
  }

  // Every diagonal entry equals the numerical integral of f on this grid. If
  // that is not 1 within 1%, the grid is too coarse for this density.
  const double raw_integral = table(mh - 1, mv - 1).real();
  if (std::abs(raw_integral - 1.0) > 0.01) {
    std::ostringstream msg;
    msg << "integrate_correlation: " << nq << " nodes per axis integrate the "
        << "density to " << raw_integral << " instead of 1; refine the quadrature";
    throw AccuracyError(msg.str());
  }

  Eigen::MatrixXcd r(M, M);
  for (int m = 0; m < M; ++m) {
    const int im = m % mh, jm = m / mh;
    for (int l = 0; l < M; ++l) {
      const int il = l % mh, jl = l / mh;
      r(m, l) = table((im - il) + mh - 1, (jm - jl) + mv - 1);
    }
  }
  r = 0.5 * (r + r.adjoint()).eval();
  r *= static_cast<double>(M) / r.trace().real();
  return {std::move(r), geom, kind};
}

CorrelationMatrix clustered_correlation(const UpaGeometry& geom,
                                        const ClusterScattering& model,
                                        const Quadrature& quad) {
  return integrate_correlation(
      geom, [&model](double az, double el) { return model.density(az, el); }, quad,
      CorrelationKind::clustered);
}

ClusterScattering sample_cluster_model(Rng& rng, int n_clusters, double angle_range,
                                       double angular_std, Directivity directivity) {
  if (n_clusters < 1)
    throw std::invalid_argument("sample_cluster_model: need at least one cluster");
  if (!(angle_range > 0.0) || angle_range > kHalfPi)
    throw std::invalid_argument("sample_cluster_model: angle range outside (0, pi/2]");
  std::vector<Cluster> clusters(n_clusters);
  double wsum = 0.0;
  for (Cluster& c : clusters) {
    c.weight = rng.uniform();
    wsum += c.weight;
  }
  for (Cluster& c : clusters) c.weight /= wsum;
  // Rounding in the division can leave the sum an ulp away from 1; pin the
  // largest weight so the constructor's exact-sum contract holds.
  double resum = 0.0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    resum += clusters[i].weight;
    if (clusters[i].weight > clusters[largest].weight) largest = i;
  }
  clusters[largest].weight += 1.0 - resum;
  for (Cluster& c : clusters) c.nominal_azimuth = rng.uniform(-angle_range, angle_range);
  for (Cluster& c : clusters) c.nominal_elevation = rng.uniform(-angle_range, angle_range);
  return ClusterScattering(std::move(clusters), angular_std, directivity);
}

void write_correlation_csv(const std::string& path, const CorrelationMatrix& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("write_correlation_csv: cannot open " + path);
  out << "# correlation-matrix v1\n";
  out << "# kind=" << (r.kind == CorrelationKind::isotropic ? "isotropic" : "clustered")
      << " mh=" << r.geom.m_h << " mv=" << r.geom.m_v
      << " spacing_m=" << format_double(r.geom.spacing)
      << " wavelength_m=" << format_double(r.geom.wavelength) << "\n";
  const int M = r.geom.size();
  for (int m = 0; m < M; ++m) {
    for (int l = 0; l < M; ++l) {
      if (l) out << ",";
      out << format_double(r.entries(m, l).real()) << ","
          << format_double(r.entries(m, l).imag());
    }
    out << "\n";
  }
}

CorrelationMatrix read_correlation_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("read_correlation_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# correlation-matrix", 0) != 0)
    throw std::invalid_argument("read_correlation_csv: missing format header");
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw std::invalid_argument("read_correlation_csv: missing geometry header");

  std::string kind_str;
  int mh = 0, mv = 0;
  double spacing = 0.0, wavelength = 0.0;
  std::istringstream hdr(line.substr(2));
  std::string tok;
  while (hdr >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "kind") kind_str = val;
    else if (key == "mh") mh = std::stoi(val);
    else if (key == "mv") mv = std::stoi(val);
    else if (key == "spacing_m") spacing = std::stod(val);
    else if (key == "wavelength_m") wavelength = std::stod(val);
  }
  UpaGeometry geom(mh, mv, spacing, wavelength);
  const CorrelationKind kind = kind_str == "isotropic" ? CorrelationKind::isotropic
                                                       : CorrelationKind::clustered;
  const int M = geom.size();
  Eigen::MatrixXcd entries(M, M);
  for (int m = 0; m < M; ++m) {
    if (!std::getline(in, line))
      throw std::invalid_argument("read_correlation_csv: truncated matrix");
    std::istringstream row(line);
    std::string cell;
    for (int l = 0; l < M; ++l) {
      if (!std::getline(row, cell, ','))
        throw std::invalid_argument("read_correlation_csv: short row");
      const double re = std::stod(cell);
      if (!std::getline(row, cell, ','))
        throw std::invalid_argument("read_correlation_csv: short row");
      const double im = std::stod(cell);
      entries(m, l) = {re, im};
    }
  }
  return {std::move(entries), geom, kind};
}

}  // namespace rsls
