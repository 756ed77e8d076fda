#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "rsls/geometry.hpp"
#include "rsls/rng.hpp"

namespace rsls {

enum class CorrelationKind { isotropic, clustered };
enum class Directivity { isotropic_element, cosine_pattern };

// Normalized spatial correlation matrix: Hermitian, PSD up to rounding, and
// trace equal to the antenna count M.
struct CorrelationMatrix {
  Eigen::MatrixXcd entries;
  UpaGeometry geom;
  CorrelationKind kind;

  double trace_real() const { return entries.trace().real(); }
  // tr(R^2) = ||R||_F^2 for Hermitian R.
  double tr_r_squared() const { return entries.squaredNorm(); }
};

struct Cluster {
  double weight;             // nonnegative, weights sum to 1 over the model
  double nominal_azimuth;    // radians, [-pi/2, pi/2]
  double nominal_elevation;  // radians, [-pi/2, pi/2]
};

// Tensor-product Gauss-Legendre rule on [-pi/2, pi/2]^2.
struct Quadrature {
  int nodes_per_axis;
  explicit Quadrature(int n = kDefaultNodes);
  static constexpr int kDefaultNodes = 200;
};

// Angular power density: a mixture of truncated bivariate Gaussians centered
// at the cluster nominal angles, optionally multiplied by the cosine element
// pattern cos(az)cos(el), and normalized so its numerical integral over
// [-pi/2, pi/2]^2 is 1.
//
// The normalization constant is computed once at construction on a fixed
// internal reference grid, independent of whatever quadrature a caller later
// integrates with. That way a too-coarse caller grid shows up as a trace
// error in clustered_correlation instead of being silently absorbed by a
// grid-matched normalization.
class ClusterScattering {
public:
  ClusterScattering(std::vector<Cluster> clusters, double angular_std,
                    Directivity directivity);

  double density(const Direction& dir) const;
  double density(double azimuth, double elevation) const;

  const std::vector<Cluster>& clusters() const { return clusters_; }
  double angular_std() const { return angular_std_; }
  Directivity directivity() const { return directivity_; }
  double normalization() const { return norm_; }

private:
  double unnormalized(double az, double el) const;

  std::vector<Cluster> clusters_;
  double angular_std_;
  Directivity directivity_;
  double norm_;
};

inline double scattering_density(const ClusterScattering& model, const Direction& dir) {
  return model.density(dir);
}

// Closed-form isotropic correlation: entry (m,l) is
// sinc(2 sqrt(dh^2 + dv^2)) with dh, dv the wavelength-normalized horizontal
// and vertical index distances. Real symmetric, unit diagonal.
CorrelationMatrix isotropic_correlation(const UpaGeometry& geom);

// Numerical correlation matrix for an arbitrary angular density f(az, el):
// entry (m,l) integrates f * exp(j 2 pi (dh sin(az)cos(el) + dv sin(el)))
// over [-pi/2, pi/2]^2. Because the entry depends on (m,l) only through the
// index differences, the matrix is assembled from a
// (2 m_h - 1) x (2 m_v - 1) difference table computed with one matrix
// product per quadrature row block.
//
// The result is symmetrized and rescaled to trace M. If the pre-rescale
// trace deviates from M by more than 1%, the grid cannot represent the
// density and an AccuracyError is thrown.
CorrelationMatrix integrate_correlation(
    const UpaGeometry& geom, const std::function<double(double, double)>& density,
    const Quadrature& quad, CorrelationKind kind);

CorrelationMatrix clustered_correlation(const UpaGeometry& geom,
                                        const ClusterScattering& model,
                                        const Quadrature& quad);

// Random cluster statistics: n weights drawn uniform on [0,1] and normalized
// by their sum, nominal angles i.i.d. uniform on [-angle_range, angle_range].
ClusterScattering sample_cluster_model(Rng& rng, int n_clusters, double angle_range,
                                       double angular_std, Directivity directivity);

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

// sin(pi x) / (pi x), 1 at x = 0.
double sinc(double x);

// Matrix file I/O: '#'-prefixed geometry header, then row-major rows with
// real and imaginary parts interleaved.
void write_correlation_csv(const std::string& path, const CorrelationMatrix& r);
CorrelationMatrix read_correlation_csv(const std::string& path);

}  // namespace rsls
