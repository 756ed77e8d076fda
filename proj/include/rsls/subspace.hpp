#pragma once

#include <Eigen/Dense>

#include "rsls/correlation.hpp"

namespace rsls {

// Orthonormal eigenbasis of the isotropic correlation matrix restricted to
// eigenvalues above threshold * lambda_max. Its span contains every
// correlation matrix the scattering geometry can produce, which is what
// makes the reduced-subspace least squares estimator work.
struct ReducedSubspace {
  Eigen::MatrixXcd basis;       // M x r, orthonormal columns, U1
  int rank;                     // r
  Eigen::VectorXd eigenvalues;  // r values, descending, strictly positive
  UpaGeometry geom;
};

// Eigendecomposition with a relative eigenvalue cutoff. The input must be
// Hermitian to 1e-10; a real symmetric input takes the real solver path.
// Columns are ordered by descending eigenvalue and each is rotated so its
// largest-magnitude entry is real positive, which makes the basis
// reproducible across runs and platforms.
ReducedSubspace reduce(const CorrelationMatrix& r_iso, double threshold);

// U1 (U1^H v). Applying it twice equals applying it once.
Eigen::VectorXcd project(const ReducedSubspace& sub, const Eigen::VectorXcd& v);

// True iff ||(I - U1 U1^H) R||_F / ||R||_F < tol.
bool subspace_contains(const ReducedSubspace& sub, const CorrelationMatrix& r, double tol);

// The residual norm ratio behind subspace_contains, useful for reports.
double span_residual(const ReducedSubspace& sub, const CorrelationMatrix& r);

}  // namespace rsls
