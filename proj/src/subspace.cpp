#include "rsls/subspace.hpp"

#include <cmath>
#include <stdexcept>

namespace rsls {

namespace {

// Rotate each column so its largest-magnitude entry is real positive.
// Eigenvectors are only defined up to a phase; fixing it makes the basis
// identical across runs, platforms, and solver paths.
void fix_column_phases(Eigen::MatrixXcd& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
      const double a = std::abs(basis(i, c));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    const std::complex<double> v = basis(imax, c);
    if (std::abs(v) > 0.0) basis.col(c) *= std::conj(v) / std::abs(v);
  }
}

}  // namespace

ReducedSubspace reduce(const CorrelationMatrix& r_iso, double threshold) {
  const Eigen::MatrixXcd& R = r_iso.entries;
  if (R.rows() != R.cols()) throw std::invalid_argument("reduce: matrix not square");
  if ((R - R.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("reduce: input matrix is not Hermitian");
  if (!(threshold > 0.0) || threshold >= 1.0)
    throw std::invalid_argument("reduce: threshold must be in (0, 1)");

  const int M = static_cast<int>(R.rows());
  Eigen::VectorXd evals(M);
  Eigen::MatrixXcd evecs(M, M);
  if (R.imag().cwiseAbs().maxCoeff() < 1e-12) {
    // The isotropic matrix is real symmetric; the real solver is the more
    // robust path and keeps the basis real.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R.real());
    if (es.info() != Eigen::Success)
      throw std::runtime_error("reduce: eigendecomposition failed");
    evals = es.eigenvalues();
    evecs = es.eigenvectors().cast<std::complex<double>>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("reduce: eigendecomposition failed");
    evals = es.eigenvalues();
    evecs = es.eigenvectors();
  }

  // Eigen returns ascending order; flip to descending.
  evals.reverseInPlace();
  evecs = evecs.rowwise().reverse().eval();

  const double lambda_max = evals(0);
  if (!(lambda_max > 0.0))
    throw std::invalid_argument("reduce: largest eigenvalue not positive");
  int r = 0;
  while (r < M && evals(r) > threshold * lambda_max) ++r;
  if (r < 1) throw std::runtime_error("reduce: empty subspace");

  ReducedSubspace sub{evecs.leftCols(r), r, evals.head(r), r_iso.geom};
  fix_column_phases(sub.basis);
  return sub;
}

Eigen::VectorXcd project(const ReducedSubspace& sub, const Eigen::VectorXcd& v) {
  if (v.size() != sub.basis.rows())
    throw std::invalid_argument("project: vector length does not match the array size");
  return sub.basis * (sub.basis.adjoint() * v);
}

double span_residual(const ReducedSubspace& sub, const CorrelationMatrix& r) {
  if (!(r.geom == sub.geom))
    throw std::invalid_argument("span_residual: geometry mismatch");
  const Eigen::MatrixXcd residual =
      r.entries - sub.basis * (sub.basis.adjoint() * r.entries);
  return residual.norm() / r.entries.norm();
}

bool subspace_contains(const ReducedSubspace& sub, const CorrelationMatrix& r, double tol) {
  return span_residual(sub, r) < tol;
}

}  // namespace rsls
