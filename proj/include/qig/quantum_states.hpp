#pragma once

#include "qig/numerics.hpp"

#include <vector>

namespace qig {

/// Unit-norm complex vector. Hilbert-space dimension is amplitudes.size().
class PureState {
public:
  explicit PureState(Vector amplitudes);
  Eigen::Index dimension() const { return amps_.size(); }
  const Vector &amplitudes() const { return amps_; }
  Matrix projector() const { return amps_ * amps_.adjoint(); }

private:
  Vector amps_;
};

/// Hermitian, positive semi-definite, trace-one complex matrix.
class DensityMatrix {
public:
  explicit DensityMatrix(Matrix entries);
  static DensityMatrix from_pure(const PureState &psi);
  Eigen::Index dimension() const { return rho_.rows(); }
  const Matrix &entries() const { return rho_; }

private:
  Matrix rho_;
};

/// Hermitian matrix (observable or parameterization generator).
class HermitianOperator {
public:
  explicit HermitianOperator(Matrix entries);
  Eigen::Index dimension() const { return mat_.rows(); }
  const Matrix &matrix() const { return mat_; }

private:
  Matrix mat_;
};

/// Chain of N spin-1/2 sites. Site 0 is the leftmost tensor factor, i.e. the
/// most significant bit of the computational-basis index.
struct SpinSystem {
  int sites = 1;
  int cap = 14;

  explicit SpinSystem(int n, int max_sites = 14);
  Eigen::Index hilbert_dimension() const { return Eigen::Index(1) << sites; }
};

double purity(const DensityMatrix &rho);

double von_neumann_entropy(const DensityMatrix &rho, LogBase base);

/// Reduced state on `keep` (ascending site indices) of a state on `system`.
DensityMatrix partial_trace(const DensityMatrix &rho, const std::vector<int> &keep,
                            const SpinSystem &system);

double entanglement_entropy(const PureState &psi, const std::vector<int> &region,
                            const SpinSystem &system, LogBase base);

/// Spectrum of -ln(rho) over eigenvalues above 1e-14, ascending in energy.
std::vector<double> entanglement_spectrum(const DensityMatrix &rho);

/// exp(-beta H)/Z via eigendecomposition with a max-eigenvalue shift.
DensityMatrix gibbs_state(const HermitianOperator &h, double beta);

PureState ghz_state(int n, const SpinSystem &system);

double expectation(const PureState &psi, const HermitianOperator &a);
double expectation(const DensityMatrix &rho, const HermitianOperator &a);
double variance(const PureState &psi, const HermitianOperator &a);
double variance(const DensityMatrix &rho, const HermitianOperator &a);
/// Re<AB> - <A><B>, i.e. (1/2)<{A,B}> - <A><B>.
double covariance_real(const PureState &psi, const HermitianOperator &a,
                       const HermitianOperator &b);
double covariance_real(const DensityMatrix &rho, const HermitianOperator &a,
                       const HermitianOperator &b);

/// Eigenvalues ascending and the unitary of eigenvectors.
struct EigenSystem {
  RealVector values;
  Matrix vectors;
};
EigenSystem diagonalize(const Matrix &hermitian);

} // namespace qig
