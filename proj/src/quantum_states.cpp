#include "qig/quantum_states.hpp"

#include "qig/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qig {

namespace {
constexpr double kHermTolerance = 1e-12;
constexpr double kEigenClip = 1e-12; // eigenvalues in [-1e-12, 0] count as 0

void require_hermitian(const Matrix &m, const char *what) {
  if (m.rows() != m.cols()) throw DimensionError(std::string(what) + ": not square");
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTolerance * scale)
    throw Error(std::string(what) + ": not Hermitian within 1e-12");
}
} // namespace

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 1) throw DimensionError("PureState: empty amplitude vector");
  if (std::abs(amps_.norm() - 1.0) > 1e-12)
    throw Error("PureState: norm must be 1 within 1e-12");
}

DensityMatrix::DensityMatrix(Matrix entries) : rho_(std::move(entries)) {
  require_hermitian(rho_, "DensityMatrix");
  if (std::abs(rho_.trace().real() - 1.0) > 1e-12 || std::abs(rho_.trace().imag()) > 1e-12)
    throw Error("DensityMatrix: trace must be 1 within 1e-12");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kEigenClip)
    throw Error("DensityMatrix: negative eigenvalue beyond 1e-12");
}

DensityMatrix DensityMatrix::from_pure(const PureState &psi) {
  return DensityMatrix(psi.projector());
}

HermitianOperator::HermitianOperator(Matrix entries) : mat_(std::move(entries)) {
  require_hermitian(mat_, "HermitianOperator");
  mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
}

SpinSystem::SpinSystem(int n, int max_sites) : sites(n), cap(max_sites) {
  if (n < 1) throw Error("SpinSystem: need at least one site");
  if (n > cap) throw Error("SpinSystem: site count exceeds the 2^" +
                           std::to_string(cap) + " Hilbert-space cap");
}

EigenSystem diagonalize(const Matrix &hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return EigenSystem{es.eigenvalues(), es.eigenvectors()};
}

double purity(const DensityMatrix &rho) {
  return (rho.entries() * rho.entries()).trace().real();
}

double von_neumann_entropy(const DensityMatrix &rho, LogBase base) {
  EigenSystem es = diagonalize(rho.entries());
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    double p = es.values[i];
    if (p > 1e-14) s -= p * std::log(p);
  }
  return base == LogBase::two ? s / std::log(2.0) : s;
}

DensityMatrix partial_trace(const DensityMatrix &rho, const std::vector<int> &keep,
                            const SpinSystem &system) {
  const int n = system.sites;
  if (keep.empty()) throw Error("partial_trace: keep set must be non-empty");
  if (static_cast<int>(keep.size()) >= n)
    throw Error("partial_trace: keep set must be a proper subset");
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int site : keep) {
    if (site < 0 || site >= n) throw Error("partial_trace: site index out of range");
    if (kept[static_cast<std::size_t>(site)]) throw Error("partial_trace: duplicate site");
    kept[static_cast<std::size_t>(site)] = true;
  }
  if (rho.dimension() != system.hilbert_dimension())
    throw DimensionError("partial_trace: state does not match system");

  std::vector<int> traced;
  std::vector<int> kept_sites;
  for (int s = 0; s < n; ++s) (kept[static_cast<std::size_t>(s)] ? kept_sites : traced).push_back(s);

  const int nk = static_cast<int>(kept_sites.size());
  const int nt = static_cast<int>(traced.size());
  const Eigen::Index dk = Eigen::Index(1) << nk;
  const Eigen::Index dt = Eigen::Index(1) << nt;

  // Site 0 is the most significant bit of the full index; the reduced state
  // keeps the relative order of the retained sites.
  auto full_index = [&](Eigen::Index k_bits, Eigen::Index t_bits) {
    Eigen::Index idx = 0;
    for (int b = 0; b < nk; ++b)
      if ((k_bits >> (nk - 1 - b)) & 1) idx |= Eigen::Index(1) << (n - 1 - kept_sites[static_cast<std::size_t>(b)]);
    for (int b = 0; b < nt; ++b)
      if ((t_bits >> (nt - 1 - b)) & 1) idx |= Eigen::Index(1) << (n - 1 - traced[static_cast<std::size_t>(b)]);
    return idx;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r)
    for (Eigen::Index c = 0; c < dk; ++c) {
      Complex acc(0.0, 0.0);
      for (Eigen::Index t = 0; t < dt; ++t)
        acc += rho.entries()(full_index(r, t), full_index(c, t));
      out(r, c) = acc;
    }
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(out);
}

double entanglement_entropy(const PureState &psi, const std::vector<int> &region,
                            const SpinSystem &system, LogBase base) {
  return von_neumann_entropy(partial_trace(DensityMatrix::from_pure(psi), region, system),
                             base);
}

std::vector<double> entanglement_spectrum(const DensityMatrix &rho) {
  EigenSystem es = diagonalize(rho.entries());
  std::vector<double> levels;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values[i] > 1e-14) levels.push_back(-std::log(es.values[i]));
  std::sort(levels.begin(), levels.end());
  return levels;
}

DensityMatrix gibbs_state(const HermitianOperator &h, double beta) {
  if (!std::isfinite(beta)) throw Error("gibbs_state: beta must be finite");
  EigenSystem es = diagonalize(h.matrix());
  const double shift = es.values.minCoeff();
  RealVector boltzmann(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    boltzmann[i] = std::exp(-beta * (es.values[i] - shift));
  boltzmann /= boltzmann.sum();
  Matrix rho = es.vectors * boltzmann.asDiagonal() * es.vectors.adjoint();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(rho);
}

PureState ghz_state(int n, const SpinSystem &system) {
  if (n < 2) throw Error("ghz_state: need N >= 2");
  if (n != system.sites) throw DimensionError("ghz_state: N does not match system");
  Vector amps = Vector::Zero(system.hilbert_dimension());
  amps[0] = Complex(M_SQRT1_2, 0.0);
  amps[system.hilbert_dimension() - 1] = Complex(M_SQRT1_2, 0.0);
  return PureState(amps);
}

double expectation(const PureState &psi, const HermitianOperator &a) {
  return (psi.amplitudes().adjoint() * a.matrix() * psi.amplitudes())(0).real();
}

double expectation(const DensityMatrix &rho, const HermitianOperator &a) {
  return (rho.entries() * a.matrix()).trace().real();
}

namespace {
template <typename State>
double variance_impl(const State &s, const HermitianOperator &a) {
  HermitianOperator a2(Matrix(a.matrix() * a.matrix()));
  double v = expectation(s, a2) - expectation(s, a) * expectation(s, a);
  if (v < -1e-12) throw Error("variance came out negative beyond tolerance");
  return std::max(v, 0.0);
}

template <typename State>
double covariance_impl(const State &s, const HermitianOperator &a,
                       const HermitianOperator &b) {
  Matrix sym = 0.5 * (a.matrix() * b.matrix() + b.matrix() * a.matrix());
  return expectation(s, HermitianOperator(sym)) - expectation(s, a) * expectation(s, b);
}
} // namespace

double variance(const PureState &psi, const HermitianOperator &a) {
  return variance_impl(psi, a);
}
double variance(const DensityMatrix &rho, const HermitianOperator &a) {
  return variance_impl(rho, a);
}
double covariance_real(const PureState &psi, const HermitianOperator &a,
                       const HermitianOperator &b) {
  return covariance_impl(psi, a, b);
}
double covariance_real(const DensityMatrix &rho, const HermitianOperator &a,
                       const HermitianOperator &b) {
  return covariance_impl(rho, a, b);
}

} // namespace qig
