#pragma once

#include "qig/quantum_states.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qig {

/// Hermitian tensor over parameter indices. The real part is the Riemannian
/// metric; the Berry curvature is the antisymmetrized imaginary part
/// i(Q_nu,mu - Q_mu,nu) = 2 Im Q_mu,nu, the normalization under which the
/// curvature integral over a closed manifold is 2 pi times an integer.
class GeometricTensor {
public:
  explicit GeometricTensor(Matrix entries);
  Eigen::Index parameter_dim() const { return q_.rows(); }
  const Matrix &entries() const { return q_; }
  RealMatrix metric() const { return q_.real(); }
  RealMatrix berry() const { return 2.0 * q_.imag(); }

private:
  Matrix q_;
};

/// Parametrized family of pure states (or density matrices via `evaluate_mixed`).
/// `generators` declares a unitary parameterization d_mu psi = -i Lambda_mu psi.
/// `gap`, when supplied, reports the spectral gap protecting the state (used by
/// band-structure sweeps to detect degeneracies).
struct QuantumFamily {
  int parameter_dim = 1;
  std::function<PureState(const RealVector &)> evaluate;
  std::function<DensityMatrix(const RealVector &)> evaluate_mixed; // optional
  std::vector<HermitianOperator> generators;                       // optional
  std::function<double(const RealVector &)> gap;                   // optional
};

struct QgtMode {
  enum class Kind { generators, central_difference } kind = Kind::central_difference;
  std::optional<double> step;

  static QgtMode generators() { return {Kind::generators, std::nullopt}; }
  static QgtMode central(std::optional<double> s = std::nullopt) {
    return {Kind::central_difference, s};
  }
};

/// Quantum geometric tensor Q_mu,nu = <d_mu psi|(1 - |psi><psi|)|d_nu psi>.
/// Finite-difference states are phase-aligned to the center state, so the
/// result is invariant under lambda-dependent phase redefinitions.
GeometricTensor qgt_pure(const QuantumFamily &family, const RealVector &lambda,
                         const QgtMode &mode = {});

/// 4 Re Cov_psi(Lambda_mu, Lambda_nu) for a unitary parameterization.
RealMatrix qfim_unitary_pure(const PureState &psi,
                             const std::vector<HermitianOperator> &generators);

/// Symmetric logarithmic derivative: L with (rho L + L rho)/2 = tangent on the
/// support-reachable block p_j + p_k > 1e-12 max(p). Raises TangentSupportError
/// when the tangent has weight outside that block beyond 1e-8 (relative).
HermitianOperator sld(const DensityMatrix &rho, const Matrix &tangent);

struct MixedQfim {
  GeometricTensor tensor;    // Q_mu,nu = Tr[rho L_mu L_nu]; metric = SLD QFIM
  RealMatrix unitary;        // eigenvector-rotation part (paper's spectral form)
  RealMatrix nonunitary;     // eigenvalue part, the classical Fisher term
};

/// SLD quantum Fisher information metric of a mixed state, with the spectral
/// split into unitary and non-unitary components (their sum reproduces the
/// SLD metric identically). Normalization: pure states give 4 Var.
MixedQfim qfim_mixed(const DensityMatrix &rho, const std::vector<Matrix> &tangents);

/// Convenience: unitary tangents i[rho, Lambda_mu] from generators.
MixedQfim qfim_mixed_unitary(const DensityMatrix &rho,
                             const std::vector<HermitianOperator> &generators);

/// Operator-monotone function selecting a metric on mixed states.
class MonotoneFunctionSpec {
public:
  static MonotoneFunctionSpec sld();
  static MonotoneFunctionSpec bkm();
  static MonotoneFunctionSpec rld();
  static MonotoneFunctionSpec lld();
  static MonotoneFunctionSpec wyd(double alpha);
  /// Custom f: (0, inf) -> (0, inf); rescaled so f(1) = 1.
  static MonotoneFunctionSpec custom(std::function<double(double)> f);

  double f(double x) const;
  double f_at_zero() const { return f0_; }
  /// Matrix-mean weight m_f(x, y) = y f(x/y) evaluated stably per named choice.
  double mean(double x, double y) const;
  /// Normalization applied to the raw Morozova-Cencov metric: 2 f(0) for
  /// metrics regular at pure states, 1 otherwise. Makes the SLD choice the
  /// standard QFIM and the WYD choice equal 4x the skew information.
  double normalization() const;
  const std::string &name() const { return name_; }

private:
  MonotoneFunctionSpec() = default;
  enum class Named { sld, bkm, rld, lld, wyd, custom } which_ = Named::custom;
  double alpha_ = 0.5;
  double f0_ = 0.0;
  std::function<double(double)> custom_;
  std::string name_;
};

/// Metric from the f-weighted superoperator in the rho eigenbasis; the SLD
/// choice reproduces qfim_mixed. Only the real part is exposed.
RealMatrix qfim_monotone(const DensityMatrix &rho, const std::vector<Matrix> &tangents,
                         const MonotoneFunctionSpec &spec);

/// Tr(sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2 in [0, 1].
double uhlmann_fidelity(const DensityMatrix &rho1, const DensityMatrix &rho2);

/// arccos(sqrt(F)) in [0, pi/2].
double bures_distance(const DensityMatrix &rho1, const DensityMatrix &rho2);

/// arccos |<psi1|psi2>|.
double quantum_angle(const PureState &psi1, const PureState &psi2);

/// Central-difference tangents d_mu rho, Hermitian-symmetrized.
std::vector<Matrix> family_tangents(const QuantumFamily &family, const RealVector &lambda,
                                    std::optional<double> step = std::nullopt);

} // namespace qig
