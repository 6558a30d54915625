#pragma once

#include "qig/state_geometry.hpp"

namespace qig {

/// Static thermal susceptibility (1/beta^2) d^2 ln Z / dh_mu dh_nu at zero
/// source field, by high-order central differences with a step-halving
/// consistency check. Equals the full covariance when [H, Lambda] = 0.
double classical_covariance(const HermitianOperator &h, const HermitianOperator &lambda_mu,
                            const HermitianOperator &lambda_nu, double beta,
                            std::optional<double> step = std::nullopt);

/// Total covariance minus the thermal part.
double quantum_covariance(const HermitianOperator &h, const HermitianOperator &lambda_mu,
                          const HermitianOperator &lambda_nu, double beta,
                          std::optional<double> step = std::nullopt);

struct FluctuationReport {
  double total = 0.0;
  double classical = 0.0;
  double quantum = 0.0;
  double sld_qfi = 0.0;
};

FluctuationReport fluctuation_report(const HermitianOperator &h,
                                     const HermitianOperator &lambda, double beta,
                                     std::optional<double> step = std::nullopt);

/// Wigner-Yanase-Dyson skew information
/// -(1/2) Tr([Lambda_mu, rho^alpha][Lambda_nu, rho^(1-alpha)]).
double wyd_skew(const DensityMatrix &rho, const HermitianOperator &lambda_mu,
                const HermitianOperator &lambda_nu, double alpha);

/// Gauss-Legendre integral of the skew information over alpha in [0, 1];
/// doubles the order to verify convergence.
double qv_via_wyd_integral(const DensityMatrix &rho, const HermitianOperator &lambda,
                           int quadrature_order = 32);

/// Positive-frequency Lehmann lines of the dissipative response chi''(omega).
struct SpectralFunction {
  struct Line {
    double frequency = 0.0; // > 0, energy units
    double weight = 0.0;
  };
  std::vector<Line> lines; // frequencies strictly ascending
  double beta = 0.0;
};

/// Lehmann representation: a line at omega = E_m - E_n > 0 with weight
/// pi (p_n - p_m) Re(Lambda_mu[n,m] Lambda_nu[m,n]); degenerate frequencies
/// merged within 1e-10.
SpectralFunction spectral_function(const HermitianOperator &h,
                                   const HermitianOperator &lambda_mu,
                                   const HermitianOperator &lambda_nu, double beta);

/// (4/pi) sum tanh(omega/2T) weight; reproduces the unitary QFIM component.
double qfi_from_response(const SpectralFunction &spec, double temperature);

/// (2/pi) sum c_f (1 - e^(-beta omega)) / f(e^(-beta omega)) weight, with the
/// same per-spec normalization c_f as qfim_monotone.
double qfi_from_response_general(const SpectralFunction &spec, double beta,
                                 const MonotoneFunctionSpec &f);

/// (1/pi) sum L(beta omega / 2) weight with the Langevin function
/// L(x) = coth x - 1/x.
double qv_from_response(const SpectralFunction &spec, double beta);

} // namespace qig
