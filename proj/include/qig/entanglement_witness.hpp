#pragma once

#include "qig/spin_chains.hpp"
#include "qig/state_geometry.hpp"

namespace qig {

/// QFI ceiling for k-producible states: Delta_a^2 (s k^2 + r^2) with
/// s = floor(N/k), r = N - s k. Delta_a enters quadratically so that the
/// bound scales with the generator exactly as the QFI does.
double producibility_bound(int n, int k, double delta_a);

/// Direction-averaged bound (1/3)(s(k^2 + 2k - delta_{k,1}) + r^2 + 2r - delta_{r,1}).
double mean_bound(int n, int k);

enum class WitnessMode { element, mean };

struct WitnessVerdict {
  int n = 0;
  double delta_a = 1.0;
  double observed_qfi = 0.0;
  int certified_depth = 1; // k_min
  std::vector<double> bounds; // bounds[k-1] for k = 1..N
};

/// k_min = 1 + largest k whose bound the observed QFI exceeds (1 if none).
WitnessVerdict witness_depth(double observed, int n, double delta_a, WitnessMode mode);

enum class GeneratorKind { collective, staggered };

/// (F_x + F_y + F_z)/3 over the three lab-frame generators of `kind`;
/// pure states use 4 Var, mixed states the SLD QFI of the unitary tangents.
double direction_averaged_qfi(const PureState &psi, const SpinSystem &system,
                              GeneratorKind kind = GeneratorKind::collective);
double direction_averaged_qfi(const DensityMatrix &rho, const SpinSystem &system,
                              GeneratorKind kind = GeneratorKind::collective);

/// QFI relative to the separable ceiling producibility_bound(N, 1, Delta_a);
/// gain > 1 certifies metrologically useful entanglement.
double metrological_gain(const DensityMatrix &rho, const HermitianOperator &lambda,
                         double delta_a, int n);

} // namespace qig
