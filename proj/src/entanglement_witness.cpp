#include "qig/entanglement_witness.hpp"

#include "qig/errors.hpp"

#include <cmath>

namespace qig {

double producibility_bound(int n, int k, double delta_a) {
  if (k < 1 || k > n) throw Error("producibility_bound: need 1 <= k <= N");
  if (!(delta_a > 0.0)) throw Error("producibility_bound: Delta_a must be positive");
  const int s = n / k;
  const int r = n - s * k;
  return delta_a * delta_a * (static_cast<double>(s) * k * k + static_cast<double>(r) * r);
}

double mean_bound(int n, int k) {
  if (k < 1 || k > n) throw Error("mean_bound: need 1 <= k <= N");
  const int s = n / k;
  const int r = n - s * k;
  const double dk1 = (k == 1) ? 1.0 : 0.0;
  const double dr1 = (r == 1) ? 1.0 : 0.0;
  return (static_cast<double>(s) * (static_cast<double>(k) * k + 2.0 * k - dk1) +
          static_cast<double>(r) * r + 2.0 * r - dr1) /
         3.0;
}

WitnessVerdict witness_depth(double observed, int n, double delta_a, WitnessMode mode) {
  if (observed < 0.0) throw Error("witness_depth: observed QFI must be >= 0");
  WitnessVerdict v;
  v.n = n;
  v.delta_a = delta_a;
  v.observed_qfi = observed;
  v.bounds.reserve(static_cast<std::size_t>(n));
  int deepest_violated = 0;
  for (int k = 1; k <= n; ++k) {
    const double bound = (mode == WitnessMode::element)
                             ? producibility_bound(n, k, delta_a)
                             : mean_bound(n, k);
    v.bounds.push_back(bound);
    if (observed > bound) deepest_violated = k;
  }
  v.certified_depth = std::min(deepest_violated + 1, n);
  return v;
}

namespace {
template <typename State>
double averaged_qfi_impl(const State &state, const SpinSystem &system,
                         GeneratorKind kind) {
  const std::array<std::array<double, 3>, 3> axes{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  double acc = 0.0;
  for (const auto &axis : axes) {
    HermitianOperator gen = (kind == GeneratorKind::collective)
                                ? collective_spin(axis, system)
                                : staggered_spin(axis, system);
    if constexpr (std::is_same_v<State, PureState>) {
      acc += qfim_unitary_pure(state, {gen})(0, 0);
    } else {
      acc += qfim_mixed_unitary(state, {gen}).tensor.metric()(0, 0);
    }
  }
  return acc / 3.0;
}
} // namespace

double direction_averaged_qfi(const PureState &psi, const SpinSystem &system,
                              GeneratorKind kind) {
  return averaged_qfi_impl(psi, system, kind);
}

double direction_averaged_qfi(const DensityMatrix &rho, const SpinSystem &system,
                              GeneratorKind kind) {
  return averaged_qfi_impl(rho, system, kind);
}

double metrological_gain(const DensityMatrix &rho, const HermitianOperator &lambda,
                         double delta_a, int n) {
  const double f = qfim_mixed_unitary(rho, {lambda}).tensor.metric()(0, 0);
  return f / producibility_bound(n, 1, delta_a);
}

} // namespace qig
