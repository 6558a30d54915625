#pragma once

#include "qig/probability.hpp"

#include <functional>
#include <optional>

namespace qig {

/// How parameter derivatives of a family are obtained.
struct DerivativeMode {
  enum class Kind { analytic, central_difference } kind = Kind::central_difference;
  std::optional<double> step; // absent: 1e-5 * max(1, |lambda_mu|) per axis

  static DerivativeMode analytic() { return {Kind::analytic, std::nullopt}; }
  static DerivativeMode central(std::optional<double> s = std::nullopt) {
    return {Kind::central_difference, s};
  }
};

/// A parametrized family of discrete distributions: lambda in R^d -> P.
///
/// `jacobian`, when present, returns the D x d matrix of dp_i/dlambda_mu
/// (columns sum to zero). Mixture families may be tagged to enable the
/// Hessian-of-entropy potential; exponential families supply log_normalizer.
struct ClassicalFamily {
  int parameter_dim = 1;
  std::function<ProbabilityVector(const RealVector &)> evaluate;
  std::function<RealMatrix(const RealVector &)> jacobian; // optional
  bool is_mixture = false;
  std::function<double(const RealVector &)> log_normalizer; // optional, psi(lambda)
  std::pair<double, double> scalar_domain{-1e300, 1e300};   // for estimators

  ProbabilityVector operator()(const RealVector &lambda) const { return evaluate(lambda); }
};

/// Two-outcome family p(Sun) = lambda on the open interval (0, 1).
ClassicalFamily coin_family();

/// Mixture of fixed distributions: p(lambda) = sum_mu lambda_mu comp_mu with
/// the last weight fixed by normalization when `last_implicit` is set.
ClassicalFamily mixture_family(const std::vector<ProbabilityVector> &components);

/// Exponential family p_i ~ q_i exp(lambda . H_i); log_normalizer attached.
ClassicalFamily exponential_family(const ProbabilityVector &base,
                                   const RealMatrix &observables);

/// Classical Fisher information metric (1/4) sum_i (d_mu p_i)(d_nu p_i)/p_i.
/// Entries with p_i below 1e-14 contribute nothing when their derivatives
/// vanish too, and raise BoundaryDivergenceError otherwise.
RealMatrix cfim(const ClassicalFamily &family, const RealVector &lambda,
                const DerivativeMode &mode = {});

/// -(1/4) Hessian (central differences) of the Shannon entropy in nats.
/// Valid for mixture families, where it reproduces cfim.
RealMatrix metric_from_mixture_potential(const ClassicalFamily &family,
                                         const RealVector &lambda,
                                         std::optional<double> step = std::nullopt);

/// (1/4) Hessian of the log-normalizer psi; the sign is fixed to the one
/// that makes the result positive semi-definite and is cross-checked
/// against cfim (ConsistencyError beyond 1e-6).
RealMatrix metric_from_exponential_potential(const ClassicalFamily &family,
                                             const RealVector &lambda,
                                             std::optional<double> step = std::nullopt);

struct EstimatorRun {
  std::size_t samples_per_trial = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  RealVector estimates;
};

struct CrbResult {
  double empirical_variance = 0.0;
  double crb = 0.0; // 1 / (4 M F)
  EstimatorRun run;
};

/// Samples `trials` batches of M draws from the scalar family at lambda,
/// applies the estimator (default: maximum likelihood over the empirical
/// distribution) and compares the across-trial variance with 1/(4 M F).
CrbResult crb_monte_carlo(const ClassicalFamily &family, double lambda,
                          std::size_t samples_per_trial, std::size_t trials,
                          std::uint64_t seed,
                          std::function<double(const std::vector<long> &, std::size_t)>
                              estimator = nullptr);

} // namespace qig
