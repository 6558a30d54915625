#include <doctest.h>

#include "qig/classical_family.hpp"
#include "qig/errors.hpp"

#include <cmath>

using namespace qig;

namespace {

RealVector scalar(double x) {
  RealVector v(1);
  v << x;
  return v;
}

ClassicalFamily constant_family() {
  ClassicalFamily f;
  f.parameter_dim = 1;
  f.evaluate = [](const RealVector &) { return ProbabilityVector({0.3, 0.7}); };
  return f;
}

// both mixture components equal: no lambda dependence anywhere
ClassicalFamily constant_mixture() {
  return mixture_family({ProbabilityVector({0.3, 0.7}), ProbabilityVector({0.3, 0.7})});
}

} // namespace

TEST_CASE("cfim on the coin family") {
  const ClassicalFamily coin = coin_family();
  CHECK(cfim(coin, scalar(0.5), DerivativeMode::analytic())(0, 0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cfim(coin, scalar(0.5))(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  // 1 / (4 * 0.1 * 0.9)
  CHECK(cfim(coin, scalar(0.1), DerivativeMode::analytic())(0, 0) ==
        doctest::Approx(1.0 / 0.36).epsilon(1e-12));
  CHECK(cfim(constant_family(), scalar(0.4))(0, 0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(cfim(coin, scalar(0.0), DerivativeMode::analytic()),
                  BoundaryDivergenceError);
}

TEST_CASE("shannon maximal where fisher minimal on the coin") {
  const ClassicalFamily coin = coin_family();
  const double s_mid = shannon_entropy(coin(scalar(0.5)), LogBase::two);
  const double f_mid = cfim(coin, scalar(0.5), DerivativeMode::analytic())(0, 0);
  double previous_f = f_mid;
  for (double lambda = 0.55; lambda < 0.99; lambda += 0.05) {
    CHECK(shannon_entropy(coin(scalar(lambda)), LogBase::two) < s_mid);
    const double f = cfim(coin, scalar(lambda), DerivativeMode::analytic())(0, 0);
    CHECK(f > previous_f); // monotone growth toward the boundary
    previous_f = f;
  }
}

TEST_CASE("mixture potential reproduces cfim") {
  const ClassicalFamily coin = coin_family();
  CHECK(metric_from_mixture_potential(coin, scalar(0.5))(0, 0) ==
        doctest::Approx(1.0).epsilon(1e-7));
  CHECK(metric_from_mixture_potential(coin, scalar(0.1))(0, 0) ==
        doctest::Approx(1.0 / 0.36).epsilon(1e-6));
  CHECK(metric_from_mixture_potential(constant_mixture(), scalar(0.2))(0, 0) ==
        doctest::Approx(0.0).epsilon(1e-8));
  CHECK_THROWS_AS(metric_from_mixture_potential(coin, scalar(1.0)),
                  BoundaryDivergenceError);

  // three-component mixture family, 2 parameters
  std::vector<ProbabilityVector> comps{ProbabilityVector({0.7, 0.2, 0.1}),
                                       ProbabilityVector({0.1, 0.8, 0.1}),
                                       ProbabilityVector({0.2, 0.2, 0.6})};
  const ClassicalFamily mix = mixture_family(comps);
  RealVector lambda(2);
  lambda << 0.3, 0.4;
  const RealMatrix direct = cfim(mix, lambda, DerivativeMode::analytic());
  const RealMatrix via_potential = metric_from_mixture_potential(mix, lambda);
  CHECK((direct - via_potential).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("exponential potential reproduces cfim") {
  // classical qubit Gibbs family over energies {+d, -d}, lambda = -beta
  const double d = 0.8;
  RealMatrix energies(2, 1);
  energies << d, -d;
  const ClassicalFamily gibbs =
      exponential_family(ProbabilityVector({0.5, 0.5}), energies);
  const RealVector lambda = scalar(-1.3);
  const RealMatrix via_psi = metric_from_exponential_potential(gibbs, lambda);
  const RealMatrix direct = cfim(gibbs, lambda, DerivativeMode::central());
  CHECK((via_psi - direct).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(via_psi(0, 0) > 0.0);

  // lambda-independent family: constant observable column
  RealMatrix flat(2, 1);
  flat << 1.0, 1.0;
  const ClassicalFamily inert = exponential_family(ProbabilityVector({0.4, 0.6}), flat);
  CHECK(metric_from_exponential_potential(inert, scalar(0.7))(0, 0) ==
        doctest::Approx(0.0).epsilon(1e-9));

  // two-state family, energies {0, 1}, at lambda = 0
  RealMatrix steps(2, 1);
  steps << 0.0, 1.0;
  const ClassicalFamily two_state =
      exponential_family(ProbabilityVector({0.5, 0.5}), steps);
  const RealMatrix a = metric_from_exponential_potential(two_state, scalar(0.0));
  const RealMatrix b = cfim(two_state, scalar(0.0), DerivativeMode::central());
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("cfim chain rule under scalar reparametrization") {
  const ClassicalFamily coin = coin_family();
  // lambda = mu^2 on a window where it stays inside (0, 1)
  ClassicalFamily reparametrized;
  reparametrized.parameter_dim = 1;
  reparametrized.evaluate = [coin](const RealVector &mu) {
    return coin(RealVector(mu.cwiseProduct(mu)));
  };
  for (double mu : {0.4, 0.6, 0.8}) {
    const double f_mu = cfim(reparametrized, scalar(mu))(0, 0);
    const double f_lambda = cfim(coin, scalar(mu * mu), DerivativeMode::analytic())(0, 0);
    CHECK(f_mu == doctest::Approx(4.0 * mu * mu * f_lambda).epsilon(1e-6));
  }
}

TEST_CASE("crb monte carlo on the coin") {
  const ClassicalFamily coin = coin_family();

  const CrbResult fair = crb_monte_carlo(coin, 0.5, 1000, 2000, 12345);
  CHECK(fair.crb == doctest::Approx(2.5e-4).epsilon(1e-12));
  CHECK(std::abs(fair.empirical_variance - fair.crb) < 0.1 * fair.crb);
  CHECK(fair.empirical_variance >=
        fair.crb * (1.0 - 5.0 / std::sqrt(static_cast<double>(fair.run.trials))));

  const CrbResult biased = crb_monte_carlo(coin, 0.9, 1000, 400, 99);
  CHECK(biased.crb == doctest::Approx(9e-5).epsilon(1e-10));
  CHECK(biased.empirical_variance >= biased.crb * (1.0 - 5.0 / std::sqrt(400.0)));

  // determinism at fixed seed
  const CrbResult again = crb_monte_carlo(coin, 0.5, 1000, 2000, 12345);
  CHECK(again.empirical_variance == fair.empirical_variance);

  CHECK_THROWS_AS(crb_monte_carlo(constant_family(), 0.5, 100, 10, 1), Error);
  CHECK_THROWS_AS(crb_monte_carlo(coin, 0.5, 100, 1, 1), Error);
}
