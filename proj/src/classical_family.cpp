#include "qig/classical_family.hpp"

#include "qig/errors.hpp"

#include <cmath>
#include <random>

namespace qig {

namespace {

constexpr double kProbCutoff = 1e-14;

RealMatrix family_jacobian(const ClassicalFamily &family, const RealVector &lambda,
                           const DerivativeMode &mode) {
  if (mode.kind == DerivativeMode::Kind::analytic) {
    if (!family.jacobian) throw Error("family has no analytic derivative map");
    RealMatrix j = family.jacobian(lambda);
    for (int mu = 0; mu < family.parameter_dim; ++mu)
      if (std::abs(j.col(mu).sum()) > 1e-10)
        throw ConsistencyError("analytic derivative columns must sum to 0");
    return j;
  }
  const Eigen::Index dim = family(lambda).dimension();
  RealMatrix j(dim, family.parameter_dim);
  for (int mu = 0; mu < family.parameter_dim; ++mu) {
    double h = mode.step ? *mode.step : default_fd_step(lambda[mu]);
    RealVector lp = lambda, lm = lambda;
    lp[mu] += h;
    lm[mu] -= h;
    j.col(mu) = (family(lp).probs() - family(lm).probs()) / (2.0 * h);
  }
  return j;
}

RealMatrix hessian_central(const std::function<double(const RealVector &)> &f,
                           const RealVector &lambda, int dim,
                           std::optional<double> step) {
  RealMatrix h(dim, dim);
  auto step_for = [&](int mu) { return step ? *step : default_fd_step(lambda[mu]); };
  for (int mu = 0; mu < dim; ++mu) {
    const double hm = step_for(mu);
    RealVector lp = lambda, lm = lambda;
    lp[mu] += hm;
    lm[mu] -= hm;
    h(mu, mu) = (f(lp) - 2.0 * f(lambda) + f(lm)) / (hm * hm);
    for (int nu = mu + 1; nu < dim; ++nu) {
      const double hn = step_for(nu);
      RealVector lpp = lambda, lpm = lambda, lmp = lambda, lmm = lambda;
      lpp[mu] += hm; lpp[nu] += hn;
      lpm[mu] += hm; lpm[nu] -= hn;
      lmp[mu] -= hm; lmp[nu] += hn;
      lmm[mu] -= hm; lmm[nu] -= hn;
      h(mu, nu) = h(nu, mu) = (f(lpp) - f(lpm) - f(lmp) + f(lmm)) / (4.0 * hm * hn);
    }
  }
  return h;
}

} // namespace

ClassicalFamily coin_family() {
  ClassicalFamily f;
  f.parameter_dim = 1;
  f.is_mixture = true;
  f.scalar_domain = {0.0, 1.0};
  f.evaluate = [](const RealVector &lambda) {
    double l = lambda[0];
    if (l < 0.0 || l > 1.0) throw Error("coin family parameter outside [0, 1]");
    RealVector p(2);
    p << l, 1.0 - l;
    return ProbabilityVector(p);
  };
  f.jacobian = [](const RealVector &) {
    RealMatrix j(2, 1);
    j << 1.0, -1.0;
    return j;
  };
  return f;
}

ClassicalFamily mixture_family(const std::vector<ProbabilityVector> &components) {
  if (components.size() < 2) throw Error("mixture family needs >= 2 components");
  const Eigen::Index dim = components.front().dimension();
  for (const auto &c : components)
    if (c.dimension() != dim) throw DimensionError("mixture components differ in dimension");
  ClassicalFamily f;
  f.parameter_dim = static_cast<int>(components.size()) - 1;
  f.is_mixture = true;
  f.evaluate = [components, dim](const RealVector &lambda) {
    RealVector p = RealVector::Zero(dim);
    double rest = 1.0;
    for (std::size_t mu = 0; mu + 1 < components.size(); ++mu) {
      p += lambda[static_cast<Eigen::Index>(mu)] * components[mu].probs();
      rest -= lambda[static_cast<Eigen::Index>(mu)];
    }
    p += rest * components.back().probs();
    return ProbabilityVector(p);
  };
  f.jacobian = [components, dim](const RealVector &) {
    RealMatrix j(dim, static_cast<Eigen::Index>(components.size()) - 1);
    for (std::size_t mu = 0; mu + 1 < components.size(); ++mu)
      j.col(static_cast<Eigen::Index>(mu)) =
          components[mu].probs() - components.back().probs();
    return j;
  };
  return f;
}

ClassicalFamily exponential_family(const ProbabilityVector &base,
                                   const RealMatrix &observables) {
  if (observables.rows() != base.dimension())
    throw DimensionError("observable rows must match base dimension");
  ClassicalFamily f;
  f.parameter_dim = static_cast<int>(observables.cols());
  RealVector q = base.probs();
  f.log_normalizer = [q, observables](const RealVector &lambda) {
    RealVector arg = observables * lambda;
    double shift = arg.maxCoeff();
    double z = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i)
      z += q[i] * std::exp(arg[i] - shift);
    return shift + std::log(z);
  };
  auto psi = f.log_normalizer;
  f.evaluate = [q, observables, psi](const RealVector &lambda) {
    RealVector arg = observables * lambda;
    double norm = psi(lambda);
    RealVector p(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i)
      p[i] = q[i] * std::exp(arg[i] - norm);
    return ProbabilityVector::normalized(p);
  };
  return f;
}

RealMatrix cfim(const ClassicalFamily &family, const RealVector &lambda,
                const DerivativeMode &mode) {
  const ProbabilityVector p = family(lambda);
  const RealMatrix j = family_jacobian(family, lambda, mode);
  const int d = family.parameter_dim;
  RealMatrix f = RealMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < p.dimension(); ++i) {
    if (p[i] < kProbCutoff) {
      for (int mu = 0; mu < d; ++mu)
        if (std::abs(j(i, mu)) >= 1e-10)
          throw BoundaryDivergenceError(
              "Fisher-Rao metric diverges: p_i ~ 0 with nonvanishing derivative");
      continue;
    }
    f += (j.row(i).transpose() * j.row(i)) / p[i];
  }
  f *= 0.25;
  f = RealMatrix(0.5 * (f + f.transpose()));
  return f;
}

RealMatrix metric_from_mixture_potential(const ClassicalFamily &family,
                                         const RealVector &lambda,
                                         std::optional<double> step) {
  if (!family.is_mixture)
    throw Error("entropy potential requires a mixture-type family");
  auto entropy_nats = [&family](const RealVector &l) {
    return shannon_entropy(family(l), LogBase::e);
  };
  // Surface the genuine boundary divergence rather than a garbage Hessian.
  const ProbabilityVector p = family(lambda);
  const RealMatrix j = family_jacobian(
      family, lambda,
      family.jacobian ? DerivativeMode::analytic() : DerivativeMode::central(step));
  for (Eigen::Index i = 0; i < p.dimension(); ++i)
    if (p[i] < 1e-14 && j.row(i).cwiseAbs().maxCoeff() >= 1e-10)
      throw BoundaryDivergenceError("entropy Hessian diverges at the simplex boundary");
  RealMatrix h = hessian_central(entropy_nats, lambda, family.parameter_dim, step);
  return RealMatrix(-0.25 * 0.5 * (h + h.transpose()));
}

RealMatrix metric_from_exponential_potential(const ClassicalFamily &family,
                                             const RealVector &lambda,
                                             std::optional<double> step) {
  if (!family.log_normalizer)
    throw Error("exponential potential requires a log-normalizer");
  RealMatrix h = hessian_central(family.log_normalizer, lambda,
                                 family.parameter_dim, step);
  // The log-normalizer is convex, so +(1/4) Hessian is the PSD choice.
  RealMatrix metric = RealMatrix(0.25 * 0.5 * (h + h.transpose()));
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(metric);
  double scale = std::max(1.0, metric.cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-6 * scale)
    throw ConsistencyError("exponential-family metric is not PSD");
  RealMatrix direct = cfim(family, lambda, DerivativeMode::central(step));
  if ((metric - direct).cwiseAbs().maxCoeff() > 1e-6 * std::max(1.0, direct.cwiseAbs().maxCoeff()))
    throw ConsistencyError("potential metric disagrees with cfim beyond 1e-6");
  return metric;
}

CrbResult crb_monte_carlo(const ClassicalFamily &family, double lambda,
                          std::size_t samples_per_trial, std::size_t trials,
                          std::uint64_t seed,
                          std::function<double(const std::vector<long> &, std::size_t)>
                              estimator) {
  if (family.parameter_dim != 1) throw Error("crb_monte_carlo is single-parameter");
  if (trials < 2) throw Error("crb_monte_carlo needs >= 2 trials");
  RealVector l0(1);
  l0 << lambda;
  const RealMatrix f = cfim(family, l0, DerivativeMode::central());
  if (!(f(0, 0) > 0.0) || !std::isfinite(f(0, 0)))
    throw Error("Cramer-Rao bound undefined: Fisher information vanishes");

  const ProbabilityVector p = family(l0);
  const Eigen::Index dim = p.dimension();
  if (!estimator) {
    // Plug-in maximum likelihood: golden-section over the declared domain.
    estimator = [&family, dim](const std::vector<long> &counts, std::size_t m) {
      auto neg_loglik = [&](double l) {
        RealVector lv(1);
        lv << l;
        const ProbabilityVector q = family(lv);
        double s = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
          if (counts[static_cast<std::size_t>(i)] == 0) continue;
          if (q[i] <= 0.0) return 1e300;
          s -= static_cast<double>(counts[static_cast<std::size_t>(i)]) * std::log(q[i]);
        }
        return s / static_cast<double>(m);
      };
      double lo = family.scalar_domain.first;
      double hi = family.scalar_domain.second;
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = lo, b = hi;
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      double f1 = neg_loglik(x1), f2 = neg_loglik(x2);
      for (int iter = 0; iter < 200 && (b - a) > 1e-12; ++iter) {
        if (f1 < f2) {
          b = x2; x2 = x1; f2 = f1;
          x1 = b - gr * (b - a);
          f1 = neg_loglik(x1);
        } else {
          a = x1; x1 = x2; f1 = f2;
          x2 = a + gr * (b - a);
          f2 = neg_loglik(x2);
        }
      }
      return 0.5 * (a + b);
    };
  }

  RealVector estimates(static_cast<Eigen::Index>(trials));
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(substream_seed(seed, t));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<long> counts(static_cast<std::size_t>(dim), 0);
    for (std::size_t s = 0; s < samples_per_trial; ++s) {
      double u = unif(rng);
      double acc = 0.0;
      Eigen::Index drawn = dim - 1;
      for (Eigen::Index i = 0; i < dim; ++i) {
        acc += p[i];
        if (u < acc) {
          drawn = i;
          break;
        }
      }
      ++counts[static_cast<std::size_t>(drawn)];
    }
    estimates[static_cast<Eigen::Index>(t)] = estimator(counts, samples_per_trial);
  }

  const double mean = estimates.mean();
  double var = 0.0;
  for (Eigen::Index i = 0; i < estimates.size(); ++i)
    var += (estimates[i] - mean) * (estimates[i] - mean);
  var /= static_cast<double>(trials - 1);

  CrbResult r;
  r.empirical_variance = var;
  r.crb = 1.0 / (4.0 * static_cast<double>(samples_per_trial) * f(0, 0));
  r.run = EstimatorRun{samples_per_trial, trials, seed, estimates};
  return r;
}

} // namespace qig
