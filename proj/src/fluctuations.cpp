#include "qig/fluctuations.hpp"

#include "qig/errors.hpp"

#include <cmath>

namespace qig {

namespace {

double log_partition(const HermitianOperator &h, double beta) {
  EigenSystem es = diagonalize(h.matrix());
  const double e0 = es.values.minCoeff();
  double z = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    z += std::exp(-beta * (es.values[i] - e0));
  return -beta * e0 + std::log(z);
}

// d^2/dh_mu dh_nu ln Z(H - h_mu Lmu - h_nu Lnu) at h = 0 using fourth-order
// stencils; ln Z enters through full diagonalizations of the shifted H.
double lnz_second_derivative(const HermitianOperator &h, const Matrix &lmu,
                             const Matrix &lnu, double beta, double step,
                             bool diagonal) {
  auto lnz = [&](double a, double b) {
    Matrix shifted = h.matrix() - a * lmu - b * lnu;
    return log_partition(HermitianOperator(0.5 * (shifted + shifted.adjoint().eval())),
                         beta);
  };
  if (diagonal) {
    const double f0 = lnz(0.0, 0.0);
    const double f1 = lnz(step, 0.0), fm1 = lnz(-step, 0.0);
    const double f2 = lnz(2.0 * step, 0.0), fm2 = lnz(-2.0 * step, 0.0);
    return (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * step * step);
  }
  // Mixed derivative, fourth-order cross stencil.
  auto d = [&](double s) {
    return (lnz(s, s) - lnz(s, -s) - lnz(-s, s) + lnz(-s, -s)) / (4.0 * s * s);
  };
  return (16.0 * d(step / 2.0) - d(step)) / 15.0;
}

} // namespace

double classical_covariance(const HermitianOperator &h, const HermitianOperator &lambda_mu,
                            const HermitianOperator &lambda_nu, double beta,
                            std::optional<double> step) {
  if (!(beta > 0.0)) throw Error("classical_covariance: beta must be positive");
  const bool diagonal = (lambda_mu.matrix() - lambda_nu.matrix()).cwiseAbs().maxCoeff() <
                        1e-14 * std::max(1.0, lambda_mu.matrix().cwiseAbs().maxCoeff());
  const double op_scale = std::max({1e-12, lambda_mu.matrix().cwiseAbs().maxCoeff(),
                                    lambda_nu.matrix().cwiseAbs().maxCoeff()});
  // ln Z depends on the source only through beta * h * Lambda, so that
  // dimensionless product is what the step must pin down: it balances the
  // stencil truncation against the 1/(beta * h)^2 roundoff amplification.
  const double h_step = step ? *step : 5e-3 / (beta * op_scale);

  const double d1 = lnz_second_derivative(h, lambda_mu.matrix(), lambda_nu.matrix(), beta,
                                          h_step, diagonal);
  const double d2 = lnz_second_derivative(h, lambda_mu.matrix(), lambda_nu.matrix(), beta,
                                          h_step / 2.0, diagonal);
  const double scale = std::max(1.0, std::abs(d2));
  if (std::abs(d1 - d2) > 1e-6 * scale)
    throw ConsistencyError("classical_covariance: step-halving check failed; "
                           "source-field step too large");
  return d2 / (beta * beta);
}

double quantum_covariance(const HermitianOperator &h, const HermitianOperator &lambda_mu,
                          const HermitianOperator &lambda_nu, double beta,
                          std::optional<double> step) {
  const DensityMatrix rho = gibbs_state(h, beta);
  const double total = covariance_real(rho, lambda_mu, lambda_nu);
  return total - classical_covariance(h, lambda_mu, lambda_nu, beta, step);
}

FluctuationReport fluctuation_report(const HermitianOperator &h,
                                     const HermitianOperator &lambda, double beta,
                                     std::optional<double> step) {
  const DensityMatrix rho = gibbs_state(h, beta);
  FluctuationReport r;
  r.total = variance(rho, lambda);
  r.classical = classical_covariance(h, lambda, lambda, beta, step);
  r.quantum = r.total - r.classical;
  r.sld_qfi = qfim_mixed_unitary(rho, {lambda}).tensor.metric()(0, 0);
  return r;
}

double wyd_skew(const DensityMatrix &rho, const HermitianOperator &lambda_mu,
                const HermitianOperator &lambda_nu, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("wyd_skew: alpha must lie in (0, 1)");
  EigenSystem es = diagonalize(rho.entries());
  const Eigen::Index n = rho.dimension();
  const Matrix mu = es.vectors.adjoint() * lambda_mu.matrix() * es.vectors;
  const Matrix nu = es.vectors.adjoint() * lambda_nu.matrix() * es.vectors;
  RealVector pa(n), pb(n);
  const double pmax = es.values.maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    // fractional powers amplify eigenvalue roundoff, so PSD noise is zeroed
    const double p = es.values[i] > 1e-14 * pmax ? es.values[i] : 0.0;
    pa[i] = std::pow(p, alpha);
    pb[i] = std::pow(p, 1.0 - alpha);
  }
  // -(1/2) Tr([Lmu, rho^a][Lnu, rho^(1-a)]) in the eigenbasis.
  double acc = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double da = pa[k] - pa[j];
      const double db = pb[j] - pb[k];
      acc += -0.5 * da * db * (mu(j, k) * nu(k, j)).real();
    }
  return acc;
}

double qv_via_wyd_integral(const DensityMatrix &rho, const HermitianOperator &lambda,
                           int quadrature_order) {
  if (quadrature_order < 8) throw Error("qv_via_wyd_integral: order must be >= 8");
  auto integrate = [&](int order) {
    Quadrature q = gauss_legendre_unit(order);
    std::vector<double> terms(q.nodes.size());
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double a = std::clamp(q.nodes[i], 1e-6, 1.0 - 1e-6);
      terms[i] = q.weights[i] * wyd_skew(rho, lambda, lambda, a);
    }
    return pairwise_sum(terms);
  };
  const double v1 = integrate(quadrature_order);
  const double v2 = integrate(2 * quadrature_order);
  if (std::abs(v1 - v2) > 1e-8 * std::max(1.0, std::abs(v2)))
    throw ConsistencyError("qv_via_wyd_integral: quadrature not converged");
  return v2;
}

SpectralFunction spectral_function(const HermitianOperator &h,
                                   const HermitianOperator &lambda_mu,
                                   const HermitianOperator &lambda_nu, double beta) {
  EigenSystem es = diagonalize(h.matrix());
  const Eigen::Index n = es.values.size();
  const Matrix mu = es.vectors.adjoint() * lambda_mu.matrix() * es.vectors;
  const Matrix nu = es.vectors.adjoint() * lambda_nu.matrix() * es.vectors;

  const double e0 = es.values.minCoeff();
  RealVector p(n);
  double z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    p[i] = std::exp(-beta * (es.values[i] - e0));
    z += p[i];
  }
  p /= z;

  std::vector<SpectralFunction::Line> raw;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const double omega = es.values[b] - es.values[a];
      if (omega <= 1e-12) continue;
      const double w = M_PI * (p[a] - p[b]) * (mu(a, b) * nu(b, a)).real();
      if (std::abs(w) < 1e-300) continue;
      raw.push_back({omega, w});
    }
  std::sort(raw.begin(), raw.end(),
            [](const auto &l, const auto &r) { return l.frequency < r.frequency; });

  SpectralFunction spec;
  spec.beta = beta;
  for (const auto &line : raw) {
    if (!spec.lines.empty() &&
        line.frequency - spec.lines.back().frequency <= 1e-10)
      spec.lines.back().weight += line.weight;
    else
      spec.lines.push_back(line);
  }
  // Tiny negative accumulations are roundoff; anything larger is a genuine
  // non-positive cross spectrum and is surfaced.
  for (auto &line : spec.lines) {
    if (line.weight < -1e-12)
      throw Error("spectral_function: negative line weight (cross spectrum is "
                  "not a valid SpectralFunction)");
    line.weight = std::max(line.weight, 0.0);
  }
  return spec;
}

double qfi_from_response(const SpectralFunction &spec, double temperature) {
  if (!(temperature > 0.0)) throw Error("qfi_from_response: temperature must be positive");
  if (std::abs(1.0 / temperature - spec.beta) > 1e-9 * std::max(1.0, spec.beta))
    throw Error("qfi_from_response: temperature inconsistent with spectrum beta");
  std::vector<double> terms(spec.lines.size());
  for (std::size_t i = 0; i < spec.lines.size(); ++i)
    terms[i] = std::tanh(spec.lines[i].frequency / (2.0 * temperature)) *
               spec.lines[i].weight;
  return 4.0 / M_PI * pairwise_sum(terms);
}

double qfi_from_response_general(const SpectralFunction &spec, double beta,
                                 const MonotoneFunctionSpec &f) {
  if (std::abs(beta - spec.beta) > 1e-9 * std::max(1.0, spec.beta))
    throw Error("qfi_from_response_general: beta mismatch");
  std::vector<double> terms(spec.lines.size());
  for (std::size_t i = 0; i < spec.lines.size(); ++i) {
    const double x = std::exp(-beta * spec.lines[i].frequency);
    const double fx = f.f(x);
    if (!(fx > 0.0)) throw Error("monotone function vanishes at needed argument");
    terms[i] = (1.0 - x) / fx * spec.lines[i].weight;
  }
  return 2.0 / M_PI * f.normalization() * pairwise_sum(terms);
}

double qv_from_response(const SpectralFunction &spec, double beta) {
  if (std::abs(beta - spec.beta) > 1e-9 * std::max(1.0, spec.beta))
    throw Error("qv_from_response: beta mismatch");
  auto langevin = [](double x) {
    if (x < 1e-6) return x / 3.0; // coth x - 1/x -> x/3
    return 1.0 / std::tanh(x) - 1.0 / x;
  };
  std::vector<double> terms(spec.lines.size());
  for (std::size_t i = 0; i < spec.lines.size(); ++i)
    terms[i] = langevin(0.5 * beta * spec.lines[i].frequency) * spec.lines[i].weight;
  return pairwise_sum(terms) / M_PI;
}

} // namespace qig
