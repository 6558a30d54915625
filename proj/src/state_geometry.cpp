#include "qig/state_geometry.hpp"

#include "qig/errors.hpp"

#include <cmath>

namespace qig {

namespace {
constexpr double kSupportRel = 1e-12; // SLD reachable block: p_j + p_k > 1e-12 max(p)
constexpr double kDegenerateRel = 1e-12;
} // namespace

GeometricTensor::GeometricTensor(Matrix entries) : q_(std::move(entries)) {
  if (q_.rows() != q_.cols()) throw DimensionError("GeometricTensor: not square");
  double scale = std::max(1.0, q_.cwiseAbs().maxCoeff());
  if ((q_ - q_.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error("GeometricTensor: not Hermitian within 1e-10");
  q_ = 0.5 * (q_ + q_.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(q_.real(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9 * scale)
    throw Error("GeometricTensor: metric not PSD within tolerance");
}

namespace {

Vector phase_aligned(const Vector &reference, Vector v) {
  Complex overlap = reference.dot(v); // conj(reference) . v
  double mag = std::abs(overlap);
  if (mag > 1e-14) v *= std::conj(overlap) / mag;
  return v;
}

// scale halves the per-axis step so the differentiability check compares the
// same stencil at two resolutions.
std::vector<Vector> pure_state_derivatives(const QuantumFamily &family,
                                           const RealVector &lambda,
                                           std::optional<double> step, double scale,
                                           const Vector &center) {
  std::vector<Vector> d;
  d.reserve(static_cast<std::size_t>(family.parameter_dim));
  for (int mu = 0; mu < family.parameter_dim; ++mu) {
    RealVector lp = lambda, lm = lambda;
    const double h = scale * (step ? *step : default_fd_step(lambda[mu]));
    lp[mu] += h;
    lm[mu] -= h;
    Vector vp = phase_aligned(center, family.evaluate(lp).amplitudes());
    Vector vm = phase_aligned(center, family.evaluate(lm).amplitudes());
    d.push_back((vp - vm) / (2.0 * h));
  }
  return d;
}

Matrix qgt_from_derivatives(const Vector &psi, const std::vector<Vector> &d) {
  const int dim = static_cast<int>(d.size());
  Matrix q(dim, dim);
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = 0; nu < dim; ++nu)
      q(mu, nu) = d[static_cast<std::size_t>(mu)].dot(d[static_cast<std::size_t>(nu)]) -
                  d[static_cast<std::size_t>(mu)].dot(psi) * psi.dot(d[static_cast<std::size_t>(nu)]);
  return 0.5 * (q + q.adjoint().eval());
}

} // namespace

GeometricTensor qgt_pure(const QuantumFamily &family, const RealVector &lambda,
                         const QgtMode &mode) {
  if (!family.evaluate) throw Error("qgt_pure requires a pure-state family");
  const Vector psi = family.evaluate(lambda).amplitudes();

  if (mode.kind == QgtMode::Kind::generators) {
    if (static_cast<int>(family.generators.size()) != family.parameter_dim)
      throw Error("generator list does not match parameter dimension");
    std::vector<Vector> d;
    for (const auto &g : family.generators)
      d.push_back(Complex(0.0, -1.0) * (g.matrix() * psi));
    return GeometricTensor(qgt_from_derivatives(psi, d));
  }

  Matrix q = qgt_from_derivatives(
      psi, pure_state_derivatives(family, lambda, mode.step, 1.0, psi));
  // Differentiability check: halving the step must not move the tensor.
  Matrix q2 = qgt_from_derivatives(
      psi, pure_state_derivatives(family, lambda, mode.step, 0.5, psi));
  double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q2).cwiseAbs().maxCoeff() > 1e-4 * scale)
    throw ConsistencyError("qgt_pure: finite-difference residual test failed");
  return GeometricTensor(q2);
}

RealMatrix qfim_unitary_pure(const PureState &psi,
                             const std::vector<HermitianOperator> &generators) {
  const int d = static_cast<int>(generators.size());
  RealMatrix f(d, d);
  for (int mu = 0; mu < d; ++mu)
    for (int nu = mu; nu < d; ++nu) {
      double c = covariance_real(psi, generators[static_cast<std::size_t>(mu)],
                                 generators[static_cast<std::size_t>(nu)]);
      f(mu, nu) = f(nu, mu) = 4.0 * c;
    }
  return f;
}

HermitianOperator sld(const DensityMatrix &rho, const Matrix &tangent) {
  if (tangent.rows() != rho.dimension() || tangent.cols() != rho.dimension())
    throw DimensionError("sld: tangent dimension mismatch");
  double scale = std::max(1.0, tangent.cwiseAbs().maxCoeff());
  if ((tangent - tangent.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error("sld: tangent must be Hermitian");
  if (std::abs(tangent.trace()) > 1e-10 * scale * rho.dimension())
    throw Error("sld: tangent must be traceless");

  EigenSystem es = diagonalize(rho.entries());
  const double pmax = es.values.maxCoeff();
  const Matrix t = es.vectors.adjoint() * tangent * es.vectors;

  const Eigen::Index n = rho.dimension();
  Matrix l = Matrix::Zero(n, n);
  double outside_sq = 0.0, total_sq = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double denom = es.values[j] + es.values[k];
      const double w = std::norm(t(j, k));
      total_sq += w;
      if (denom > kSupportRel * pmax)
        l(j, k) = 2.0 * t(j, k) / denom;
      else
        outside_sq += w;
    }
  if (total_sq > 0 && std::sqrt(outside_sq / total_sq) > 1e-8)
    throw TangentSupportError(
        "sld: tangent has weight outside the support-reachable block");

  Matrix lfull = es.vectors * l * es.vectors.adjoint();
  lfull = 0.5 * (lfull + lfull.adjoint().eval());
  return HermitianOperator(lfull);
}

MixedQfim qfim_mixed(const DensityMatrix &rho, const std::vector<Matrix> &tangents) {
  const int d = static_cast<int>(tangents.size());
  EigenSystem es = diagonalize(rho.entries());
  const Eigen::Index n = rho.dimension();
  const double pmax = es.values.maxCoeff();

  std::vector<Matrix> t;
  t.reserve(tangents.size());
  for (const auto &tan : tangents) {
    double scale = std::max(1.0, tan.cwiseAbs().maxCoeff());
    if ((tan - tan.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw Error("qfim_mixed: tangent must be Hermitian");
    Matrix rotated = es.vectors.adjoint() * tan * es.vectors;
    double outside_sq = 0.0, total_sq = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        const double w = std::norm(rotated(j, k));
        total_sq += w;
        if (es.values[j] + es.values[k] <= kSupportRel * pmax) outside_sq += w;
      }
    if (total_sq > 0 && std::sqrt(outside_sq / total_sq) > 1e-8)
      throw TangentSupportError(
          "qfim_mixed: tangent has weight outside the reachable block");
    t.push_back(std::move(rotated));
  }

  Matrix q = Matrix::Zero(d, d);
  RealMatrix unitary = RealMatrix::Zero(d, d);
  RealMatrix nonunitary = RealMatrix::Zero(d, d);
  for (int mu = 0; mu < d; ++mu)
    for (int nu = 0; nu < d; ++nu) {
      Complex acc(0, 0);
      double u = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
          const double denom = es.values[j] + es.values[k];
          if (denom <= kSupportRel * pmax) continue;
          const Complex term = 2.0 * t[static_cast<std::size_t>(mu)](j, k) *
                               std::conj(t[static_cast<std::size_t>(nu)](j, k)) / denom;
          acc += term;
          // Eigenvalue-like pairs (p_j ~ p_k) are the classical component,
          // eigenvector rotations carry the rest.
          if (std::abs(es.values[j] - es.values[k]) <= kDegenerateRel * pmax)
            c += term.real();
          else
            u += term.real();
        }
      q(mu, nu) = acc;
      unitary(mu, nu) = u;
      nonunitary(mu, nu) = c;
    }
  return MixedQfim{GeometricTensor(q), std::move(unitary), std::move(nonunitary)};
}

MixedQfim qfim_mixed_unitary(const DensityMatrix &rho,
                             const std::vector<HermitianOperator> &generators) {
  std::vector<Matrix> tangents;
  tangents.reserve(generators.size());
  for (const auto &g : generators) {
    Matrix commutator = rho.entries() * g.matrix() - g.matrix() * rho.entries();
    Matrix tan = Complex(0.0, 1.0) * commutator;
    tangents.push_back(0.5 * (tan + tan.adjoint().eval()));
  }
  return qfim_mixed(rho, tangents);
}

MonotoneFunctionSpec MonotoneFunctionSpec::sld() {
  MonotoneFunctionSpec s;
  s.which_ = Named::sld;
  s.f0_ = 0.5;
  s.name_ = "SLD";
  return s;
}

MonotoneFunctionSpec MonotoneFunctionSpec::bkm() {
  MonotoneFunctionSpec s;
  s.which_ = Named::bkm;
  s.f0_ = 0.0;
  s.name_ = "BKM";
  return s;
}

MonotoneFunctionSpec MonotoneFunctionSpec::rld() {
  MonotoneFunctionSpec s;
  s.which_ = Named::rld;
  s.f0_ = 0.0;
  s.name_ = "RLD";
  return s;
}

MonotoneFunctionSpec MonotoneFunctionSpec::lld() {
  MonotoneFunctionSpec s;
  s.which_ = Named::lld;
  s.f0_ = 1.0;
  s.name_ = "LLD";
  return s;
}

MonotoneFunctionSpec MonotoneFunctionSpec::wyd(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("WYD alpha must lie in (0, 1)");
  MonotoneFunctionSpec s;
  s.which_ = Named::wyd;
  s.alpha_ = alpha;
  s.f0_ = alpha * (1.0 - alpha);
  s.name_ = "WYD";
  return s;
}

MonotoneFunctionSpec MonotoneFunctionSpec::custom(std::function<double(double)> f) {
  if (!f) throw Error("custom monotone spec needs a function");
  const double f1 = f(1.0);
  if (!(f1 > 0.0)) throw Error("monotone function must be positive at 1");
  MonotoneFunctionSpec s;
  s.which_ = Named::custom;
  s.custom_ = [f, f1](double x) { return f(x) / f1; };
  s.f0_ = s.custom_(1e-14);
  if (s.f0_ < 1e-10) s.f0_ = 0.0;
  s.name_ = "custom";
  return s;
}

double MonotoneFunctionSpec::f(double x) const {
  if (!(x > 0.0)) throw Error("monotone function argument must be positive");
  switch (which_) {
    case Named::sld: return 0.5 * (1.0 + x);
    case Named::bkm: return std::abs(x - 1.0) < 1e-12 ? 1.0 : (x - 1.0) / std::log(x);
    case Named::rld: return x;
    case Named::lld: return 1.0;
    case Named::wyd: {
      if (std::abs(x - 1.0) < 1e-8) return 1.0;
      const double a = alpha_;
      return a * (1.0 - a) * (x - 1.0) * (x - 1.0) /
             ((std::pow(x, a) - 1.0) * (std::pow(x, 1.0 - a) - 1.0));
    }
    case Named::custom: return custom_(x);
  }
  return 1.0;
}

double MonotoneFunctionSpec::mean(double x, double y) const {
  switch (which_) {
    case Named::sld: return 0.5 * (x + y);
    case Named::bkm:
      if (std::abs(x - y) < 1e-14 * std::max(x, y)) return 0.5 * (x + y);
      if (x <= 0.0 || y <= 0.0) return 0.0;
      return (x - y) / (std::log(x) - std::log(y));
    case Named::rld: return x;
    case Named::lld: return y;
    case Named::wyd: {
      const double a = alpha_;
      if (std::abs(x - y) < 1e-14 * std::max(x, y)) return 0.5 * (x + y);
      const double num = a * (1.0 - a) * (x - y) * (x - y);
      const double den = (std::pow(x, a) - std::pow(y, a)) *
                         (std::pow(x, 1.0 - a) - std::pow(y, 1.0 - a));
      return den > 0.0 ? num / den : 0.0;
    }
    case Named::custom:
      if (y <= 0.0) return 0.0;
      return y * custom_(x / y);
  }
  return 0.0;
}

double MonotoneFunctionSpec::normalization() const {
  return f0_ > 0.0 ? 2.0 * f0_ : 1.0;
}

RealMatrix qfim_monotone(const DensityMatrix &rho, const std::vector<Matrix> &tangents,
                         const MonotoneFunctionSpec &spec) {
  const int d = static_cast<int>(tangents.size());
  EigenSystem es = diagonalize(rho.entries());
  const Eigen::Index n = rho.dimension();
  const double pmax = es.values.maxCoeff();

  std::vector<Matrix> t;
  for (const auto &tan : tangents) t.push_back(es.vectors.adjoint() * tan * es.vectors);

  RealMatrix out = RealMatrix::Zero(d, d);
  const double norm = spec.normalization();
  for (int mu = 0; mu < d; ++mu)
    for (int nu = 0; nu < d; ++nu) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
          if (es.values[j] + es.values[k] <= kSupportRel * pmax) continue;
          const double w = (t[static_cast<std::size_t>(mu)](j, k) *
                            std::conj(t[static_cast<std::size_t>(nu)](j, k)))
                               .real();
          if (std::abs(w) < 1e-300) continue;
          const double m = spec.mean(std::max(es.values[j], 0.0),
                                     std::max(es.values[k], 0.0));
          if (!(m > 0.0) || !std::isfinite(m))
            throw Error("monotone mean vanishes on a reachable pair (metric diverges "
                        "for spec " + spec.name() + ")");
          acc += w / m;
        }
      out(mu, nu) = norm * acc;
    }
  return RealMatrix(0.5 * (out + out.transpose()));
}

namespace {
Matrix psd_sqrt(const Matrix &m) {
  EigenSystem es = diagonalize(m);
  RealVector r(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    r[i] = std::sqrt(std::max(es.values[i], 0.0));
  return es.vectors * r.asDiagonal() * es.vectors.adjoint();
}
} // namespace

double uhlmann_fidelity(const DensityMatrix &rho1, const DensityMatrix &rho2) {
  if (rho1.dimension() != rho2.dimension())
    throw DimensionError("uhlmann_fidelity: dimension mismatch");
  const Matrix s = psd_sqrt(rho1.entries());
  const Matrix inner = s * rho2.entries() * s;
  EigenSystem es = diagonalize(0.5 * (inner + inner.adjoint().eval()));
  double root_sum = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    root_sum += std::sqrt(std::max(es.values[i], 0.0));
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

double bures_distance(const DensityMatrix &rho1, const DensityMatrix &rho2) {
  return std::acos(std::clamp(std::sqrt(uhlmann_fidelity(rho1, rho2)), 0.0, 1.0));
}

double quantum_angle(const PureState &psi1, const PureState &psi2) {
  if (psi1.dimension() != psi2.dimension())
    throw DimensionError("quantum_angle: dimension mismatch");
  return std::acos(std::clamp(std::abs(psi1.amplitudes().dot(psi2.amplitudes())), 0.0, 1.0));
}

std::vector<Matrix> family_tangents(const QuantumFamily &family, const RealVector &lambda,
                                    std::optional<double> step) {
  if (!family.evaluate_mixed) throw Error("family_tangents needs a mixed-state family");
  std::vector<Matrix> tangents;
  for (int mu = 0; mu < family.parameter_dim; ++mu) {
    const double h = step ? *step : default_fd_step(lambda[mu]);
    RealVector lp = lambda, lm = lambda;
    lp[mu] += h;
    lm[mu] -= h;
    Matrix d = (family.evaluate_mixed(lp).entries() - family.evaluate_mixed(lm).entries()) /
               (2.0 * h);
    tangents.push_back(0.5 * (d + d.adjoint().eval()));
  }
  return tangents;
}

} // namespace qig
