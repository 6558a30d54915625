#include "qig/criticality.hpp"

#include "qig/errors.hpp"

#include <cmath>
#include <random>

namespace qig {

namespace {

HermitianOperator shifted_hamiltonian(const HermitianOperator &h0,
                                      const std::vector<HermitianOperator> &perturbations,
                                      std::optional<double> lambda_offset) {
  if (!lambda_offset) return h0;
  Matrix h = h0.matrix();
  for (const auto &p : perturbations) h += *lambda_offset * p.matrix();
  return HermitianOperator(h);
}

void require_nondegenerate(const RealVector &energies) {
  const double span = energies.maxCoeff() - energies.minCoeff();
  const double gap = energies[1] - energies[0];
  if (gap <= 1e-10 * std::max(span, 1.0))
    throw DegeneracyError("degenerate ground state: perturbative response undefined "
                          "at a level crossing");
}

} // namespace

GeometricTensor fidelity_susceptibility_perturbative(
    const HermitianOperator &h0, const std::vector<HermitianOperator> &perturbations,
    std::optional<double> lambda_offset) {
  const HermitianOperator h = shifted_hamiltonian(h0, perturbations, lambda_offset);
  EigenSystem es = diagonalize(h.matrix());
  require_nondegenerate(es.values);

  const Eigen::Index n = es.values.size();
  const int d = static_cast<int>(perturbations.size());
  const Vector ground = es.vectors.col(0);

  // <n|Lambda_mu|0> for n > 0.
  Matrix amp(n - 1, d);
  for (int mu = 0; mu < d; ++mu) {
    Vector col = perturbations[static_cast<std::size_t>(mu)].matrix() * ground;
    for (Eigen::Index row = 1; row < n; ++row)
      amp(row - 1, mu) = es.vectors.col(row).dot(col);
  }

  Matrix q = Matrix::Zero(d, d);
  for (int mu = 0; mu < d; ++mu)
    for (int nu = 0; nu < d; ++nu) {
      Complex acc(0, 0);
      for (Eigen::Index row = 1; row < n; ++row) {
        const double de = es.values[row] - es.values[0];
        acc += std::conj(amp(row - 1, mu)) * amp(row - 1, nu) / (de * de);
      }
      q(mu, nu) = acc;
    }
  return GeometricTensor(q);
}

double fidelity_susceptibility_perturbative(const HermitianOperator &h0,
                                            const HermitianOperator &perturbation,
                                            std::optional<double> lambda_offset) {
  return fidelity_susceptibility_perturbative(h0, std::vector<HermitianOperator>{perturbation},
                                              lambda_offset)
      .metric()(0, 0);
}

GapInequality gap_inequality_check(const HermitianOperator &h0,
                                   const HermitianOperator &lambda) {
  EigenSystem es = diagonalize(h0.matrix());
  require_nondegenerate(es.values);
  const double gap = es.values[1] - es.values[0];
  const PureState ground{Vector(es.vectors.col(0))};
  GapInequality g;
  g.lhs = fidelity_susceptibility_perturbative(h0, lambda);
  g.rhs = variance(ground, lambda) / (gap * gap);
  g.holds = g.lhs <= g.rhs + 1e-10 * std::max(1.0, g.rhs);
  return g;
}

ScalingFit scaling_fit(const ScalingSeries &series) {
  if (series.sizes.size() != series.values.size())
    throw DimensionError("scaling_fit: sizes and values differ in length");
  if (series.sizes.size() < 4) throw Error("scaling_fit: need at least 4 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < series.sizes.size(); ++i) {
    if (!(series.sizes[i] > 0.0) || !(series.values[i] > 0.0))
      throw Error("scaling_fit: sizes and values must be positive for log-log fit");
    lx.push_back(std::log(series.sizes[i]));
    ly.push_back(std::log(series.values[i]));
  }
  LineFit f = fit_line(lx, ly);
  return ScalingFit{f.slope, f.max_abs_residual};
}

double fs_density_exponent(double nu, int d) { return 2.0 / nu - d; }
double qfi_density_exponent(double nu, double zeta, int d) {
  return 2.0 / nu - d - 2.0 * zeta;
}
double energy_susceptibility_exponent(double nu, double zeta, int d) {
  return 2.0 / nu - d - zeta;
}

namespace chain {

TfimApply::TfimApply(int length_, double g_, bool periodic_)
    : length(length_), g(g_), periodic(periodic_) {
  if (length < 2 || length > 24) throw Error("TfimApply: length out of range");
  const Eigen::Index dim = Eigen::Index(1) << length;
  zz_diagonal = RealVector::Zero(dim);
  for (Eigen::Index state = 0; state < dim; ++state) {
    double acc = 0.0;
    for (int j = 0; j + 1 < length; ++j) {
      const int a = (state >> (length - 1 - j)) & 1;
      const int b = (state >> (length - 2 - j)) & 1;
      acc -= (a == b) ? 1.0 : -1.0;
    }
    if (periodic && length > 2) {
      const int a = (state >> (length - 1)) & 1;
      const int b = state & 1;
      acc -= (a == b) ? 1.0 : -1.0;
    }
    zz_diagonal[state] = acc;
  }
}

void TfimApply::apply(const RealVector &in, RealVector &out) const {
  const Eigen::Index dim = dimension();
  out = zz_diagonal.cwiseProduct(in);
  for (int j = 0; j < length; ++j) {
    const Eigen::Index mask = Eigen::Index(1) << (length - 1 - j);
    for (Eigen::Index state = 0; state < dim; ++state)
      out[state] -= g * in[state ^ mask];
  }
}

void TfimApply::apply_dg(const RealVector &in, RealVector &out) const {
  const Eigen::Index dim = dimension();
  out.setZero(dim);
  for (int j = 0; j < length; ++j) {
    const Eigen::Index mask = Eigen::Index(1) << (length - 1 - j);
    for (Eigen::Index state = 0; state < dim; ++state)
      out[state] -= in[state ^ mask];
  }
}

LanczosResult lanczos_ground(const std::function<void(const RealVector &, RealVector &)> &apply,
                             Eigen::Index dim, int max_iter, double tol,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
  v.normalize();

  std::vector<RealVector> basis;
  std::vector<double> alpha, beta;
  RealVector w(dim);
  double previous_e0 = 1e300;
  int iterations = std::min<int>(max_iter, static_cast<int>(dim));

  Eigen::SelfAdjointEigenSolver<RealMatrix> tri_solver;
  for (int it = 0; it < iterations; ++it) {
    basis.push_back(v);
    apply(v, w);
    double a = v.dot(w);
    alpha.push_back(a);
    w -= a * v;
    if (!beta.empty()) w -= beta.back() * basis[basis.size() - 2];
    // Full reorthogonalization, twice.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto &u : basis) w -= u.dot(w) * u;
    const double b = w.norm();

    if ((it >= 2 && it % 5 == 0) || b < 1e-13 || it == iterations - 1) {
      const int m = static_cast<int>(alpha.size());
      RealMatrix tri = RealMatrix::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        tri(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m)
          tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      tri_solver.compute(tri);
      const double e0 = tri_solver.eigenvalues()[0];
      if (std::abs(e0 - previous_e0) < tol * std::max(1.0, std::abs(e0)) || b < 1e-13 ||
          it == iterations - 1) {
        LanczosResult r;
        r.e0 = e0;
        r.e1 = m > 1 ? tri_solver.eigenvalues()[1] : e0;
        r.ground = RealVector::Zero(dim);
        for (int i = 0; i < m; ++i)
          r.ground += tri_solver.eigenvectors()(i, 0) * basis[static_cast<std::size_t>(i)];
        r.ground.normalize();
        return r;
      }
      previous_e0 = e0;
    }
    if (b < 1e-13) break;
    beta.push_back(b);
    v = w / b;
  }
  throw ConsistencyError("lanczos_ground: failed to converge");
}

RealVector cg_shifted(const std::function<void(const RealVector &, RealVector &)> &apply,
                      double shift, const RealVector &b, const RealVector &deflate,
                      int max_iter, double tol) {
  const Eigen::Index dim = b.size();
  auto project = [&](RealVector &x) { x -= deflate.dot(x) * deflate; };

  RealVector rhs = b;
  project(rhs);
  RealVector x = RealVector::Zero(dim);
  RealVector r = rhs;
  RealVector p = r;
  RealVector ap(dim);
  const double rhs_norm = std::max(rhs.norm(), 1e-300);
  double rr = r.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) / rhs_norm < tol) return x;
    apply(p, ap);
    ap -= shift * p;
    project(ap);
    const double denom = p.dot(ap);
    if (!(denom > 0.0))
      throw ConsistencyError("cg_shifted: operator not positive on the subspace");
    const double step = rr / denom;
    x += step * p;
    r -= step * ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  throw ConsistencyError("cg_shifted: no convergence");
}

} // namespace chain

TfimCriticalPoint tfim_critical_point(int length, double g, bool periodic) {
  chain::TfimApply ham(length, g, periodic);
  auto apply = [&ham](const RealVector &in, RealVector &out) { ham.apply(in, out); };
  chain::LanczosResult ground = chain::lanczos_ground(apply, ham.dimension());

  const double span_guess = 2.0 * std::abs(ground.e0);
  if (ground.e1 - ground.e0 <= 1e-10 * std::max(span_guess, 1.0))
    throw DegeneracyError("tfim_critical_point: degenerate ground state");

  // r = (1 - |0><0|) dH/dg |0>; Qtilde = <x|x> and chi_e = 2 <r|x> / L with
  // x = (H - E0)^{-1} r.
  RealVector r(ham.dimension());
  ham.apply_dg(ground.ground, r);
  r -= ground.ground.dot(r) * ground.ground;
  RealVector x = chain::cg_shifted(apply, ground.e0, r, ground.ground);

  TfimCriticalPoint point;
  point.ground_energy = ground.e0;
  point.gap = ground.e1 - ground.e0;
  point.fs_density = x.squaredNorm() / length;
  point.energy_susceptibility = 2.0 * r.dot(x) / length;
  return point;
}

} // namespace qig
