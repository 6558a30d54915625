#include "qig/manifold.hpp"

#include "qig/errors.hpp"

#include <cmath>

namespace qig {

Grid2D::Grid2D(double a1_, double b1_, int n1_, bool periodic1_, double a2_, double b2_,
               int n2_, bool periodic2_)
    : a1(a1_), b1(b1_), a2(a2_), b2(b2_), n1(n1_), n2(n2_), periodic1(periodic1_),
      periodic2(periodic2_) {
  if (n1 < 8 || n2 < 8) throw Error("Grid2D: need at least 8 points per axis");
  if (!(b1 > a1) || !(b2 > a2)) throw Error("Grid2D: empty range");
}

double Grid2D::coord1(int i) const { return a1 + i * step1(); }
double Grid2D::coord2(int j) const { return a2 + j * step2(); }

namespace {

RealVector point(const Grid2D &grid, int i, int j) {
  RealVector lambda(2);
  lambda << grid.coord1(i), grid.coord2(j);
  return lambda;
}

std::vector<Vector> evaluate_states(const QuantumFamily &family, const Grid2D &grid,
                                    int threads) {
  std::vector<Vector> states(static_cast<std::size_t>(grid.n1) * grid.n2);
  parallel_for(states.size(), threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / grid.n2;
    const int j = static_cast<int>(idx) % grid.n2;
    states[idx] = family.evaluate(point(grid, i, j)).amplitudes();
  });
  return states;
}

void check_gap_on_grid(const QuantumFamily &family, const Grid2D &grid, int threads) {
  if (!family.gap) return;
  std::vector<char> degenerate(static_cast<std::size_t>(grid.n1) * grid.n2, 0);
  parallel_for(degenerate.size(), threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / grid.n2;
    const int j = static_cast<int>(idx) % grid.n2;
    if (family.gap(point(grid, i, j)) < 1e-8) degenerate[idx] = 1;
  });
  for (char d : degenerate)
    if (d) throw DegeneracyError("band degeneracy detected on the grid");
}

double weight1(const Grid2D &grid, int i) {
  if (grid.periodic1) return 1.0;
  return (i == 0 || i == grid.n1 - 1) ? 0.5 : 1.0;
}

double weight2(const Grid2D &grid, int j) {
  if (grid.periodic2) return 1.0;
  return (j == 0 || j == grid.n2 - 1) ? 0.5 : 1.0;
}

} // namespace

RealMatrix berry_curvature_field(const QuantumFamily &family, const Grid2D &grid,
                                 int threads) {
  check_gap_on_grid(family, grid, threads);
  RealMatrix omega(grid.n1, grid.n2);
  std::vector<double> buffer(static_cast<std::size_t>(grid.n1) * grid.n2);
  parallel_for(buffer.size(), threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / grid.n2;
    const int j = static_cast<int>(idx) % grid.n2;
    buffer[idx] = qgt_pure(family, point(grid, i, j)).berry()(0, 1);
  });
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j)
      omega(i, j) = buffer[static_cast<std::size_t>(i) * grid.n2 + j];
  return omega;
}

int chern_number(const QuantumFamily &family, const Grid2D &grid, bool sphere_closure,
                 int threads) {
  if (!grid.periodic2)
    throw Error("chern_number: second axis must be periodic");
  if (!grid.periodic1 && !sphere_closure)
    throw Error("chern_number: first axis must be periodic or sphere-closed");
  check_gap_on_grid(family, grid, threads);

  const std::vector<Vector> states = evaluate_states(family, grid, threads);
  auto state = [&](int i, int j) -> const Vector & {
    return states[static_cast<std::size_t>(i) * grid.n2 + (j % grid.n2 + grid.n2) % grid.n2];
  };

  const int rows = grid.periodic1 ? grid.n1 : grid.n1 - 1;
  std::vector<double> plaquettes(static_cast<std::size_t>(rows) * grid.n2);
  parallel_for(plaquettes.size(), threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / grid.n2;
    const int j = static_cast<int>(idx) % grid.n2;
    const int ip = grid.periodic1 ? (i + 1) % grid.n1 : i + 1;
    const Complex u1 = state(i, j).dot(state(ip, j));
    const Complex u2 = state(ip, j).dot(state(ip, j + 1));
    const Complex u3 = state(ip, j + 1).dot(state(i, j + 1));
    const Complex u4 = state(i, j + 1).dot(state(i, j));
    const Complex loop = u1 * u2 * u3 * u4;
    if (std::abs(loop) < 1e-9)
      throw ConsistencyError("chern_number: near-orthogonal plaquette links "
                             "(grid too coarse or band degenerate)");
    plaquettes[idx] = std::arg(loop);
  });

  const double total = pairwise_sum(plaquettes) / (2.0 * M_PI);
  const int c = static_cast<int>(std::lround(total));
  if (std::abs(total - c) > 1e-6)
    throw ConsistencyError("chern_number: lattice field strength is not integral");

  // Cross-check against the curvature-field Riemann sum.
  const RealMatrix omega = berry_curvature_field(family, grid, threads);
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(grid.n1) * grid.n2);
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j)
      cells.push_back(weight1(grid, i) * weight2(grid, j) * omega(i, j));
  const double riemann = pairwise_sum(cells) * grid.step1() * grid.step2() / (2.0 * M_PI);
  if (std::abs(riemann - c) > 0.02)
    throw ConsistencyError("chern_number: curvature Riemann sum disagrees with the "
                           "lattice integer beyond 0.02");
  return c;
}

MetricField metric_field(const QuantumFamily &family, const Grid2D &grid, int threads) {
  MetricField field;
  field.grid = grid;
  field.e.resize(grid.n1, grid.n2);
  field.f.resize(grid.n1, grid.n2);
  field.g.resize(grid.n1, grid.n2);
  std::vector<std::array<double, 3>> buffer(static_cast<std::size_t>(grid.n1) * grid.n2);
  parallel_for(buffer.size(), threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / grid.n2;
    const int j = static_cast<int>(idx) % grid.n2;
    RealMatrix m = qgt_pure(family, point(grid, i, j)).metric();
    buffer[idx] = {m(0, 0), m(0, 1), m(1, 1)};
  });
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) {
      const auto &m = buffer[static_cast<std::size_t>(i) * grid.n2 + j];
      field.e(i, j) = m[0];
      field.f(i, j) = m[1];
      field.g(i, j) = m[2];
    }
  return field;
}

double manifold_volume(const MetricField &field) {
  const Grid2D &grid = field.grid;
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(grid.n1) * grid.n2);
  const double scale = std::max({1e-300, field.e.cwiseAbs().maxCoeff(),
                                 field.g.cwiseAbs().maxCoeff()});
  long clipped = 0;
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) {
      double det = field.e(i, j) * field.g(i, j) - field.f(i, j) * field.f(i, j);
      if (det < -1e-10 * scale * scale) ++clipped;
      det = std::max(det, 0.0);
      cells.push_back(weight1(grid, i) * weight2(grid, j) * std::sqrt(det));
    }
  if (clipped * 100 > grid.n1 * grid.n2)
    throw ManifoldError("manifold_volume: metric determinant negative on more than "
                        "1% of the grid");
  return pairwise_sum(cells) * grid.step1() * grid.step2();
}

namespace {

// Central derivative of a field along an axis, one-sided second order at
// non-periodic edges.
double field_derivative(const RealMatrix &f, const Grid2D &grid, int i, int j, int axis) {
  const int n = axis == 0 ? grid.n1 : grid.n2;
  const bool periodic = axis == 0 ? grid.periodic1 : grid.periodic2;
  const double h = axis == 0 ? grid.step1() : grid.step2();
  auto at = [&](int k) {
    if (periodic) k = (k % n + n) % n;
    return axis == 0 ? f(k, j) : f(i, k);
  };
  const int c = axis == 0 ? i : j;
  if (periodic || (c > 0 && c < n - 1)) return (at(c + 1) - at(c - 1)) / (2.0 * h);
  if (c == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
}

struct ChristoffelFields {
  RealMatrix a;     // sqrt(det) Gamma^2_11 / E
  RealMatrix b;     // sqrt(det) Gamma^2_12 / E
  RealMatrix g122;  // Gamma^1_22
  RealMatrix sqrt_det;
  Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic> valid;
};

ChristoffelFields christoffel_fields(const MetricField &m) {
  const Grid2D &grid = m.grid;
  ChristoffelFields out;
  out.a.setZero(grid.n1, grid.n2);
  out.b.setZero(grid.n1, grid.n2);
  out.g122.setZero(grid.n1, grid.n2);
  out.sqrt_det.setZero(grid.n1, grid.n2);
  out.valid.setZero(grid.n1, grid.n2);
  const double scale = std::max({1e-300, m.e.cwiseAbs().maxCoeff(), m.g.cwiseAbs().maxCoeff()});
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) {
      const double e = m.e(i, j), f = m.f(i, j), g = m.g(i, j);
      const double det = e * g - f * f;
      if (det <= 1e-10 * scale * scale || e <= 0.0) continue;
      const double d1e = field_derivative(m.e, grid, i, j, 0);
      const double d2e = field_derivative(m.e, grid, i, j, 1);
      const double d1f = field_derivative(m.f, grid, i, j, 0);
      const double d2f = field_derivative(m.f, grid, i, j, 1);
      const double d1g = field_derivative(m.g, grid, i, j, 0);
      const double d2g = field_derivative(m.g, grid, i, j, 1);
      const double inv11 = g / det, inv12 = -f / det, inv22 = e / det;
      const double gamma2_11 = 0.5 * (inv12 * d1e + inv22 * (2.0 * d1f - d2e));
      const double gamma2_12 = 0.5 * (inv12 * d2e + inv22 * d1g);
      const double gamma1_22 = 0.5 * (inv11 * (2.0 * d2f - d1g) + inv12 * d2g);
      const double sd = std::sqrt(det);
      out.a(i, j) = sd * gamma2_11 / e;
      out.b(i, j) = sd * gamma2_12 / e;
      out.g122(i, j) = gamma1_22;
      out.sqrt_det(i, j) = sd;
      out.valid(i, j) = 1;
    }
  return out;
}

// Derivative of a partially valid field: central when both neighbors are
// valid, else one-sided into the valid side, else zero.
double guarded_derivative(const RealMatrix &f,
                          const Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic> &valid,
                          const Grid2D &grid, int i, int j, int axis) {
  const int n = axis == 0 ? grid.n1 : grid.n2;
  const bool periodic = axis == 0 ? grid.periodic1 : grid.periodic2;
  const double h = axis == 0 ? grid.step1() : grid.step2();
  auto wrap = [&](int k) { return (k % n + n) % n; };
  auto ok = [&](int k) {
    if (periodic) k = wrap(k);
    if (k < 0 || k >= n) return false;
    return axis == 0 ? valid(k, j) != 0 : valid(i, k) != 0;
  };
  auto at = [&](int k) {
    if (periodic) k = wrap(k);
    return axis == 0 ? f(k, j) : f(i, k);
  };
  const int c = axis == 0 ? i : j;
  if (ok(c + 1) && ok(c - 1)) return (at(c + 1) - at(c - 1)) / (2.0 * h);
  if (ok(c + 1) && ok(c + 2)) return (-3.0 * at(c) + 4.0 * at(c + 1) - at(c + 2)) / (2.0 * h);
  if (ok(c - 1) && ok(c - 2)) return (3.0 * at(c) - 4.0 * at(c - 1) + at(c - 2)) / (2.0 * h);
  return 0.0;
}

struct GaussBonnetEvaluation {
  double euler = 0.0;
  RealMatrix gaussian;
  std::vector<double> boundary_kg;
};

GaussBonnetEvaluation gauss_bonnet_on_grid(const QuantumFamily &family, const Grid2D &grid,
                                           const BoundarySpec &boundary, int threads) {
  const MetricField m = metric_field(family, grid, threads);
  const ChristoffelFields ch = christoffel_fields(m);

  GaussBonnetEvaluation out;
  out.gaussian.setZero(grid.n1, grid.n2);
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(grid.n1) * grid.n2);
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) {
      if (!ch.valid(i, j)) {
        cells.push_back(0.0);
        continue;
      }
      // K sqrt(det) = d2(A) - d1(B); the division-free form integrates
      // cleanly through metric-degenerate closure points.
      const double integrand = guarded_derivative(ch.a, ch.valid, grid, i, j, 1) -
                               guarded_derivative(ch.b, ch.valid, grid, i, j, 0);
      out.gaussian(i, j) = integrand / ch.sqrt_det(i, j);
      cells.push_back(weight1(grid, i) * weight2(grid, j) * integrand);
    }
  double total = pairwise_sum(cells) * grid.step1() * grid.step2();

  if (!grid.periodic1) {
    if ((boundary.axis1_low == BoundaryKind::curve ||
         boundary.axis1_high == BoundaryKind::curve) &&
        !grid.periodic2)
      throw Error("gauss_bonnet: curve boundaries need a periodic second axis");
    // k_g = sqrt(det) G^(-3/2) Gamma^1_22 along constant-lambda1 curves;
    // the low end is traversed with the manifold on its left (+), the high
    // end opposite (-).
    auto boundary_term = [&](int row, double orientation) {
      std::vector<double> samples;
      for (int j = 0; j < grid.n2; ++j) {
        if (!ch.valid(row, j)) throw Error("gauss_bonnet: degenerate metric on a curve boundary");
        const double g = m.g(row, j);
        const double kg = ch.sqrt_det(row, j) * std::pow(g, -1.5) * ch.g122(row, j);
        samples.push_back(kg);
        total += orientation * kg * std::sqrt(g) * grid.step2();
      }
      out.boundary_kg.insert(out.boundary_kg.end(), samples.begin(), samples.end());
    };
    if (boundary.axis1_low == BoundaryKind::curve) boundary_term(0, 1.0);
    if (boundary.axis1_high == BoundaryKind::curve) boundary_term(grid.n1 - 1, -1.0);
  }
  out.euler = total / (2.0 * M_PI);
  return out;
}

} // namespace

CurvatureReport gauss_bonnet(const QuantumFamily &family, const Grid2D &grid,
                             const BoundarySpec &boundary, int threads) {
  GaussBonnetEvaluation coarse = gauss_bonnet_on_grid(family, grid, boundary, threads);
  Grid2D fine = grid;
  fine.n1 = grid.periodic1 ? 2 * grid.n1 : 2 * grid.n1 - 1;
  fine.n2 = grid.periodic2 ? 2 * grid.n2 : 2 * grid.n2 - 1;
  GaussBonnetEvaluation refined = gauss_bonnet_on_grid(family, fine, boundary, threads);
  if (std::abs(coarse.euler - refined.euler) > 0.1)
    throw ConsistencyError("gauss_bonnet: Euler characteristic not converged under "
                           "grid refinement");

  CurvatureReport report;
  report.grid = fine;
  report.gaussian = refined.gaussian;
  report.boundary_kg = refined.boundary_kg;
  report.euler = refined.euler;
  report.volume = manifold_volume(metric_field(family, fine, threads));
  const bool closed2 = grid.periodic2;
  const bool closed1 = grid.periodic1 || (boundary.axis1_low == BoundaryKind::pole &&
                                          boundary.axis1_high == BoundaryKind::pole);
  if (closed1 && closed2)
    report.chern = chern_number(family, grid, !grid.periodic1, threads);
  return report;
}

VolumeChernCheck volume_chern_check(const QuantumFamily &family, const Grid2D &grid,
                                    bool sphere_closure, int threads) {
  VolumeChernCheck check;
  check.volume = manifold_volume(metric_field(family, grid, threads));
  check.chern = chern_number(family, grid, sphere_closure, threads);
  check.holds = check.volume >= M_PI * std::abs(check.chern) - 1e-6;
  return check;
}

namespace {

std::array<double, 3> sphere_direction(double polar, double azimuth) {
  return {std::cos(azimuth) * std::sin(polar), std::sin(azimuth) * std::sin(polar),
          std::cos(polar)};
}

} // namespace

QuantumFamily ground_band_family(
    const std::function<HermitianOperator(double, double)> &bloch) {
  QuantumFamily family;
  family.parameter_dim = 2;
  family.evaluate = [bloch](const RealVector &lambda) {
    EigenSystem es = diagonalize(bloch(lambda[0], lambda[1]).matrix());
    return PureState(Vector(es.vectors.col(0)));
  };
  family.gap = [bloch](const RealVector &lambda) {
    EigenSystem es = diagonalize(bloch(lambda[0], lambda[1]).matrix());
    return es.values[1] - es.values[0];
  };
  return family;
}

QuantumFamily bloch_sphere_family() {
  QuantumFamily family;
  family.parameter_dim = 2;
  family.evaluate = [](const RealVector &lambda) {
    const double theta = lambda[0], phi = lambda[1];
    Vector amps(2);
    amps << Complex(std::cos(0.5 * theta), 0.0),
        std::exp(Complex(0.0, phi)) * std::sin(0.5 * theta);
    return PureState(amps);
  };
  return family;
}

CurvatureScalingResult curvature_from_volume_scaling(const HermitianOperator &h0,
                                                     const SpinSystem &system,
                                                     const std::vector<double> &fields,
                                                     int n_theta, int n_phi, int threads) {
  if (fields.size() < 4)
    throw Error("curvature_from_volume_scaling: need at least 4 field values");
  for (double h : fields)
    if (!(h > 0.0)) throw Error("curvature_from_volume_scaling: fields must be positive");

  const Grid2D grid(0.0, M_PI, n_theta, false, 0.0, 2.0 * M_PI, n_phi, true);
  CurvatureScalingResult result;
  for (double h : fields) {
    QuantumFamily family;
    family.parameter_dim = 2;
    family.evaluate = [&h0, &system, h](const RealVector &lambda) {
      const HermitianOperator stag =
          staggered_spin(sphere_direction(lambda[0], lambda[1]), system);
      Matrix ham = h0.matrix() + h * stag.matrix();
      EigenSystem es = diagonalize(0.5 * (ham + ham.adjoint().eval()));
      const double span = es.values.maxCoeff() - es.values.minCoeff();
      if (es.values[1] - es.values[0] <= 1e-10 * std::max(span, 1.0))
        throw DegeneracyError("curvature_from_volume_scaling: degenerate ground state");
      return PureState(Vector(es.vectors.col(0)));
    };
    result.volumes.push_back(manifold_volume(metric_field(family, grid, threads)));
  }

  // Vol(h) = 4 pi a^2 h^2 (1 - c h^2): linear fit of Vol/h^2 against h^2.
  std::vector<double> x, y;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    x.push_back(fields[i] * fields[i]);
    y.push_back(result.volumes[i] / (fields[i] * fields[i]));
  }
  const LineFit fit = fit_line(x, y);
  if (!(fit.intercept > 0.0))
    throw ConsistencyError("curvature_from_volume_scaling: flat-volume amplitude "
                           "did not come out positive");
  result.flat_amplitude = std::sqrt(fit.intercept / (4.0 * M_PI));
  result.quadratic_coefficient = -fit.slope / fit.intercept;
  double rel = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const double predicted = (fit.intercept + fit.slope * x[i]) * x[i];
    rel = std::max(rel, std::abs(predicted - result.volumes[i]) /
                            std::max(result.volumes[i], 1e-300));
  }
  result.fit_residual = rel;
  if (result.fit_residual > 0.10)
    throw ConsistencyError("curvature_from_volume_scaling: volume fit residual "
                           "exceeds 10%");
  return result;
}

} // namespace qig
