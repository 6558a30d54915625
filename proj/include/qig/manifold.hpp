#pragma once

#include "qig/spin_chains.hpp"
#include "qig/state_geometry.hpp"

namespace qig {

/// Rectangular grid over a two-parameter manifold. A periodic axis identifies
/// its endpoints (points exclude b); a non-periodic axis includes both ends.
struct Grid2D {
  double a1 = 0.0, b1 = 1.0;
  double a2 = 0.0, b2 = 1.0;
  int n1 = 64, n2 = 64;
  bool periodic1 = true, periodic2 = true;

  Grid2D() = default;
  Grid2D(double a1_, double b1_, int n1_, bool periodic1_, double a2_, double b2_,
         int n2_, bool periodic2_);

  double coord1(int i) const;
  double coord2(int j) const;
  double step1() const { return (b1 - a1) / (periodic1 ? n1 : n1 - 1); }
  double step2() const { return (b2 - a2) / (periodic2 ? n2 : n2 - 1); }
};

/// First-fundamental-form components per grid point.
struct MetricField {
  Grid2D grid;
  RealMatrix e, f, g; // n1 x n2 each
};

/// Berry curvature (antisymmetrized imaginary QGT component) per grid point.
RealMatrix berry_curvature_field(const QuantumFamily &family, const Grid2D &grid,
                                 int threads = 1);

/// Lattice field-strength (plaquette link-phase) Chern number: exactly an
/// integer at any resolution. `sphere_closure` admits a non-periodic first
/// axis whose endpoint rows are single points of a closed manifold (poles).
/// Cross-checked against the curvature-field Riemann sum within 0.02.
int chern_number(const QuantumFamily &family, const Grid2D &grid,
                 bool sphere_closure = false, int threads = 1);

MetricField metric_field(const QuantumFamily &family, const Grid2D &grid,
                         int threads = 1);

/// Vol = sum dA sqrt(EG - F^2), trapezoidal weights on non-periodic axes.
/// Negative determinants are clipped at zero; more than 1% clipped points
/// raise ManifoldError.
double manifold_volume(const MetricField &field);

/// Boundary treatment per non-periodic axis end.
enum class BoundaryKind {
  curve, // include the geodesic-curvature line integral
  pole   // metric-degenerate closure point, no boundary term
};

struct BoundarySpec {
  BoundaryKind axis1_low = BoundaryKind::curve;
  BoundaryKind axis1_high = BoundaryKind::curve;
};

struct CurvatureReport {
  Grid2D grid;                  // the refined grid the fields live on
  RealMatrix gaussian;          // K per grid point (0 where the metric degenerates)
  std::vector<double> boundary_kg; // samples along included boundary curves
  double euler = 0.0;
  int chern = 0;
  double volume = 0.0;
};

/// Gauss-Bonnet from the metric field: chi = (1/2pi)(int K dA + oint k_g dl),
/// Christoffel symbols by central differences. Refinement (n -> 2n requires
/// the caller's grid; the cli runner performs the doubling check).
CurvatureReport gauss_bonnet(const QuantumFamily &family, const Grid2D &grid,
                             const BoundarySpec &boundary, int threads = 1);

struct VolumeChernCheck {
  double volume = 0.0;
  int chern = 0;
  bool holds = false; // volume >= pi |C| - 1e-6
};
VolumeChernCheck volume_chern_check(const QuantumFamily &family, const Grid2D &grid,
                                    bool sphere_closure = false, int threads = 1);

struct CurvatureScalingResult {
  double quadratic_coefficient = 0.0; // c in Vol/V_flat = 1 - c h^2
  double flat_amplitude = 0.0;        // a in V_flat = 4 pi (a h)^2
  double fit_residual = 0.0;          // relative, on the volume fit
  std::vector<double> volumes;        // per field value
};

/// Volume-ratio curvature estimation: for each h, the (theta, phi) sphere of
/// ground states of h0 + h * staggered(n(theta, phi)) is measured with the
/// family QGT metric; Vol(h) = 4 pi (a h)^2 (1 - c h^2) is fitted and c is
/// reported as the curvature estimate up to an undetermined constant.
CurvatureScalingResult curvature_from_volume_scaling(const HermitianOperator &h0,
                                                     const SpinSystem &system,
                                                     const std::vector<double> &fields,
                                                     int n_theta = 33, int n_phi = 32,
                                                     int threads = 1);

/// Ground-state family of a two-band Bloch Hamiltonian builder, with gap.
QuantumFamily ground_band_family(
    const std::function<HermitianOperator(double, double)> &bloch);

/// The spin-1/2 Bloch sphere family (cos(t/2), e^{i p} sin(t/2)).
QuantumFamily bloch_sphere_family();

} // namespace qig
