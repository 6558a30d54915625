// Acceptance suite: one line per criterion, each with its runtime budget.
// Returns the number of failed criteria.

#include "qig/classical_family.hpp"
#include "qig/criticality.hpp"
#include "qig/entanglement_witness.hpp"
#include "qig/errors.hpp"
#include "qig/fluctuations.hpp"
#include "qig/manifold.hpp"
#include "qig/probability.hpp"

#include "config.hpp"
#include "experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

using namespace qig;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool condition, const std::string &what) {
    if (!condition) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Matrix random_hermitian(std::mt19937_64 &rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return 0.5 * (m + m.adjoint().eval());
}

struct EnsembleMember {
  HermitianOperator h;
  HermitianOperator generator;
  double beta;
};

std::vector<EnsembleMember> qubit_ensemble(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> beta_draw(0.2, 3.0);
  std::vector<EnsembleMember> members;
  for (int i = 0; i < count; ++i) {
    const Eigen::Index dim = (i % 2 == 0) ? 2 : 4;
    members.push_back({HermitianOperator(random_hermitian(rng, dim)),
                       HermitianOperator(random_hermitian(rng, dim)), beta_draw(rng)});
  }
  return members;
}

// --- criteria ----------------------------------------------------------------

Outcome coin_closed_forms() {
  Outcome out;
  const ClassicalFamily coin = coin_family();
  RealVector mid(1);
  mid << 0.5;
  const double s = shannon_entropy(coin(mid), LogBase::two);
  const double f = cfim(coin, mid, DerivativeMode::analytic())(0, 0);
  out.require(std::abs(s - 1.0) < 1e-12, "S(0.5) = " + fmt(s));
  out.require(std::abs(f - 1.0) < 1e-12, "F(0.5) = " + fmt(f));
  for (int i = 0; i < 99; ++i) {
    const double lambda = 0.005 + 0.99 * i / 98.0;
    RealVector l(1);
    l << lambda;
    const double fisher = cfim(coin, l, DerivativeMode::analytic())(0, 0);
    const double closed = 1.0 / (4.0 * lambda * (1.0 - lambda));
    if (std::abs(fisher - closed) > 1e-10 * std::max(1.0, closed)) {
      out.require(false, "F(" + fmt(lambda) + ") off by " + fmt(fisher - closed));
      break;
    }
  }
  return out;
}

Outcome single_qubit_suite() {
  Outcome out;
  const double delta = 1.0;
  const HermitianOperator h(Matrix(delta * pauli_z()));
  for (double beta : {0.1, 0.5, 1.0, 2.0, 5.0})
    for (double phi : {M_PI / 4, M_PI / 2}) {
      const double mz = std::cos(phi), mx = std::sin(phi);
      const HermitianOperator mag(Matrix(mx * pauli_x() + mz * pauli_z()));
      const DensityMatrix rho = gibbs_state(h, beta);

      const double total = variance(rho, mag);
      const double thermal = classical_covariance(h, mag, mag, beta);
      const double quantum = total - thermal;
      const double qfi = qfim_mixed_unitary(rho, {mag}).tensor.metric()(0, 0);

      const double t = std::tanh(beta * delta);
      const double total_ref = 1.0 - t * t * mz * mz;
      const double thermal_ref = mz * mz * (1 - t * t) + (1 - mz * mz) * t / (beta * delta);
      const double quantum_ref = (1 - mz * mz) * (1 - t / (beta * delta));
      const double qfi_ref = 4.0 * t * t * (1 - mz * mz);

      const double worst =
          std::max({std::abs(total - total_ref), std::abs(thermal - thermal_ref),
                    std::abs(quantum - quantum_ref), std::abs(qfi - qfi_ref)});
      out.require(worst < 1e-8, "beta " + fmt(beta) + ", phi " + fmt(phi) +
                                    ": worst closed-form gap " + fmt(worst));
    }
  return out;
}

Outcome three_route_quantum_variance() {
  Outcome out;
  for (const auto &member : qubit_ensemble(50, 401)) {
    const DensityMatrix rho = gibbs_state(member.h, member.beta);
    const double total = variance(rho, member.generator);
    const double classical =
        classical_covariance(member.h, member.generator, member.generator, member.beta);
    const double qv_free_energy = total - classical;
    const double qv_integral = qv_via_wyd_integral(rho, member.generator);
    const double qv_langevin = qv_from_response(
        spectral_function(member.h, member.generator, member.generator, member.beta),
        member.beta);

    const double spread = std::max({std::abs(qv_free_energy - qv_integral),
                                    std::abs(qv_free_energy - qv_langevin),
                                    std::abs(qv_integral - qv_langevin)});
    out.require(spread < 1e-7, "route spread " + fmt(spread));

    const double qfi =
        qfim_mixed_unitary(rho, {member.generator}).tensor.metric()(0, 0);
    out.require(4.0 * qv_integral <= qfi + 1e-9,
                "lower sandwich violated: 4QV " + fmt(4 * qv_integral) + " vs F " + fmt(qfi));
    out.require(qfi <= 12.0 * qv_integral + 1e-9,
                "upper sandwich violated: F " + fmt(qfi) + " vs 12QV " + fmt(12 * qv_integral));
    if (!out.pass) break;
  }
  return out;
}

Outcome response_identity() {
  Outcome out;
  for (const auto &member : qubit_ensemble(50, 402)) {
    const DensityMatrix rho = gibbs_state(member.h, member.beta);
    const double via_kernel = qfi_from_response(
        spectral_function(member.h, member.generator, member.generator, member.beta),
        1.0 / member.beta);
    const double spectral =
        qfim_mixed_unitary(rho, {member.generator}).unitary(0, 0);
    out.require(std::abs(via_kernel - spectral) < 1e-10,
                "identity gap " + fmt(via_kernel - spectral));
    if (!out.pass) break;
  }
  return out;
}

Outcome two_spin_witness() {
  Outcome out;
  const SpinSystem two(2);

  // brute-force 4x4 moments, independent of the library's covariance path
  auto brute_force_qfi = [](const Vector &psi, const Matrix &gen) {
    Vector gpsi = gen * psi;
    Complex mean(0, 0);
    for (int i = 0; i < 4; ++i) mean += std::conj(psi[i]) * gpsi[i];
    double second = 0.0;
    for (int i = 0; i < 4; ++i) second += std::norm(gpsi[i]);
    return 4.0 * (second - std::norm(mean));
  };

  Vector singlet = Vector::Zero(4);
  singlet[1] = M_SQRT1_2;
  singlet[2] = -M_SQRT1_2;

  double mean_accum = 0.0;
  for (int ax = 0; ax < 3; ++ax) {
    std::array<double, 3> axis{};
    axis[static_cast<std::size_t>(ax)] = 1.0;
    const Matrix minus = staggered_spin(axis, two).matrix();
    const Matrix plus = collective_spin(axis, two).matrix();
    const double f_minus = brute_force_qfi(singlet, minus);
    const double f_plus = brute_force_qfi(singlet, plus);
    out.require(std::abs(f_minus / 2.0 - 2.0) < 1e-10,
                "antiferro density " + fmt(f_minus / 2));
    out.require(std::abs(f_plus) < 1e-10, "ferro qfi " + fmt(f_plus));
    out.require(std::abs(f_minus - qfim_unitary_pure(PureState(singlet),
                                                     {HermitianOperator(minus)})(0, 0)) <
                    1e-10,
                "library disagrees with brute force");
    mean_accum += f_minus / 3.0;
  }
  out.require(std::abs(mean_accum - 4.0) < 1e-10, "mean antiferro " + fmt(mean_accum));
  out.require(mean_accum > mean_bound(2, 1), "mean bound not exceeded");
  out.require(std::abs(mean_bound(2, 1) - 4.0 / 3.0) < 1e-14, "mean bound is not 4/3");

  for (int i = 0; i < 50; ++i) {
    const double alpha = M_PI / 2 * i / 49.0;
    Vector product = Vector::Zero(4);
    product[1] = std::cos(alpha);
    product[3] = std::sin(alpha);
    for (int ax = 0; ax < 3; ++ax) {
      std::array<double, 3> axis{};
      axis[static_cast<std::size_t>(ax)] = 1.0;
      for (const Matrix &gen :
           {collective_spin(axis, two).matrix(), staggered_spin(axis, two).matrix()}) {
        const double f = brute_force_qfi(product, gen);
        out.require(f <= producibility_bound(2, 1, 1.0) + 1e-10,
                    "product state violated the bound at alpha " + fmt(alpha));
      }
    }
  }
  return out;
}

Outcome ghz_maximality() {
  Outcome out;
  for (int n = 2; n <= 8; ++n) {
    const SpinSystem sys(n);
    const double f =
        qfim_unitary_pure(ghz_state(n, sys), {collective_spin({0, 0, 1}, sys)})(0, 0);
    out.require(std::abs(f - static_cast<double>(n) * n) < 1e-10,
                "N=" + std::to_string(n) + ": F = " + fmt(f));
    const WitnessVerdict verdict = witness_depth(f, n, 1.0, WitnessMode::element);
    out.require(verdict.certified_depth == n,
                "N=" + std::to_string(n) + ": depth " +
                    std::to_string(verdict.certified_depth));
  }
  return out;
}

Outcome fidelity_susceptibility_checks() {
  Outcome out;
  for (double delta : {0.5, 1.0, 2.0}) {
    const double q = fidelity_susceptibility_perturbative(
        HermitianOperator(Matrix(delta * pauli_z())), HermitianOperator(pauli_x()));
    out.require(std::abs(q - 1.0 / (4 * delta * delta)) < 1e-12,
                "two-level value " + fmt(q));
  }

  for (int length : {4, 6, 8})
    for (double g : {0.5, 1.0, 1.5}) {
      const HermitianOperator h0 = tfim_chain(length, g, true);
      const SpinSystem sys(length);
      Matrix drive = Matrix::Zero(h0.dimension(), h0.dimension());
      for (int site = 0; site < length; ++site)
        drive -= site_operator(pauli_x(), site, sys);
      const HermitianOperator pert(drive);

      const double perturbative = fidelity_susceptibility_perturbative(h0, pert);

      auto ground = [&](double lambda) {
        Matrix h = h0.matrix() + lambda * pert.matrix();
        return Vector(diagonalize(0.5 * (h + h.adjoint().eval())).vectors.col(0));
      };
      auto curvature = [&](double d) {
        const Vector a = ground(0.0);
        return 0.5 * (2.0 * (1.0 - std::abs(a.dot(ground(d)))) / (d * d) +
                      2.0 * (1.0 - std::abs(a.dot(ground(-d)))) / (d * d));
      };
      const double oracle = (4.0 * curvature(5e-4) - curvature(1e-3)) / 3.0;
      out.require(std::abs(perturbative - oracle) <= 1e-6 * std::max(1.0, oracle),
                  "L=" + std::to_string(length) + " g=" + fmt(g) + ": perturbative " +
                      fmt(perturbative) + " vs oracle " + fmt(oracle));

      const GapInequality gap = gap_inequality_check(h0, pert);
      out.require(gap.holds, "gap inequality violated at L=" + std::to_string(length) +
                                 " g=" + fmt(g));
    }
  return out;
}

Outcome tfim_scaling_exponents() {
  Outcome out;
  ScalingSeries fs_series, chi_series;
  fs_series.spatial_dim = chi_series.spatial_dim = 1;
  for (int length : {8, 10, 12, 14}) {
    const TfimCriticalPoint point = tfim_critical_point(length, 1.0, true);
    fs_series.sizes.push_back(length);
    fs_series.values.push_back(point.fs_density);
    chi_series.sizes.push_back(length);
    chi_series.values.push_back(point.energy_susceptibility);
  }
  const ScalingFit fs_fit = scaling_fit(fs_series);
  const ScalingFit chi_fit = scaling_fit(chi_series);
  out.require(std::abs(fs_fit.exponent - 1.0) <= 0.2,
              "fs-density exponent " + fmt(fs_fit.exponent) + " outside 1 +- 0.2");
  out.require(std::abs(chi_fit.exponent - 0.0) <= 0.25,
              "energy-susceptibility exponent " + fmt(chi_fit.exponent) +
                  " outside 0 +- 0.25");
  return out;
}

Outcome topology_suite() {
  Outcome out;
  const Grid2D bz(0, 2 * M_PI, 64, true, 0, 2 * M_PI, 64, true);
  for (double m : {-3.0, -1.5, -1.0, 1.0, 1.5, 3.0}) {
    const QuantumFamily band =
        ground_band_family([m](double kx, double ky) { return qwz_bloch(kx, ky, m); });
    const VolumeChernCheck check = volume_chern_check(band, bz, false, 4);
    const int expected = (std::abs(m) < 2.0) ? 1 : 0;
    out.require(std::abs(check.chern) == expected,
                "m=" + fmt(m) + ": |C| = " + std::to_string(std::abs(check.chern)));
    out.require(check.holds, "m=" + fmt(m) + ": volume " + fmt(check.volume) +
                                 " below pi |C|");
  }

  const QuantumFamily sphere = bloch_sphere_family();
  const Grid2D chi_grid(0, M_PI, 129, false, 0, 2 * M_PI, 64, true);
  const CurvatureReport report =
      gauss_bonnet(sphere, chi_grid, {BoundaryKind::pole, BoundaryKind::pole}, 4);
  out.require(std::abs(report.euler - 2.0) <= 0.02, "euler " + fmt(report.euler));
  out.require(std::abs(report.chern) == 1, "sphere chern " + std::to_string(report.chern));

  const Grid2D volume_grid(0, M_PI, 4097, false, 0, 2 * M_PI, 16, true);
  const double volume = manifold_volume(metric_field(sphere, volume_grid, 4));
  out.require(std::abs(volume - M_PI) <= 1e-6, "volume - pi = " + fmt(volume - M_PI));

  double k_worst = 0.0;
  for (int i = 0; i < report.grid.n1; ++i) {
    const double theta = report.grid.coord1(i);
    if (theta < M_PI / 4 || theta > 3 * M_PI / 4) continue;
    for (int j = 0; j < report.grid.n2; ++j)
      k_worst = std::max(k_worst, std::abs(report.gaussian(i, j) - 4.0));
  }
  out.require(k_worst <= 1e-3, "interior |K - 4| up to " + fmt(k_worst));
  return out;
}

Outcome cramer_rao_monte_carlo() {
  Outcome out;
  const CrbResult result = crb_monte_carlo(coin_family(), 0.5, 1000, 2000, 20240907);
  out.require(std::abs(result.crb - 2.5e-4) < 1e-12, "crb " + fmt(result.crb));
  out.require(std::abs(result.empirical_variance - result.crb) <= 0.1 * result.crb,
              "empirical " + fmt(result.empirical_variance) + " vs crb " + fmt(result.crb));
  const double slack = 1.0 - 5.0 / std::sqrt(2000.0);
  out.require(result.empirical_variance >= result.crb * slack,
              "empirical variance below the bound beyond statistical slack");
  return out;
}

Outcome determinism() {
  Outcome out;
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "qig_acceptance_det";
  fs::remove_all(base);

  const std::vector<std::pair<std::string, std::string>> runs = {
      {"coin_info", "[experiment]\nname = coin_info\n[grid]\npoints = 99\n"},
      {"two_spin", "[experiment]\nname = two_spin\n[grid]\nalpha_points = 21\n"},
      {"qubit_info", "[experiment]\nname = qubit_info\n"},
      {"chern_sweep", "[experiment]\nname = chern_sweep\n[grid]\nm = 1, 3\npoints = 24\n"},
  };
  for (const auto &[name, text] : runs) {
    std::vector<std::vector<cli::OutputRecord>> digests;
    for (int repeat = 0; repeat < 2; ++repeat) {
      cli::RunOptions opt;
      opt.out_dir = (base / (name + "_" + std::to_string(repeat))).string();
      opt.threads = 2;
      cli::Config cfg = cli::Config::parse_string(text);
      digests.push_back(cli::run_experiment(name, cfg, opt).outputs);
    }
    out.require(digests[0].size() == digests[1].size(), name + ": output count differs");
    for (std::size_t i = 0; i < digests[0].size() && out.pass; ++i)
      out.require(digests[0][i].sha256 == digests[1][i].sha256,
                  name + ": digest mismatch on " + digests[0][i].file);
  }
  fs::remove_all(base);
  return out;
}

struct Criterion {
  int id;
  const char *label;
  double budget_seconds;
  Outcome (*run)();
};

} // namespace

int main() {
  const Criterion criteria[] = {
      {1, "coin closed forms", 1.0, coin_closed_forms},
      {2, "single-qubit fluctuation suite", 1.0, single_qubit_suite},
      {3, "three-route quantum variance + sandwich", 30.0, three_route_quantum_variance},
      {4, "response-function identity", 10.0, response_identity},
      {5, "two-spin entanglement witness", 1.0, two_spin_witness},
      {6, "GHZ qfi maximality and depth", 5.0, ghz_maximality},
      {7, "fidelity susceptibility vs overlap oracle", 60.0, fidelity_susceptibility_checks},
      {8, "TFIM finite-size scaling exponents", 600.0, tfim_scaling_exponents},
      {9, "QWZ and Bloch-sphere topology", 120.0, topology_suite},
      {10, "Cramer-Rao Monte Carlo", 10.0, cramer_rao_monte_carlo},
      {11, "experiment determinism", 120.0, determinism},
  };

  int failures = 0;
  for (const Criterion &criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception &e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.budget_seconds) {
      outcome.pass = false;
      outcome.detail += (outcome.detail.empty() ? "" : "; ") + std::string("over budget ") +
                        fmt(criterion.budget_seconds) + " s";
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", outcome.pass ? "PASS" : "FAIL",
                criterion.id, criterion.label, elapsed, outcome.detail.empty() ? "" : " -- ",
                outcome.detail.c_str());
  }
  if (failures > 0)
    std::printf("%d criterion(s) failed\n", failures);
  else
    std::printf("all criteria passed\n");
  return failures;
}
