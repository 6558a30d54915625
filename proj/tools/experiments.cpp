#include "experiments.hpp"

#include "qig/classical_family.hpp"
#include "qig/criticality.hpp"
#include "qig/entanglement_witness.hpp"
#include "qig/errors.hpp"
#include "qig/fluctuations.hpp"
#include "qig/manifold.hpp"
#include "qig/probability.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace qig::cli {

namespace {

std::string num(double v) {
  char buf[40];
  if (std::isnan(v)) return "nan";
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Post-serialization audit: parse a sample of the rows just written (at
// least 1% of them) and recompute each sampled value through the module
// call it came from. Catches formatting and assembly bugs, not just math.
struct RowAudit {
  std::vector<std::vector<double>> rows; // numeric fields per sampled row
  std::vector<std::size_t> indices;      // 1-based data row numbers
};

RowAudit sample_rows(const std::string &csv, const std::vector<int> &numeric_fields) {
  RowAudit audit;
  std::vector<std::string> lines;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  if (lines.size() < 2) return audit;
  const std::size_t data_rows = lines.size() - 1;
  const std::size_t stride = std::max<std::size_t>(1, data_rows / std::max<std::size_t>(1, data_rows / 100));
  for (std::size_t r = 1; r <= data_rows; r += stride) {
    std::vector<std::string> fields;
    std::istringstream fs(lines[r]);
    std::string field;
    while (std::getline(fs, field, ',')) fields.push_back(field);
    std::vector<double> values;
    for (int idx : numeric_fields) values.push_back(std::stod(fields.at(static_cast<std::size_t>(idx))));
    audit.rows.push_back(values);
    audit.indices.push_back(r);
  }
  return audit;
}

void require_recomputed(double written, double recomputed, const std::string &where) {
  if (std::abs(written - recomputed) > 1e-9 * std::max(1.0, std::abs(recomputed)))
    throw ConsistencyError("row spot-check failed in " + where + ": wrote " +
                           num(written) + ", module gives " + num(recomputed));
}

// --- coin_info -------------------------------------------------------------

void run_coin_info(Config &cfg, RunManifest &manifest, const RunOptions &opt) {
  const double lo = cfg.get_double("grid", "lambda_min", 0.005);
  const double hi = cfg.get_double("grid", "lambda_max", 0.995);
  const long points = cfg.get_long("grid", "points", 99);
  if (lo <= 0.0 || hi >= 1.0 || hi <= lo || points < 2)
    throw ConfigError("coin_info: grid must stay strictly inside (0, 1)");

  const ClassicalFamily family = coin_family();
  std::ostringstream csv;
  csv << "lambda,shannon_bits,fisher\n";
  for (long i = 0; i < points; ++i) {
    const double lambda = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    RealVector l(1);
    l << lambda;
    const double s = shannon_entropy(family(l), LogBase::two);
    const double f = cfim(family, l, DerivativeMode::analytic())(0, 0);
    csv << num(lambda) << "," << num(s) << "," << num(f) << "\n";
  }
  const std::string bytes = csv.str();
  const RowAudit audit = sample_rows(bytes, {0, 1, 2});
  for (const auto &row : audit.rows) {
    RealVector l(1);
    l << row[0];
    require_recomputed(row[1], shannon_entropy(family(l), LogBase::two), "coin_info");
    require_recomputed(row[2], cfim(family, l, DerivativeMode::analytic())(0, 0),
                       "coin_info");
  }
  emit_file(manifest, opt.out_dir, "coin_info.csv", bytes);
}

// --- qubit_info ------------------------------------------------------------

void run_qubit_info(Config &cfg, RunManifest &manifest, const RunOptions &opt) {
  const double delta = cfg.get_double("model", "delta", 1.0);
  std::vector<double> betas = cfg.has("grid", "betas")
                                  ? cfg.get_double_list("grid", "betas")
                                  : std::vector<double>{0.1, 0.25, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> phis = cfg.has("grid", "phis")
                                 ? cfg.get_double_list("grid", "phis")
                                 : std::vector<double>{M_PI / 4.0, M_PI / 2.0};

  std::ostringstream csv;
  csv << "beta,phi,variance,thermal_variance,quantum_variance,qfi\n";
  const HermitianOperator h(Matrix(delta * pauli_z()));
  for (double beta : betas)
    for (double phi : phis) {
      // theta drops out of every quantity; fix it to zero.
      const double mz = std::cos(phi), mx = std::sin(phi);
      const HermitianOperator mag(Matrix(mx * pauli_x() + mz * pauli_z()));
      const DensityMatrix rho = gibbs_state(h, beta);
      const double total = variance(rho, mag);
      const double thermal = classical_covariance(h, mag, mag, beta);
      const double quantum = total - thermal;
      const double qfi = qfim_mixed_unitary(rho, {mag}).tensor.metric()(0, 0);

      // Every row is checked against the single-qubit closed forms before
      // it is written; a disagreement is a numerical failure of the run.
      const double t = std::tanh(beta * std::abs(delta));
      const double total_ref = 1.0 - t * t * mz * mz;
      const double thermal_ref =
          mz * mz * (1.0 - t * t) + (1.0 - mz * mz) * t / (beta * std::abs(delta));
      const double quantum_ref =
          (1.0 - mz * mz) * (1.0 - t / (beta * std::abs(delta)));
      const double qfi_ref = 4.0 * t * t * (1.0 - mz * mz);
      const double worst = std::max({std::abs(total - total_ref),
                                     std::abs(thermal - thermal_ref),
                                     std::abs(quantum - quantum_ref),
                                     std::abs(qfi - qfi_ref)});
      if (worst > 1e-8)
        throw ConsistencyError("qubit_info: closed-form check failed at beta=" +
                               std::to_string(beta));
      csv << num(beta) << "," << num(phi) << "," << num(total) << "," << num(thermal)
          << "," << num(quantum) << "," << num(qfi) << "\n";
    }
  const std::string bytes = csv.str();
  const RowAudit audit = sample_rows(bytes, {0, 1, 2, 5});
  for (const auto &row : audit.rows) {
    const HermitianOperator mag(
        Matrix(std::sin(row[1]) * pauli_x() + std::cos(row[1]) * pauli_z()));
    const DensityMatrix rho = gibbs_state(h, row[0]);
    require_recomputed(row[2], variance(rho, mag), "qubit_info");
    require_recomputed(row[3], qfim_mixed_unitary(rho, {mag}).tensor.metric()(0, 0),
                       "qubit_info");
  }
  emit_file(manifest, opt.out_dir, "qubit_info.csv", bytes);
}

// --- two_spin ---------------------------------------------------------------

void run_two_spin(Config &cfg, RunManifest &manifest, const RunOptions &opt) {
  const long points = cfg.get_long("grid", "alpha_points", 50);
  if (points < 2) throw ConfigError("two_spin: need at least 2 alpha points");

  const SpinSystem sys(2);
  const char axes_names[3] = {'x', 'y', 'z'};

  std::ostringstream csv;
  csv << "alpha,state,generator,axis,qfi_density,mean_qfi_density,separable_bound,"
         "mean_separable_bound\n";

  const double element_bound_density = producibility_bound(2, 1, 1.0) / 2.0;
  const double mean_bound_density = mean_bound(2, 1) / 2.0;

  for (long i = 0; i < points; ++i) {
    const double alpha = M_PI / 2.0 * static_cast<double>(i) / (points - 1);
    Vector entangled = Vector::Zero(4), product = Vector::Zero(4);
    // basis order: |uu>, |ud>, |du>, |dd> with site 0 leftmost
    entangled[1] = std::cos(alpha);
    entangled[2] = -std::sin(alpha);
    product[1] = std::cos(alpha);
    product[3] = std::sin(alpha);
    const std::array<std::pair<const char *, PureState>, 2> states{
        std::make_pair("psi", PureState(entangled)),
        std::make_pair("phi", PureState(product))};

    for (const auto &[state_name, state] : states)
      for (int sign = 0; sign < 2; ++sign) {
        double mean_density = 0.0;
        std::array<double, 3> densities{};
        for (int ax = 0; ax < 3; ++ax) {
          std::array<double, 3> axis{};
          axis[static_cast<std::size_t>(ax)] = 1.0;
          const HermitianOperator gen =
              sign == 0 ? collective_spin(axis, sys) : staggered_spin(axis, sys);
          densities[static_cast<std::size_t>(ax)] =
              qfim_unitary_pure(state, {gen})(0, 0) / 2.0;
          mean_density += densities[static_cast<std::size_t>(ax)] / 3.0;
        }
        for (int ax = 0; ax < 3; ++ax)
          csv << num(alpha) << "," << state_name << "," << (sign == 0 ? "+" : "-") << ","
              << axes_names[ax] << "," << num(densities[static_cast<std::size_t>(ax)])
              << "," << num(mean_density) << "," << num(element_bound_density) << ","
              << num(mean_bound_density) << "\n";
      }
  }

  const std::string bytes = csv.str();
  {
    std::istringstream in(bytes);
    std::string line;
    std::getline(in, line); // header
    std::size_t row_index = 0;
    while (std::getline(in, line)) {
      if (++row_index % 97 != 1) continue; // ~1% of rows
      std::vector<std::string> fields;
      std::istringstream fs(line);
      std::string field;
      while (std::getline(fs, field, ',')) fields.push_back(field);
      const double alpha = std::stod(fields[0]);
      Vector amps = Vector::Zero(4);
      amps[1] = std::cos(alpha);
      if (fields[1] == "psi")
        amps[2] = -std::sin(alpha);
      else
        amps[3] = std::sin(alpha);
      std::array<double, 3> axis{};
      axis[static_cast<std::size_t>(fields[3][0] - 'x')] = 1.0;
      const HermitianOperator gen =
          fields[2] == "+" ? collective_spin(axis, sys) : staggered_spin(axis, sys);
      require_recomputed(std::stod(fields[4]),
                         qfim_unitary_pure(PureState(amps), {gen})(0, 0) / 2.0,
                         "two_spin");
    }
  }
  emit_file(manifest, opt.out_dir, "two_spin.csv", bytes);
}

// --- tfim_scaling -----------------------------------------------------------

void run_tfim_scaling(Config &cfg, RunManifest &manifest, const RunOptions &opt) {
  std::vector<long> sizes = cfg.has("grid", "sizes") ? cfg.get_long_list("grid", "sizes")
                                                     : std::vector<long>{8, 10, 12, 14};
  std::vector<double> couplings = cfg.has("grid", "g") ? cfg.get_double_list("grid", "g")
                                                       : std::vector<double>{1.0};
  const bool periodic = cfg.get_bool("model", "periodic", true);
  const double nu = cfg.get_double("fit", "nu", 1.0);
  const double zeta = cfg.get_double("fit", "zeta", 1.0);
  for (long l : sizes)
    if (l < 2 || l > 14) throw ConfigError("tfim_scaling: sizes must lie in [2, 14]");

  struct Row {
    long l;
    double g;
    TfimCriticalPoint point;
  };
  std::vector<Row> rows;
  for (double g : couplings)
    for (long l : sizes) rows.push_back({l, g, {}});
  std::vector<std::string> failures(rows.size());
  parallel_for(rows.size(), opt.threads, [&](std::size_t i) {
    try {
      rows[i].point = tfim_critical_point(static_cast<int>(rows[i].l), rows[i].g, periodic);
    } catch (const std::exception &e) {
      failures[i] = e.what();
    }
  });
  for (const auto &f : failures)
    if (!f.empty()) throw ConsistencyError("tfim_scaling: " + f);

  std::ostringstream csv;
  csv << "L,g,fs_density,energy_susceptibility\n";
  for (const auto &row : rows)
    csv << row.l << "," << num(row.g) << "," << num(row.point.fs_density) << ","
        << num(row.point.energy_susceptibility) << "\n";
  const std::string bytes = csv.str();
  const RowAudit audit = sample_rows(bytes, {0, 1, 2, 3});
  for (const auto &row : audit.rows) {
    const TfimCriticalPoint again =
        tfim_critical_point(static_cast<int>(row[0]), row[1], periodic);
    require_recomputed(row[2], again.fs_density, "tfim_scaling");
    require_recomputed(row[3], again.energy_susceptibility, "tfim_scaling");
  }
  emit_file(manifest, opt.out_dir, "tfim_scaling.csv", bytes);

  nlohmann::json fits = nlohmann::json::array();
  for (double g : couplings) {
    ScalingSeries fs_series, chi_series;
    fs_series.spatial_dim = chi_series.spatial_dim = 1;
    for (const auto &row : rows)
      if (row.g == g) {
        fs_series.sizes.push_back(static_cast<double>(row.l));
        fs_series.values.push_back(row.point.fs_density);
        chi_series.sizes.push_back(static_cast<double>(row.l));
        chi_series.values.push_back(row.point.energy_susceptibility);
      }
    if (fs_series.sizes.size() < 4) continue;
    const ScalingFit fs_fit = scaling_fit(fs_series);
    const ScalingFit chi_fit = scaling_fit(chi_series);
    fits.push_back({{"g", g},
                    {"fs_density_exponent", fs_fit.exponent},
                    {"fs_density_residual", fs_fit.residual},
                    {"energy_susceptibility_exponent", chi_fit.exponent},
                    {"energy_susceptibility_residual", chi_fit.residual},
                    {"expected_fs_density_exponent", fs_density_exponent(nu, 1)},
                    {"expected_energy_susceptibility_exponent",
                     energy_susceptibility_exponent(nu, zeta, 1)}});
  }
  emit_file(manifest, opt.out_dir, "tfim_scaling_fit.json", fits.dump(2) + "\n");
}

// --- chern_sweep ------------------------------------------------------------

void run_chern_sweep(Config &cfg, RunManifest &manifest, const RunOptions &opt) {
  std::vector<double> masses = cfg.has("grid", "m")
                                   ? cfg.get_double_list("grid", "m")
                                   : std::vector<double>{-3.0, -1.5, -0.5, 0.5, 1.5, 3.0};
  const long n = cfg.get_long("grid", "points", 64);
  if (n < 8) throw ConfigError("chern_sweep: need at least 8 grid points per axis");
  const Grid2D bz(0.0, 2.0 * M_PI, static_cast<int>(n), true, 0.0, 2.0 * M_PI,
                  static_cast<int>(n), true);

  std::ostringstream csv;
  csv << "m,chern,volume,bound_satisfied\n";
  for (double m : masses) {
    const QuantumFamily band = ground_band_family(
        [m](double kx, double ky) { return qwz_bloch(kx, ky, m); });
    try {
      const VolumeChernCheck check = volume_chern_check(band, bz, false, opt.threads);
      csv << num(m) << "," << check.chern << "," << num(check.volume) << ","
          << (check.holds ? "true" : "false") << "\n";
    } catch (const DegeneracyError &) {
      // Band touching at this mass: marked, not fatal.
      csv << num(m) << ",nan,nan,degenerate\n";
    }
  }
  emit_file(manifest, opt.out_dir, "chern_sweep.csv", csv.str());
}

// --- bloch_geometry ---------------------------------------------------------

void run_bloch_geometry(Config &cfg, RunManifest &manifest, const RunOptions &opt) {
  const long chi_points = cfg.get_long("grid", "chi_points", 129);
  const long volume_theta = cfg.get_long("grid", "volume_theta_points", 4097);
  const long volume_phi = cfg.get_long("grid", "volume_phi_points", 16);

  const QuantumFamily family = bloch_sphere_family();
  const Grid2D chi_grid(0.0, M_PI, static_cast<int>(chi_points), false, 0.0, 2.0 * M_PI,
                        64, true);
  BoundarySpec closed_sphere{BoundaryKind::pole, BoundaryKind::pole};
  const CurvatureReport report = gauss_bonnet(family, chi_grid, closed_sphere, opt.threads);

  // The trapezoid volume converges as h^2; the theta axis gets a finer grid
  // than the curvature fields need.
  const Grid2D volume_grid(0.0, M_PI, static_cast<int>(volume_theta), false, 0.0,
                           2.0 * M_PI, static_cast<int>(volume_phi), true);
  const double volume = manifold_volume(metric_field(family, volume_grid, opt.threads));

  // Interior = middle half of the polar range, away from the degenerate poles.
  double k_sum = 0.0;
  long k_count = 0;
  for (int i = 0; i < report.grid.n1; ++i) {
    const double theta = report.grid.coord1(i);
    if (theta < M_PI / 4.0 || theta > 3.0 * M_PI / 4.0) continue;
    for (int j = 0; j < report.grid.n2; ++j) {
      k_sum += report.gaussian(i, j);
      ++k_count;
    }
  }
  const double k_mean = k_sum / static_cast<double>(k_count);
  double k_max_dev = 0.0;
  for (int i = 0; i < report.grid.n1; ++i) {
    const double theta = report.grid.coord1(i);
    if (theta < M_PI / 4.0 || theta > 3.0 * M_PI / 4.0) continue;
    for (int j = 0; j < report.grid.n2; ++j)
      k_max_dev = std::max(k_max_dev, std::abs(report.gaussian(i, j) - k_mean));
  }

  nlohmann::json j;
  j["volume"] = volume;
  j["chern"] = report.chern;
  j["euler"] = report.euler;
  j["K_mean"] = k_mean;
  j["K_max_dev"] = k_max_dev;
  emit_file(manifest, opt.out_dir, "bloch_geometry.json", j.dump(2) + "\n");
}

} // namespace

std::vector<std::string> experiment_names() {
  return {"coin_info", "qubit_info", "two_spin", "tfim_scaling", "chern_sweep",
          "bloch_geometry"};
}

RunManifest run_experiment(const std::string &name, Config &config,
                           const RunOptions &options) {
  RunManifest manifest;
  manifest.experiment = name;
  manifest.config_echo = config.serialize();
  manifest.version = kVersion;
  manifest.seed = options.seed;
  manifest.threads = options.threads;

  std::filesystem::create_directories(options.out_dir);

  const std::string declared = config.get_string("experiment", "name", name);
  if (declared != name)
    throw ConfigError("config declares experiment '" + declared + "' but '" + name +
                      "' was requested");

  const auto start = std::chrono::steady_clock::now();
  if (name == "coin_info")
    run_coin_info(config, manifest, options);
  else if (name == "qubit_info")
    run_qubit_info(config, manifest, options);
  else if (name == "two_spin")
    run_two_spin(config, manifest, options);
  else if (name == "tfim_scaling")
    run_tfim_scaling(config, manifest, options);
  else if (name == "chern_sweep")
    run_chern_sweep(config, manifest, options);
  else if (name == "bloch_geometry")
    run_bloch_geometry(config, manifest, options);
  else
    throw ConfigError("unknown experiment '" + name + "'");
  config.reject_unknown_keys();

  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(manifest, options.out_dir);
  return manifest;
}

} // namespace qig::cli
