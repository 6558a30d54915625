#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace qig {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class LogBase { two, e };

/// ln(x) converted to the requested base.
double log_in_base(double x, LogBase base);

/// Nodes and weights of Gauss-Legendre quadrature on [0, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_legendre_unit(int order);

/// Pairwise summation in index order. Used wherever a reduction must be
/// bitwise reproducible at a fixed operand order.
double pairwise_sum(const std::vector<double> &values);

/// Central-difference step for a parameter value, 1e-5 * max(1, |x|).
double default_fd_step(double x);

/// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
};
LineFit fit_line(const std::vector<double> &x, const std::vector<double> &y);

/// Run fn(i) for i in [0, n) on up to `threads` workers. Each index writes
/// only to its own slot, so the result is deterministic for any thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn);

/// Deterministic per-stream RNG seeding: stream `index` of a base seed.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

} // namespace qig
