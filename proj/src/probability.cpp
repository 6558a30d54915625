#include "qig/probability.hpp"

#include "qig/errors.hpp"

#include <cmath>

namespace qig {

namespace {
constexpr double kSumTolerance = 1e-12;

void check_same_dimension(const ProbabilityVector &p, const ProbabilityVector &q) {
  if (p.dimension() != q.dimension())
    throw DimensionError("probability vectors have different dimensions");
}
} // namespace

ProbabilityVector::ProbabilityVector(RealVector probs) : probs_(std::move(probs)) {
  if (probs_.size() < 1) throw DimensionError("probability vector must have D >= 1");
  for (Eigen::Index i = 0; i < probs_.size(); ++i)
    if (!(probs_[i] >= 0.0))
      throw Error("probability entries must be non-negative");
  if (std::abs(probs_.sum() - 1.0) > kSumTolerance)
    throw Error("probability entries must sum to 1 within 1e-12");
}

ProbabilityVector::ProbabilityVector(std::initializer_list<double> probs)
    : ProbabilityVector(Eigen::Map<const RealVector>(probs.begin(),
                                                     static_cast<Eigen::Index>(probs.size()))) {}

ProbabilityVector ProbabilityVector::normalized(RealVector weights) {
  double total = weights.sum();
  if (!(total > 0.0)) throw Error("cannot normalize a vector without positive mass");
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    if (weights[i] < 0.0) {
      if (weights[i] < -1e-14 * total) throw Error("negative weight in normalized()");
      weights[i] = 0.0;
    }
  return ProbabilityVector(RealVector(weights / weights.sum()));
}

double shannon_entropy(const ProbabilityVector &p, LogBase base) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.dimension(); ++i)
    if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
  return base == LogBase::two ? s / std::log(2.0) : s;
}

double renyi_entropy(const ProbabilityVector &p, double order, LogBase base) {
  if (order < 0.0) throw Error("Renyi order must be >= 0");
  if (std::abs(order - 1.0) < 1e-12) throw Error("Renyi order q = 1 is excluded");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.dimension(); ++i)
    if (p[i] > 0.0) acc += std::pow(p[i], order);
  return log_in_base(acc, base) / (1.0 - order);
}

double relative_entropy(const ProbabilityVector &p, const ProbabilityVector &q,
                        LogBase base) {
  check_same_dimension(p, q);
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.dimension(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    s += p[i] * std::log(p[i] / q[i]);
  }
  s = std::max(s, 0.0); // roundoff guard at P = Q
  return base == LogBase::two ? s / std::log(2.0) : s;
}

KraftResult kraft_check(const std::vector<int> &lengths, int alphabet_size) {
  if (lengths.empty()) throw Error("kraft_check: empty length list");
  if (alphabet_size < 2) throw Error("kraft_check: alphabet size must be >= 2");
  double mass = 0.0;
  for (int len : lengths) {
    if (len < 1) throw Error("kraft_check: code lengths must be >= 1");
    mass += std::pow(static_cast<double>(alphabet_size), -static_cast<double>(len));
  }
  KraftResult r;
  r.slack = 1.0 - mass;
  r.satisfied = r.slack >= -1e-12;
  return r;
}

double sanov_bound(const ProbabilityVector &p, const ProbabilityVector &q,
                   long n_samples) {
  check_same_dimension(p, q);
  if (n_samples < 1) throw Error("sanov_bound: need n_samples >= 1");
  double s_bits = relative_entropy(p, q, LogBase::two);
  if (std::isinf(s_bits)) return 0.0;
  double d = static_cast<double>(p.dimension());
  return std::pow(static_cast<double>(n_samples) + 1.0, d) *
         std::exp2(-static_cast<double>(n_samples) * s_bits);
}

double classical_fidelity(const ProbabilityVector &p, const ProbabilityVector &q) {
  check_same_dimension(p, q);
  double f = 0.0;
  for (Eigen::Index i = 0; i < p.dimension(); ++i) f += std::sqrt(p[i] * q[i]);
  return std::min(f, 1.0);
}

double bhattacharyya_distance(const ProbabilityVector &p, const ProbabilityVector &q) {
  return std::acos(std::clamp(classical_fidelity(p, q), 0.0, 1.0));
}

} // namespace qig
