#pragma once

#include "qig/numerics.hpp"

#include <limits>
#include <vector>

namespace qig {

/// Finite discrete probability distribution. Entries are validated on
/// construction: non-negative and summing to one within 1e-12.
class ProbabilityVector {
public:
  explicit ProbabilityVector(RealVector probs);
  explicit ProbabilityVector(std::initializer_list<double> probs);

  /// Rescales a non-negative vector with positive mass to unit sum.
  static ProbabilityVector normalized(RealVector weights);

  Eigen::Index dimension() const { return probs_.size(); }
  double operator[](Eigen::Index i) const { return probs_[i]; }
  const RealVector &probs() const { return probs_; }

private:
  RealVector probs_;
};

/// -sum p_i log p_i with the 0 log 0 = 0 convention.
double shannon_entropy(const ProbabilityVector &p, LogBase base);

/// (1/(1-q)) log sum p_i^q for q >= 0, q != 1.
double renyi_entropy(const ProbabilityVector &p, double order, LogBase base);

/// sum p_i log(p_i / q_i); +infinity exactly when some p_i > 0 has q_i = 0.
double relative_entropy(const ProbabilityVector &p, const ProbabilityVector &q,
                        LogBase base);

struct KraftResult {
  bool satisfied = false;
  double slack = 0.0; // 1 - sum alphabet^(-L_i)
};
KraftResult kraft_check(const std::vector<int> &lengths, int alphabet_size = 2);

/// (n+1)^D * 2^(-n S(P|Q)) with S in bits; 0 when S is infinite.
double sanov_bound(const ProbabilityVector &p, const ProbabilityVector &q,
                   long n_samples);

/// sum sqrt(p_i q_i), in [0, 1].
double classical_fidelity(const ProbabilityVector &p, const ProbabilityVector &q);

/// arccos of the classical fidelity, in [0, pi/2].
double bhattacharyya_distance(const ProbabilityVector &p, const ProbabilityVector &q);

} // namespace qig
