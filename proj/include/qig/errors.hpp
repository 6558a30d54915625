#pragma once

#include <stdexcept>
#include <string>

namespace qig {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Incompatible vector/matrix dimensions between two arguments.
class DimensionError : public Error {
public:
  using Error::Error;
};

// A probability entry vanishes while its parameter derivative does not:
// the Fisher-Rao metric genuinely diverges at the simplex boundary and we
// report it instead of masking it.
class BoundaryDivergenceError : public Error {
public:
  using Error::Error;
};

// Ground-state degeneracy where a nondegenerate ground state is required.
class DegeneracyError : public Error {
public:
  using Error::Error;
};

// A numerical self-check failed (step-halving, quadrature doubling,
// grid-refinement, or cross-route consistency).
class ConsistencyError : public Error {
public:
  using Error::Error;
};

// Metric determinant clipped on too much of the grid.
class ManifoldError : public Error {
public:
  using Error::Error;
};

// A density-matrix tangent carries weight outside the support-reachable
// block, so no symmetric logarithmic derivative reproduces it.
class TangentSupportError : public Error {
public:
  using Error::Error;
};

} // namespace qig
