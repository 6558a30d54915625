#include "qig/spin_chains.hpp"

#include "qig/errors.hpp"

#include <cmath>

namespace qig {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix identity2() { return Matrix::Identity(2, 2); }

Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix site_operator(const Matrix &op, int site, const SpinSystem &system) {
  if (site < 0 || site >= system.sites) throw Error("site_operator: site out of range");
  Matrix acc = (site == 0) ? op : identity2();
  for (int s = 1; s < system.sites; ++s)
    acc = kron(acc, s == site ? op : identity2());
  return acc;
}

namespace {
Matrix axis_spin_half(const std::array<double, 3> &axis) {
  double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (norm < 1e-12) throw Error("spin axis must be nonzero");
  return 0.5 * (axis[0] / norm * pauli_x() + axis[1] / norm * pauli_y() +
                axis[2] / norm * pauli_z());
}
} // namespace

HermitianOperator collective_spin(const std::array<double, 3> &axis,
                                  const SpinSystem &system) {
  const Matrix s = axis_spin_half(axis);
  Matrix total = Matrix::Zero(system.hilbert_dimension(), system.hilbert_dimension());
  for (int j = 0; j < system.sites; ++j) total += site_operator(s, j, system);
  return HermitianOperator(total);
}

HermitianOperator staggered_spin(const std::array<double, 3> &axis,
                                 const SpinSystem &system) {
  const Matrix s = axis_spin_half(axis);
  Matrix total = Matrix::Zero(system.hilbert_dimension(), system.hilbert_dimension());
  for (int j = 0; j < system.sites; ++j)
    total += (j % 2 == 0 ? 1.0 : -1.0) * site_operator(s, j, system);
  return HermitianOperator(total);
}

HermitianOperator jw_string_operator(StringAxis axis, const SpinSystem &system) {
  const Matrix tail = (axis == StringAxis::x) ? pauli_x() : pauli_y();
  const Eigen::Index dim = system.hilbert_dimension();
  Matrix total = Matrix::Zero(dim, dim);
  for (int j = 0; j < system.sites; ++j) {
    Matrix term = Matrix::Identity(1, 1);
    for (int s = 0; s < system.sites; ++s) {
      if (s < j)
        term = kron(term, pauli_z());
      else if (s == j)
        term = kron(term, tail);
      else
        term = kron(term, identity2());
    }
    total += term;
  }
  return HermitianOperator(total);
}

HermitianOperator tfim_chain(int length, double g, bool periodic) {
  SpinSystem sys(length);
  const Eigen::Index dim = sys.hilbert_dimension();
  Matrix h = Matrix::Zero(dim, dim);
  const Matrix sz = pauli_z();
  for (int j = 0; j + 1 < length; ++j)
    h -= site_operator(sz, j, sys) * site_operator(sz, j + 1, sys);
  if (periodic && length > 2)
    h -= site_operator(sz, length - 1, sys) * site_operator(sz, 0, sys);
  for (int j = 0; j < length; ++j) h -= g * site_operator(pauli_x(), j, sys);
  return HermitianOperator(h);
}

HermitianOperator xy_chain(int length, double gamma, double h, bool periodic) {
  SpinSystem sys(length);
  const Eigen::Index dim = sys.hilbert_dimension();
  Matrix ham = Matrix::Zero(dim, dim);
  auto bond = [&](int a, int b) {
    ham -= 0.5 * (1.0 + gamma) * site_operator(pauli_x(), a, sys) *
           site_operator(pauli_x(), b, sys);
    ham -= 0.5 * (1.0 - gamma) * site_operator(pauli_y(), a, sys) *
           site_operator(pauli_y(), b, sys);
  };
  for (int j = 0; j + 1 < length; ++j) bond(j, j + 1);
  if (periodic && length > 2) bond(length - 1, 0);
  for (int j = 0; j < length; ++j) ham -= h * site_operator(pauli_z(), j, sys);
  return HermitianOperator(ham);
}

HermitianOperator heisenberg_chain(int length, double j, bool periodic) {
  SpinSystem sys(length);
  const Eigen::Index dim = sys.hilbert_dimension();
  Matrix ham = Matrix::Zero(dim, dim);
  auto bond = [&](int a, int b) {
    ham += 0.25 * j *
           (site_operator(pauli_x(), a, sys) * site_operator(pauli_x(), b, sys) +
            site_operator(pauli_y(), a, sys) * site_operator(pauli_y(), b, sys) +
            site_operator(pauli_z(), a, sys) * site_operator(pauli_z(), b, sys));
  };
  for (int s = 0; s + 1 < length; ++s) bond(s, s + 1);
  if (periodic && length > 2) bond(length - 1, 0);
  return HermitianOperator(ham);
}

HermitianOperator qwz_bloch(double kx, double ky, double m) {
  Matrix h = std::sin(kx) * pauli_x() + std::sin(ky) * pauli_y() +
             (m + std::cos(kx) + std::cos(ky)) * pauli_z();
  return HermitianOperator(h);
}

} // namespace qig
