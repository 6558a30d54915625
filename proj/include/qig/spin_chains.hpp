#pragma once

#include "qig/quantum_states.hpp"

#include <array>

namespace qig {

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix identity2();

Matrix kron(const Matrix &a, const Matrix &b);

/// Embeds a single-site operator at `site` of an N-site chain
/// (site 0 = leftmost factor).
Matrix site_operator(const Matrix &op, int site, const SpinSystem &system);

/// sum_j n . S_j with S = sigma/2 (per-site spectral width 1).
HermitianOperator collective_spin(const std::array<double, 3> &axis,
                                  const SpinSystem &system);

/// sum_j (-1)^j n . S_j.
HermitianOperator staggered_spin(const std::array<double, 3> &axis,
                                 const SpinSystem &system);

enum class StringAxis { x, y };

/// Jordan-Wigner mapped nonlocal sum: sum_j (prod_{l<j} sigma^z_l) sigma^alpha_j,
/// the Hermitian Majorana sums of the fermion chain.
HermitianOperator jw_string_operator(StringAxis axis, const SpinSystem &system);

/// H = -J (sum_<jk> sigma^z_j sigma^z_k + g sum_j sigma^x_j), J = 1.
HermitianOperator tfim_chain(int length, double g, bool periodic);

/// H = -sum_<jk> [(1+gamma)/2 sx sx + (1-gamma)/2 sy sy] - h sum_j sigma^z_j.
HermitianOperator xy_chain(int length, double gamma, double h, bool periodic);

/// H = J sum_<jk> S_j . S_k with S = sigma/2.
HermitianOperator heisenberg_chain(int length, double j, bool periodic);

/// Two-band Bloch Hamiltonian
/// sin(kx) sx + sin(ky) sy + (m + cos kx + cos ky) sz.
HermitianOperator qwz_bloch(double kx, double ky, double m);

} // namespace qig
