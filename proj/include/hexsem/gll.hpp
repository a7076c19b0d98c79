// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_GLL_HPP
#define HEXSEM_GLL_HPP

#include <utility>

#include "hexsem/types.hpp"

namespace hexsem {

/// One-dimensional spectral ingredients for a fixed polynomial order:
/// Gauss-Lobatto-Legendre nodes/weights, the Lagrange derivation matrix,
/// and the 8 x (n+1)^3 coarse Vandermonde shared by restriction and
/// prolongation. Immutable after construction.
struct GllBasis {
  int order = 0;              // n >= 1
  std::vector<Real> nodes;    // t_0..t_n, ascending, t_0 = -1, t_n = +1
  std::vector<Real> weights;  // rho_0..rho_n, positive, sum = 2
  // deriv[i*(n+1)+j] = dphi_i/dt evaluated at t_j.  The element kernels
  // contract with both orientations: the derivative of a field at node i
  // is sum_m deriv[m][i] u_m, its adjoint is sum_m deriv[i][m] w_m.
  std::vector<Real> deriv;
  // coarse_vandermonde[(I + 2J + 4K)*(n+1)^3 + node] with node = (k*(n+1)+j)*(n+1)+i,
  // value Phi_I(t_i) Phi_J(t_j) Phi_K(t_k) for the two linear hats Phi_0, Phi_1.
  std::vector<Real> coarse_vandermonde;

  int npts() const { return order + 1; }
  Real d(int i, int j) const { return deriv[static_cast<std::size_t>(i) * npts() + j]; }
};

// Legendre P_n and its derivative at t, by three-term recurrence.
std::pair<double, double> legendre(int n, double t);

// Nodes are the roots of (1-t^2) P'_n, weights rho_i = 2 / (n(n+1) P_n(t_i)^2).
// Rejects n < 1.
void gll_nodes_weights(int n, std::vector<Real>& nodes, std::vector<Real>& weights);

std::vector<Real> derivation_matrix(int n, const std::vector<Real>& nodes);

std::vector<Real> coarse_vandermonde(int n, const std::vector<Real>& nodes);

GllBasis make_gll_basis(int order);

} // namespace hexsem

#endif
