// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_GEOMETRY_HPP
#define HEXSEM_GEOMETRY_HPP

#include <array>

#include "hexsem/mesh.hpp"

namespace hexsem {

struct Jacobian {
  std::array<Real, 9> j{};  // row-major d(x,y,z)/d(xi,eta,zeta)
  Real det = 0;
};

// Trilinear 8-vertex map of element e at reference point (xi,eta,zeta) in [-1,1]^3.
std::array<Real, 3> trilinear_map(const HexMesh& mesh, gid e, Real xi, Real eta, Real zeta);

// Throws on det <= 0, naming the element.
Jacobian jacobian(const HexMesh& mesh, gid e, Real xi, Real eta, Real zeta);

// Mean of the four element edge lengths along each reference direction;
// feeds the fine preconditioner only.
std::array<Real, 3> element_dimensions(const HexMesh& mesh, gid e);

/// Per-node weighted mass m = rho_i rho_j rho_k |J| and the six independent
/// entries of the dimensionless effective metric Gt = J^-1 J^-T, stored as
/// structure-of-arrays keyed by (node within element, element).
/// Component order: Gt11, Gt12, Gt13, Gt22, Gt23, Gt33.
struct GeometricFactors {
  int order = 0;
  gid num_elements = 0;
  std::vector<Real> mass;                   // NE * (n+1)^3
  std::array<std::vector<Real>, 6> metric;  // each NE * (n+1)^3

  std::size_t nodes_per_element() const {
    const std::size_t np = order + 1;
    return np * np * np;
  }
};

// Evaluates the mapping at every GLL node of every element; throws on any
// non-positive Jacobian determinant.
GeometricFactors compute_factors(const HexMesh& mesh, const GllBasis& basis);

// Cheap construction-time screen at a 3x3x3 lattice per element.
void check_jacobians(const HexMesh& mesh);

} // namespace hexsem

#endif
