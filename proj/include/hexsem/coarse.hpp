// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_COARSE_HPP
#define HEXSEM_COARSE_HPP

#include <memory>
#include <optional>
#include <span>

#include "hexsem/amg.hpp"
#include "hexsem/geometry.hpp"
#include "hexsem/mesh.hpp"

namespace hexsem {

// Trilinear (n=1) stiffness+mass matrix with GLL vertex-rule quadrature over
// mesh vertices, Dirichlet vertices masked to identity rows/columns.
CsrMatrix assemble_coarse_matrix(const HexMesh& mesh, std::span<const Real> kappa_per_element,
                                 std::span<const Real> c_per_element,
                                 std::span<const std::uint8_t> vertex_dirichlet_mask);

std::vector<std::uint8_t> coarse_dirichlet_mask(const HexMesh& mesh);

enum class CoarseSolve { automatic, direct, amg };

/// Coarse-scale correction: mass-scaled L2 restriction to the n=1 vertex
/// space, an (approximate) coarse solve, and the transposed prolongation,
/// i.e. the chain m^-1 -> C -> P0 -> C^T -> m^-1.
class CoarsePreconditioner {
public:
  // direct sparse Cholesky below direct_threshold vertices, AMG K-cycles above
  CoarsePreconditioner(const HexMesh& mesh, const GllBasis& basis, const IndexMaps& maps,
                       const GeometricFactors& factors, Vector kappa_per_element,
                       Vector c_per_element, CoarseSolve mode = CoarseSolve::automatic,
                       gid direct_threshold = 64000);
  ~CoarsePreconditioner();
  CoarsePreconditioner(CoarsePreconditioner&&) noexcept;

  void restrict_residual(std::span<const Real> r_global, std::span<Real> R_coarse);
  void prolongate(std::span<const Real> Z_coarse, std::span<Real> z_global);
  // restrict -> mask -> coarse solve -> prolongate
  void apply(std::span<const Real> r_global, std::span<Real> z_global);

  gid num_coarse() const;
  bool uses_amg() const { return amg_.has_value(); }
  const CsrMatrix& coarse_matrix() const { return K_c_; }
  const AmgHierarchy* hierarchy() const { return amg_ ? &*amg_ : nullptr; }

private:
  const HexMesh* mesh_;
  const GllBasis* basis_;
  const IndexMaps* maps_;
  Vector mass_local_;   // fine per-node weighted masses
  Vector lumped_mass_;  // fine global lumped mass
  std::vector<std::uint8_t> vertex_mask_;
  CsrMatrix K_c_;
  std::optional<AmgHierarchy> amg_;
  struct Direct;
  std::unique_ptr<Direct> direct_;

  Vector y_local_, work_global_, R_, Z_;
};

} // namespace hexsem

#endif
