// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_OPERATOR_HPP
#define HEXSEM_OPERATOR_HPP

#include <span>

#include "hexsem/geometry.hpp"
#include "hexsem/mesh.hpp"

namespace hexsem {

enum class OperatorVariant { stored, on_the_fly };

/// Cost accounting for the residual kernel. Model values are the closed
/// formulas; measured values are accumulated by counters inside the kernel
/// loops, one per executed multiply/add/divide, so the contraction total must
/// reproduce the model exactly.
struct KernelCounters {
  OperatorVariant variant = OperatorVariant::stored;
  bool includes_geometry_flops = false;
  int word_size = static_cast<int>(sizeof(Real));
  int order = 0;
  long long num_elements = 0;
  long long applications = 0;

  unsigned long long flops_measured = 0;
  unsigned long long geometry_flops_measured = 0; // on-the-fly variant only
  double wall_seconds = 0;

  // O_R = NE [12 (n+1)^4 + 18 (n+1)^3] per application.
  static unsigned long long contraction_flops_model(long long ne, int n);
  // 242 geometry flops per GLL node, counted when includes_geometry_flops.
  static unsigned long long geometry_flops_model(long long ne, int n);
  // B_R words: 10 (n+1)^3 + (n+1)^2 + 2 per element when factors are stored,
  // 3 (n+1)^3 + (n+1)^2 + 2 when they are rebuilt on the fly.
  static unsigned long long words_model(long long ne, int n, OperatorVariant v);

  unsigned long long flops_model() const;
  unsigned long long bytes_model() const;
};

/// Matrix-free action of the SPD Galerkin operator of `c u - div(kappa grad u)`
/// under GLL quadrature. Dirichlet nodes are handled by symmetric masking:
/// zero row/column with unit diagonal. kappa and c are constant per element.
class SemOperator {
public:
  SemOperator(const HexMesh& mesh, const GllBasis& basis, const IndexMaps& maps,
              Vector kappa_per_element, Vector c_per_element,
              OperatorVariant variant = OperatorVariant::stored);
  // Reuses caller-computed factors (moved in, rescaled in place).
  SemOperator(const HexMesh& mesh, const GllBasis& basis, const IndexMaps& maps,
              GeometricFactors factors, Vector kappa_per_element, Vector c_per_element,
              OperatorVariant variant = OperatorVariant::stored);

  void apply(std::span<const Real> u_global, std::span<Real> r_global);

  // m_N = sum of local weighted masses; positive, sums to |Omega|.
  const Vector& lumped_mass() const { return lumped_mass_; }

  const KernelCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = make_counters(); }
  void set_word_size(int bytes) { counters_.word_size = bytes; }
  void set_includes_geometry_flops(bool on) { counters_.includes_geometry_flops = on; }

  OperatorVariant variant() const { return variant_; }
  gid num_global() const { return maps_->num_global; }

private:
  KernelCounters make_counters() const;
  void stored_element_kernel(gid e, const Real* u, Real* r, unsigned long long& flops);
  void otf_element_kernel(gid e, const Real* u, Real* r, unsigned long long& flops,
                          unsigned long long& gflops);
  void contraction_kernel(const Real* wg[6], const Real* m, Real c, const Real* u, Real* r,
                          unsigned long long& flops);

  const HexMesh* mesh_;
  const GllBasis* basis_;
  const IndexMaps* maps_;
  OperatorVariant variant_;
  Vector kappa_, c_;

  // stored variant: six kappa*m*Gt planes plus the plain mass plane
  std::array<Vector, 6> wg_;
  Vector mass_;
  Vector lumped_mass_;

  // workspace
  Vector u_masked_, u_local_, r_local_;
  Vector fa_, fb_, fc_;
  std::array<Vector, 6> wg_elem_;
  Vector mass_elem_;

  KernelCounters counters_;
};

} // namespace hexsem

#endif
