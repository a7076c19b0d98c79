// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_FINE_HPP
#define HEXSEM_FINE_HPP

#include <span>

#include "hexsem/gll.hpp"
#include "hexsem/mesh.hpp"

namespace hexsem {

/// Eigen-factorization of the extended 1D pencil on the reference length
/// scale: the (n+3)-node stiffness/lumped-mass pair assembled over the 1D
/// GLL element lattice restricted to nodes [-1, n+1] (homogeneous Dirichlet
/// elimination outside), and the diagonalization of L = M^-1 K.
struct PencilFactorization {
  int order = 0;
  int p = 0;                  // n + 3
  std::vector<Real> K_ext;    // p*p, symmetric
  std::vector<Real> M_ext;    // diagonal, positive
  std::vector<Real> V;        // p*p row-major, L = V^-1 diag(lambda) V
  std::vector<Real> V_inv;    // p*p row-major
  std::vector<Real> lambda;   // ascending, all positive
};

PencilFactorization build_pencil(const GllBasis& basis);

struct FineCounters {
  int order = 0;
  long long num_elements = 0;
  long long applications = 0;
  unsigned long long ops_measured = 0;
  int word_size = static_cast<int>(sizeof(Real));

  // O_P = NE [6 (n+3)^4 + 15 (n+3)^3] per application; one op per multiply-add
  // in the six eigenvector transforms, 15 per node in the pointwise stage.
  static unsigned long long ops_model(long long ne, int n);
  // B_P words: 3 (n+3)^3 + 4 (n+3)^2 per subdomain.
  static unsigned long long words_model(long long ne, int n);
  unsigned long long total_ops_model() const { return applications * ops_model(num_elements, order); }
  unsigned long long bytes_model() const { return applications * words_model(num_elements, order) * word_size; }
};

// Separable solve on one (n+3)^3 subdomain: forward transform by V along each
// axis, pointwise division by 4 kappa (lambda_d/hx^2 + lambda_e/hy^2 +
// lambda_f/hz^2) + c, backward transform by V^-1, applied to the mass/h
// scaled right-hand side r'.
void solve_subdomain(const PencilFactorization& pencil, std::span<const Real> r_sub,
                     std::array<Real, 3> h, Real kappa, Real c, std::span<Real> z_sub,
                     unsigned long long* ops = nullptr);

/// Overlapping additive Schwarz fine correction: one subdomain per element,
/// plain unweighted accumulation over the (n+3)^3 slots. Sentinel slots read
/// zero and their outputs are discarded. Output depends on the geometry only
/// through the per-element (hx,hy,hz).
class FinePreconditioner {
public:
  FinePreconditioner(const HexMesh& mesh, const GllBasis& basis, const IndexMaps& maps,
                     Vector kappa_per_element, Vector c_per_element);

  // z = sum_s insert(solve(extract(r))); deterministic accumulation order.
  void apply(std::span<const Real> r_global, std::span<Real> z_global);
  // Same result bitwise: subdomain solves run on `threads` workers, the
  // accumulation stays sequential in element order.
  void apply_parallel(std::span<const Real> r_global, std::span<Real> z_global, int threads);

  const PencilFactorization& pencil() const { return pencil_; }
  std::array<Real, 3> element_h(gid e) const { return {hx_[e], hy_[e], hz_[e]}; }
  const FineCounters& counters() const { return counters_; }
  void reset_counters() { counters_.applications = 0; counters_.ops_measured = 0; }

private:
  const IndexMaps* maps_;
  PencilFactorization pencil_;
  Vector kappa_, c_;
  Vector hx_, hy_, hz_;
  Vector r_sub_, z_sub_; // workspace, one subdomain
  Vector z_all_;         // parallel-mode staging
  FineCounters counters_;
};

} // namespace hexsem

#endif
