// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/operator.hpp"

#include <chrono>
#include <stdexcept>

namespace hexsem {

namespace {
unsigned long long ipow(unsigned long long b, int e)
{
  unsigned long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}
} // namespace

unsigned long long KernelCounters::contraction_flops_model(long long ne, int n)
{
  const unsigned long long np = n + 1;
  return static_cast<unsigned long long>(ne) * (12 * ipow(np, 4) + 18 * ipow(np, 3));
}

unsigned long long KernelCounters::geometry_flops_model(long long ne, int n)
{
  return static_cast<unsigned long long>(ne) * 242 * ipow(n + 1, 3);
}

unsigned long long KernelCounters::words_model(long long ne, int n, OperatorVariant v)
{
  const unsigned long long np = n + 1;
  const unsigned long long per_elem =
      (v == OperatorVariant::stored ? 10 : 3) * ipow(np, 3) + ipow(np, 2) + 2;
  return static_cast<unsigned long long>(ne) * per_elem;
}

unsigned long long KernelCounters::flops_model() const
{
  unsigned long long f = applications * contraction_flops_model(num_elements, order);
  if (variant == OperatorVariant::on_the_fly && includes_geometry_flops)
    f += applications * geometry_flops_model(num_elements, order);
  return f;
}

unsigned long long KernelCounters::bytes_model() const
{
  return applications * words_model(num_elements, order, variant) * word_size;
}

SemOperator::SemOperator(const HexMesh& mesh, const GllBasis& basis, const IndexMaps& maps,
                         Vector kappa, Vector c, OperatorVariant variant)
    : SemOperator(mesh, basis, maps,
                  variant == OperatorVariant::stored ? compute_factors(mesh, basis)
                                                     : GeometricFactors{},
                  std::move(kappa), std::move(c), variant)
{
}

SemOperator::SemOperator(const HexMesh& mesh, const GllBasis& basis, const IndexMaps& maps,
                         GeometricFactors factors, Vector kappa, Vector c,
                         OperatorVariant variant)
    : mesh_(&mesh), basis_(&basis), maps_(&maps), variant_(variant), kappa_(std::move(kappa)),
      c_(std::move(c))
{
  const gid ne = mesh.num_elements();
  const std::size_t nloc = maps.nodes_per_element();
  if (kappa_.size() != static_cast<std::size_t>(ne) || c_.size() != static_cast<std::size_t>(ne))
    throw std::invalid_argument("kappa/c must hold one value per element");
  // kappa = 0 is allowed: the operator degenerates to the lumped mass action
  for (gid e = 0; e < ne; ++e) {
    if (kappa_[e] < 0) throw std::invalid_argument("kappa must be nonnegative");
    if (c_[e] < 0) throw std::invalid_argument("c must be nonnegative");
  }

  if (variant_ == OperatorVariant::stored) {
    if (factors.mass.empty()) factors = compute_factors(mesh, basis);
    mass_ = factors.mass;
    for (int g = 0; g < 6; ++g) {
      wg_[g] = std::move(factors.metric[g]);
      for (gid e = 0; e < ne; ++e) {
        const Real scale = kappa_[e];
        for (std::size_t l = 0; l < nloc; ++l) {
          const std::size_t at = e * nloc + l;
          wg_[g][at] *= scale * mass_[at];
        }
      }
    }
    lumped_mass_.assign(maps.num_global, 0);
    gather(maps, mass_, lumped_mass_);
  } else {
    GeometricFactors f = factors.mass.empty() ? compute_factors(mesh, basis) : std::move(factors);
    lumped_mass_.assign(maps.num_global, 0);
    gather(maps, f.mass, lumped_mass_);
    for (auto& v : wg_elem_) v.resize(nloc);
    mass_elem_.resize(nloc);
  }

  u_masked_.resize(maps.num_global);
  u_local_.resize(static_cast<std::size_t>(ne) * nloc);
  r_local_.resize(static_cast<std::size_t>(ne) * nloc);
  fa_.resize(nloc);
  fb_.resize(nloc);
  fc_.resize(nloc);

  counters_ = make_counters();
}

KernelCounters SemOperator::make_counters() const
{
  KernelCounters k;
  k.variant = variant_;
  k.order = basis_->order;
  k.num_elements = mesh_->num_elements();
  k.word_size = counters_.word_size > 0 ? counters_.word_size : static_cast<int>(sizeof(Real));
  k.includes_geometry_flops = counters_.includes_geometry_flops;
  return k;
}

// Alg. "element residual": derivatives, metric-weighted fluxes, adjoint
// contractions plus the mass term. Phase boundaries mirror the two thread
// barriers of the data-parallel formulation.
void SemOperator::contraction_kernel(const Real* wg[6], const Real* m, Real c, const Real* u,
                                     Real* r, unsigned long long& flops)
{
  const int np = basis_->npts();
  const Real* D = basis_->deriv.data();
  unsigned long long local = 0;

  std::size_t node = 0;
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i, ++node) {
        Real sx = 0, sy = 0, sz = 0;
        for (int mm = 0; mm < np; ++mm) {
          sx += D[mm * np + i] * u[(k * np + j) * np + mm];
          sy += D[mm * np + j] * u[(k * np + mm) * np + i];
          sz += D[mm * np + k] * u[(mm * np + j) * np + i];
        }
        local += 6ull * np;
        fa_[node] = wg[0][node] * sx + wg[1][node] * sy + wg[2][node] * sz;
        fb_[node] = wg[1][node] * sx + wg[3][node] * sy + wg[4][node] * sz;
        fc_[node] = wg[2][node] * sx + wg[4][node] * sy + wg[5][node] * sz;
        local += 15;
      }

  node = 0;
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i, ++node) {
        Real s = 0;
        for (int mm = 0; mm < np; ++mm) {
          s += D[i * np + mm] * fa_[(k * np + j) * np + mm];
          s += D[j * np + mm] * fb_[(k * np + mm) * np + i];
          s += D[k * np + mm] * fc_[(mm * np + j) * np + i];
        }
        local += 6ull * np;
        r[node] = s + (c * u[node]) * m[node];
        local += 3;
      }
  flops += local;
}

void SemOperator::stored_element_kernel(gid e, const Real* u, Real* r,
                                        unsigned long long& flops)
{
  const std::size_t nloc = maps_->nodes_per_element();
  const Real* wg[6];
  for (int g = 0; g < 6; ++g) wg[g] = wg_[g].data() + e * nloc;
  contraction_kernel(wg, mass_.data() + e * nloc, c_[e], u, r, flops);
}

void SemOperator::otf_element_kernel(gid e, const Real* u, Real* r, unsigned long long& flops,
                                     unsigned long long& gflops)
{
  const int np = basis_->npts();
  const std::size_t nloc = maps_->nodes_per_element();
  const auto& nodes = basis_->nodes;
  const auto& w = basis_->weights;
  const Real kap = kappa_[e];

  Real xyz[8][3];
  for (int cc = 0; cc < 8; ++cc) {
    const auto& v = mesh_->vertices[mesh_->elements[e][cc]];
    xyz[cc][0] = v[0];
    xyz[cc][1] = v[1];
    xyz[cc][2] = v[2];
  }

  unsigned long long g_ops = 0;
  std::size_t node = 0;
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i, ++node) {
        const Real h[3][2] = {{Real(0.5) * (1 - nodes[i]), Real(0.5) * (1 + nodes[i])},
                              {Real(0.5) * (1 - nodes[j]), Real(0.5) * (1 + nodes[j])},
                              {Real(0.5) * (1 - nodes[k]), Real(0.5) * (1 + nodes[k])}};
        constexpr Real dh[2] = {Real(-0.5), Real(0.5)};
        Real J[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
        for (int bk = 0; bk < 2; ++bk)
          for (int bj = 0; bj < 2; ++bj)
            for (int bi = 0; bi < 2; ++bi) {
              const int cc = hex_corner(bi, bj, bk);
              const Real wx = dh[bi] * h[1][bj] * h[2][bk];
              const Real wy = h[0][bi] * dh[bj] * h[2][bk];
              const Real wz = h[0][bi] * h[1][bj] * dh[bk];
              g_ops += 6;
              for (int d = 0; d < 3; ++d) {
                J[d * 3 + 0] += wx * xyz[cc][d];
                J[d * 3 + 1] += wy * xyz[cc][d];
                J[d * 3 + 2] += wz * xyz[cc][d];
              }
              g_ops += 18;
            }
        Real adj[9];
        adj[0] = J[4] * J[8] - J[5] * J[7];
        adj[1] = J[2] * J[7] - J[1] * J[8];
        adj[2] = J[1] * J[5] - J[2] * J[4];
        adj[3] = J[5] * J[6] - J[3] * J[8];
        adj[4] = J[0] * J[8] - J[2] * J[6];
        adj[5] = J[2] * J[3] - J[0] * J[5];
        adj[6] = J[3] * J[7] - J[4] * J[6];
        adj[7] = J[1] * J[6] - J[0] * J[7];
        adj[8] = J[0] * J[4] - J[1] * J[3];
        const Real det = J[0] * adj[0] + J[1] * adj[3] + J[2] * adj[6];
        g_ops += 27 + 5;
        if (!(det > 0))
          throw std::runtime_error("inverted element " + std::to_string(e) +
                                   " encountered in on-the-fly kernel");
        const Real rho3 = w[i] * w[j] * w[k];
        const Real scale = kap * rho3 / det;
        g_ops += 4;
        // m Gt = rho^3 det J^-1 J^-T = rho^3 / det * adj adj^T (adj rows)
        auto aat = [&](int r0, int c0) {
          return adj[r0 * 3 + 0] * adj[c0 * 3 + 0] + adj[r0 * 3 + 1] * adj[c0 * 3 + 1] +
                 adj[r0 * 3 + 2] * adj[c0 * 3 + 2];
        };
        wg_elem_[0][node] = scale * aat(0, 0);
        wg_elem_[1][node] = scale * aat(0, 1);
        wg_elem_[2][node] = scale * aat(0, 2);
        wg_elem_[3][node] = scale * aat(1, 1);
        wg_elem_[4][node] = scale * aat(1, 2);
        wg_elem_[5][node] = scale * aat(2, 2);
        mass_elem_[node] = rho3 * det;
        g_ops += 6 * 6 + 1;
      }
  gflops += g_ops;

  const Real* wg[6];
  for (int g = 0; g < 6; ++g) wg[g] = wg_elem_[g].data();
  contraction_kernel(wg, mass_elem_.data(), c_[e], u, r, flops);
}

void SemOperator::apply(std::span<const Real> u_global, std::span<Real> r_global)
{
  const gid n = maps_->num_global;
  if (u_global.size() != static_cast<std::size_t>(n) ||
      r_global.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("apply: vector length mismatch");

  const auto t0 = std::chrono::steady_clock::now();

  for (gid g = 0; g < n; ++g) u_masked_[g] = maps_->dirichlet_mask[g] ? Real(0) : u_global[g];
  scatter(*maps_, u_masked_, u_local_);

  const gid ne = mesh_->num_elements();
  const std::size_t nloc = maps_->nodes_per_element();
  unsigned long long flops = 0, gflops = 0;
  for (gid e = 0; e < ne; ++e) {
    const Real* u = u_local_.data() + e * nloc;
    Real* r = r_local_.data() + e * nloc;
    if (variant_ == OperatorVariant::stored)
      stored_element_kernel(e, u, r, flops);
    else
      otf_element_kernel(e, u, r, flops, gflops);
  }
  gather(*maps_, r_local_, r_global);
  for (gid g = 0; g < n; ++g)
    if (maps_->dirichlet_mask[g]) r_global[g] = u_global[g];

  counters_.applications += 1;
  counters_.flops_measured += flops;
  counters_.geometry_flops_measured += gflops;
  counters_.wall_seconds +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace hexsem
