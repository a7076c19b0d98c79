// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/coarse.hpp"

#include <Eigen/Sparse>
#include <stdexcept>

namespace hexsem {

std::vector<std::uint8_t> coarse_dirichlet_mask(const HexMesh& mesh)
{
  std::vector<std::uint8_t> mask(mesh.num_vertices(), 0);
  for (const auto& bf : mesh.boundary_faces) {
    if (bf.tag != BoundaryTag::dirichlet) continue;
    for (int c : hex_face_corners(bf.face)) mask[mesh.elements[bf.element][c]] = 1;
  }
  return mask;
}

CsrMatrix assemble_coarse_matrix(const HexMesh& mesh, std::span<const Real> kappa,
                                 std::span<const Real> c,
                                 std::span<const std::uint8_t> vertex_mask)
{
  const gid nv = mesh.num_vertices();
  std::vector<std::pair<std::pair<gid, gid>, Real>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.num_elements()) * 64);

  for (gid e = 0; e < mesh.num_elements(); ++e) {
    // physical gradients of the 8 trilinear shape functions at each corner
    // quadrature point (GLL n=1: weights 1, m_q = |J|_q)
    Real ke[8][8] = {};
    for (int qb = 0; qb < 8; ++qb) {
      const Real xi = (qb & 1) ? Real(1) : Real(-1);
      const Real eta = (qb & 2) ? Real(1) : Real(-1);
      const Real zeta = (qb & 4) ? Real(1) : Real(-1);
      const Jacobian jac = jacobian(mesh, e, xi, eta, zeta);
      const auto& J = jac.j;
      Real inv[9];
      inv[0] = (J[4] * J[8] - J[5] * J[7]) / jac.det;
      inv[1] = (J[2] * J[7] - J[1] * J[8]) / jac.det;
      inv[2] = (J[1] * J[5] - J[2] * J[4]) / jac.det;
      inv[3] = (J[5] * J[6] - J[3] * J[8]) / jac.det;
      inv[4] = (J[0] * J[8] - J[2] * J[6]) / jac.det;
      inv[5] = (J[2] * J[3] - J[0] * J[5]) / jac.det;
      inv[6] = (J[3] * J[7] - J[4] * J[6]) / jac.det;
      inv[7] = (J[1] * J[6] - J[0] * J[7]) / jac.det;
      inv[8] = (J[0] * J[4] - J[1] * J[3]) / jac.det;

      Real grad[8][3];
      const Real hq[3][2] = {{(qb & 1) ? Real(0) : Real(1), (qb & 1) ? Real(1) : Real(0)},
                             {(qb & 2) ? Real(0) : Real(1), (qb & 2) ? Real(1) : Real(0)},
                             {(qb & 4) ? Real(0) : Real(1), (qb & 4) ? Real(1) : Real(0)}};
      for (int ab = 0; ab < 8; ++ab) {
        const int bi = ab & 1, bj = (ab >> 1) & 1, bk = (ab >> 2) & 1;
        const Real dhat[3] = {
            (bi ? Real(0.5) : Real(-0.5)) * hq[1][bj] * hq[2][bk],
            hq[0][bi] * (bj ? Real(0.5) : Real(-0.5)) * hq[2][bk],
            hq[0][bi] * hq[1][bj] * (bk ? Real(0.5) : Real(-0.5))};
        // physical gradient J^-T dhat with inv = row-major J^-1
        for (int d = 0; d < 3; ++d)
          grad[ab][d] = inv[0 * 3 + d] * dhat[0] + inv[1 * 3 + d] * dhat[1] +
                        inv[2 * 3 + d] * dhat[2];
      }
      const Real mq = jac.det; // rho = 1 at n=1
      for (int ab = 0; ab < 8; ++ab)
        for (int bb = 0; bb < 8; ++bb) {
          Real s = kappa[e] * (grad[ab][0] * grad[bb][0] + grad[ab][1] * grad[bb][1] +
                               grad[ab][2] * grad[bb][2]);
          if (ab == bb && ab == qb) s += c[e]; // collocated mass
          ke[ab][bb] += mq * s;
        }
    }

    for (int ab = 0; ab < 8; ++ab) {
      const gid ga = mesh.elements[e][hex_corner(ab & 1, (ab >> 1) & 1, (ab >> 2) & 1)];
      for (int bb = 0; bb < 8; ++bb) {
        const gid gb = mesh.elements[e][hex_corner(bb & 1, (bb >> 1) & 1, (bb >> 2) & 1)];
        if (vertex_mask[ga] || vertex_mask[gb]) continue;
        trips.push_back({{ga, gb}, ke[ab][bb]});
      }
    }
  }
  for (gid v = 0; v < nv; ++v)
    if (vertex_mask[v]) trips.push_back({{v, v}, Real(1)});
  return csr_from_triplets(nv, std::move(trips));
}

struct CoarsePreconditioner::Direct {
  Eigen::SparseMatrix<double> A;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

CoarsePreconditioner::~CoarsePreconditioner() = default;
CoarsePreconditioner::CoarsePreconditioner(CoarsePreconditioner&&) noexcept = default;

CoarsePreconditioner::CoarsePreconditioner(const HexMesh& mesh, const GllBasis& basis,
                                           const IndexMaps& maps,
                                           const GeometricFactors& factors, Vector kappa,
                                           Vector c, CoarseSolve mode, gid direct_threshold)
    : mesh_(&mesh), basis_(&basis), maps_(&maps)
{
  if (factors.mass.size() != maps.l2g.size())
    throw std::invalid_argument("coarse preconditioner: factors do not match the index maps");
  mass_local_ = factors.mass;
  lumped_mass_.assign(maps.num_global, 0);
  gather(maps, mass_local_, lumped_mass_);

  vertex_mask_ = coarse_dirichlet_mask(mesh);
  K_c_ = assemble_coarse_matrix(mesh, kappa, c, vertex_mask_);

  const bool use_amg = mode == CoarseSolve::amg ||
                       (mode == CoarseSolve::automatic && K_c_.n > direct_threshold);
  if (use_amg) {
    amg_.emplace(K_c_);
  } else {
    direct_ = std::make_unique<Direct>();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(K_c_.nnz());
    for (gid i = 0; i < K_c_.n; ++i)
      for (std::size_t k = K_c_.ptr[i]; k < K_c_.ptr[i + 1]; ++k)
        trips.emplace_back(i, K_c_.col[k], static_cast<double>(K_c_.val[k]));
    direct_->A.resize(K_c_.n, K_c_.n);
    direct_->A.setFromTriplets(trips.begin(), trips.end());
    direct_->llt.compute(direct_->A);
    if (direct_->llt.info() != Eigen::Success)
      throw std::runtime_error("coarse matrix Cholesky failed (matrix not SPD?)");
  }

  y_local_.resize(maps.l2g.size());
  work_global_.resize(maps.num_global);
  R_.resize(mesh.num_vertices());
  Z_.resize(mesh.num_vertices());
}

gid CoarsePreconditioner::num_coarse() const { return K_c_.n; }

void CoarsePreconditioner::restrict_residual(std::span<const Real> r_global,
                                             std::span<Real> R_coarse)
{
  const gid n = maps_->num_global;
  if (r_global.size() != static_cast<std::size_t>(n) ||
      R_coarse.size() != static_cast<std::size_t>(mesh_->num_vertices()))
    throw std::invalid_argument("restrict: vector length mismatch");

  for (gid g = 0; g < n; ++g) work_global_[g] = r_global[g] / lumped_mass_[g];
  scatter(*maps_, work_global_, y_local_);

  std::fill(R_coarse.begin(), R_coarse.end(), Real(0));
  const std::size_t nloc = maps_->nodes_per_element();
  const auto& B = basis_->coarse_vandermonde;
  for (gid e = 0; e < mesh_->num_elements(); ++e) {
    const Real* y = y_local_.data() + e * nloc;
    const Real* m = mass_local_.data() + e * nloc;
    for (int cb = 0; cb < 8; ++cb) {
      const Real* brow = B.data() + cb * nloc;
      Real s = 0;
      for (std::size_t l = 0; l < nloc; ++l) s += brow[l] * y[l] * m[l];
      R_coarse[mesh_->elements[e][kHexCornerFromBits[cb]]] += s;
    }
  }
}

void CoarsePreconditioner::prolongate(std::span<const Real> Z_coarse, std::span<Real> z_global)
{
  const gid n = maps_->num_global;
  if (z_global.size() != static_cast<std::size_t>(n) ||
      Z_coarse.size() != static_cast<std::size_t>(mesh_->num_vertices()))
    throw std::invalid_argument("prolongate: vector length mismatch");

  const std::size_t nloc = maps_->nodes_per_element();
  const auto& B = basis_->coarse_vandermonde;
  for (gid e = 0; e < mesh_->num_elements(); ++e) {
    Real zc[8];
    for (int cb = 0; cb < 8; ++cb) zc[cb] = Z_coarse[mesh_->elements[e][kHexCornerFromBits[cb]]];
    Real* z = y_local_.data() + e * nloc;
    const Real* m = mass_local_.data() + e * nloc;
    for (std::size_t l = 0; l < nloc; ++l) {
      Real s = 0;
      for (int cb = 0; cb < 8; ++cb) s += B[cb * nloc + l] * zc[cb];
      z[l] = s * m[l];
    }
  }
  gather(*maps_, y_local_, z_global);
  for (gid g = 0; g < n; ++g) z_global[g] /= lumped_mass_[g];
}

void CoarsePreconditioner::apply(std::span<const Real> r_global, std::span<Real> z_global)
{
  restrict_residual(r_global, R_);
  for (gid v = 0; v < K_c_.n; ++v)
    if (vertex_mask_[v]) R_[v] = 0;
  if (amg_) {
    // two composed K-cycles: z <- B r + B (r - K B r); symmetric when B is
    amg_->apply(R_, Z_);
    Vector rho(K_c_.n), dz(K_c_.n);
    K_c_.multiply(Z_, rho);
    for (gid v = 0; v < K_c_.n; ++v) rho[v] = R_[v] - rho[v];
    amg_->apply(rho, dz);
    for (gid v = 0; v < K_c_.n; ++v) Z_[v] += dz[v];
  } else {
    Eigen::VectorXd rhs(K_c_.n);
    for (gid v = 0; v < K_c_.n; ++v) rhs(v) = static_cast<double>(R_[v]);
    const Eigen::VectorXd x = direct_->llt.solve(rhs);
    for (gid v = 0; v < K_c_.n; ++v) Z_[v] = static_cast<Real>(x(v));
  }
  prolongate(Z_, z_global);
}

} // namespace hexsem
