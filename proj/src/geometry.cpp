// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hexsem {

namespace {

inline void corner_coords(const HexMesh& mesh, gid e, Real xyz[8][3])
{
  for (int c = 0; c < 8; ++c) {
    const auto& v = mesh.vertices[mesh.elements[e][c]];
    xyz[c][0] = v[0];
    xyz[c][1] = v[1];
    xyz[c][2] = v[2];
  }
}

} // namespace

std::array<Real, 3> trilinear_map(const HexMesh& mesh, gid e, Real xi, Real eta, Real zeta)
{
  Real xyz[8][3];
  corner_coords(mesh, e, xyz);
  const Real hx[2] = {Real(0.5) * (1 - xi), Real(0.5) * (1 + xi)};
  const Real hy[2] = {Real(0.5) * (1 - eta), Real(0.5) * (1 + eta)};
  const Real hz[2] = {Real(0.5) * (1 - zeta), Real(0.5) * (1 + zeta)};
  std::array<Real, 3> p{0, 0, 0};
  for (int bk = 0; bk < 2; ++bk)
    for (int bj = 0; bj < 2; ++bj)
      for (int bi = 0; bi < 2; ++bi) {
        const Real w = hx[bi] * hy[bj] * hz[bk];
        const int c = hex_corner(bi, bj, bk);
        for (int d = 0; d < 3; ++d) p[d] += w * xyz[c][d];
      }
  return p;
}

Jacobian jacobian(const HexMesh& mesh, gid e, Real xi, Real eta, Real zeta)
{
  Real xyz[8][3];
  corner_coords(mesh, e, xyz);
  const Real h[3][2] = {{Real(0.5) * (1 - xi), Real(0.5) * (1 + xi)},
                        {Real(0.5) * (1 - eta), Real(0.5) * (1 + eta)},
                        {Real(0.5) * (1 - zeta), Real(0.5) * (1 + zeta)}};
  constexpr Real dh[2] = {Real(-0.5), Real(0.5)};

  Jacobian out;
  for (int bk = 0; bk < 2; ++bk)
    for (int bj = 0; bj < 2; ++bj)
      for (int bi = 0; bi < 2; ++bi) {
        const int c = hex_corner(bi, bj, bk);
        const Real wx = dh[bi] * h[1][bj] * h[2][bk];
        const Real wy = h[0][bi] * dh[bj] * h[2][bk];
        const Real wz = h[0][bi] * h[1][bj] * dh[bk];
        for (int d = 0; d < 3; ++d) {
          out.j[d * 3 + 0] += wx * xyz[c][d];
          out.j[d * 3 + 1] += wy * xyz[c][d];
          out.j[d * 3 + 2] += wz * xyz[c][d];
        }
      }
  const auto& j = out.j;
  out.det = j[0] * (j[4] * j[8] - j[5] * j[7]) - j[1] * (j[3] * j[8] - j[5] * j[6]) +
            j[2] * (j[3] * j[7] - j[4] * j[6]);
  if (!(out.det > 0))
    throw std::runtime_error("inverted element " + std::to_string(e) +
                             ": non-positive Jacobian determinant " + std::to_string(out.det));
  return out;
}

std::array<Real, 3> element_dimensions(const HexMesh& mesh, gid e)
{
  Real xyz[8][3];
  corner_coords(mesh, e, xyz);
  auto edge_len = [&](int ca, int cb) {
    Real s = 0;
    for (int d = 0; d < 3; ++d) {
      const Real t = xyz[cb][d] - xyz[ca][d];
      s += t * t;
    }
    return std::sqrt(s);
  };
  std::array<Real, 3> h{0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    Real sum = 0;
    for (int v = 0; v < 2; ++v)
      for (int u = 0; u < 2; ++u) {
        int lo[3], hi[3];
        lo[a] = 0;
        hi[a] = 1;
        lo[(a + 1) % 3] = hi[(a + 1) % 3] = u;
        lo[(a + 2) % 3] = hi[(a + 2) % 3] = v;
        sum += edge_len(hex_corner(lo[0], lo[1], lo[2]), hex_corner(hi[0], hi[1], hi[2]));
      }
    h[a] = Real(0.25) * sum;
  }
  return h;
}

GeometricFactors compute_factors(const HexMesh& mesh, const GllBasis& basis)
{
  const int np = basis.npts();
  const gid ne = mesh.num_elements();
  const std::size_t nloc = static_cast<std::size_t>(np) * np * np;

  GeometricFactors f;
  f.order = basis.order;
  f.num_elements = ne;
  f.mass.resize(static_cast<std::size_t>(ne) * nloc);
  for (auto& g : f.metric) g.resize(static_cast<std::size_t>(ne) * nloc);

  for (gid e = 0; e < ne; ++e) {
    std::size_t node = 0;
    for (int k = 0; k < np; ++k)
      for (int j = 0; j < np; ++j)
        for (int i = 0; i < np; ++i, ++node) {
          const Jacobian jac =
              jacobian(mesh, e, basis.nodes[i], basis.nodes[j], basis.nodes[k]);
          const auto& J = jac.j;
          // inv(J) from the adjugate, then Gt = inv(J) inv(J)^T
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
          auto gt = [&](int r, int c) {
            return inv[r * 3 + 0] * inv[c * 3 + 0] + inv[r * 3 + 1] * inv[c * 3 + 1] +
                   inv[r * 3 + 2] * inv[c * 3 + 2];
          };
          const std::size_t at = e * nloc + node;
          f.mass[at] = basis.weights[i] * basis.weights[j] * basis.weights[k] * jac.det;
          f.metric[0][at] = gt(0, 0);
          f.metric[1][at] = gt(0, 1);
          f.metric[2][at] = gt(0, 2);
          f.metric[3][at] = gt(1, 1);
          f.metric[4][at] = gt(1, 2);
          f.metric[5][at] = gt(2, 2);
        }
  }
  return f;
}

void check_jacobians(const HexMesh& mesh)
{
  for (gid e = 0; e < mesh.num_elements(); ++e)
    for (int k = -1; k <= 1; ++k)
      for (int j = -1; j <= 1; ++j)
        for (int i = -1; i <= 1; ++i)
          (void)jacobian(mesh, e, static_cast<Real>(i), static_cast<Real>(j),
                         static_cast<Real>(k));
}

} // namespace hexsem
