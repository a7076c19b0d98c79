// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_MESH_HPP
#define HEXSEM_MESH_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "hexsem/gll.hpp"
#include "hexsem/types.hpp"

namespace hexsem {

enum class BoundaryTag : std::uint8_t { dirichlet = 0, neumann = 1 };

// Local face ids on the reference hex: 0/1 = xi -/+, 2/3 = eta -/+, 4/5 = zeta -/+.
struct BoundaryFace {
  gid element = 0;
  int face = 0;
  BoundaryTag tag = BoundaryTag::dirichlet;
};

// Corner c of the reference cube has bits (c&1, (c>>1)&1, (c>>2)&1) along
// (xi, eta, zeta); hex_corner(c) permutes that to the stored connectivity
// order (Gmsh/VTK 8-node hexahedron).
inline constexpr std::array<int, 8> kHexCornerFromBits = {0, 1, 3, 2, 4, 5, 7, 6};

inline int hex_corner(int bi, int bj, int bk) { return kHexCornerFromBits[bi + 2 * bj + 4 * bk]; }

// The 4 connectivity slots of each local face, in a fixed order.
const std::array<int, 4>& hex_face_corners(int face);

/// Conforming all-hexahedral mesh: vertex coordinates, 8-vertex connectivity
/// in Gmsh corner order, and tagged boundary faces.
struct HexMesh {
  std::vector<std::array<Real, 3>> vertices;
  std::vector<std::array<gid, 8>> elements;
  std::vector<BoundaryFace> boundary_faces;

  gid num_vertices() const { return static_cast<gid>(vertices.size()); }
  gid num_elements() const { return static_cast<gid>(elements.size()); }
};

enum class MeshFamily { uniform, distorted_domain, distorted_elements };

// k^3 hexahedra covering the unit cube (possibly warped, see MeshFamily).
// All six outer faces carry boundary_tag.
HexMesh generate_cube_mesh(int k, MeshFamily family,
                           BoundaryTag boundary_tag = BoundaryTag::dirichlet);

// kx*ky*kz axis-aligned hexahedra covering [0,size_x]x[0,size_y]x[0,size_z].
HexMesh generate_box_mesh(int kx, int ky, int kz, std::array<Real, 3> size,
                          BoundaryTag boundary_tag = BoundaryTag::dirichlet);

// Splits every hex into 8 through its trilinear midpoints. New vertices are
// deduplicated topologically (edge/face/center entities), so refining a
// conforming mesh yields a conforming, nested mesh. Boundary tags are
// inherited by the child faces.
HexMesh refine_uniform(const HexMesh& mesh);

/// Local<->global GLL numbering, extended (n+3)^3 subdomain numbering with
/// sentinel slots, and the Dirichlet node mask.
struct IndexMaps {
  int order = 0;
  gid num_global = 0;

  // l2g[e*(n+1)^3 + node], node = (k*(n+1)+j)*(n+1)+i.
  std::vector<gid> l2g;

  // Copies of each global node as (element, local node), CSR layout ordered
  // by ascending element; gather sums in exactly this order.
  std::vector<std::size_t> g2l_offsets;
  std::vector<gid> g2l_elem;
  std::vector<gid> g2l_local;

  // sub_l2g[e*(n+3)^3 + slot], slot = ((k+1)*(n+3)+(j+1))*(n+3)+(i+1) for
  // i,j,k in [-1, n+1]; kNoNode marks slots with no face-neighbor donor.
  std::vector<gid> sub_l2g;

  std::vector<std::uint8_t> dirichlet_mask; // per global node

  static constexpr gid kNoNode = -1;

  int npts() const { return order + 1; }
  std::size_t nodes_per_element() const {
    const std::size_t np = npts();
    return np * np * np;
  }
  std::size_t sub_nodes_per_element() const {
    const std::size_t p = order + 3;
    return p * p * p;
  }
  int copies(gid g) const { return static_cast<int>(g2l_offsets[g + 1] - g2l_offsets[g]); }
};

IndexMaps build_index_maps(const HexMesh& mesh, const GllBasis& basis);

// u_local[e*nloc + node] = u_global[l2g], and its adjoint sum.
void scatter(const IndexMaps& maps, std::span<const Real> u_global, std::span<Real> u_local);
void gather(const IndexMaps& maps, std::span<const Real> r_local, std::span<Real> r_global);

// Physical coordinates of every global GLL node (from any local copy; copies
// agree because the trilinear map restricted to a shared face is determined
// by the shared vertices).
std::vector<std::array<Real, 3>> global_node_coords(const HexMesh& mesh, const GllBasis& basis,
                                                    const IndexMaps& maps);

} // namespace hexsem

#endif
