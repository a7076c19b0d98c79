// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "hexsem/geometry.hpp"

namespace hexsem {

namespace {

// face id -> (axis, side at +1 end?)
constexpr int face_axis(int f) { return f / 2; }
constexpr int face_side(int f) { return f % 2; }

std::array<std::array<int, 4>, 6> make_face_corner_table()
{
  std::array<std::array<int, 4>, 6> t{};
  for (int f = 0; f < 6; ++f) {
    const int a = face_axis(f), s = face_side(f);
    int idx = 0;
    for (int v = 0; v < 2; ++v)
      for (int u = 0; u < 2; ++u) {
        int bits[3];
        bits[a] = s;
        bits[(a + 1) % 3] = u;
        bits[(a + 2) % 3] = v;
        t[f][idx++] = hex_corner(bits[0], bits[1], bits[2]);
      }
  }
  return t;
}

const std::array<std::array<int, 4>, 6> kFaceCorners = make_face_corner_table();

std::uint64_t splitmix64(std::uint64_t& state)
{
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::array<gid, 4> face_key(const HexMesh& mesh, gid e, int f)
{
  std::array<gid, 4> key{};
  for (int c = 0; c < 4; ++c) key[c] = mesh.elements[e][kFaceCorners[f][c]];
  std::sort(key.begin(), key.end());
  return key;
}

} // namespace

const std::array<int, 4>& hex_face_corners(int face) { return kFaceCorners[face]; }

HexMesh generate_box_mesh(int kx, int ky, int kz, std::array<Real, 3> size, BoundaryTag tag)
{
  if (kx < 1 || ky < 1 || kz < 1) throw std::invalid_argument("box mesh needs k >= 1 per axis");
  HexMesh mesh;
  const int nvx = kx + 1, nvy = ky + 1, nvz = kz + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(nvx) * nvy * nvz);
  for (int iz = 0; iz < nvz; ++iz)
    for (int iy = 0; iy < nvy; ++iy)
      for (int ix = 0; ix < nvx; ++ix)
        mesh.vertices.push_back({size[0] * ix / kx, size[1] * iy / ky, size[2] * iz / kz});

  auto vid = [&](int ix, int iy, int iz) {
    return static_cast<gid>((static_cast<std::size_t>(iz) * nvy + iy) * nvx + ix);
  };
  mesh.elements.reserve(static_cast<std::size_t>(kx) * ky * kz);
  for (int ez = 0; ez < kz; ++ez)
    for (int ey = 0; ey < ky; ++ey)
      for (int ex = 0; ex < kx; ++ex) {
        std::array<gid, 8> conn{};
        for (int c = 0; c < 8; ++c) {
          const int bi = c & 1, bj = (c >> 1) & 1, bk = (c >> 2) & 1;
          conn[hex_corner(bi, bj, bk)] = vid(ex + bi, ey + bj, ez + bk);
        }
        mesh.elements.push_back(conn);
      }

  auto eid = [&](int ex, int ey, int ez) {
    return static_cast<gid>((static_cast<std::size_t>(ez) * ky + ey) * kx + ex);
  };
  for (int ez = 0; ez < kz; ++ez)
    for (int ey = 0; ey < ky; ++ey)
      for (int ex = 0; ex < kx; ++ex) {
        const gid e = eid(ex, ey, ez);
        if (ex == 0) mesh.boundary_faces.push_back({e, 0, tag});
        if (ex == kx - 1) mesh.boundary_faces.push_back({e, 1, tag});
        if (ey == 0) mesh.boundary_faces.push_back({e, 2, tag});
        if (ey == ky - 1) mesh.boundary_faces.push_back({e, 3, tag});
        if (ez == 0) mesh.boundary_faces.push_back({e, 4, tag});
        if (ez == kz - 1) mesh.boundary_faces.push_back({e, 5, tag});
      }
  return mesh;
}

HexMesh generate_cube_mesh(int k, MeshFamily family, BoundaryTag tag)
{
  HexMesh mesh = generate_box_mesh(k, k, k, {Real(1), Real(1), Real(1)}, tag);
  if (family == MeshFamily::distorted_domain) {
    const Real a = Real(0.1);
    for (auto& v : mesh.vertices) {
      const Real x = v[0], y = v[1], z = v[2];
      v[0] = x + a * std::sin(Real(M_PI) * y);
      v[1] = y + a * std::sin(Real(M_PI) * z);
      v[2] = z + a * std::sin(Real(M_PI) * x);
    }
  } else if (family == MeshFamily::distorted_elements) {
    const Real h = Real(1) / k;
    const int nv = k + 1;
    for (int iz = 1; iz < k; ++iz)
      for (int iy = 1; iy < k; ++iy)
        for (int ix = 1; ix < k; ++ix) {
          std::uint64_t state = 0x5DEECE66Dull ^ ((static_cast<std::uint64_t>(ix) << 42) |
                                                  (static_cast<std::uint64_t>(iy) << 21) |
                                                  static_cast<std::uint64_t>(iz));
          auto& v = mesh.vertices[(static_cast<std::size_t>(iz) * nv + iy) * nv + ix];
          for (int d = 0; d < 3; ++d) {
            const double u = unit_double(splitmix64(state));
            v[d] += static_cast<Real>((u - 0.5) * 0.5 * h); // amplitude 0.25 h
          }
        }
  }
  check_jacobians(mesh);
  return mesh;
}

HexMesh refine_uniform(const HexMesh& mesh)
{
  HexMesh fine;
  fine.vertices = mesh.vertices;

  std::map<std::array<gid, 2>, gid> edge_mid;
  std::map<std::array<gid, 4>, gid> face_mid;

  auto midpoint = [&](std::span<const gid> vs) {
    std::array<Real, 3> p{0, 0, 0};
    for (gid v : vs)
      for (int d = 0; d < 3; ++d) p[d] += mesh.vertices[v][d];
    for (int d = 0; d < 3; ++d) p[d] /= static_cast<Real>(vs.size());
    return p;
  };
  auto edge_vertex = [&](gid a, gid b) {
    std::array<gid, 2> key{std::min(a, b), std::max(a, b)};
    auto it = edge_mid.find(key);
    if (it != edge_mid.end()) return it->second;
    const gid id = fine.num_vertices();
    fine.vertices.push_back(midpoint(std::span<const gid>(key.data(), 2)));
    edge_mid.emplace(key, id);
    return id;
  };
  auto face_vertex = [&](std::array<gid, 4> vs) {
    std::sort(vs.begin(), vs.end());
    auto it = face_mid.find(vs);
    if (it != face_mid.end()) return it->second;
    const gid id = fine.num_vertices();
    fine.vertices.push_back(midpoint(std::span<const gid>(vs.data(), 4)));
    face_mid.emplace(vs, id);
    return id;
  };

  fine.elements.reserve(mesh.elements.size() * 8);
  for (gid e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    // lattice[x][y][z], coordinates in {0,1,2} along (xi,eta,zeta)
    gid lattice[3][3][3];
    for (int z = 0; z < 3; ++z)
      for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) {
          const int odd = (x == 1) + (y == 1) + (z == 1);
          if (odd == 0) {
            lattice[x][y][z] = conn[hex_corner(x / 2, y / 2, z / 2)];
          } else if (odd == 1) {
            int lo[3] = {x / 2, y / 2, z / 2}, hi[3] = {x / 2, y / 2, z / 2};
            const int a = (x == 1) ? 0 : (y == 1) ? 1 : 2;
            lo[a] = 0;
            hi[a] = 1;
            lattice[x][y][z] = edge_vertex(conn[hex_corner(lo[0], lo[1], lo[2])],
                                           conn[hex_corner(hi[0], hi[1], hi[2])]);
          } else if (odd == 2) {
            const int a = (x != 1) ? 0 : (y != 1) ? 1 : 2; // the frozen axis
            std::array<gid, 4> vs{};
            int idx = 0;
            for (int v = 0; v < 2; ++v)
              for (int u = 0; u < 2; ++u) {
                int bits[3];
                bits[a] = (a == 0 ? x : a == 1 ? y : z) / 2;
                bits[(a + 1) % 3] = u;
                bits[(a + 2) % 3] = v;
                vs[idx++] = conn[hex_corner(bits[0], bits[1], bits[2])];
              }
            lattice[x][y][z] = face_vertex(vs);
          } else {
            std::array<gid, 8> vs{};
            for (int c = 0; c < 8; ++c) vs[c] = conn[c];
            const gid id = fine.num_vertices();
            fine.vertices.push_back(midpoint(std::span<const gid>(vs.data(), 8)));
            lattice[x][y][z] = id;
          }
        }
    for (int oc = 0; oc < 8; ++oc) {
      const int ox = oc & 1, oy = (oc >> 1) & 1, oz = (oc >> 2) & 1;
      std::array<gid, 8> child{};
      for (int c = 0; c < 8; ++c) {
        const int bi = c & 1, bj = (c >> 1) & 1, bk = (c >> 2) & 1;
        child[hex_corner(bi, bj, bk)] = lattice[ox + bi][oy + bj][oz + bk];
      }
      fine.elements.push_back(child);
    }
  }

  for (const auto& bf : mesh.boundary_faces) {
    const int a = face_axis(bf.face), s = face_side(bf.face);
    for (int oc = 0; oc < 8; ++oc) {
      const int bits[3] = {oc & 1, (oc >> 1) & 1, (oc >> 2) & 1};
      if (bits[a] == s) fine.boundary_faces.push_back({bf.element * 8 + oc, bf.face, bf.tag});
    }
  }
  check_jacobians(fine);
  return fine;
}

namespace {

// Canonical key of a mesh entity owning a GLL node, used to build the global
// numbering purely from topology.
struct NodeKey {
  std::array<std::int64_t, 5> v{};
  bool operator<(const NodeKey& o) const { return v < o.v; }
  bool operator==(const NodeKey& o) const { return v == o.v; }
};

NodeKey vertex_key(gid vid) { return {{0, vid, 0, 0, 0}}; }

NodeKey edge_key(gid a, gid b, int param, int n)
{
  if (a > b) {
    std::swap(a, b);
    param = n - param;
  }
  return {{1, a, b, param, 0}};
}

// Face node key: the 2x2 corner grid c[u][v] plus in-face coordinates (p,q),
// canonicalized over the 8 symmetries of the square so every element touching
// the face produces the same key for the same physical node.
NodeKey face_node_key(const std::array<std::array<gid, 2>, 2>& c, int p, int q, int n)
{
  NodeKey best{};
  bool have = false;
  for (int x0 = 0; x0 < 2; ++x0)
    for (int y0 = 0; y0 < 2; ++y0)
      for (int swap = 0; swap < 2; ++swap) {
        const gid origin = c[x0][y0];
        const gid xn = swap ? c[x0][1 - y0] : c[1 - x0][y0];
        const gid yn = swap ? c[1 - x0][y0] : c[x0][1 - y0];
        const int pp = x0 ? n - p : p;
        const int qq = y0 ? n - q : q;
        const int s = swap ? qq : pp;
        const int t = swap ? pp : qq;
        NodeKey k{{2, origin, xn, static_cast<std::int64_t>(yn) * (n + 1) + s, t}};
        if (!have || k < best) {
          best = k;
          have = true;
        }
      }
  return best;
}

NodeKey interior_key(gid e, int node) { return {{3, e, node, 0, 0}}; }

} // namespace

IndexMaps build_index_maps(const HexMesh& mesh, const GllBasis& basis)
{
  const int n = basis.order;
  const int np = n + 1;
  const gid ne = mesh.num_elements();
  const std::size_t nloc = static_cast<std::size_t>(np) * np * np;

  IndexMaps maps;
  maps.order = n;
  maps.l2g.assign(static_cast<std::size_t>(ne) * nloc, IndexMaps::kNoNode);

  std::vector<std::pair<NodeKey, std::size_t>> entries;
  entries.reserve(static_cast<std::size_t>(ne) * nloc);

  auto axis_pos = [&](int i) { return i == 0 ? 0 : (i == n ? 2 : 1); };

  for (gid e = 0; e < ne; ++e) {
    const auto& conn = mesh.elements[e];
    std::size_t node = 0;
    for (int k = 0; k < np; ++k)
      for (int j = 0; j < np; ++j)
        for (int i = 0; i < np; ++i, ++node) {
          const int pos[3] = {axis_pos(i), axis_pos(j), axis_pos(k)};
          const int idx[3] = {i, j, k};
          const int ninterior = (pos[0] == 1) + (pos[1] == 1) + (pos[2] == 1);
          NodeKey key;
          if (ninterior == 0) {
            key = vertex_key(conn[hex_corner(i / n, j / n, k / n)]);
          } else if (ninterior == 1) {
            const int a = (pos[0] == 1) ? 0 : (pos[1] == 1) ? 1 : 2;
            int lo[3] = {idx[0] / n, idx[1] / n, idx[2] / n};
            int hi[3] = {lo[0], lo[1], lo[2]};
            lo[a] = 0;
            hi[a] = 1;
            key = edge_key(conn[hex_corner(lo[0], lo[1], lo[2])],
                           conn[hex_corner(hi[0], hi[1], hi[2])], idx[a], n);
          } else if (ninterior == 2) {
            const int a = (pos[0] != 1) ? 0 : (pos[1] != 1) ? 1 : 2; // frozen axis
            const int a1 = (a + 1) % 3, a2 = (a + 2) % 3;
            std::array<std::array<gid, 2>, 2> c{};
            for (int u = 0; u < 2; ++u)
              for (int v = 0; v < 2; ++v) {
                int bits[3];
                bits[a] = idx[a] / n;
                bits[a1] = u;
                bits[a2] = v;
                c[u][v] = conn[hex_corner(bits[0], bits[1], bits[2])];
              }
            key = face_node_key(c, idx[a1], idx[a2], n);
          } else {
            key = interior_key(e, static_cast<int>(node));
          }
          entries.emplace_back(key, e * nloc + node);
        }
  }

  std::sort(entries.begin(), entries.end());

  gid next = 0;
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    if (idx > 0 && !(entries[idx].first == entries[idx - 1].first)) ++next;
    maps.l2g[entries[idx].second] = next;
  }
  maps.num_global = entries.empty() ? 0 : next + 1;

  // g2l (CSR), ordered by element then local node
  maps.g2l_offsets.assign(maps.num_global + 1, 0);
  for (gid g : maps.l2g) ++maps.g2l_offsets[g + 1];
  for (gid g = 0; g < maps.num_global; ++g) maps.g2l_offsets[g + 1] += maps.g2l_offsets[g];
  maps.g2l_elem.resize(maps.l2g.size());
  maps.g2l_local.resize(maps.l2g.size());
  {
    std::vector<std::size_t> cursor(maps.g2l_offsets.begin(), maps.g2l_offsets.end() - 1);
    for (gid e = 0; e < ne; ++e)
      for (std::size_t l = 0; l < nloc; ++l) {
        const gid g = maps.l2g[e * nloc + l];
        const std::size_t slot = cursor[g]++;
        maps.g2l_elem[slot] = e;
        maps.g2l_local[slot] = static_cast<gid>(l);
      }
  }

  // Dirichlet mask from tagged boundary faces.
  maps.dirichlet_mask.assign(maps.num_global, 0);
  for (const auto& bf : mesh.boundary_faces) {
    if (bf.tag != BoundaryTag::dirichlet) continue;
    const int a = face_axis(bf.face), s = face_side(bf.face);
    for (int v = 0; v < np; ++v)
      for (int u = 0; u < np; ++u) {
        int ijk[3];
        ijk[a] = s ? n : 0;
        ijk[(a + 1) % 3] = u;
        ijk[(a + 2) % 3] = v;
        const std::size_t node = (static_cast<std::size_t>(ijk[2]) * np + ijk[1]) * np + ijk[0];
        maps.dirichlet_mask[maps.l2g[bf.element * nloc + node]] = 1;
      }
  }

  // Extended subdomain numbering: interior slots mirror l2g, face slots take
  // the neighbor's first interior layer, everything else stays sentinel.
  const int p = n + 3;
  const std::size_t nsub = static_cast<std::size_t>(p) * p * p;
  maps.sub_l2g.assign(static_cast<std::size_t>(ne) * nsub, IndexMaps::kNoNode);

  auto sub_slot = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(k + 1) * p + (j + 1)) * p + (i + 1);
  };
  auto local_node = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(k) * np + j) * np + i;
  };

  std::map<std::array<gid, 4>, std::vector<std::pair<gid, int>>> face_map;
  for (gid e = 0; e < ne; ++e)
    for (int f = 0; f < 6; ++f) face_map[face_key(mesh, e, f)].push_back({e, f});
  for (const auto& [key, incident] : face_map) {
    if (incident.size() > 2)
      throw std::runtime_error("non-conforming mesh: face shared by more than two elements");
  }

  auto local_of_global_in = [&](gid g, gid e) {
    for (std::size_t s = maps.g2l_offsets[g]; s < maps.g2l_offsets[g + 1]; ++s)
      if (maps.g2l_elem[s] == e) return maps.g2l_local[s];
    throw std::runtime_error("global node has no copy in expected neighbor element");
  };

  for (gid e = 0; e < ne; ++e) {
    for (int k = 0; k < np; ++k)
      for (int j = 0; j < np; ++j)
        for (int i = 0; i < np; ++i)
          maps.sub_l2g[e * nsub + sub_slot(i, j, k)] =
              maps.l2g[e * nloc + local_node(i, j, k)];

    for (int f = 0; f < 6; ++f) {
      const auto& incident = face_map[face_key(mesh, e, f)];
      gid e2 = IndexMaps::kNoNode;
      int f2 = -1;
      for (const auto& [oe, of] : incident)
        if (oe != e) {
          e2 = oe;
          f2 = of;
        }
      if (e2 == IndexMaps::kNoNode) continue; // domain boundary: sentinel stays

      const int a = face_axis(f), s = face_side(f);
      const int a2 = face_axis(f2), s2 = face_side(f2);
      for (int v = 0; v < np; ++v)
        for (int u = 0; u < np; ++u) {
          int ijk[3];
          ijk[a] = s ? n : 0;
          ijk[(a + 1) % 3] = u;
          ijk[(a + 2) % 3] = v;
          const gid g = maps.l2g[e * nloc + local_node(ijk[0], ijk[1], ijk[2])];
          const gid l2 = local_of_global_in(g, e2);
          int ijk2[3] = {static_cast<int>(l2 % np), static_cast<int>((l2 / np) % np),
                         static_cast<int>(l2 / (np * np))};
          ijk2[a2] += s2 ? -1 : 1; // one layer inward from the shared face
          int slot[3];
          slot[a] = s ? n + 1 : -1;
          slot[(a + 1) % 3] = u;
          slot[(a + 2) % 3] = v;
          maps.sub_l2g[e * nsub + sub_slot(slot[0], slot[1], slot[2])] =
              maps.l2g[e2 * nloc + local_node(ijk2[0], ijk2[1], ijk2[2])];
        }
    }
  }
  return maps;
}

void scatter(const IndexMaps& maps, std::span<const Real> u_global, std::span<Real> u_local)
{
  if (u_global.size() != static_cast<std::size_t>(maps.num_global) ||
      u_local.size() != maps.l2g.size())
    throw std::invalid_argument("scatter: vector length mismatch");
  for (std::size_t l = 0; l < maps.l2g.size(); ++l) u_local[l] = u_global[maps.l2g[l]];
}

void gather(const IndexMaps& maps, std::span<const Real> r_local, std::span<Real> r_global)
{
  if (r_global.size() != static_cast<std::size_t>(maps.num_global) ||
      r_local.size() != maps.l2g.size())
    throw std::invalid_argument("gather: vector length mismatch");
  const std::size_t nloc = maps.nodes_per_element();
  for (gid g = 0; g < maps.num_global; ++g) {
    Real sum = 0;
    for (std::size_t s = maps.g2l_offsets[g]; s < maps.g2l_offsets[g + 1]; ++s)
      sum += r_local[maps.g2l_elem[s] * nloc + maps.g2l_local[s]];
    r_global[g] = sum;
  }
}

std::vector<std::array<Real, 3>> global_node_coords(const HexMesh& mesh, const GllBasis& basis,
                                                    const IndexMaps& maps)
{
  const int np = basis.npts();
  std::vector<std::array<Real, 3>> coords(maps.num_global);
  const std::size_t nloc = maps.nodes_per_element();
  for (gid e = 0; e < mesh.num_elements(); ++e) {
    std::size_t node = 0;
    for (int k = 0; k < np; ++k)
      for (int j = 0; j < np; ++j)
        for (int i = 0; i < np; ++i, ++node)
          coords[maps.l2g[e * nloc + node]] =
              trilinear_map(mesh, e, basis.nodes[i], basis.nodes[j], basis.nodes[k]);
  }
  return coords;
}

} // namespace hexsem
