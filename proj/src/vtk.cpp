// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/vtk.hpp"

#include <cstdio>
#include <stdexcept>

namespace hexsem {

void export_vtk(const HexMesh& mesh, const GllBasis& basis, const IndexMaps& maps,
                std::span<const Real> u_global, const std::string& path,
                const std::string& field_name)
{
  if (u_global.size() != static_cast<std::size_t>(maps.num_global))
    throw std::invalid_argument("export_vtk: field length mismatch");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write vtk file " + path);

  const int n = basis.order;
  const int np = n + 1;
  const std::size_t nloc = maps.nodes_per_element();
  const auto coords = global_node_coords(mesh, basis, maps);

  std::fprintf(f, "# vtk DataFile Version 3.0\nhexsem field\nASCII\n");
  std::fprintf(f, "DATASET UNSTRUCTURED_GRID\nPOINTS %d double\n", maps.num_global);
  for (const auto& p : coords)
    std::fprintf(f, "%.17g %.17g %.17g\n", static_cast<double>(p[0]),
                 static_cast<double>(p[1]), static_cast<double>(p[2]));

  const std::size_t ncells = static_cast<std::size_t>(mesh.num_elements()) * n * n * n;
  std::fprintf(f, "CELLS %zu %zu\n", ncells, ncells * 9);
  auto node = [&](gid e, int i, int j, int k) {
    return maps.l2g[e * nloc + (static_cast<std::size_t>(k) * np + j) * np + i];
  };
  for (gid e = 0; e < mesh.num_elements(); ++e)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          gid c[8];
          for (int b = 0; b < 8; ++b) {
            const int bi = b & 1, bj = (b >> 1) & 1, bk = (b >> 2) & 1;
            c[kHexCornerFromBits[b]] = node(e, i + bi, j + bj, k + bk);
          }
          std::fprintf(f, "8 %d %d %d %d %d %d %d %d\n", c[0], c[1], c[2], c[3], c[4], c[5],
                       c[6], c[7]);
        }
  std::fprintf(f, "CELL_TYPES %zu\n", ncells);
  for (std::size_t i = 0; i < ncells; ++i) std::fprintf(f, "12\n");

  std::fprintf(f, "POINT_DATA %d\nSCALARS %s double 1\nLOOKUP_TABLE default\n",
               maps.num_global, field_name.c_str());
  for (gid g = 0; g < maps.num_global; ++g)
    std::fprintf(f, "%.17g\n", static_cast<double>(u_global[g]));
  std::fclose(f);
}

} // namespace hexsem
