// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_MESH_IO_HPP
#define HEXSEM_MESH_IO_HPP

#include <string>

#include "hexsem/mesh.hpp"

namespace hexsem {

// Gmsh MSH v2.2 ASCII subset: $Nodes, $Elements with 8-node hexahedra
// (type 5) and optional 4-node boundary quads (type 3). Quad physical tag 1
// marks Dirichlet faces, 2 marks Neumann; untagged boundary defaults to
// homogeneous Neumann.
HexMesh read_msh(const std::string& path);
void write_msh(const HexMesh& mesh, const std::string& path);

// Native compact binary. Header: magic "HXSM0001", then uint64
// n_vertices/n_elements/n_boundary_faces, float64 coordinates (xyz per
// vertex), uint32 connectivity (8 per element), boundary faces as uint32
// element, uint32 local face, uint32 tag.
HexMesh read_native(const std::string& path);
void write_native(const HexMesh& mesh, const std::string& path);

// Dispatch on extension: .msh -> Gmsh, anything else -> native.
HexMesh read_mesh_file(const std::string& path);
void write_mesh_file(const HexMesh& mesh, const std::string& path);

} // namespace hexsem

#endif
