// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_VTK_HPP
#define HEXSEM_VTK_HPP

#include <span>
#include <string>

#include "hexsem/mesh.hpp"

namespace hexsem {

// Legacy VTK ASCII unstructured grid, conforming mode: one point per global
// GLL node, n^3 sub-hexahedra per element, point data = u. Byte output is
// deterministic for fixed inputs.
void export_vtk(const HexMesh& mesh, const GllBasis& basis, const IndexMaps& maps,
                std::span<const Real> u_global, const std::string& path,
                const std::string& field_name = "u");

} // namespace hexsem

#endif
