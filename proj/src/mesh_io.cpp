// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hexsem/geometry.hpp"

namespace hexsem {

namespace {

std::array<gid, 4> sorted_quad(std::array<gid, 4> q)
{
  std::sort(q.begin(), q.end());
  return q;
}

void attach_boundary_quads(HexMesh& mesh,
                           const std::vector<std::pair<std::array<gid, 4>, int>>& quads)
{
  std::map<std::array<gid, 4>, std::pair<gid, int>> face_of;
  for (gid e = 0; e < mesh.num_elements(); ++e)
    for (int f = 0; f < 6; ++f) {
      std::array<gid, 4> key{};
      for (int c = 0; c < 4; ++c) key[c] = mesh.elements[e][hex_face_corners(f)[c]];
      face_of[sorted_quad(key)] = {e, f};
    }
  for (const auto& [verts, tag] : quads) {
    auto it = face_of.find(sorted_quad(verts));
    if (it == face_of.end())
      throw std::runtime_error("boundary quad does not match any hexahedron face");
    mesh.boundary_faces.push_back(
        {it->second.first, it->second.second,
         tag == 2 ? BoundaryTag::neumann : BoundaryTag::dirichlet});
  }
}

} // namespace

HexMesh read_msh(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path);

  HexMesh mesh;
  std::vector<std::pair<std::array<gid, 4>, int>> quads;
  std::map<long long, gid> node_id; // gmsh ids may be sparse
  std::string line;

  while (std::getline(in, line)) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      std::getline(in, line);
      double version = 0;
      std::istringstream(line) >> version;
      if (version < 2.0 || version >= 3.0)
        throw std::runtime_error("unsupported MSH version in " + path);
      std::getline(in, line); // $EndMeshFormat
    } else if (line.rfind("$Nodes", 0) == 0) {
      std::getline(in, line);
      const std::size_t count = std::stoull(line);
      mesh.vertices.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        std::getline(in, line);
        std::istringstream ls(line);
        long long id;
        double x, y, z;
        ls >> id >> x >> y >> z;
        node_id[id] = mesh.num_vertices();
        mesh.vertices.push_back({static_cast<Real>(x), static_cast<Real>(y),
                                 static_cast<Real>(z)});
      }
      std::getline(in, line); // $EndNodes
    } else if (line.rfind("$Elements", 0) == 0) {
      std::getline(in, line);
      const std::size_t count = std::stoull(line);
      for (std::size_t i = 0; i < count; ++i) {
        std::getline(in, line);
        std::istringstream ls(line);
        long long id;
        int type, ntags;
        ls >> id >> type >> ntags;
        int physical = 0;
        for (int t = 0; t < ntags; ++t) {
          int tag;
          ls >> tag;
          if (t == 0) physical = tag;
        }
        if (type == 5) {
          std::array<gid, 8> conn{};
          for (auto& v : conn) {
            long long nid;
            ls >> nid;
            v = node_id.at(nid);
          }
          mesh.elements.push_back(conn);
        } else if (type == 3) {
          std::array<gid, 4> verts{};
          for (auto& v : verts) {
            long long nid;
            ls >> nid;
            v = node_id.at(nid);
          }
          quads.push_back({verts, physical});
        }
        // other element types (points, lines) are skipped
      }
      std::getline(in, line); // $EndElements
    }
  }
  if (mesh.elements.empty()) throw std::runtime_error("no hexahedra found in " + path);
  attach_boundary_quads(mesh, quads);
  check_jacobians(mesh);
  return mesh;
}

void write_msh(const HexMesh& mesh, const std::string& path)
{
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write mesh file " + path);
  std::fprintf(f, "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n");
  std::fprintf(f, "$Nodes\n%zu\n", mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    std::fprintf(f, "%zu %.17g %.17g %.17g\n", v + 1,
                 static_cast<double>(mesh.vertices[v][0]),
                 static_cast<double>(mesh.vertices[v][1]),
                 static_cast<double>(mesh.vertices[v][2]));
  std::fprintf(f, "$EndNodes\n$Elements\n%zu\n",
               mesh.elements.size() + mesh.boundary_faces.size());
  std::size_t id = 1;
  for (const auto& bf : mesh.boundary_faces) {
    const int tag = bf.tag == BoundaryTag::neumann ? 2 : 1;
    std::fprintf(f, "%zu 3 2 %d %d", id++, tag, tag);
    for (int c : hex_face_corners(bf.face))
      std::fprintf(f, " %d", mesh.elements[bf.element][c] + 1);
    std::fprintf(f, "\n");
  }
  for (const auto& conn : mesh.elements) {
    std::fprintf(f, "%zu 5 2 0 0", id++);
    for (gid v : conn) std::fprintf(f, " %d", v + 1);
    std::fprintf(f, "\n");
  }
  std::fprintf(f, "$EndElements\n");
  std::fclose(f);
}

namespace {
constexpr char kMagic[8] = {'H', 'X', 'S', 'M', '0', '0', '0', '1'};
}

void write_native(const HexMesh& mesh, const std::string& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write mesh file " + path);
  out.write(kMagic, 8);
  const std::uint64_t counts[3] = {mesh.vertices.size(), mesh.elements.size(),
                                   mesh.boundary_faces.size()};
  out.write(reinterpret_cast<const char*>(counts), sizeof(counts));
  for (const auto& v : mesh.vertices) {
    const double xyz[3] = {static_cast<double>(v[0]), static_cast<double>(v[1]),
                           static_cast<double>(v[2])};
    out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
  }
  for (const auto& conn : mesh.elements) {
    std::uint32_t c[8];
    for (int i = 0; i < 8; ++i) c[i] = static_cast<std::uint32_t>(conn[i]);
    out.write(reinterpret_cast<const char*>(c), sizeof(c));
  }
  for (const auto& bf : mesh.boundary_faces) {
    const std::uint32_t rec[3] = {static_cast<std::uint32_t>(bf.element),
                                  static_cast<std::uint32_t>(bf.face),
                                  static_cast<std::uint32_t>(bf.tag)};
    out.write(reinterpret_cast<const char*>(rec), sizeof(rec));
  }
}

HexMesh read_native(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open mesh file " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || !std::equal(magic, magic + 8, kMagic))
    throw std::runtime_error(path + " is not a hexsem native mesh");
  std::uint64_t counts[3];
  in.read(reinterpret_cast<char*>(counts), sizeof(counts));
  HexMesh mesh;
  mesh.vertices.resize(counts[0]);
  for (auto& v : mesh.vertices) {
    double xyz[3];
    in.read(reinterpret_cast<char*>(xyz), sizeof(xyz));
    v = {static_cast<Real>(xyz[0]), static_cast<Real>(xyz[1]), static_cast<Real>(xyz[2])};
  }
  mesh.elements.resize(counts[1]);
  for (auto& conn : mesh.elements) {
    std::uint32_t c[8];
    in.read(reinterpret_cast<char*>(c), sizeof(c));
    for (int i = 0; i < 8; ++i) conn[i] = static_cast<gid>(c[i]);
  }
  mesh.boundary_faces.resize(counts[2]);
  for (auto& bf : mesh.boundary_faces) {
    std::uint32_t rec[3];
    in.read(reinterpret_cast<char*>(rec), sizeof(rec));
    bf = {static_cast<gid>(rec[0]), static_cast<int>(rec[1]),
          static_cast<BoundaryTag>(rec[2])};
  }
  if (!in) throw std::runtime_error("truncated mesh file " + path);
  check_jacobians(mesh);
  return mesh;
}

HexMesh read_mesh_file(const std::string& path)
{
  if (path.size() > 4 && path.substr(path.size() - 4) == ".msh") return read_msh(path);
  return read_native(path);
}

void write_mesh_file(const HexMesh& mesh, const std::string& path)
{
  if (path.size() > 4 && path.substr(path.size() - 4) == ".msh")
    write_msh(mesh, path);
  else
    write_native(mesh, path);
}

} // namespace hexsem
